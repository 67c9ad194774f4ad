//! The shuffle algebra: symmetric Laurent polynomials with the
//! Feigin-Odesskii kernel, a faithful model of the positive half.
//!
//! Elements are stored in the Schur basis. The product is
//! `(h * f)(z_1..z_{r+s}) = Sym(prod_{i<=r<j} omega(z_i/z_j) h f) / (r! s!)`
//! with `omega(x) = x * zeta(1/x) = (x - s)(x - t)(x - 1/(st)) / (x (x - 1))`.

mod multi;
mod schur;
mod sym;

use std::any::Any;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::Zero;
use parking_lot::RwLock;
use thiserror::Error;

use crate::kfield::{Coeff, FieldElem, KError, Params, Rat};
use crate::lattice::{minimal_paths, LatticeError, Path, Region, Segment, Window};
use crate::par::par_map;

pub use multi::{kernel_product, shuffle_naive, symmetrize_naive, MultiLaurent, RationalMultivar};
pub use schur::{cross_poly, full_poly, straighten, EClass, Label};
pub use sym::SymLaurent;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShuffleError {
    #[error("kernel denominators did not cancel")]
    DenominatorNotCleared,
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("segment {segment} exceeds the rank bound {bound}")]
    RankBoundExceeded { segment: Segment, bound: usize },
    #[error("window {window} is too small to decompose a rank {rank} degree {degree} element")]
    WindowExhausted { rank: usize, degree: i64, window: Window },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Field(#[from] KError),
}

/// The kernel `zeta(z) = (1 - s z)(1 - t z)(1 - z/(st)) / (1 - z)` as
/// coefficient lists in increasing powers of z.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaKernel {
    pub numerator: [FieldElem; 4],
    pub denominator: [FieldElem; 2],
}

pub fn zeta_kernel() -> ZetaKernel {
    let p = Params::symbolic();
    ZetaKernel {
        numerator: [FieldElem::one(), p.e1().neg(), p.e2().clone(), FieldElem::from_int(-1)],
        denominator: [FieldElem::one(), FieldElem::from_int(-1)],
    }
}

/// `Psi_r(P) = Sym(prod_{i<j} omega(z_i/z_j) P)` computed through the
/// alternant of `N * P`.
pub fn symmetrize_psi<C: Coeff>(params: &Params<C>, p: &MultiLaurent<C>) -> SymLaurent<C> {
    let r = p.nvars();
    let mut counts: HashMap<(EClass, Label), C> = HashMap::new();
    let n = full_poly(r);
    for (pe, pc) in p.terms() {
        for (e, classes) in n.iter() {
            let a: Vec<i32> = pe.iter().zip(e).map(|(x, y)| x + y).collect();
            if let Some((sign, label)) = straighten(a) {
                for &(cl, k) in classes {
                    let slot = counts.entry((cl, label.clone())).or_insert_with(C::zero);
                    *slot = slot.add(&pc.mul_int(sign * k));
                }
            }
        }
    }
    let pw = EPowers::new(params);
    let mut out = SymLaurent::zero(r);
    for ((cl, label), v) in counts {
        out.add_term(label, v.mul(&pw.get(cl)));
    }
    out
}

struct EPowers<C: Coeff> {
    e1: C,
    e2: C,
    cache: RwLock<HashMap<EClass, C>>,
}

impl<C: Coeff> EPowers<C> {
    fn new(params: &Params<C>) -> Self {
        Self {
            e1: params.e1().clone(),
            e2: params.e2().clone(),
            cache: RwLock::new(HashMap::new()),
        }
    }

    fn get(&self, cl: EClass) -> C {
        if let Some(v) = self.cache.read().get(&cl) {
            return v.clone();
        }
        let v = self.e1.pow_i(cl.0 as i64).expect("nonnegative power").mul(&self.e2.pow_i(cl.1 as i64).expect("nonnegative power"));
        self.cache.write().insert(cl, v.clone());
        v
    }
}

/// Probe point used to choose pivots for symbolic algebras.
const PROBE: (i64, i64, i64, i64) = (11, 7, -5, 3);

type Memo<K, V> = RwLock<HashMap<K, Arc<V>>>;

/// The shuffle algebra over a coefficient field, with memo tables for the
/// images of generators and words.
pub struct ShuffleAlgebra<C: Coeff> {
    params: Params<C>,
    max_rank: usize,
    epow: EPowers<C>,
    u_cache: Memo<Segment, SymLaurent<C>>,
    word_cache: Memo<Vec<i32>, SymLaurent<C>>,
    pivot_cache: Memo<(usize, i64, Window), Pivots>,
    probe: OnceLock<Arc<ShuffleAlgebra<Rat>>>,
}

/// Words whose images are independent at the pivot point, with a column
/// set on which those images are invertible.
#[derive(Clone, Debug)]
pub struct Pivots {
    pub words: Vec<Vec<i32>>,
    pub columns: Vec<Label>,
    /// Number of candidate words scanned.
    pub scanned: usize,
}

impl<C: Coeff> ShuffleAlgebra<C> {
    pub fn new(params: Params<C>, max_rank: usize) -> Self {
        Self {
            epow: EPowers::new(&params),
            params,
            max_rank,
            u_cache: Default::default(),
            word_cache: Default::default(),
            pivot_cache: Default::default(),
            probe: OnceLock::new(),
        }
    }

    pub fn params(&self) -> &Params<C> {
        &self.params
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// The shuffle product.
    pub fn mul(&self, h: &SymLaurent<C>, f: &SymLaurent<C>) -> SymLaurent<C> {
        if h.rank() == 0 {
            return f.scale(&h.coeff(&[]));
        }
        if f.rank() == 0 {
            return h.scale(&f.coeff(&[]));
        }
        let (r, s) = (h.rank(), f.rank());
        if h.is_zero() || f.is_zero() {
            return SymLaurent::zero(r + s);
        }
        let fterms: Vec<(&Label, &C)> = f.terms().collect();
        let hterms: Vec<(&Label, &C)> = h.terms().collect();
        let partials = par_map(hterms, |(lam, cl)| {
            let mut acc: HashMap<(EClass, Label), C> = HashMap::new();
            let mut counts = HashMap::new();
            for &(mu, cm) in &fterms {
                counts.clear();
                schur::schur_pair_product(lam, mu, &mut counts);
                for ((cls, label), k) in counts.drain() {
                    if k == 0 {
                        continue;
                    }
                    let slot = acc.entry((cls, label)).or_insert_with(C::zero);
                    *slot = slot.add(&cm.mul_int(k));
                }
            }
            let mut by_label: HashMap<Label, C> = HashMap::new();
            for ((cls, label), v) in acc {
                if v.is_zero() {
                    continue;
                }
                let t = v.mul(&self.epow.get(cls));
                let slot = by_label.entry(label).or_insert_with(C::zero);
                *slot = slot.add(&t);
            }
            by_label.into_iter().map(|(l, v)| (l, v.mul(cl))).collect::<Vec<_>>()
        });
        let mut out = SymLaurent::zero(r + s);
        for part in partials {
            for (l, v) in part {
                out.add_term(l, v);
            }
        }
        out
    }

    pub fn commutator(&self, a: &SymLaurent<C>, b: &SymLaurent<C>) -> SymLaurent<C> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    fn check(&self, x: Segment) -> Result<(), ShuffleError> {
        if !Region::Gt.contains(x) {
            return Err(LatticeError::SegmentOutsideRegion(x, Region::Gt).into());
        }
        if x.p as usize > self.max_rank {
            return Err(ShuffleError::RankBoundExceeded {
                segment: x,
                bound: self.max_rank,
            });
        }
        Ok(())
    }

    /// `alpha_1 [u_a, u_b]` for a minimal pair `(a, b)`, the value of
    /// `theta_{a+b}` given by relation ii).
    pub fn theta_from_pair(&self, a: Segment, b: Segment) -> Result<SymLaurent<C>, ShuffleError> {
        let ua = self.u_image(a)?;
        let ub = self.u_image(b)?;
        Ok(self.commutator(&ua, &ub).scale(&self.params.alpha(1)))
    }

    /// The image of `u_x`.
    pub fn u_image(&self, x: Segment) -> Result<Arc<SymLaurent<C>>, ShuffleError> {
        self.check(x)?;
        if x.p == 1 {
            return Ok(Arc::new(SymLaurent::monomial(x.q as i32)));
        }
        if let Some(v) = self.u_cache.read().get(&x) {
            return Ok(v.clone());
        }
        let (a, b) = minimal_paths(x)?[0];
        let theta = self.theta_from_pair(a, b)?;
        let n = x.deg();
        let u = if n == 1 {
            theta.scale(&self.params.alpha(1).inv()?)
        } else {
            let x0 = x.primitive();
            let series = self.theta_series(x0, n - 1)?;
            let mut lower = SymLaurent::zero(x.p as usize);
            for k in 1..n {
                let uk = self.u_image(x0.scaled(k)?)?;
                let t = self.mul(&uk, &series[(n - k) as usize]);
                lower = lower.add(&t.scale(&self.params.alpha(k).mul_int(k)));
            }
            let lower = lower.scale(&C::from_int(n).inv()?);
            theta.sub(&lower).scale(&self.params.alpha(n).inv()?)
        };
        let u = Arc::new(u);
        Ok(self.u_cache.write().entry(x).or_insert(u).clone())
    }

    /// `theta_{j x0}` for `j = 0..=n`, from `exp(sum alpha_k u_{k x0} s^k)`.
    pub fn theta_series(&self, x0: Segment, n: i64) -> Result<Vec<SymLaurent<C>>, ShuffleError> {
        let mut e = vec![SymLaurent::one()];
        for j in 1..=n {
            let mut acc = SymLaurent::zero((j * x0.p) as usize);
            for k in 1..=j {
                let uk = self.u_image(x0.scaled(k)?)?;
                let t = self.mul(&uk, &e[(j - k) as usize]);
                acc = acc.add(&t.scale(&self.params.alpha(k).mul_int(k)));
            }
            e.push(acc.scale(&C::from_int(j).inv()?));
        }
        Ok(e)
    }

    /// The image of `theta_x`.
    pub fn theta_image(&self, x: Segment) -> Result<SymLaurent<C>, ShuffleError> {
        self.check(x)?;
        let n = x.deg();
        Ok(self.theta_series(x.primitive(), n)?.pop().expect("series is nonempty"))
    }

    /// The ordered product of the images of the path's segments.
    pub fn path_image(&self, p: &Path) -> Result<SymLaurent<C>, ShuffleError> {
        let mut acc = SymLaurent::one();
        for &x in p.segments() {
            acc = self.mul(&acc, self.u_image(x)?.as_ref());
        }
        Ok(acc)
    }

    /// The image of the word `u_{1,d_1} ... u_{1,d_k}`.
    pub fn word_image(&self, w: &[i32]) -> Arc<SymLaurent<C>> {
        match w.len() {
            0 => return Arc::new(SymLaurent::one()),
            1 => return Arc::new(SymLaurent::monomial(w[0])),
            _ => {}
        }
        if let Some(v) = self.word_cache.read().get(w) {
            return v.clone();
        }
        let head = self.word_image(&w[..w.len() - 1]);
        let v = Arc::new(self.mul(&head, &SymLaurent::monomial(w[w.len() - 1])));
        self.word_cache.write().entry(w.to_vec()).or_insert(v).clone()
    }

    fn probe(&self) -> &ShuffleAlgebra<Rat> {
        if let Some(me) = (self as &dyn Any).downcast_ref::<ShuffleAlgebra<Rat>>() {
            return me;
        }
        self.probe.get_or_init(|| {
            let (a, b, c, d) = PROBE;
            let p = Params::specialized(
                BigRational::new(a.into(), b.into()),
                BigRational::new(c.into(), d.into()),
            )
            .expect("probe point is nondegenerate");
            Arc::new(ShuffleAlgebra::new(p, self.max_rank))
        })
    }

    /// Words of length `r` and degree `d` with letters in `window` whose
    /// images are independent at the pivot point.
    pub fn pivot_words(&self, r: usize, d: i64, window: Window) -> Arc<Pivots> {
        let key = (r, d, window);
        if let Some(v) = self.pivot_cache.read().get(&key) {
            return v.clone();
        }
        let probe = self.probe();
        let words = words_in_window(r, d, window);
        let scanned = words.len();
        let mut rows: Vec<(Label, BTreeMap<Label, BigRational>)> = Vec::new();
        let mut chosen = Vec::new();
        for w in words {
            let img = probe.word_image(&w);
            let mut v: BTreeMap<Label, BigRational> = img.terms().map(|(l, c)| (l.clone(), c.0.clone())).collect();
            for (piv, row) in &rows {
                let Some(f) = v.get(piv).cloned() else { continue };
                for (l, c) in row {
                    let e = v.entry(l.clone()).or_insert_with(BigRational::zero);
                    *e -= &f * c;
                    if e.is_zero() {
                        v.remove(l);
                    }
                }
            }
            if let Some((piv, c)) = v.iter().next_back().map(|(l, c)| (l.clone(), c.clone())) {
                for x in v.values_mut() {
                    *x /= &c;
                }
                rows.push((piv, v));
                chosen.push(w);
            }
        }
        let pv = Arc::new(Pivots {
            words: chosen,
            columns: rows.into_iter().map(|(l, _)| l).collect(),
            scanned,
        });
        self.pivot_cache.write().entry(key).or_insert(pv).clone()
    }

    /// Write a homogeneous-by-degree element as a combination of words
    /// with letters in `window`.
    pub fn decompose_to_words(
        &self,
        f: &SymLaurent<C>,
        window: Window,
    ) -> Result<Vec<(Vec<i32>, C)>, ShuffleError> {
        let r = f.rank();
        if r == 0 {
            let c = f.coeff(&[]);
            return Ok(if c.is_zero() { vec![] } else { vec![(vec![], c)] });
        }
        let mut by_degree: BTreeMap<i64, SymLaurent<C>> = BTreeMap::new();
        for (l, c) in f.terms() {
            let d: i64 = l.iter().map(|&v| v as i64).sum();
            by_degree
                .entry(d)
                .or_insert_with(|| SymLaurent::zero(r))
                .add_term(l.clone(), c.clone());
        }
        let mut out = Vec::new();
        for (d, part) in by_degree {
            let exhausted = ShuffleError::WindowExhausted { rank: r, degree: d, window };
            let piv = self.pivot_words(r, d, window);
            if piv.words.is_empty() {
                return Err(exhausted);
            }
            let images: Vec<Arc<SymLaurent<C>>> = piv.words.iter().map(|w| self.word_image(w)).collect();
            let rows: Vec<Vec<C>> = images.iter().map(|img| piv.columns.iter().map(|l| img.coeff(l)).collect()).collect();
            let target: Vec<C> = piv.columns.iter().map(|l| part.coeff(l)).collect();
            let x = C::solve_left(&rows, &target).ok_or_else(|| exhausted.clone())?;
            let mut check = part.neg();
            for (img, c) in images.iter().zip(&x) {
                check = check.add(&img.scale(c));
            }
            if !check.is_zero() {
                return Err(exhausted);
            }
            out.extend(piv.words.iter().cloned().zip(x).filter(|(_, c)| !c.is_zero()));
        }
        Ok(out)
    }

    /// Rank of a family of elements. Symbolic families are first tried at
    /// the probe point, where full rank certifies full rank over K.
    pub fn rank_of(&self, family: &[SymLaurent<C>]) -> usize {
        let labels: BTreeSet<&Label> = family.iter().flat_map(|f| f.terms().map(|(l, _)| l)).collect();
        let rows: Vec<Vec<C>> = family.iter().map(|f| labels.iter().map(|l| f.coeff(l)).collect()).collect();
        if let Some(sym) = (&rows as &dyn Any).downcast_ref::<Vec<Vec<FieldElem>>>() {
            let (a, b, c, d) = PROBE;
            let (s, t) = (BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()));
            let spec: Option<Vec<Vec<Rat>>> = sym
                .iter()
                .map(|row| row.iter().map(|e| e.specialize(&s, &t).ok().map(Rat)).collect())
                .collect();
            if let Some(spec) = spec {
                if Rat::rank(&spec) == family.len() {
                    return family.len();
                }
            }
        }
        C::rank(&rows)
    }
}

/// All words of length `r` with letters in `window` and letter sum `d`,
/// in lexicographic order.
pub fn words_in_window(r: usize, d: i64, window: Window) -> Vec<Vec<i32>> {
    fn go(r: usize, d: i64, w: Window, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if r == 0 {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest = (r - 1) as i64;
        for a in w.iter() {
            let left = d - a;
            if left < rest * w.lo || left > rest * w.hi {
                continue;
            }
            cur.push(a as i32);
            go(r - 1, left, w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, d, window, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests;

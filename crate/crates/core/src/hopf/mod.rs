//! Truncated coproduct on the Drinfeld generators:
//!
//! ```text
//! D(u_{1,d})      = u_{1,d} (x) 1 + sum_{l>=0} theta_{0,l} (x) u_{1,d-l}
//! D(u_{-1,d})     = 1 (x) u_{-1,d} + sum_{l>=0} u_{-1,d+l} (x) theta_{0,-l}
//! D(theta_{0,+-l}) = sum_{i+j=l} theta_{0,+-i} (x) theta_{0,+-j}
//! ```
//!
//! `u_{0,l}` is primitive. Tensor factors are kept as ordered monomials and
//! multiplied with the presentation's straightener; a factor is retained
//! when its degree lies in `[-n, n]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::kfield::Coeff;
use crate::par::par_map;
use crate::presentation::{
    theta_transport, GenMode, Letter, Ordered, OrderedSum, Presentation, PresentationError, Side, TriKey,
    TriangularElement, Word,
};

#[cfg(test)]
mod tests;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HopfError {
    #[error("tensor position {pos} out of range for arity {arity}")]
    Position { pos: usize, arity: usize },
    #[error("arity mismatch: {0} vs {1}")]
    Arity(usize, usize),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

pub type Result<T> = std::result::Result<T, HopfError>;

/// A finite sum of tensors of ordered monomials, truncated in the degree of
/// every factor.
#[derive(Clone, Debug)]
pub struct TruncatedTensor<C> {
    arity: usize,
    bound: i64,
    terms: BTreeMap<Vec<Ordered>, C>,
    raw_terms: usize,
    dropped: usize,
    tail: bool,
}

fn tt_add<C: Coeff>(m: &mut BTreeMap<Vec<Ordered>, C>, k: Vec<Ordered>, c: C) {
    if c.is_zero() {
        return;
    }
    match m.get_mut(&k) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                m.remove(&k);
            }
        }
        None => {
            m.insert(k, c);
        }
    }
}

fn deg(t: &Ordered) -> i64 {
    t.weight().1
}

impl<C: Coeff> TruncatedTensor<C> {
    pub fn zero(arity: usize, bound: i64) -> Self {
        Self { arity, bound, terms: BTreeMap::new(), raw_terms: 0, dropped: 0, tail: false }
    }

    /// `1 (x) ... (x) 1`.
    pub fn one(arity: usize, bound: i64) -> Self {
        let mut t = Self::zero(arity, bound);
        t.terms.insert(vec![Ordered::default(); arity], C::one());
        t.raw_terms = 1;
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Factors are retained when their degree lies in `[-bound, bound]`.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Ordered>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pure tensors produced before like terms were merged.
    pub fn raw_terms(&self) -> usize {
        self.raw_terms
    }

    /// Pure tensors discarded by the truncation.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// Whether an infinite series was cut off.
    pub fn has_tail(&self) -> bool {
        self.tail
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.arity != o.arity {
            return Err(HopfError::Arity(self.arity, o.arity));
        }
        let mut r = self.clone();
        for (k, c) in &o.terms {
            tt_add(&mut r.terms, k.clone(), c.clone());
        }
        r.bound = self.bound.min(o.bound);
        r.raw_terms += o.raw_terms;
        r.dropped += o.dropped;
        r.tail |= o.tail;
        Ok(r)
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut r = self.clone();
        r.terms = self.terms.iter().map(|(t, c)| (t.clone(), c.mul(k))).filter(|(_, c)| !c.is_zero()).collect();
        r
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&C::one().neg()))
    }

    /// Drop every term with a factor of degree outside `[-n, n]`.
    pub fn truncate(&self, n: i64) -> Self {
        let mut r = self.clone();
        r.bound = n.min(self.bound);
        r.terms.retain(|k, _| k.iter().all(|t| deg(t).abs() <= n));
        r.dropped += self.terms.len() - r.terms.len();
        r
    }

    /// Normal form: every factor in the triangular basis.
    pub fn canonical(&self, pres: &Presentation<C>) -> BTreeMap<Vec<TriKey>, C> {
        let mut out: BTreeMap<Vec<TriKey>, C> = BTreeMap::new();
        for (k, c) in &self.terms {
            let mut acc: Vec<(Vec<TriKey>, C)> = vec![(vec![], c.clone())];
            for t in k {
                let e = pres.canonicalize(&OrderedSum::from([(t.clone(), C::one())]));
                let mut next = Vec::new();
                for (pre, a) in &acc {
                    for (key, b) in e.terms() {
                        let mut v = pre.clone();
                        v.push(key.clone());
                        next.push((v, a.mul(b)));
                    }
                }
                acc = next;
            }
            for (key, v) in acc {
                let e = out.entry(key.clone()).or_insert_with(C::zero);
                *e = e.add(&v);
                if e.is_zero() {
                    out.remove(&key);
                }
            }
        }
        out
    }

    /// Equality of normal forms.
    pub fn same_as(&self, o: &Self, pres: &Presentation<C>) -> bool {
        self.arity == o.arity && self.canonical(pres) == o.canonical(pres)
    }

    pub fn to_json(&self, pres: &Presentation<C>) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let factors: Vec<Value> =
                    k.iter().map(|t| pres.canonicalize(&OrderedSum::from([(t.clone(), C::one())])).to_json()).collect();
                json!({ "coeff": c.to_string(), "factors": factors })
            })
            .collect();
        json!({
            "arity": self.arity,
            "bound": self.bound,
            "raw_terms": self.raw_terms,
            "dropped": self.dropped,
            "tail": self.tail,
            "terms": terms,
        })
    }
}

/// One pure tensor of a letter's coproduct.
struct Branch<C> {
    left: OrderedSum<C>,
    right: OrderedSum<C>,
    degs: (i64, i64),
}

fn single<C: Coeff>(t: Ordered) -> OrderedSum<C> {
    OrderedSum::from([(t, C::one())])
}

fn pos(d: i32) -> Ordered {
    Ordered { pos: vec![d], ..Default::default() }
}

fn neg(d: i32) -> Ordered {
    Ordered { neg: vec![d], ..Default::default() }
}

/// The coproduct over a presentation.
pub struct Coproduct<C: Coeff> {
    pres: Arc<Presentation<C>>,
    // D(T_{-1}) = T_{-1} (x) 1 + T_{-1} (x) T_0^-, kept to show that it is
    // not compatible with the cross relation
    literal_minus: bool,
}

impl<C: Coeff> Coproduct<C> {
    pub fn new(pres: Arc<Presentation<C>>) -> Self {
        Self { pres, literal_minus: false }
    }

    #[cfg(test)]
    fn literal_minus(pres: Arc<Presentation<C>>) -> Self {
        Self { pres, literal_minus: true }
    }

    pub fn presentation(&self) -> &Arc<Presentation<C>> {
        &self.pres
    }

    fn theta_sum(&self, k: i64) -> Result<OrderedSum<C>> {
        Ok(self.pres.theta_poly(k)?.into_iter().map(|(zero, c)| (Ordered { zero, ..Default::default() }, c)).collect())
    }

    /// Pure tensors of `D(letter)`, series terms up to `l <= cut`.
    fn branches(&self, letter: Letter, cut: i64) -> Result<Vec<Branch<C>>> {
        let one = || single(Ordered::default());
        let mut out = Vec::new();
        match letter {
            Letter::P(d) => {
                out.push(Branch { left: single(pos(d)), right: one(), degs: (d as i64, 0) });
                for l in 0..=cut {
                    let right = single(pos(d - l as i32));
                    out.push(Branch { left: self.theta_sum(l)?, right, degs: (l, d as i64 - l) });
                }
            }
            Letter::N(d) => {
                if self.literal_minus {
                    out.push(Branch { left: single(neg(d)), right: one(), degs: (d as i64, 0) });
                } else {
                    out.push(Branch { left: one(), right: single(neg(d)), degs: (0, d as i64) });
                }
                for l in 0..=cut {
                    let left = single(neg(d + l as i32));
                    out.push(Branch { left, right: self.theta_sum(-l)?, degs: (d as i64 + l, -l) });
                }
            }
            Letter::Z(l) => {
                let z = Ordered { zero: vec![l], ..Default::default() };
                out.push(Branch { left: single(z.clone()), right: one(), degs: (l, 0) });
                out.push(Branch { left: one(), right: single(z), degs: (0, l) });
            }
        }
        Ok(out)
    }

    /// `D(w_1 ... w_k)` as the product of the letters' coproducts. A partial
    /// product is discarded only when no choice of the remaining factors can
    /// bring it back into the window, so the retained terms are exact.
    fn letters(&self, w: &[Letter], n: i64) -> Result<TruncatedTensor<C>> {
        let size = |l: &Letter| match *l {
            Letter::P(d) | Letter::N(d) => (d as i64).abs(),
            Letter::Z(l) => l.abs(),
        };
        let cut = n + w.iter().map(size).sum::<i64>();
        // the remaining letters lower the left degree by at most `min_left`
        // and raise the right degree by at most `max_right`
        let mut min_left = vec![0; w.len() + 1];
        let mut max_right = vec![0; w.len() + 1];
        for j in (0..w.len()).rev() {
            let d = match w[j] {
                Letter::P(d) | Letter::N(d) => d as i64,
                Letter::Z(l) => l,
            };
            let (a, b) = (d.min(0), d.max(0));
            min_left[j] = min_left[j + 1] + a;
            max_right[j] = max_right[j + 1] + b;
        }
        let mut state: BTreeMap<Vec<Ordered>, C> = BTreeMap::from([(vec![Ordered::default(); 2], C::one())]);
        let mut raw = 1usize;
        let mut dropped = 0usize;
        let mut tail = false;
        for (j, &letter) in w.iter().enumerate() {
            let branches = self.branches(letter, cut)?;
            tail |= !matches!(letter, Letter::Z(_));
            let entries: Vec<(Vec<Ordered>, C)> = state.into_iter().collect();
            let parts = par_map(entries, |(k, c)| -> Result<(BTreeMap<Vec<Ordered>, C>, usize, usize)> {
                let mut acc = BTreeMap::new();
                let (mut kept, mut lost) = (0, 0);
                for b in &branches {
                    let (l, r) = (deg(&k[0]) + b.degs.0, deg(&k[1]) + b.degs.1);
                    if l + min_left[j + 1] > n || r + max_right[j + 1] < -n {
                        lost += 1;
                        continue;
                    }
                    kept += 1;
                    let left = self.times(&k[0], &b.left)?;
                    let right = self.times(&k[1], &b.right)?;
                    for (a, x) in &left {
                        let cx = c.mul(x);
                        for (bb, y) in &right {
                            tt_add(&mut acc, vec![a.clone(), bb.clone()], cx.mul(y));
                        }
                    }
                }
                Ok((acc, kept, lost))
            });
            let mut next = BTreeMap::new();
            let mut kept_total = 0;
            for p in parts {
                let (acc, kept, lost) = p?;
                kept_total += kept;
                dropped += lost;
                for (k, c) in acc {
                    tt_add(&mut next, k, c);
                }
            }
            raw = kept_total;
            state = next;
        }
        let t = TruncatedTensor { arity: 2, bound: n, terms: state, raw_terms: raw, dropped, tail };
        Ok(t.truncate(n))
    }

    /// `t * s` for an ordered monomial and a sum, straightened.
    fn times(&self, t: &Ordered, s: &OrderedSum<C>) -> Result<OrderedSum<C>> {
        let mut out = OrderedSum::new();
        for (u, c) in s {
            let ls: Vec<Letter> = t.letters().chain(u.letters()).collect();
            for (k, v) in self.pres.straighten(&ls)?.iter() {
                let e = out.entry(k.clone()).or_insert_with(C::zero);
                *e = e.add(&v.mul(c));
                if e.is_zero() {
                    out.remove(k);
                }
            }
        }
        Ok(out)
    }

    /// `D(g)`. The theta modes use the group-like formula directly.
    pub fn generator(&self, g: GenMode, n: i64) -> Result<TruncatedTensor<C>> {
        g.validate()?;
        let k = match g {
            GenMode::ThetaPlus(l) => l,
            GenMode::ThetaMinus(l) => -l,
            _ => return self.word(&Word::new(vec![g]), n),
        };
        let l = k.abs();
        let mut t = TruncatedTensor::zero(2, n);
        t.raw_terms = (l + 1) as usize;
        for i in 0..=l {
            let (a, b) = (i * k.signum(), (l - i) * k.signum());
            if a.abs() > n || b.abs() > n {
                t.dropped += 1;
                t.raw_terms -= 1;
                continue;
            }
            let (sa, sb) = (self.theta_sum(a)?, self.theta_sum(b)?);
            for (x, c) in &sa {
                for (y, d) in &sb {
                    tt_add(&mut t.terms, vec![x.clone(), y.clone()], c.mul(d));
                }
            }
        }
        Ok(t)
    }

    /// `D` of a word in the generators, as an algebra map.
    pub fn word(&self, w: &Word<C>, n: i64) -> Result<TruncatedTensor<C>> {
        let mut total: Option<TruncatedTensor<C>> = None;
        let mut expanded: Vec<(Vec<Letter>, C)> = vec![(vec![], w.coeff.clone())];
        for &m in &w.modes {
            let opts = self.pres.mode_letters(m)?;
            let mut next = Vec::new();
            for (pre, c) in &expanded {
                for (ls, k) in &opts {
                    let mut v = pre.clone();
                    v.extend_from_slice(ls);
                    next.push((v, c.mul(k)));
                }
            }
            expanded = next;
        }
        for (ls, c) in expanded {
            let t = self.letters(&ls, n)?.scale(&c);
            total = Some(match total {
                Some(a) => a.add(&t)?,
                None => t,
            });
        }
        Ok(total.unwrap_or_else(|| TruncatedTensor::zero(2, n)))
    }

    /// `D` of an ordered monomial.
    pub fn ordered(&self, t: &Ordered, n: i64) -> Result<TruncatedTensor<C>> {
        let ls: Vec<Letter> = t.letters().collect();
        self.letters(&ls, n)
    }

    /// `D(x)` through the witness of `x`, decomposing the outer parts into
    /// words when there is none.
    pub fn element(&self, x: &TriangularElement<C>, n: i64) -> Result<TruncatedTensor<C>> {
        let w = match x.witness() {
            Some(w) => w.clone(),
            None => self.pres.expand(x, crate::lattice::Window { lo: -n, hi: n })?,
        };
        let mut total = TruncatedTensor::zero(2, n);
        for (t, c) in &w {
            total = total.add(&self.ordered(t, n)?.scale(c))?;
        }
        Ok(total)
    }

    /// Apply `D` to factor `pos`, raising the arity by one. Exact on factors
    /// of degree at most `n` provided the input is exact up to `2n`.
    pub fn apply_at(&self, t: &TruncatedTensor<C>, pos: usize, n: i64) -> Result<TruncatedTensor<C>> {
        if pos >= t.arity {
            return Err(HopfError::Position { pos, arity: t.arity });
        }
        let mut out = TruncatedTensor::zero(t.arity + 1, n);
        out.tail = t.tail;
        out.dropped = t.dropped;
        for (k, c) in &t.terms {
            if k.iter().enumerate().any(|(i, f)| i != pos && deg(f).abs() > n) {
                out.dropped += 1;
                continue;
            }
            let d = self.ordered(&k[pos], n)?;
            out.raw_terms += d.raw_terms;
            out.dropped += d.dropped;
            out.tail |= d.tail;
            for (pair, v) in &d.terms {
                let mut key = k[..pos].to_vec();
                key.extend(pair.iter().cloned());
                key.extend_from_slice(&k[pos + 1..]);
                tt_add(&mut out.terms, key, v.mul(c));
            }
        }
        Ok(out.truncate(n))
    }

    /// `(D (x) id) D(g) = (id (x) D) D(g)` on factors of degree at most `n`.
    pub fn coassociative(&self, g: GenMode, n: i64) -> Result<bool> {
        let d = self.generator(g, 2 * n)?;
        let l = self.apply_at(&d, 0, n)?;
        let r = self.apply_at(&d, 1, n)?;
        Ok(l.same_as(&r, &self.pres))
    }

    /// `D(lhs) = D(rhs)` for a relation given as two sums of words.
    pub fn compatible(&self, lhs: &[Word<C>], rhs: &[Word<C>], n: i64) -> Result<bool> {
        let sum = |ws: &[Word<C>]| -> Result<TruncatedTensor<C>> {
            let mut t = TruncatedTensor::zero(2, n);
            for w in ws {
                t = t.add(&self.word(w, n)?)?;
            }
            Ok(t)
        };
        Ok(sum(lhs)?.same_as(&sum(rhs)?, &self.pres))
    }
}

/// The cross relation `[u_{-1,a}, u_{1,b}] = C(a,b)` as two word sums.
pub fn cross_instance<C: Coeff>(pres: &Presentation<C>, a: i64, b: i64) -> Result<(Vec<Word<C>>, Vec<Word<C>>)> {
    let lhs = vec![
        Word::new(vec![GenMode::Uneg(a), GenMode::Upos(b)]),
        Word { modes: vec![GenMode::Upos(b), GenMode::Uneg(a)], coeff: C::one().neg() },
    ];
    let rhs = pres
        .cross_commutator(a, b)?
        .into_iter()
        .map(|(modes, c)| Word { modes: modes.into_iter().map(GenMode::Uzero).collect(), coeff: c })
        .collect();
    Ok((lhs, rhs))
}

/// `[u_{0,l}, u_{+-1,n}]` equals its transported generator.
pub fn transport_instance<C: Coeff>(l: i64, side: Side, n: i64) -> (Vec<Word<C>>, Vec<Word<C>>) {
    let g = match side {
        Side::PosGen => GenMode::Upos(n),
        Side::NegGen => GenMode::Uneg(n),
    };
    let lhs = vec![
        Word::new(vec![GenMode::Uzero(l), g]),
        Word { modes: vec![g, GenMode::Uzero(l)], coeff: C::one().neg() },
    ];
    (lhs, vec![theta_transport(l, side, n)])
}

//! Multivariate Laurent polynomials and the naive symmetrization used as an
//! oracle for the Schur-basis kernels.

use std::collections::BTreeMap;

use crate::kfield::{Coeff, Params};

use super::ShuffleError;

/// A Laurent polynomial in a fixed number of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiLaurent<C> {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, C>,
}

impl<C: Coeff> MultiLaurent<C> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], C::one())
    }

    pub fn monomial(exps: Vec<i32>, c: C) -> Self {
        let mut m = Self::zero(exps.len());
        if !c.is_zero() {
            m.terms.insert(exps, c);
        }
        m
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i32>, C)>) -> Self {
        let mut m = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            m.add_term(e, c);
        }
        m
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, e: Vec<i32>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    /// Substitute `z_i -> z_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; self.nvars];
            for (i, &p) in perm.iter().enumerate() {
                e2[p] = e[i];
            }
            (e2, c.clone())
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Per-variable minimum and maximum exponents.
    fn bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for e in it {
            for i in 0..self.nvars {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        Some((lo, hi))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dlo, dhi) = d.bounds()?;
        let Some((flo, fhi)) = self.bounds() else {
            return Some(Self::zero(self.nvars));
        };
        let qlo: Vec<i32> = flo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let qhi: Vec<i32> = fhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        let (dlead, dc) = d.terms.iter().next_back().expect("nonzero divisor");
        let dinv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            let qe: Vec<i32> = e.iter().zip(dlead).map(|(a, b)| a - b).collect();
            if qe.iter().zip(qlo.iter().zip(&qhi)).any(|(v, (lo, hi))| v < lo || v > hi) {
                return None;
            }
            let qc = c.mul(&dinv);
            for (de, dcoef) in &d.terms {
                let te: Vec<i32> = qe.iter().zip(de).map(|(a, b)| a + b).collect();
                rem.add_term(te, qc.mul(dcoef).neg());
            }
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// The Vandermonde product `prod_{i<j} (z_i - z_j)`.
    pub fn vandermonde(n: usize) -> Self {
        let mut v = Self::one(n);
        for i in 0..n {
            for j in i + 1..n {
                let mut a = vec![0; n];
                a[i] = 1;
                let mut b = vec![0; n];
                b[j] = 1;
                v = v.mul(&Self::from_terms(n, [(a, C::one()), (b, C::one().neg())]));
            }
        }
        v
    }
}

/// A quotient of multivariate Laurent polynomials, used while summing the
/// kernel over permutations.
#[derive(Clone, Debug)]
pub struct RationalMultivar<C> {
    pub num: MultiLaurent<C>,
    pub den: MultiLaurent<C>,
}

impl<C: Coeff> RationalMultivar<C> {
    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
        }
        if self.den == o.den.neg() {
            return Self {
                num: self.num.sub(&o.num),
                den: self.den.clone(),
            };
        }
        Self {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    /// The polynomial value, if the denominator divides the numerator.
    pub fn cancel(&self) -> Result<MultiLaurent<C>, ShuffleError> {
        self.num.div_exact(&self.den).ok_or(ShuffleError::DenominatorNotCleared)
    }
}

fn linear<C: Coeff>(n: usize, i: usize, j: usize, cj: C) -> MultiLaurent<C> {
    let mut a = vec![0; n];
    a[i] = 1;
    let mut b = vec![0; n];
    b[j] = 1;
    MultiLaurent::from_terms(n, [(a, C::one()), (b, cj.neg())])
}

/// `prod_{i<j} omega(z_i / z_j)` as a quotient, built from its linear
/// factors `(z_i - sigma z_j)(z_i - sigmabar z_j)(z_i - z_j/q)` over
/// `z_i z_j (z_i - z_j)`.
pub fn kernel_product<C: Coeff>(params: &Params<C>, n: usize) -> RationalMultivar<C> {
    let qi = params.q().inv().expect("q is nonzero");
    let mut num = MultiLaurent::one(n);
    let mut den = MultiLaurent::one(n);
    for i in 0..n {
        for j in i + 1..n {
            num = num
                .mul(&linear(n, i, j, params.sigma.clone()))
                .mul(&linear(n, i, j, params.sigmabar.clone()))
                .mul(&linear(n, i, j, qi.clone()));
            let mut e = vec![0; n];
            e[i] = 1;
            e[j] = 1;
            den = den.mul(&MultiLaurent::monomial(e, C::one())).mul(&linear(n, i, j, C::one()));
        }
    }
    RationalMultivar { num, den }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `sum_gamma gamma(kernel * p)`, summed as rational functions and then
/// cancelled.
pub fn symmetrize_naive<C: Coeff>(params: &Params<C>, p: &MultiLaurent<C>) -> Result<MultiLaurent<C>, ShuffleError> {
    let n = p.nvars();
    let k = kernel_product(params, n);
    let base = RationalMultivar {
        num: k.num.mul(p),
        den: k.den,
    };
    let mut acc: Option<RationalMultivar<C>> = None;
    for perm in permutations(n) {
        let term = RationalMultivar {
            num: base.num.permute(&perm),
            den: base.den.permute(&perm),
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    acc.expect("at least one permutation").cancel()
}

/// The shuffle product summed naively over all permutations, with the
/// kernel built from linear factors. `h` and `f` are symmetric polynomials
/// in their own variables.
pub fn shuffle_naive<C: Coeff>(
    params: &Params<C>,
    h: &MultiLaurent<C>,
    f: &MultiLaurent<C>,
) -> Result<MultiLaurent<C>, ShuffleError> {
    let (r, s) = (h.nvars(), f.nvars());
    let n = r + s;
    let qi = params.q().inv()?;
    let mut num = MultiLaurent::one(n);
    let mut den = MultiLaurent::one(n);
    for i in 0..r {
        for j in r..n {
            num = num
                .mul(&linear(n, i, j, params.sigma.clone()))
                .mul(&linear(n, i, j, params.sigmabar.clone()))
                .mul(&linear(n, i, j, qi.clone()));
            let mut e = vec![0; n];
            e[i] = 1;
            e[j] = 1;
            den = den.mul(&MultiLaurent::monomial(e, C::one())).mul(&linear(n, i, j, C::one()));
        }
    }
    // Complete the denominator to the full product over all pairs so that
    // every permuted term shares it up to sign.
    for i in 0..n {
        for j in i + 1..n {
            if (i < r) == (j < r) {
                let mut e = vec![0; n];
                e[i] = 1;
                e[j] = 1;
                let f = MultiLaurent::monomial(e, C::one()).mul(&linear(n, i, j, C::one()));
                num = num.mul(&f);
                den = den.mul(&f);
            }
        }
    }
    let widen = |g: &MultiLaurent<C>, off: usize| {
        MultiLaurent::from_terms(
            n,
            g.terms().map(|(e, c)| {
                let mut e2 = vec![0; n];
                e2[off..off + e.len()].copy_from_slice(e);
                (e2, c.clone())
            }),
        )
    };
    let num = num.mul(&widen(h, 0)).mul(&widen(f, r));
    let mut acc: Option<RationalMultivar<C>> = None;
    for perm in permutations(n) {
        let term = RationalMultivar {
            num: num.permute(&perm),
            den: den.permute(&perm),
        };
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let total = acc.expect("at least one permutation").cancel()?;
    let norm: i64 = (1..=r as i64).product::<i64>() * (1..=s as i64).product::<i64>();
    Ok(total.scale(&C::from_int(norm).inv()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::Rat;

    fn params() -> Params<Rat> {
        Params::from_values(Rat::new(2, 1), Rat::new(3, 1)).unwrap()
    }

    #[test]
    fn exact_division_by_vandermonde() {
        let v = MultiLaurent::<Rat>::vandermonde(3);
        let f = MultiLaurent::from_terms(3, [(vec![2, -1, 0], Rat::new(3, 1)), (vec![0, 0, 1], Rat::new(-1, 2))]);
        let prod = f.mul(&v);
        assert_eq!(prod.div_exact(&v).unwrap(), f);
        let off = prod.add(&MultiLaurent::monomial(vec![0, 0, 0], Rat::one()));
        assert!(off.div_exact(&v).is_none());
    }

    #[test]
    fn rank_one_symmetrization_is_identity() {
        let p = MultiLaurent::monomial(vec![4], Rat::one());
        assert_eq!(symmetrize_naive(&params(), &p).unwrap(), p);
    }

    #[test]
    fn symmetric_multipliers_commute_with_symmetrization() {
        let pr = params();
        let one = MultiLaurent::<Rat>::one(2);
        let e = MultiLaurent::from_terms(2, [(vec![1, 0], Rat::one()), (vec![0, 1], Rat::one())]);
        let lhs = symmetrize_naive(&pr, &e).unwrap();
        let rhs = e.mul(&symmetrize_naive(&pr, &one).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
    }
}

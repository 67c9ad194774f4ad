use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::kfield::{Coeff, KError};

use super::multi::{permutations, MultiLaurent};
use super::schur::{power_sum_times, shifted, straighten, Label};
use super::ShuffleError;

/// A symmetric Laurent polynomial in `rank` variables, stored in the Schur
/// basis `s_lambda` with `lambda` weakly decreasing (entries may be
/// negative).
#[derive(Clone, Debug, PartialEq)]
pub struct SymLaurent<C> {
    rank: usize,
    terms: BTreeMap<Label, C>,
}

impl<C: Coeff> SymLaurent<C> {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    /// The unit of the algebra, in rank 0.
    pub fn one() -> Self {
        Self::schur(vec![], C::one())
    }

    /// `z^d` in rank 1.
    pub fn monomial(d: i32) -> Self {
        Self::schur(vec![d], C::one())
    }

    /// `c * s_label`. Panics if the label is not weakly decreasing.
    pub fn schur(label: Label, c: C) -> Self {
        assert!(label.windows(2).all(|w| w[0] >= w[1]), "label must be weakly decreasing");
        let mut f = Self::zero(label.len());
        f.add_term(label, c);
        f
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (Label, C)>) -> Self {
        let mut f = Self::zero(rank);
        for (l, c) in terms {
            assert_eq!(l.len(), rank, "label length must equal the rank");
            assert!(l.windows(2).all(|w| w[0] >= w[1]), "label must be weakly decreasing");
            f.add_term(l, c);
        }
        f
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Label, &C)> {
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

    pub fn coeff(&self, label: &[i32]) -> C {
        self.terms.get(label).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree of the first term; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next().map(|l| l.iter().map(|&v| v as i64).sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|l| Some(l.iter().map(|&v| v as i64).sum()) == d)
    }

    /// Smallest and largest label entry over all terms.
    pub fn entry_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().filter_map(|l| l.last().copied()).min()?;
        let hi = self.terms.keys().filter_map(|l| l.first().copied()).max()?;
        Some((lo, hi))
    }

    pub(crate) fn add_term(&mut self, label: Label, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, c);
            }
        }
    }

    fn check_rank(&self, o: &Self) {
        assert!(
            self.rank == o.rank || self.is_zero() || o.is_zero(),
            "rank mismatch: {} vs {}",
            self.rank,
            o.rank
        );
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_rank(o);
        let mut r = if self.is_zero() { Self::zero(o.rank) } else { self.clone() };
        for (l, c) in &o.terms {
            r.add_term(l.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero(self.rank);
        }
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c.mul(k))).collect(),
        }
    }

    /// Multiply by the power sum `p_l = sum_i z_i^l`.
    pub fn mul_power_sum(&self, l: i32) -> Self {
        let mut r = Self::zero(self.rank);
        for (lam, c) in &self.terms {
            for (sign, mu) in power_sum_times(lam, l) {
                r.add_term(mu, c.mul_int(sign));
            }
        }
        r
    }

    /// Apply `f` to every coefficient.
    pub fn try_map<D: Coeff>(&self, f: impl Fn(&C) -> Result<D, KError>) -> Result<SymLaurent<D>, KError> {
        let mut r = SymLaurent::zero(self.rank);
        for (l, c) in &self.terms {
            r.add_term(l.clone(), f(c)?);
        }
        Ok(r)
    }

    /// Expand into monomials: `s_lambda = alt(z^{lambda+delta}) / V`.
    pub fn to_monomials(&self) -> Result<MultiLaurent<C>, ShuffleError> {
        let n = self.rank;
        let v = MultiLaurent::<C>::vandermonde(n);
        let perms = permutations(n);
        let mut alt = MultiLaurent::zero(n);
        for (lam, c) in &self.terms {
            let a = shifted(lam);
            for p in &perms {
                let mut e = vec![0; n];
                for (i, &pi) in p.iter().enumerate() {
                    e[pi] = a[i];
                }
                alt.add_term(e, c.mul_int(perm_sign(p)));
            }
        }
        alt.div_exact(&v).ok_or(ShuffleError::DenominatorNotCleared)
    }

    /// Convert a symmetric polynomial from monomials; fails if `m` is not
    /// symmetric.
    pub fn from_monomials(m: &MultiLaurent<C>) -> Result<Self, ShuffleError> {
        let n = m.nvars();
        let prod = m.mul(&MultiLaurent::vandermonde(n));
        let mut r = Self::zero(n);
        for (e, c) in prod.terms() {
            if e.windows(2).all(|w| w[0] > w[1]) {
                let (_, lam) = straighten(e.clone()).expect("strictly decreasing");
                r.add_term(lam, c.clone());
            }
        }
        if &r.to_monomials()? != m {
            return Err(ShuffleError::NotSymmetric);
        }
        Ok(r)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(l, c)| json!({"label": l, "coeff": c.to_string()}))
            .collect();
        json!({"rank": self.rank, "basis": "schur", "terms": terms})
    }
}

fn perm_sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

impl<C: Coeff> fmt::Display for SymLaurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let labels: Vec<String> = l.iter().map(i32::to_string).collect();
            write!(f, "({c})*s[{}]", labels.join(","))?;
        }
        Ok(())
    }
}

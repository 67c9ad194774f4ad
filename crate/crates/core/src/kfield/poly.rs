use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent pair `(a, b)` of the monomial `s^a t^b`.
pub type Exp2 = (i32, i32);

/// Integer Laurent polynomial in `s` (sigma) and `t` (sigma-bar).
///
/// Terms are kept sorted by exponent (lexicographic, `s` first) with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly2 {
    terms: Vec<(Exp2, BigInt)>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::monomial((0, 0), c)
    }

    pub fn monomial(e: Exp2, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(e, c)] }
        }
    }

    pub fn s() -> Self {
        Self::monomial((1, 0), BigInt::one())
    }

    pub fn t() -> Self {
        Self::monomial((0, 1), BigInt::one())
    }

    /// Build from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Exp2, BigInt)>>(it: I) -> Self {
        let mut acc: HashMap<Exp2, BigInt> = HashMap::new();
        for (e, c) in it {
            *acc.entry(e).or_insert_with(BigInt::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Exp2, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Self { terms }
    }

    pub fn terms(&self) -> &[(Exp2, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    /// The constant value when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [((0, 0), c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Exp2, BigInt)> {
        self.terms.last()
    }

    pub fn trailing(&self) -> Option<&(Exp2, BigInt)> {
        self.terms.first()
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let pick = if i == a.len() {
                std::cmp::Ordering::Greater
            } else if j == b.len() {
                std::cmp::Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match pick {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Self { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_monomial() {
            let (e, c) = &other.terms[0];
            return self.mul_monomial(*e, c);
        }
        if self.is_monomial() {
            let (e, c) = &self.terms[0];
            return other.mul_monomial(*e, c);
        }
        let mut acc: HashMap<Exp2, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = (ea.0 + eb.0, ea.1 + eb.1);
                let p = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    pub fn mul_monomial(&self, e: Exp2, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(f, d)| ((f.0 + e.0, f.1 + e.1), d * c))
                .collect(),
        }
    }

    pub fn shift(&self, e: Exp2) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(f, d)| ((f.0 + e.0, f.1 + e.1), d.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, d)| (*e, d * c)).collect(),
        }
    }

    /// Divide every coefficient by `c`; the caller guarantees divisibility.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, d)| (*e, d / c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Componentwise minimum exponent, `(0, 0)` for zero.
    pub fn min_exponents(&self) -> Exp2 {
        let mut it = self.terms.iter();
        match it.next() {
            None => (0, 0),
            Some(((a, b), _)) => it.fold((*a, *b), |(ma, mb), ((a, b), _)| (ma.min(*a), mb.min(*b))),
        }
    }

    pub fn max_exponents(&self) -> Exp2 {
        let mut it = self.terms.iter();
        match it.next() {
            None => (0, 0),
            Some(((a, b), _)) => it.fold((*a, *b), |(ma, mb), ((a, b), _)| (ma.max(*a), mb.max(*b))),
        }
    }

    /// Exact quotient in the Laurent ring, `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_monomial() {
            let (e, c) = &divisor.terms[0];
            if self.terms.iter().any(|(_, d)| !d.is_multiple_of(c)) {
                return None;
            }
            return Some(Self {
                terms: self
                    .terms
                    .iter()
                    .map(|(f, d)| ((f.0 - e.0, f.1 - e.1), d / c))
                    .collect(),
            });
        }
        let (lt_e, lt_c) = divisor.leading().cloned().unwrap();
        // Newton polytopes add under multiplication, so the quotient lives in
        // a known box.
        let (fmin, fmax) = (self.min_exponents(), self.max_exponents());
        let (gmin, gmax) = (divisor.min_exponents(), divisor.max_exponents());
        let lo = (fmin.0 - gmin.0, fmin.1 - gmin.1);
        let hi = (fmax.0 - gmax.0, fmax.1 - gmax.1);
        if lo.0 > hi.0 || lo.1 > hi.1 {
            return None;
        }
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((re, rc)) = rem.leading().cloned() {
            let qe = (re.0 - lt_e.0, re.1 - lt_e.1);
            if qe.0 < lo.0 || qe.0 > hi.0 || qe.1 < lo.1 || qe.1 > hi.1 {
                return None;
            }
            let (q, r) = rc.div_rem(&lt_c);
            if !r.is_zero() {
                return None;
            }
            rem = rem.sub(&divisor.mul_monomial(qe, &q));
            quotient.push((qe, q));
        }
        quotient.reverse();
        Some(Self { terms: quotient })
    }

    /// Evaluate at rational `(s, t)`; `None` if a negative power meets a zero.
    pub fn eval(&self, s: &BigRational, t: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for ((a, b), c) in &self.terms {
            let sa = rat_pow(s, *a)?;
            let tb = rat_pow(t, *b)?;
            acc += sa * tb * BigRational::from_integer(c.clone());
        }
        Some(acc)
    }

    /// Swap the roles of `s` and `t`.
    pub fn swap_st(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())))
    }

    pub fn leading_sign_positive(&self) -> bool {
        self.leading().is_none_or(|(_, c)| c.is_positive())
    }
}

pub(crate) fn rat_pow(x: &BigRational, e: i32) -> Option<BigRational> {
    if e >= 0 {
        Some(num_traits::pow(x.clone(), e as usize))
    } else if x.is_zero() {
        None
    } else {
        Some(num_traits::pow(x.recip(), (-e) as usize))
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (*a == 0 && *b == 0) {
                factors.push(mag.to_string());
            }
            for (name, e) in [("s", *a), ("t", *b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[((i32, i32), i64)]) -> LaurentPoly2 {
        LaurentPoly2::from_terms(terms.iter().map(|(e, c)| (*e, BigInt::from(*c))))
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = p(&[((1, 0), 2), ((0, -1), 3)]);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.add(&a.neg()), LaurentPoly2::zero());
    }

    #[test]
    fn product_and_exact_division_round_trip() {
        let a = p(&[((1, 0), 1), ((0, 0), -1), ((-1, 2), 4)]);
        let b = p(&[((0, 1), 3), ((2, -1), -2), ((0, 0), 5)]);
        let ab = a.mul(&b);
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&b), Some(a));
        let c = p(&[((1, 1), 1), ((0, 0), 1)]);
        assert_eq!(b.div_exact(&c), None);
    }

    #[test]
    fn display_is_readable() {
        let a = p(&[((2, 0), 1), ((0, -1), -3), ((0, 0), 1)]);
        assert_eq!(a.to_string(), "s^2 + 1 - 3*t^-1");
    }

    #[test]
    fn eval_rejects_pole() {
        let a = p(&[((-1, 0), 1)]);
        let z = BigRational::zero();
        assert!(a.eval(&z, &BigRational::one()).is_none());
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::LaurentPoly2;
use super::KError;

/// Element of K = Q(s, t) stored as `num / den` of integer Laurent
/// polynomials.
///
/// Reduction is lazy: the denominator is shifted to have minimal exponents
/// `(0, 0)`, integer content is cancelled, the leading denominator coefficient
/// is made positive, and exact divisibility of the numerator by the
/// denominator is detected. No multivariate gcd is taken, so two equal
/// elements may differ structurally; compare with `==`, which cross-multiplies.
#[derive(Clone)]
pub struct FieldElem {
    num: LaurentPoly2,
    den: LaurentPoly2,
}

impl FieldElem {
    pub fn zero() -> Self {
        Self {
            num: LaurentPoly2::zero(),
            den: LaurentPoly2::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly2::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly2::constant(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_poly(LaurentPoly2::constant(n))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::new(
            LaurentPoly2::constant(q.numer().clone()),
            LaurentPoly2::constant(q.denom().clone()),
        )
        .expect("rational denominators are nonzero")
    }

    pub fn from_poly(p: LaurentPoly2) -> Self {
        Self {
            num: p,
            den: LaurentPoly2::one(),
        }
    }

    /// The generator sigma.
    pub fn sigma() -> Self {
        Self::from_poly(LaurentPoly2::s())
    }

    /// The generator sigma-bar.
    pub fn sigmabar() -> Self {
        Self::from_poly(LaurentPoly2::t())
    }

    pub fn new(num: LaurentPoly2, den: LaurentPoly2) -> Result<Self, KError> {
        if den.is_zero() {
            return Err(KError::DivisionByZero);
        }
        let mut x = Self { num, den };
        x.reduce();
        Ok(x)
    }

    pub fn numer(&self) -> &LaurentPoly2 {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly2 {
        &self.den
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = LaurentPoly2::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let (ma, mb) = self.den.min_exponents();
        if (ma, mb) != (0, 0) {
            self.den = self.den.shift((-ma, -mb));
            self.num = self.num.shift((-ma, -mb));
        }
        let g = self.num.content().gcd(&self.den.content());
        let g = if self.den.leading_sign_positive() { g } else { -g };
        if !g.is_one() {
            self.num = self.num.div_scalar_exact(&g);
            self.den = self.den.div_scalar_exact(&g);
        }
        if self.den.is_one() {
            return;
        }
        if self.den.as_constant().is_none() && self.num.len() >= self.den.len() {
            if let Some(q) = self.num.div_exact(&self.den) {
                self.num = q;
                self.den = LaurentPoly2::one();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is a constant, so the value is a Laurent
    /// polynomial with rational coefficients.
    pub fn is_laurent(&self) -> bool {
        self.den.as_constant().is_some()
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let join = |a: &LaurentPoly2, b: &LaurentPoly2| if negate { a.sub(b) } else { a.add(b) };
        if self.den == other.den {
            let mut x = Self {
                num: join(&self.num, &other.num),
                den: self.den.clone(),
            };
            x.reduce();
            return x;
        }
        if let Some(k) = other.den.div_exact(&self.den) {
            let mut x = Self {
                num: join(&self.num.mul(&k), &other.num),
                den: other.den.clone(),
            };
            x.reduce();
            return x;
        }
        if let Some(k) = self.den.div_exact(&other.den) {
            let mut x = Self {
                num: join(&self.num, &other.num.mul(&k)),
                den: self.den.clone(),
            };
            x.reduce();
            return x;
        }
        let mut x = Self {
            num: join(&self.num.mul(&other.den), &other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        };
        x.reduce();
        x
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        // Cancel cross factors first when they divide cleanly.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.div_exact(&d2) {
                n1 = q;
                d2 = LaurentPoly2::one();
            }
        }
        if !d1.is_one() {
            if let Some(q) = n2.div_exact(&d1) {
                n2 = q;
                d1 = LaurentPoly2::one();
            }
        }
        let mut x = Self {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        };
        x.reduce();
        x
    }

    pub fn mul_int(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let mut x = Self {
            num: self.num.scale(&BigInt::from(k)),
            den: self.den.clone(),
        };
        x.reduce();
        x
    }

    pub fn inv(&self) -> Result<Self, KError> {
        if self.is_zero() {
            return Err(KError::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, KError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power, negative exponents allowed for nonzero elements.
    pub fn pow(&self, e: i64) -> Result<Self, KError> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        if self.den.is_one() {
            return Ok(Self::from_poly(self.num.pow(e)));
        }
        Self::new(self.num.pow(e), self.den.pow(e))
    }

    /// Value at a rational point; fails at poles.
    pub fn specialize(&self, s: &BigRational, t: &BigRational) -> Result<BigRational, KError> {
        let n = self.num.eval(s, t).ok_or(KError::PoleAtPoint)?;
        let d = self.den.eval(s, t).ok_or(KError::PoleAtPoint)?;
        if d.is_zero() {
            return Err(KError::PoleAtPoint);
        }
        Ok(n / d)
    }

    /// Swap sigma and sigma-bar.
    pub fn swap_st(&self) -> Self {
        Self::new(self.num.swap_st(), self.den.swap_st()).expect("nonzero denominator")
    }

    /// Rough size measure used for pivot choice.
    pub fn weight(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for FieldElem {}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &LaurentPoly2| {
            if p.len() == 1 && p.terms()[0].1.is_positive() {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s() -> FieldElem {
        FieldElem::sigma()
    }
    fn t() -> FieldElem {
        FieldElem::sigmabar()
    }

    #[test]
    fn inverse_times_self_is_one() {
        let x = s().add(&t().mul_int(3)).sub(&FieldElem::one());
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn geometric_quotient_reduces_to_polynomial() {
        let one = FieldElem::one();
        let x = one.sub(&s().pow(3).unwrap()).div(&one.sub(&s())).unwrap();
        assert!(x.is_laurent());
        assert_eq!(x, one.add(&s()).add(&s().pow(2).unwrap()));
    }

    #[test]
    fn equality_crosses_representations() {
        let a = s().div(&s().add(&t())).unwrap();
        let b = s().mul(&t()).div(&s().mul(&t()).add(&t().mul(&t()))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(FieldElem::zero().inv(), Err(KError::DivisionByZero)));
    }
}

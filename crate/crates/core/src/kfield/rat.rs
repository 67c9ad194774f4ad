use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Coeff, KError};

/// An exact rational, used as the coefficient field once sigma and
/// sigma-bar are specialized.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rat(pub BigRational);

impl Rat {
    pub fn new(n: i64, d: i64) -> Self {
        Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn one() -> Self {
        Rat(BigRational::one())
    }
    fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_rational(q: &BigRational) -> Self {
        Rat(q.clone())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, other: &Self) -> Self {
        Rat(&self.0 + &other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Rat(&self.0 - &other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Rat(&self.0 * &other.0)
    }
    fn neg(&self) -> Self {
        Rat(-&self.0)
    }
    fn mul_int(&self, k: i64) -> Self {
        Rat(&self.0 * BigInt::from(k))
    }
    fn inv(&self) -> Result<Self, KError> {
        if self.0.is_zero() {
            Err(KError::DivisionByZero)
        } else {
            Ok(Rat(self.0.recip()))
        }
    }
}

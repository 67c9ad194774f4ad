//! The coefficient field K = Q(sigma, sigma-bar) and its specializations.
//!
//! Text form writes `s` for sigma and `t` for sigma-bar.

mod field;
mod parse;
mod poly;
mod rat;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use field::FieldElem;
pub use parse::parse_k;
pub use poly::{Exp2, LaurentPoly2};
pub use rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at the specialization point")]
    PoleAtPoint,
    #[error("sigma and sigma-bar must be nonzero")]
    ZeroParameter,
    #[error("degenerate specialization (sigma, sigma-bar or sigma*sigma-bar is a root of unity)")]
    DegenerateSpecialization,
    #[error("sampling exhausted after {0} draws without a usable point")]
    SamplingExhausted(usize),
    #[error("cannot parse K-expression: {0}")]
    Parse(String),
}

/// Arithmetic needed by the shuffle and presentation engines. Implemented by
/// the symbolic field [`FieldElem`] and by exact rationals [`Rat`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn inv(&self) -> Result<Self, KError>;

    fn div(&self, other: &Self) -> Result<Self, KError> {
        Ok(self.mul(&other.inv()?))
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow_i(&self, e: i64) -> Result<Self, KError> {
        if e < 0 {
            return self.inv()?.pow_i(-e);
        }
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    /// Size hint for pivoting; cheaper entries are preferred.
    fn weight(&self) -> usize {
        1
    }

    /// Rank of a matrix over this field.
    fn rank(rows: &[Vec<Self>]) -> usize {
        crate::linalg::gauss_rank(rows)
    }

    /// Solve `x * rows = target` for the row combination `x`, if one exists.
    fn solve_left(rows: &[Vec<Self>], target: &[Self]) -> Option<Vec<Self>> {
        crate::linalg::gauss_solve_left(rows, target)
    }
}

impl Coeff for FieldElem {
    fn zero() -> Self {
        FieldElem::zero()
    }
    fn one() -> Self {
        FieldElem::one()
    }
    fn from_int(n: i64) -> Self {
        FieldElem::from_int(n)
    }
    fn from_rational(q: &BigRational) -> Self {
        FieldElem::from_rational(q)
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn is_one(&self) -> bool {
        FieldElem::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        FieldElem::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        FieldElem::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        FieldElem::mul(self, other)
    }
    fn neg(&self) -> Self {
        FieldElem::neg(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        FieldElem::mul_int(self, k)
    }
    fn inv(&self) -> Result<Self, KError> {
        FieldElem::inv(self)
    }
    fn pow_i(&self, e: i64) -> Result<Self, KError> {
        FieldElem::pow(self, e)
    }
    fn weight(&self) -> usize {
        FieldElem::weight(self)
    }
    fn rank(rows: &[Vec<Self>]) -> usize {
        crate::linalg::bareiss_rank(rows)
    }
    fn solve_left(rows: &[Vec<Self>], target: &[Self]) -> Option<Vec<Self>> {
        crate::linalg::bareiss_solve_left(rows, target)
    }
}

/// The pair (sigma, sigma-bar) in a coefficient field, with the derived
/// constants used by the kernel.
#[derive(Clone, Debug)]
pub struct Params<C> {
    pub sigma: C,
    pub sigmabar: C,
    e1: C,
    e2: C,
}

impl<C: Coeff> Params<C> {
    /// Requires nonzero parameters; rejects roots of unity when `C` is
    /// specialized (the caller supplies the check through `nondegenerate`).
    pub fn from_values(sigma: C, sigmabar: C) -> Result<Self, KError> {
        if sigma.is_zero() || sigmabar.is_zero() {
            return Err(KError::ZeroParameter);
        }
        let q = sigma.mul(&sigmabar);
        let qi = q.inv()?;
        let e1 = sigma.add(&sigmabar).add(&qi);
        let e2 = q.add(&sigma.inv()?).add(&sigmabar.inv()?);
        Ok(Self {
            sigma,
            sigmabar,
            e1,
            e2,
        })
    }

    pub fn q(&self) -> C {
        self.sigma.mul(&self.sigmabar)
    }

    /// sigma + sigma-bar + 1/(sigma sigma-bar)
    pub fn e1(&self) -> &C {
        &self.e1
    }

    /// sigma sigma-bar + 1/sigma + 1/sigma-bar
    pub fn e2(&self) -> &C {
        &self.e2
    }

    /// alpha_i = (1 - sigma^i)(1 - sigma-bar^i)(1 - (sigma sigma-bar)^-i) / i
    pub fn alpha(&self, i: i64) -> C {
        assert!(i != 0, "alpha_0 is undefined");
        let one = C::one();
        let a = one.sub(&self.sigma.pow_i(i).expect("sigma is nonzero"));
        let b = one.sub(&self.sigmabar.pow_i(i).expect("sigma-bar is nonzero"));
        let c = one.sub(&self.q().pow_i(-i).expect("q is nonzero"));
        a.mul(&b).mul(&c).div(&C::from_int(i)).expect("i is nonzero")
    }

    /// Evaluate a symbolic scalar in this field.
    pub fn embed(&self, x: &FieldElem) -> Result<C, KError> {
        let ev = |p: &LaurentPoly2| -> Result<C, KError> {
            let mut acc = C::zero();
            for ((a, b), c) in p.terms() {
                let m = self
                    .sigma
                    .pow_i(*a as i64)?
                    .mul(&self.sigmabar.pow_i(*b as i64)?)
                    .mul(&C::from_rational(&BigRational::from_integer(c.clone())));
                acc = acc.add(&m);
            }
            Ok(acc)
        };
        let d = ev(x.denom())?;
        if d.is_zero() {
            return Err(KError::PoleAtPoint);
        }
        ev(x.numer())?.div(&d)
    }
}

impl Params<FieldElem> {
    pub fn symbolic() -> Self {
        Self::from_values(FieldElem::sigma(), FieldElem::sigmabar()).expect("generators are nonzero")
    }
}

impl Params<Rat> {
    /// Specialized parameters; refuses points where some alpha_i vanishes.
    pub fn specialized(sigma: BigRational, sigmabar: BigRational) -> Result<Self, KError> {
        if sigma.is_zero() || sigmabar.is_zero() {
            return Err(KError::ZeroParameter);
        }
        if is_degenerate(&sigma, &sigmabar) {
            return Err(KError::DegenerateSpecialization);
        }
        Self::from_values(Rat(sigma), Rat(sigmabar))
    }

    /// Specialized parameters at integer values.
    pub fn from_ints(sigma: i64, sigmabar: i64) -> Result<Self, KError> {
        Self::specialized(BigRational::from_integer(sigma.into()), BigRational::from_integer(sigmabar.into()))
    }

    pub fn point(&self) -> (BigRational, BigRational) {
        (self.sigma.0.clone(), self.sigmabar.0.clone())
    }
}

/// A rational point is degenerate when sigma, sigma-bar or their product is
/// +1 or -1, the only rational roots of unity.
pub fn is_degenerate(sigma: &BigRational, sigmabar: &BigRational) -> bool {
    let q = sigma * sigmabar;
    [sigma, sigmabar, &q]
        .iter()
        .any(|x| x.is_one() || (-(*x).clone()).is_one())
}

/// The symbolic constant alpha_i in K.
pub fn alpha(i: i64) -> FieldElem {
    Params::symbolic().alpha(i)
}

/// Evaluate `x` at a nondegenerate rational point.
pub fn specialize(x: &FieldElem, sigma: &BigRational, sigmabar: &BigRational) -> Result<BigRational, KError> {
    if sigma.is_zero() || sigmabar.is_zero() {
        return Err(KError::ZeroParameter);
    }
    if is_degenerate(sigma, sigmabar) {
        return Err(KError::DegenerateSpecialization);
    }
    x.specialize(sigma, sigmabar)
}

/// Evaluate `x` at any rational point, degenerate ones included.
pub fn specialize_unchecked(x: &FieldElem, sigma: &BigRational, sigmabar: &BigRational) -> Result<BigRational, KError> {
    if sigma.is_zero() || sigmabar.is_zero() {
        return Err(KError::ZeroParameter);
    }
    x.specialize(sigma, sigmabar)
}

/// Draw a random nondegenerate rational point.
pub fn random_point(rng: &mut impl Rng) -> (BigRational, BigRational) {
    loop {
        let mut draw = || {
            let n: i64 = rng.gen_range(-40..=40);
            let d: i64 = rng.gen_range(1..=12);
            BigRational::new(BigInt::from(n), BigInt::from(d))
        };
        let (a, b) = (draw(), draw());
        if !a.is_zero() && !b.is_zero() && !is_degenerate(&a, &b) {
            return (a, b);
        }
    }
}

/// Compare `x` and `y` at `trials` seeded random points, redrawing at poles.
pub fn equals_probabilistic(x: &FieldElem, y: &FieldElem, trials: usize, seed: u64) -> Result<bool, KError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 100 * trials.max(1);
    let mut used = 0;
    let mut draws = 0;
    while used < trials {
        if draws >= budget {
            return Err(KError::SamplingExhausted(draws));
        }
        draws += 1;
        let (s, t) = random_point(&mut rng);
        let (a, b) = match (x.specialize(&s, &t), y.specialize(&s, &t)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => continue,
        };
        if a != b {
            return Ok(false);
        }
        used += 1;
    }
    Ok(true)
}

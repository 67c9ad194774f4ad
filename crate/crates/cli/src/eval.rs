//! Evaluation of parsed expressions to triangular normal forms.

use ehall_core::kfield::{Coeff, FieldElem, KError};
use ehall_core::lattice::Window;
use ehall_core::presentation::{Presentation, PresentationError, TriangularElement};
use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("rank {r} of {atom} exceeds the rank bound {bound}")]
    RankBound { atom: String, r: i64, bound: usize },
    #[error("division by an algebra element")]
    NonScalarDivision,
    #[error("negative power {0} of an algebra element")]
    NegativePower(i64),
    #[error(transparent)]
    Field(#[from] KError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// A value during evaluation. Scalars stay symbolic until they meet an
/// algebra element, then they are embedded into the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum Val<C: Coeff> {
    Scalar(FieldElem),
    Elem(TriangularElement<C>),
}

pub struct Evaluator<'a, C: Coeff> {
    pub pres: &'a Presentation<C>,
    pub window: Window,
    pub rank_bound: usize,
}

impl<C: Coeff> Evaluator<'_, C> {
    pub fn eval(&self, e: &Expr) -> Result<Val<C>, EvalError> {
        use Val::{Elem, Scalar};
        Ok(match e {
            Expr::Int(n) => Scalar(FieldElem::from_bigint((*n).into())),
            Expr::Sigma => Scalar(FieldElem::sigma()),
            Expr::SigmaBar => Scalar(FieldElem::sigmabar()),
            Expr::U(r, d) => {
                self.check_rank(e, *r)?;
                Elem(self.pres.u_element(*r, *d)?)
            }
            Expr::Theta(r, d) => {
                self.check_rank(e, *r)?;
                Elem(self.pres.theta_element(*r, *d)?)
            }
            Expr::Neg(a) => match self.eval(a)? {
                Scalar(x) => Scalar(x.neg()),
                Elem(x) => Elem(x.neg()),
            },
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?)?,
            Expr::Sub(a, b) => {
                let b = match self.eval(b)? {
                    Scalar(x) => Scalar(x.neg()),
                    Elem(x) => Elem(x.neg()),
                };
                self.add(self.eval(a)?, b)?
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?)?,
            Expr::Div(a, b) => match self.eval(b)? {
                Scalar(y) => {
                    let inv = Scalar(y.inv()?);
                    self.mul(self.eval(a)?, inv)?
                }
                Elem(_) => return Err(EvalError::NonScalarDivision),
            },
            Expr::Pow(a, k) => match self.eval(a)? {
                Scalar(x) => Scalar(x.pow(*k)?),
                Elem(_) if *k < 0 => return Err(EvalError::NegativePower(*k)),
                Elem(x) => {
                    let mut acc = TriangularElement::one();
                    for _ in 0..*k {
                        acc = self.pres.multiply(&acc, &x, self.window)?;
                    }
                    Elem(acc)
                }
            },
            Expr::Comm(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Elem(x), Elem(y)) => Elem(self.pres.commutator(&x, &y, self.window)?),
                // scalars are central
                _ => Elem(TriangularElement::zero()),
            },
        })
    }

    /// Evaluate and force the result into the algebra.
    pub fn element(&self, e: &Expr) -> Result<TriangularElement<C>, EvalError> {
        match self.eval(e)? {
            Val::Elem(x) => Ok(x),
            Val::Scalar(s) => Ok(TriangularElement::scalar(self.embed(&s)?)),
        }
    }

    fn check_rank(&self, e: &Expr, r: i64) -> Result<(), EvalError> {
        if r.unsigned_abs() as usize > self.rank_bound {
            return Err(EvalError::RankBound { atom: e.to_string(), r, bound: self.rank_bound });
        }
        Ok(())
    }

    fn embed(&self, s: &FieldElem) -> Result<C, EvalError> {
        Ok(self.pres.algebra().params().embed(s)?)
    }

    fn add(&self, a: Val<C>, b: Val<C>) -> Result<Val<C>, EvalError> {
        use Val::{Elem, Scalar};
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(x.add(&y)),
            (Elem(x), Elem(y)) => Elem(x.add(&y)),
            (Scalar(s), Elem(x)) | (Elem(x), Scalar(s)) => Elem(x.add(&TriangularElement::scalar(self.embed(&s)?))),
        })
    }

    fn mul(&self, a: Val<C>, b: Val<C>) -> Result<Val<C>, EvalError> {
        use Val::{Elem, Scalar};
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(x.mul(&y)),
            (Elem(x), Elem(y)) => Elem(self.pres.multiply(&x, &y, self.window)?),
            (Scalar(s), Elem(x)) | (Elem(x), Scalar(s)) => Elem(x.scale(&self.embed(&s)?)),
        })
    }
}

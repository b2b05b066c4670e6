//! Exact arithmetic substrate: the surd field ℚ(s), polynomials in h,
//! fraction-free linear solves and Sturm root isolation.

mod hpoly;
mod matrix;
mod ratpoly;
mod roots;
mod scalar;
mod surd;

pub use hpoly::HPoly;
pub use matrix::ExactMatrix;
pub use ratpoly::RatPoly;
pub use roots::{count_positive_roots, simplest_rational_between, IsolatedRoot, RootReport};
pub use scalar::{rational_to_f64, CoefField, FloatField, Scalar};
pub use surd::{parse_rational, SurdField, SurdScalar};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MathError {
    #[error("lambda must lie strictly between 0 and 1, got {0}")]
    InvalidLambda(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands belong to different lambda contexts")]
    FieldMismatch,
    #[error("cannot add values of pi grade {0} and {1}")]
    GradeMismatch(u8, u8),
    #[error("pi grade {0} is outside {{0, 1}}")]
    PiGradeOverflow(i32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("coefficients do not reduce to a common rational polynomial")]
    MixedGrade,
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

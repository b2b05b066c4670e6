//! Symbolic pipeline: reduced integrals, assembly of I(h), zero placement.

pub mod assemble;
pub mod closed_forms;
pub mod direct;
pub mod linexpr;
pub mod normalize;
pub mod perturbation;
pub mod random;
pub mod relations;
pub mod synth;
pub mod table;

pub use assemble::{
    abelian_integral, assemble_abelian, hpoly_from_json, hpoly_to_json, level_for_degree, AbelianReport,
};
pub use closed_forms::{abelian_coefficients_n4, alpha_degree2, alpha_degree3, jacobian_degree3, pi_lambda_power};
pub use direct::{direct_integral, moment_integral};
pub use linexpr::{LinExpr, Symbol};
pub use normalize::{normalize_cmv, CmvParameters, Normalization};
pub use perturbation::{CoefTable, Perturbation};
pub use random::{random_perturbation, random_rational, random_zero_set};
pub use relations::{dy_to_dx, Relation, Term};
pub use synth::{synthesize, target_polynomial, Synthesis};
pub use table::{ReductionTable, DEFAULT_LEVEL};

use thiserror::Error;

use crate::exactmath::MathError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Math(#[from] MathError),
    #[error("no rule available for I({0},{1})")]
    MissingDependency(usize, usize),
    #[error("I({i},{j}) came out with degree {found:?}, expected {expected} and zero constant term")]
    DegreeViolation { i: usize, j: usize, expected: usize, found: Option<usize> },
    #[error("I({i},{j}) needs generators beyond level {level}")]
    LevelExceeded { i: usize, j: usize, level: usize },
    #[error("cannot isolate the new generator: {0}")]
    Unsolvable(String),
    #[error("moment order {0} is odd; the integral vanishes")]
    OddMoment(usize),
    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),
    #[error("pivot matrix is singular even with fallback columns")]
    SingularPivot,
    #[error("normalization needs nonzero {0}")]
    ZeroParameter(&'static str),
    #[error("invalid target zeros: {0}")]
    InvalidTargets(String),
}

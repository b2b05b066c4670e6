//! Floating-point line integrals over level ovals, independent of the
//! symbolic engine.

pub mod gauss;
pub mod oval;

pub use gauss::{integrate, legendre_rule, GaussConfig, Quadrature};
pub use oval::{
    hamiltonian, oval_points, quad_abelian, quad_dy, quad_energy_derivative, quad_grid, quad_iij, Oval, OvalIntegral,
    QuadRow, MIN_ENERGY,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("tolerance not reached at maximum depth (value {value}, error estimate {est_error})")]
    NonConvergence { value: f64, est_error: f64 },
    #[error("integrand produced a non-finite value")]
    NonFinite,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("lambda must lie in (0, 1), got {0}")]
    InvalidLambda(f64),
    #[error("energy must be positive and finite, got {0}")]
    NonPositiveEnergy(f64),
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
}

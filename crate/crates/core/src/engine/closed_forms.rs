//! Hand-derived coefficient formulas for low degrees, kept as an independent
//! cross-check of the reduction pipeline.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exactmath::{ExactMatrix, MathError, Scalar, SurdField, SurdScalar};

use super::perturbation::{CoefTable, Perturbation};

/// `π·λ^{a/2}·(1−λ)^{−b/2}` for odd `a`, `b`, written over π·s.
pub fn pi_lambda_power(field: &std::sync::Arc<SurdField>, a: u32, b: u32) -> SurdScalar {
    debug_assert!(a % 2 == 1 && b % 2 == 1);
    let l = field.lambda().clone();
    let om = BigRational::one() - &l;
    let c = pow(&l, (a - 1) / 2) / pow(&om, b.div_ceil(2));
    SurdScalar::pi_s(field).scale(&c)
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

fn xi_of(xi: &CoefTable, i: usize, j: usize) -> BigRational {
    xi.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
}

fn combo(field: &std::sync::Arc<SurdField>, parts: &[(SurdScalar, BigRational)]) -> SurdScalar {
    parts.iter().fold(SurdScalar::zero(field), |acc, (u, c)| {
        acc.try_add(&u.scale(c)).expect("all terms carry one factor of pi")
    })
}

fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// α₁, α₂ for a degree-2 perturbation.
pub fn alpha_degree2(field: &std::sync::Arc<SurdField>, xi: &CoefTable) -> [SurdScalar; 2] {
    let u = |a, b| pi_lambda_power(field, a, b);
    [combo(field, &[(u(1, 1), q(-2, 1) * xi_of(xi, 0, 1))]), combo(field, &[(u(3, 3), q(2, 1) * xi_of(xi, 0, 2))])]
}

/// α₁..α₃ for a degree-3 perturbation.
pub fn alpha_degree3(field: &std::sync::Arc<SurdField>, xi: &CoefTable) -> [SurdScalar; 3] {
    let u = |a, b| pi_lambda_power(field, a, b);
    [
        combo(field, &[(u(1, 1), q(-2, 1) * xi_of(xi, 0, 1))]),
        combo(
            field,
            &[
                (u(3, 3), q(2, 1) * xi_of(xi, 0, 2)),
                (u(3, 3), q(-3, 1) * xi_of(xi, 0, 3)),
                (u(3, 3), q(2, 1) * xi_of(xi, 1, 2)),
                (u(1, 3), q(-1, 1) * xi_of(xi, 2, 1)),
            ],
        ),
        combo(field, &[(u(5, 5), q(-3, 1) * xi_of(xi, 0, 3))]),
    ]
}

/// α₁..α₄ for a degree-4 perturbation, from the ξ-weights of `pert`.
pub fn abelian_coefficients_n4(field: &std::sync::Arc<SurdField>, pert: &Perturbation) -> [SurdScalar; 4] {
    let xi = pert.xi();
    let u = |a, b| pi_lambda_power(field, a, b);
    let l = field.lambda().clone();
    let quad = q(2, 1) * &l * &l - &l - BigRational::one();
    let [a1, _, _] = alpha_degree3(field, &xi);
    let a2 = combo(
        field,
        &[
            (u(3, 3), q(2, 1) * xi_of(&xi, 0, 2)),
            (u(3, 3), q(-3, 1) * xi_of(&xi, 0, 3)),
            (u(3, 3), q(2, 1) * xi_of(&xi, 1, 2)),
            (u(1, 3), q(-1, 1) * xi_of(&xi, 2, 1)),
        ],
    );
    let a3 = combo(
        field,
        &[
            (u(5, 5), q(-3, 1) * xi_of(&xi, 0, 3)),
            (u(5, 7), q(-4, 1) * quad * xi_of(&xi, 0, 4)),
            (u(5, 5), q(-6, 1) * xi_of(&xi, 1, 3)),
            (u(3, 5), q(2, 1) * xi_of(&xi, 2, 2)),
        ],
    );
    let a4 = combo(field, &[(u(7, 7), q(5, 1) * xi_of(&xi, 0, 4))]);
    [a1, a2, a3, a4]
}

/// Jacobian of (α₁, α₂, α₃) with respect to (ξ_{0,1}, ξ_{0,2}, ξ_{0,3}).
pub fn jacobian_degree3(field: &std::sync::Arc<SurdField>) -> Result<ExactMatrix<SurdScalar>, MathError> {
    let columns = (1..=3)
        .map(|k| {
            let xi = CoefTable::from([((0, k), BigRational::one())]);
            alpha_degree3(field, &xi).to_vec()
        })
        .collect();
    ExactMatrix::from_columns(columns)
}

//! Perturbations whose Abelian integral vanishes at prescribed energies.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exactmath::{ExactMatrix, HPoly, MathError, RatPoly, Scalar, SurdField, SurdScalar};

use super::assemble::{assemble_abelian, level_for_degree};
use super::perturbation::Perturbation;
use super::table::ReductionTable;
use super::EngineError;

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub perturbation: Perturbation,
    /// `(i, j)` of each `b_{i,j}` that was solved for, in column order.
    pub pivots: Vec<(usize, usize)>,
    pub fallback_used: bool,
    pub integral: HPoly<SurdScalar>,
}

#[derive(Serialize)]
struct SynthesisJson<'a> {
    perturbation: serde_json::Value,
    pivots: &'a [(usize, usize)],
    fallback_used: bool,
    integral: serde_json::Value,
}

impl Synthesis {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SynthesisJson {
            perturbation: self.perturbation.to_json(),
            pivots: &self.pivots,
            fallback_used: self.fallback_used,
            integral: super::assemble::hpoly_to_json(&self.integral),
        })
        .expect("plain data serializes")
    }
}

fn check_targets(zeros: &[BigRational]) -> Result<(), EngineError> {
    if zeros.is_empty() {
        return Err(EngineError::InvalidTargets("need at least one zero".into()));
    }
    if let Some(z) = zeros.iter().find(|z| !z.is_positive()) {
        return Err(EngineError::InvalidTargets(format!("{z} is not positive")));
    }
    let distinct: BTreeSet<_> = zeros.iter().collect();
    if distinct.len() != zeros.len() {
        return Err(EngineError::InvalidTargets("zeros must be distinct".into()));
    }
    Ok(())
}

/// Coefficients of `reduce(i,j)/h`, padded to length `n`.
fn column(table: &ReductionTable<SurdScalar>, i: usize, j: usize, n: usize) -> Result<Vec<SurdScalar>, EngineError> {
    let p = table.reduce(i, j)?;
    let zero = SurdScalar::zero(table.field());
    Ok((1..=n).map(|k| p.coeff(k).cloned().unwrap_or_else(|| zero.clone())).collect())
}

fn candidate_sets(n: usize) -> Vec<Vec<(usize, usize)>> {
    let primary: Vec<_> = (1..=n).map(|k| (0, k)).collect();
    let mut sets = vec![primary.clone()];
    for k in (1..=n).rev() {
        for alt in 2..n {
            let mut s = primary.clone();
            s[k - 1] = (1, alt);
            sets.push(s);
        }
    }
    sets
}

/// Finds `b` with `I(h) = π·s·h·∏(h − z)` for the given zeros, using
/// `b_{0,1..n}` as unknowns with `n = zeros.len() + 1`.
pub fn synthesize(zeros: &[BigRational], field: &Arc<SurdField>) -> Result<Synthesis, EngineError> {
    check_targets(zeros)?;
    let n = zeros.len() + 1;
    let table = ReductionTable::<SurdScalar>::build(field, level_for_degree(n))?;
    let target = RatPoly::from_roots(zeros);
    let unit = SurdScalar::pi_s(field);
    let rhs: Vec<SurdScalar> =
        (0..n).map(|k| unit.scale(target.coeffs().get(k).unwrap_or(&BigRational::zero()))).collect();

    for (attempt, pivots) in candidate_sets(n).into_iter().enumerate() {
        let cols = pivots.iter().map(|&(i, j)| column(&table, i, j, n)).collect::<Result<Vec<_>, _>>()?;
        let m = ExactMatrix::from_columns(cols)?;
        let x = match m.solve_exact(&rhs) {
            Ok(x) => x,
            Err(MathError::SingularMatrix) => continue,
            Err(e) => return Err(e.into()),
        };
        let coefs = SurdScalar::rationalize(&x)?;
        let mut pert = Perturbation::new(n);
        pert.lambda = Some(field.lambda().to_string());
        for (&(i, j), c) in pivots.iter().zip(coefs) {
            pert = pert.with_b(i, j, c);
        }
        let integral = assemble_abelian(&pert, &table)?;
        return Ok(Synthesis { perturbation: pert, pivots, fallback_used: attempt > 0, integral });
    }
    Err(EngineError::SingularPivot)
}

/// `h·∏(h − z)` as an exact rational polynomial.
pub fn target_polynomial(zeros: &[BigRational]) -> RatPoly {
    RatPoly::from_roots(zeros).mul(&RatPoly::new(vec![BigRational::zero(), BigRational::one()]))
}

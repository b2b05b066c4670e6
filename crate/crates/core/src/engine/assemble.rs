//! I(h) = ∮ g dx − f dy for a concrete perturbation.

use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::exactmath::{count_positive_roots, CoefField, HPoly, RootReport, Scalar, SurdField, SurdScalar};

use super::perturbation::Perturbation;
use super::relations::dy_to_dx;
use super::table::ReductionTable;
use super::EngineError;

/// Level a table needs before every `I(i,j)` with `i + j ≤ n` reduces.
pub fn level_for_degree(n: usize) -> usize {
    n.max(3) + 1
}

/// `Σ b_{ij} I(i,j) + Σ a_{ij} · i/(j+1) · I(i−1,j+1)`.
pub fn assemble_abelian<K: Scalar>(pert: &Perturbation, table: &ReductionTable<K>) -> Result<HPoly<K>, EngineError> {
    pert.validate()?;
    let mut total = HPoly::zero();
    for (&(i, j), c) in &pert.b {
        let p = table.reduce(i, j)?;
        total = total.try_add(&p.scale(&K::Coef::from_rational(c)))?;
    }
    for (&(i, j), c) in &pert.a {
        if let Some((w, ti, tj)) = dy_to_dx::<K::Coef>(i, j) {
            let p = table.reduce(ti, tj)?;
            // −∮ f dy, and ∮ xⁱyʲ dy = w·I(ti,tj)
            let k = (<K::Coef as num_traits::Zero>::zero() - w) * K::Coef::from_rational(c);
            total = total.try_add(&p.scale(&k))?;
        }
    }
    Ok(total)
}

/// Builds a table deep enough for `pert` and assembles I(h).
pub fn abelian_integral<K: Scalar>(pert: &Perturbation, field: &K::Field) -> Result<HPoly<K>, EngineError> {
    let table = ReductionTable::build(field, level_for_degree(pert.n))?;
    assemble_abelian(pert, &table)
}

/// JSON form of an exact h-polynomial: ascending coefficients as strings.
pub fn hpoly_to_json(p: &HPoly<SurdScalar>) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

pub fn hpoly_from_json(v: &Value, field: &Arc<SurdField>) -> Result<HPoly<SurdScalar>, EngineError> {
    let arr =
        v.as_array().ok_or_else(|| EngineError::InvalidPerturbation("expected an array of coefficients".into()))?;
    let coeffs = arr
        .iter()
        .map(|c| {
            let s = c
                .as_str()
                .ok_or_else(|| EngineError::InvalidPerturbation(format!("coefficient {c} is not a string")))?;
            Ok(SurdScalar::parse(s, field)?)
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    Ok(HPoly::from_coeffs(coeffs))
}

#[derive(Clone, Debug, Serialize)]
pub struct AbelianReport {
    pub lambda: String,
    pub n: usize,
    /// α₁..α_n, coefficients of h¹..hⁿ.
    pub alpha: Vec<String>,
    pub alpha_f64: Vec<f64>,
    pub zeros: RootReport,
}

impl AbelianReport {
    pub fn new(field: &Arc<SurdField>, n: usize, p: &HPoly<SurdScalar>) -> Result<Self, EngineError> {
        let zero = SurdScalar::zero(field);
        let alpha: Vec<SurdScalar> =
            (1..=n.max(p.degree().unwrap_or(0))).map(|k| p.coeff(k).cloned().unwrap_or_else(|| zero.clone())).collect();
        let zeros = if p.is_zero() {
            RootReport { count: 0, roots: Vec::new(), exact_coefficients: true }
        } else {
            count_positive_roots(p)?
        };
        Ok(Self {
            lambda: field.lambda().to_string(),
            n,
            alpha_f64: alpha.iter().map(Scalar::to_f64).collect(),
            alpha: alpha.iter().map(ToString::to_string).collect(),
            zeros,
        })
    }
}

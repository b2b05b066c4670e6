//! Coordinate change from `H₁ = k₁²x² + (k₂y + k₃x + k₄x²)²` to the
//! one-parameter normal form.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::EngineError;

#[derive(Clone, Debug, PartialEq)]
pub struct CmvParameters {
    pub k1: BigRational,
    pub k2: BigRational,
    pub k3: BigRational,
    pub k4: BigRational,
}

/// `λ` plus the factors in `t₁ = τ·t`, `x₁ = ξ·x`, `y₁ = η·y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Normalization {
    #[serde(serialize_with = "as_string")]
    pub lambda: BigRational,
    #[serde(serialize_with = "as_string")]
    pub time_scale: BigRational,
    #[serde(serialize_with = "as_string")]
    pub x_scale: BigRational,
    #[serde(serialize_with = "as_string")]
    pub y_scale: BigRational,
}

fn as_string<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn normalize_cmv(k: &CmvParameters) -> Result<Normalization, EngineError> {
    for (name, v) in [("k1", &k.k1), ("k2", &k.k2), ("k3", &k.k3), ("k4", &k.k4)] {
        if v.is_zero() {
            return Err(EngineError::ZeroParameter(name));
        }
    }
    let norm = &k.k1 * &k.k1 + &k.k3 * &k.k3;
    Ok(Normalization {
        lambda: &k.k3 * &k.k3 / &norm,
        time_scale: BigRational::from_integer(2.into()) * &k.k2 * &k.k3,
        x_scale: &k.k4 / &k.k3,
        y_scale: &k.k2 * &k.k4 / norm,
    })
}

//! Polynomial perturbations `f = Σ a_{ij} xⁱ yʲ` (in ẋ) and `g = Σ b_{ij} xⁱ yʲ` (in ẏ).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exactmath::{parse_rational, rational_to_f64};

use super::EngineError;

pub type CoefTable = BTreeMap<(usize, usize), BigRational>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Perturbation {
    pub lambda: Option<String>,
    pub n: usize,
    pub a: CoefTable,
    pub b: CoefTable,
}

#[derive(Serialize, Deserialize)]
struct RawPerturbation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    n: usize,
    #[serde(default)]
    a: Vec<(usize, usize, Value)>,
    #[serde(default)]
    b: Vec<(usize, usize, Value)>,
}

fn value_to_rational(v: &Value) -> Result<BigRational, EngineError> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(i.into()))
            } else {
                Ok(parse_rational(&n.to_string())?)
            }
        }
        other => Err(EngineError::InvalidPerturbation(format!("coefficient {other} is not a number"))),
    }
}

impl Perturbation {
    pub fn new(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    /// Adds `c·xⁱyʲ` to `f` (the ẋ equation).
    pub fn with_a(mut self, i: usize, j: usize, c: BigRational) -> Self {
        self.set(true, i, j, c);
        self
    }

    /// Adds `c·xⁱyʲ` to `g` (the ẏ equation).
    pub fn with_b(mut self, i: usize, j: usize, c: BigRational) -> Self {
        self.set(false, i, j, c);
        self
    }

    fn set(&mut self, in_a: bool, i: usize, j: usize, c: BigRational) {
        let t = if in_a { &mut self.a } else { &mut self.b };
        if c.is_zero() {
            t.remove(&(i, j));
        } else {
            t.insert((i, j), c);
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        for &(i, j) in self.a.keys().chain(self.b.keys()) {
            if i + j > self.n {
                return Err(EngineError::InvalidPerturbation(format!(
                    "monomial x^{i} y^{j} exceeds degree {}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_empty() && self.b.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self { n: self.n.max(other.n), lambda: self.lambda.clone(), ..Self::default() };
        for (in_a, src) in [(true, &self.a), (false, &self.b), (true, &other.a), (false, &other.b)] {
            for (&(i, j), c) in src {
                let t = if in_a { &out.a } else { &out.b };
                let prev = t.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero);
                out.set(in_a, i, j, prev + c);
            }
        }
        out
    }

    /// Coefficients of each `I(i,j)` once `∮ f dy` is rewritten as a `dx` integral:
    /// `ξ_{ij} = b_{ij} + (i+1)/j · a_{i+1,j−1}`.
    pub fn xi(&self) -> CoefTable {
        self.xi_with(|i, j| BigRational::new((i as i64 + 1).into(), (j as i64).into()))
    }

    /// Same map with an arbitrary weight on the `a` contribution.
    pub fn xi_with<F: Fn(usize, usize) -> BigRational>(&self, weight: F) -> CoefTable {
        let mut out = self.b.clone();
        for (&(i, j), c) in &self.a {
            if i == 0 {
                continue;
            }
            let (ti, tj) = (i - 1, j + 1);
            let e = out.entry((ti, tj)).or_insert_with(BigRational::zero);
            *e += weight(ti, tj) * c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Evaluates `(f, g)` at a point.
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let ev = |t: &CoefTable| {
            t.iter().map(|(&(i, j), c)| rational_to_f64(c) * x.powi(i as i32) * y.powi(j as i32)).sum::<f64>()
        };
        (ev(&self.a), ev(&self.b))
    }

    pub fn to_json(&self) -> Value {
        let enc = |t: &CoefTable| t.iter().map(|(&(i, j), c)| (i, j, Value::String(c.to_string()))).collect::<Vec<_>>();
        serde_json::to_value(RawPerturbation {
            lambda: self.lambda.clone(),
            n: self.n,
            a: enc(&self.a),
            b: enc(&self.b),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(v: &Value) -> Result<Self, EngineError> {
        let raw: RawPerturbation =
            serde_json::from_value(v.clone()).map_err(|e| EngineError::InvalidPerturbation(e.to_string()))?;
        let mut p = Self::new(raw.n);
        p.lambda = raw.lambda;
        for (in_a, list) in [(true, &raw.a), (false, &raw.b)] {
            for (i, j, c) in list {
                p.set(in_a, *i, *j, value_to_rational(c)?);
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<Self, EngineError> {
        let v: Value = serde_json::from_str(text).map_err(|e| EngineError::InvalidPerturbation(e.to_string()))?;
        Self::from_json(&v)
    }

    /// The worked quartic example: only `g` is perturbed, at λ = 1/2.
    pub fn worked_quartic() -> Self {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let mut p = Self::new(4)
            .with_b(0, 1, q(2, 1))
            .with_b(1, 2, q(15, 2))
            .with_b(2, 1, q(-20, 1))
            .with_b(2, 2, q(-245, 8))
            .with_b(1, 3, q(40, 1))
            .with_b(0, 4, q(25, 1));
        p.lambda = Some("1/2".into());
        p
    }

    /// Largest |coefficient|, as a double.
    pub fn max_abs(&self) -> f64 {
        self.a.values().chain(self.b.values()).map(|c| rational_to_f64(c).abs()).fold(0.0, f64::max)
    }

    pub fn degree_used(&self) -> usize {
        self.a.keys().chain(self.b.keys()).map(|(i, j)| i + j).max().unwrap_or(0)
    }
}

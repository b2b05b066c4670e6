//! Univariate polynomials in the energy h.

use super::scalar::{CoefField, Scalar};
use super::MathError;

/// Polynomial in h, ascending powers, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct HPoly<K: Scalar> {
    coeffs: Vec<K>,
}

impl<K: Scalar> Default for HPoly<K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Scalar> HPoly<K> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<K>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: K) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c·h^power`.
    pub fn monomial(c: K, power: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![c.zero_like(); power];
        coeffs.push(c);
        Self { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<K> {
        self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Option<&K> {
        self.coeffs.get(power)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    /// Coefficient of h⁰, treating the zero polynomial as having zero constant term.
    pub fn constant_is_zero(&self) -> bool {
        self.coeffs.first().is_none_or(|c| c.is_zero())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, MathError> {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = o.try_add(s)?;
        }
        Ok(Self::from_coeffs(out))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, MathError> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(Scalar::negate).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MathError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = a.try_mul(b)?;
                out[i + j] = out[i + j].try_add(&t)?;
            }
        }
        Ok(Self::from_coeffs(out))
    }

    /// Multiplies every coefficient by a scalar of any grade.
    pub fn try_scale(&self, c: &K) -> Result<Self, MathError> {
        let coeffs = self.coeffs.iter().map(|a| a.try_mul(c)).collect::<Result<_, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    /// Multiplies by a grade-free coefficient; never fails.
    pub fn scale(&self, c: &K::Coef) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    pub fn try_div_scalar(&self, c: &K) -> Result<Self, MathError> {
        let coeffs = self.coeffs.iter().map(|a| a.try_div(c)).collect::<Result<_, _>>()?;
        Ok(Self::from_coeffs(coeffs))
    }

    /// Multiplies by h^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&K::Coef::from_int(k as i64))).collect(),
        )
    }

    /// ∫₀ʰ p, constant of integration zero.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![self.coeffs[0].zero_like()];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| c.scale(&K::Coef::ratio(1, k as i64 + 1))));
        Self::from_coeffs(coeffs)
    }

    /// Exact evaluation at a grade-free point.
    pub fn eval_coef(&self, h: &K::Coef) -> Option<K> {
        let mut acc: Option<K> = None;
        for c in self.coeffs.iter().rev() {
            acc = Some(match acc {
                None => c.clone(),
                Some(a) => a.scale(h).try_add(c).ok()?,
            });
        }
        acc
    }

    pub fn eval_f64(&self, h: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * h + c.to_f64())
    }

    /// Largest |coefficient| as a double, used as a magnitude scale.
    pub fn max_abs_f64(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map_to_f64(&self) -> HPoly<f64> {
        HPoly::from_coeffs(self.coeffs.iter().map(Scalar::to_f64).collect())
    }
}

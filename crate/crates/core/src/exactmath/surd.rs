//! Exact scalars `(a + b·s)·π^k` with `s = √(λ(1−λ))` and rational λ.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::{rational_to_f64, CoefField, Scalar};
use super::MathError;

/// The quadratic extension ℚ(s), s² = λ(1−λ), fixed by a rational λ ∈ (0,1).
#[derive(Debug, PartialEq, Eq)]
pub struct SurdField {
    lambda: BigRational,
    disc: BigRational,
    /// Rational value of s when λ(1−λ) is a perfect square (e.g. λ = 1/2).
    root: Option<BigRational>,
}

impl SurdField {
    pub fn new(lambda: BigRational) -> Result<Arc<Self>, MathError> {
        if !(lambda.is_positive() && lambda < BigRational::one()) {
            return Err(MathError::InvalidLambda(lambda.to_string()));
        }
        let disc = &lambda * (BigRational::one() - &lambda);
        let root = rational_sqrt(&disc);
        Ok(Arc::new(Self { lambda, disc, root }))
    }

    pub fn parse(lambda: &str) -> Result<Arc<Self>, MathError> {
        let q = parse_rational(lambda)?;
        Self::new(q)
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    /// λ(1−λ).
    pub fn disc(&self) -> &BigRational {
        &self.disc
    }

    pub fn rational_root(&self) -> Option<&BigRational> {
        self.root.as_ref()
    }

    pub fn s_f64(&self) -> f64 {
        rational_to_f64(&self.disc).sqrt()
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Parses `p/q`, an integer, or a finite decimal literal such as `0.25`.
pub fn parse_rational(text: &str) -> Result<BigRational, MathError> {
    let t = text.trim();
    if let Ok(q) = BigRational::from_str(t) {
        return Ok(q);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) =
        body.split_once('.').ok_or_else(|| MathError::Parse(format!("not a rational: {text:?}")))?;
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(MathError::Parse(format!("not a rational: {text:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer =
        BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|e| MathError::Parse(e.to_string()))?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = BigRational::new(numer, denom);
    Ok(if neg { -q } else { q })
}

#[derive(Clone)]
pub struct SurdScalar {
    rat: BigRational,
    surd: BigRational,
    pi: u8,
    field: Arc<SurdField>,
}

impl SurdScalar {
    pub fn new(field: &Arc<SurdField>, rat: BigRational, surd: BigRational, pi: u8) -> Self {
        Self { rat, surd, pi, field: Arc::clone(field) }
    }

    pub fn rational(field: &Arc<SurdField>, q: BigRational) -> Self {
        Self::new(field, q, BigRational::zero(), 0)
    }

    pub fn int(field: &Arc<SurdField>, n: i64) -> Self {
        Self::rational(field, BigRational::from_int(n))
    }

    /// The element s itself.
    pub fn s(field: &Arc<SurdField>) -> Self {
        Self::new(field, BigRational::zero(), BigRational::one(), 0)
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd
    }

    pub fn pi_power(&self) -> u8 {
        self.pi
    }

    pub fn field(&self) -> &Arc<SurdField> {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<(), MathError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.lambda == other.field.lambda {
            Ok(())
        } else {
            Err(MathError::FieldMismatch)
        }
    }

    /// Rational value when s itself is rational.
    fn collapsed(&self) -> Option<BigRational> {
        self.field.root.as_ref().map(|r| &self.rat + &self.surd * r)
    }

    pub fn with_pi(&self, pi: u8) -> Self {
        Self { pi, ..self.clone() }
    }

    /// Serialized as `p/q + p'/q'*s [pi^k]`.
    pub fn parse(text: &str, field: &Arc<SurdField>) -> Result<Self, MathError> {
        let bad = || MathError::Parse(format!("malformed surd scalar: {text:?}"));
        let (body, grade) = text.trim().rsplit_once("[pi^").ok_or_else(bad)?;
        let grade: u8 = grade.trim().strip_suffix(']').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        if grade > 1 {
            return Err(MathError::PiGradeOverflow(grade as i32));
        }
        let body = body.trim().strip_suffix("*s").ok_or_else(bad)?;
        let (rat, surd) = body.split_once('+').ok_or_else(bad)?;
        let rat = BigRational::from_str(rat.trim()).map_err(|_| bad())?;
        let surd = BigRational::from_str(surd.trim()).map_err(|_| bad())?;
        Ok(Self::new(field, rat, surd, grade))
    }
}

impl fmt::Display for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*s [pi^{}]", self.rat, self.surd, self.pi)
    }
}

impl fmt::Debug for SurdScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl PartialEq for SurdScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.same_field(other).is_err() {
            return false;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return true,
            (false, false) => {}
            _ => return false,
        }
        if self.pi != other.pi {
            return false;
        }
        match (self.collapsed(), other.collapsed()) {
            (Some(a), Some(b)) => a == b,
            _ => self.rat == other.rat && self.surd == other.surd,
        }
    }
}

impl Scalar for SurdScalar {
    type Coef = BigRational;
    type Field = Arc<SurdField>;

    fn zero(field: &Arc<SurdField>) -> Self {
        Self::rational(field, BigRational::zero())
    }

    fn from_coef(field: &Arc<SurdField>, c: &BigRational) -> Self {
        Self::rational(field, c.clone())
    }

    fn pi_s(field: &Arc<SurdField>) -> Self {
        Self::new(field, BigRational::zero(), BigRational::one(), 1)
    }

    fn lambda(field: &Arc<SurdField>) -> BigRational {
        field.lambda.clone()
    }

    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }

    fn is_zero(&self) -> bool {
        match self.collapsed() {
            Some(v) => v.is_zero(),
            None => self.rat.is_zero() && self.surd.is_zero(),
        }
    }

    fn try_add(&self, other: &Self) -> Result<Self, MathError> {
        self.same_field(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.pi != other.pi {
            return Err(MathError::GradeMismatch(self.pi, other.pi));
        }
        Ok(Self::new(&self.field, &self.rat + &other.rat, &self.surd + &other.surd, self.pi))
    }

    fn try_mul(&self, other: &Self) -> Result<Self, MathError> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.zero_like());
        }
        let pi = self.pi + other.pi;
        if pi > 1 {
            return Err(MathError::PiGradeOverflow(pi as i32));
        }
        let d = &self.field.disc;
        let rat = &self.rat * &other.rat + &self.surd * &other.surd * d;
        let surd = &self.rat * &other.surd + &self.surd * &other.rat;
        Ok(Self::new(&self.field, rat, surd, pi))
    }

    fn try_div(&self, other: &Self) -> Result<Self, MathError> {
        self.same_field(other)?;
        if other.is_zero() {
            return Err(MathError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.zero_like());
        }
        let pi = self.pi as i32 - other.pi as i32;
        if !(0..=1).contains(&pi) {
            return Err(MathError::PiGradeOverflow(pi));
        }
        if let Some(v) = other.collapsed() {
            return Ok(Self::new(&self.field, &self.rat / &v, &self.surd / &v, pi as u8));
        }
        // (a+bs)/(c+ds) = (a+bs)(c−ds)/(c²−d²·disc)
        let d = &self.field.disc;
        let norm = &other.rat * &other.rat - &other.surd * &other.surd * d;
        let rat = (&self.rat * &other.rat - &self.surd * &other.surd * d) / &norm;
        let surd = (&self.surd * &other.rat - &self.rat * &other.surd) / &norm;
        Ok(Self::new(&self.field, rat, surd, pi as u8))
    }

    fn negate(&self) -> Self {
        Self::new(&self.field, -&self.rat, -&self.surd, self.pi)
    }

    fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.field, &self.rat * c, &self.surd * c, self.pi)
    }

    fn to_f64(&self) -> f64 {
        let v = rational_to_f64(&self.rat) + rational_to_f64(&self.surd) * self.field.s_f64();
        if self.pi == 1 {
            v * std::f64::consts::PI
        } else {
            v
        }
    }

    fn degrade(&self) -> (Self, u8) {
        (self.with_pi(0), if self.is_zero() { 0 } else { self.pi })
    }

    fn regrade(&self, grade: u8) -> Result<Self, MathError> {
        let pi = if self.is_zero() { 0 } else { self.pi + grade };
        if pi > 1 {
            return Err(MathError::PiGradeOverflow(pi as i32));
        }
        Ok(self.with_pi(pi))
    }

    fn is_pi_s_multiple(&self) -> bool {
        self.is_zero() || (self.pi == 1 && (self.rat.is_zero() || self.field.root.is_some()))
    }

    fn rationalize(values: &[Self]) -> Result<Vec<BigRational>, MathError> {
        let nonzero: Vec<&Self> = values.iter().filter(|v| !v.is_zero()).collect();
        if nonzero.windows(2).any(|w| w[0].pi != w[1].pi) {
            return Err(MathError::MixedGrade);
        }
        if nonzero.iter().all(|v| v.collapsed().is_some()) {
            return Ok(values.iter().map(|v| v.collapsed().unwrap_or_else(BigRational::zero)).collect());
        }
        if nonzero.iter().all(|v| v.surd.is_zero()) {
            Ok(values.iter().map(|v| v.rat.clone()).collect())
        } else if nonzero.iter().all(|v| v.rat.is_zero()) {
            Ok(values.iter().map(|v| v.surd.clone()).collect())
        } else {
            Err(MathError::MixedGrade)
        }
    }
}

impl std::ops::Neg for SurdScalar {
    type Output = SurdScalar;

    fn neg(self) -> SurdScalar {
        self.negate()
    }
}

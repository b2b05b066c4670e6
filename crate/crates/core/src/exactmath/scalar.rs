use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

use super::MathError;

/// Grade-free coefficients: rationals in exact mode, doubles on the float path.
///
/// Every recurrence coefficient is a rational function of λ and of the
/// integer indices, so it lives here rather than in the graded scalar.
pub trait CoefField: Clone + Debug + PartialEq + Num + Send + Sync + 'static {
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl CoefField for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl CoefField for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Converts without overflowing when numerator and denominator are both huge.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = q.numer().bits().max(q.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (q.numer() >> shift as usize, q.denom() >> shift as usize)
    } else {
        (q.numer().clone(), q.denom().clone())
    };
    let n = n.to_f64().unwrap_or(0.0);
    let d = d.to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

/// Coefficient scalar of every h-polynomial in the pipeline.
///
/// Values may carry a grade (a power of π); grade-0 values act on graded
/// ones through [`Scalar::scale`]. The float implementation folds π into the
/// number and ignores grades.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Coef: CoefField;
    type Field: Clone + Debug + Send + Sync;

    fn zero(field: &Self::Field) -> Self;
    fn from_coef(field: &Self::Field, c: &Self::Coef) -> Self;
    /// π·√(λ(1−λ)), the unit every Abelian integral is a multiple of.
    fn pi_s(field: &Self::Field) -> Self;
    fn lambda(field: &Self::Field) -> Self::Coef;

    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Zero up to the arithmetic's resolution, relative to `scale`.
    fn negligible(&self, scale: f64) -> bool {
        let _ = scale;
        self.is_zero()
    }

    fn try_add(&self, other: &Self) -> Result<Self, MathError>;
    fn try_mul(&self, other: &Self) -> Result<Self, MathError>;
    fn try_div(&self, other: &Self) -> Result<Self, MathError>;
    fn negate(&self) -> Self;
    fn scale(&self, c: &Self::Coef) -> Self;
    fn to_f64(&self) -> f64;

    /// Splits off the π grade: `(value / π^g, g)`.
    fn degrade(&self) -> (Self, u8);
    fn regrade(&self, grade: u8) -> Result<Self, MathError>;

    fn try_sub(&self, other: &Self) -> Result<Self, MathError> {
        self.try_add(&other.negate())
    }

    /// Writes every value as a rational multiple of one positive common unit
    /// (1, π, s or π·s), which leaves sign and roots untouched.
    fn rationalize(values: &[Self]) -> Result<Vec<BigRational>, MathError>;

    /// True when the value is a rational multiple of π·s (or zero).
    fn is_pi_s_multiple(&self) -> bool;
}

/// Field context for the double-precision path.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatField {
    pub lambda: f64,
}

impl FloatField {
    pub fn new(lambda: f64) -> Result<Self, MathError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(MathError::InvalidLambda(lambda.to_string()));
        }
        Ok(Self { lambda })
    }
}

impl Scalar for f64 {
    type Coef = f64;
    type Field = FloatField;

    fn zero(_: &FloatField) -> Self {
        0.0
    }

    fn from_coef(_: &FloatField, c: &f64) -> Self {
        *c
    }

    fn pi_s(field: &FloatField) -> Self {
        std::f64::consts::PI * (field.lambda * (1.0 - field.lambda)).sqrt()
    }

    fn lambda(field: &FloatField) -> f64 {
        field.lambda
    }

    fn zero_like(&self) -> Self {
        0.0
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE)
    }

    fn try_add(&self, other: &Self) -> Result<Self, MathError> {
        Ok(self + other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self, MathError> {
        Ok(self * other)
    }

    fn try_div(&self, other: &Self) -> Result<Self, MathError> {
        if *other == 0.0 {
            return Err(MathError::DivisionByZero);
        }
        Ok(self / other)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn scale(&self, c: &f64) -> Self {
        self * c
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn degrade(&self) -> (Self, u8) {
        (*self, 0)
    }

    fn regrade(&self, grade: u8) -> Result<Self, MathError> {
        match grade {
            0 => Ok(*self),
            g => Err(MathError::PiGradeOverflow(g as i32)),
        }
    }

    fn rationalize(_: &[Self]) -> Result<Vec<BigRational>, MathError> {
        Err(MathError::MixedGrade)
    }

    fn is_pi_s_multiple(&self) -> bool {
        true
    }
}

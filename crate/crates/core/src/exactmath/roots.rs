//! Counting and isolating the positive roots of an h-polynomial.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::hpoly::HPoly;
use super::ratpoly::{RatPoly, SturmChain};
use super::scalar::Scalar;
use super::MathError;

const ISOLATION_WIDTH: (i64, i64) = (1, 1_000_000);

/// A distinct positive root inside `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatedRoot {
    #[serde(serialize_with = "ser_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: BigRational,
    pub multiplicity: u32,
    /// Present when the root is rational and has been verified by exact evaluation.
    #[serde(serialize_with = "ser_opt_rational")]
    pub exact: Option<BigRational>,
}

impl IsolatedRoot {
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        match &self.exact {
            Some(r) => super::rational_to_f64(r),
            None => super::rational_to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into()))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootReport {
    /// Distinct roots in (0, ∞).
    pub count: usize,
    pub roots: Vec<IsolatedRoot>,
    /// False when the coefficients had to be passed through doubles first.
    pub exact_coefficients: bool,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn ser_opt_rational<S: serde::Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

/// Exact count of the distinct roots of `p` on (0, +∞) with isolating
/// intervals narrower than 10⁻⁶.
///
/// The coefficients are first divided by their common positive unit (π·s in
/// exact mode). When that is impossible they are rounded to doubles and the
/// doubles, which are rationals, are treated exactly; the report says so.
pub fn count_positive_roots<K: Scalar>(p: &HPoly<K>) -> Result<RootReport, MathError> {
    if p.is_zero() {
        return Err(MathError::ZeroPolynomial);
    }
    let (coeffs, exact) = match K::rationalize(p.coeffs()) {
        Ok(c) => (c, true),
        Err(MathError::MixedGrade) => {
            let c = p
                .coeffs()
                .iter()
                .map(|c| {
                    BigRational::from_float(c.to_f64())
                        .ok_or_else(|| MathError::Parse(format!("non-finite coefficient {c:?}")))
                })
                .collect::<Result<_, _>>()?;
            (c, false)
        }
        Err(e) => return Err(e),
    };
    let mut report = positive_roots(&RatPoly::new(coeffs))?;
    report.exact_coefficients = exact;
    Ok(report)
}

pub(crate) fn positive_roots(p: &RatPoly) -> Result<RootReport, MathError> {
    if p.is_zero() {
        return Err(MathError::ZeroPolynomial);
    }
    let (core, _) = p.strip_zero_roots();
    let factors = core.squarefree_factors();
    let sqfree = core.squarefree_part();
    if sqfree.degree().unwrap_or(0) == 0 {
        return Ok(RootReport { count: 0, roots: Vec::new(), exact_coefficients: true });
    }
    let chain = SturmChain::new(&sqfree);
    let zero = BigRational::zero();
    let count = chain.count_above(&zero);
    let width = BigRational::new(ISOLATION_WIDTH.0.into(), ISOLATION_WIDTH.1.into());
    let mut intervals = Vec::new();
    isolate(&chain, &sqfree, zero, sqfree.root_bound(), count, &width, &mut intervals);
    let denom_bound = core.primitive().last().cloned().unwrap_or_else(BigInt::one).abs();
    let roots = intervals
        .into_iter()
        .map(|(lo, hi)| {
            let k = factors
                .iter()
                .position(|f| f.degree().unwrap_or(0) > 0 && f.sign_at(&lo) != f.sign_at(&hi))
                .unwrap_or(0);
            let exact = certify_rational(&factors[k.min(factors.len() - 1)], &lo, &hi, &denom_bound);
            IsolatedRoot { lo, hi, multiplicity: k as u32 + 1, exact }
        })
        .collect();
    Ok(RootReport { count, roots, exact_coefficients: true })
}

/// Bisects `(lo, hi]`, which holds `n` roots of the squarefree `q`, until every
/// root sits alone in an interval narrower than `width`. Endpoints are never
/// roots of `q`, so each interval shows a strict sign change.
fn isolate(
    chain: &SturmChain,
    q: &RatPoly,
    lo: BigRational,
    hi: BigRational,
    n: usize,
    width: &BigRational,
    out: &mut Vec<(BigRational, BigRational)>,
) {
    if n == 0 {
        return;
    }
    if n == 1 && &(&hi - &lo) < width {
        out.push((lo, hi));
        return;
    }
    let mid = split_point(q, &lo, &hi);
    let left = chain.count_between(&lo, &mid);
    isolate(chain, q, lo, mid.clone(), left, width, out);
    isolate(chain, q, mid, hi, n - left, width, out);
}

/// A point strictly inside (lo, hi) that is not a root of `q`, near the middle.
fn split_point(q: &RatPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let span = hi - lo;
    let two = BigRational::from_integer(2.into());
    let mut mid = lo + &span / &two;
    let mut k = 3i64;
    while q.sign_at(&mid) == Ordering::Equal {
        mid = lo + &span * BigRational::new((k - 1).into(), (2 * k).into());
        k += 1;
    }
    mid
}

/// Any rational root of a polynomial with integer leading coefficient `a` has
/// denominator dividing `a`, and two such rationals differ by at least 1/a².
/// Shrinking the bracket below that leaves one candidate: the simplest rational.
fn certify_rational(f: &RatPoly, lo: &BigRational, hi: &BigRational, denom_bound: &BigInt) -> Option<BigRational> {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let sep = BigRational::new(BigInt::one(), denom_bound * denom_bound);
    let slo = f.sign_at(&lo);
    let two = BigRational::from_integer(2.into());
    while (&hi - &lo) >= sep {
        let mid = (&lo + &hi) / &two;
        match f.sign_at(&mid) {
            Ordering::Equal => return Some(mid),
            s if s == slo => lo = mid,
            _ => hi = mid,
        }
    }
    let c = simplest_rational_between(&lo, &hi);
    f.eval(&c).is_zero().then_some(c)
}

/// The rational with the smallest denominator in `[lo, hi]`, `0 ≤ lo ≤ hi`.
pub fn simplest_rational_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + BigRational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_rational_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

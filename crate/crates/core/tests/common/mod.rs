#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use abelian_core::exactmath::{HPoly, Scalar, SurdField, SurdScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

pub fn field(a: i64, b: i64) -> Arc<SurdField> {
    SurdField::new(q(a, b)).unwrap()
}

fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, t| acc * (n - t) / (t + 1))
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

/// Coefficients of `xⁱ·(−λx − λx²)ᵏ`, indexed by power of x.
fn shifted_parabola_power(lambda: &BigRational, i: usize, k: usize) -> Vec<BigRational> {
    let mut p = vec![BigRational::one()];
    for _ in 0..k {
        let mut next = vec![BigRational::zero(); p.len() + 2];
        for (e, c) in p.iter().enumerate() {
            next[e + 1] -= lambda * c;
            next[e + 2] -= lambda * c;
        }
        p = next;
    }
    let mut out = vec![BigRational::zero(); i];
    out.extend(p);
    out
}

/// `∮ xⁱ yʲ dx` computed from `x = X sin θ`, `y = −λ(x + x²) − √(λ(1−λ))·X cos θ`
/// over one turn, with `∫ sinᵃ cosᵇ = 2π (a−1)!!(b−1)!!/(a+b)!!` for even a, b.
/// Returns the coefficients of `π·s·hᵉ`.
pub fn trig_oracle(lambda: &BigRational, i: usize, j: usize) -> BTreeMap<usize, BigRational> {
    let one_minus = BigRational::one() - lambda;
    let c = lambda * &one_minus;
    let x2 = BigRational::from_integer(2.into()) / &one_minus;
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for k in (1..=j).step_by(2) {
        let poly = shifted_parabola_power(lambda, i, j - k);
        for (m, a) in poly.iter().enumerate() {
            if m % 2 == 1 || a.is_zero() {
                continue;
            }
            let e = (m + k).div_ceil(2);
            let trig = BigRational::new(
                BigInt::from(2) * double_factorial(m as i64 - 1) * double_factorial(k as i64),
                double_factorial((m + k + 1) as i64),
            );
            let v = -BigRational::from_integer(binomial(j, k)) * a * pow(&x2, e) * pow(&c, (k - 1) / 2) * trig;
            *out.entry(e).or_insert_with(BigRational::zero) += v;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn oracle_poly(f: &Arc<SurdField>, i: usize, j: usize) -> HPoly<SurdScalar> {
    let coeffs = trig_oracle(f.lambda(), i, j);
    let deg = coeffs.keys().last().copied().unwrap_or(0);
    let unit = SurdScalar::pi_s(f);
    HPoly::from_coeffs(
        (0..=deg).map(|e| coeffs.get(&e).map_or_else(|| SurdScalar::zero(f), |c| unit.scale(c))).collect(),
    )
}

/// Exact value at rational h, rounded once.
pub fn eval_exact(p: &HPoly<SurdScalar>, h: &BigRational) -> f64 {
    p.eval_coef(h).map_or(0.0, |v| v.to_f64())
}

/// Largest |x| and |y| on the oval.
pub fn oval_extent(lambda: f64, h: f64) -> (f64, f64) {
    let pts = abelian_core::quadrature::oval_points(lambda, h, 257).unwrap();
    pts.iter().fold((0.0f64, 0.0f64), |(a, b), &(x, y)| (a.max(x.abs()), b.max(y.abs())))
}

/// Crude size of `∮ xⁱ yʲ dx`, used as a floor for identities whose terms all vanish.
fn natural_size(extent: (f64, f64), i: i64, j: i64) -> f64 {
    2.0 * std::f64::consts::PI * extent.0.powi(i as i32 + 1) * extent.1.powi(j as i32)
}

/// Relative residual of an identity evaluated purely on quadrature values.
pub fn quadrature_residual(rel: &abelian_core::engine::Relation<f64>, lambda: f64, h: f64) -> f64 {
    use abelian_core::quadrature::{quad_energy_derivative, quad_iij};
    let value = |i: usize, j: usize, d: bool| {
        let r = if d { quad_energy_derivative(lambda, h, i, j, 1e-13) } else { quad_iij(lambda, h, i, j, 1e-13) };
        r.expect("quadrature converges").value
    };
    let ext = oval_extent(lambda, h);
    let floor = rel
        .terms
        .iter()
        .map(|t| 1e-3 * t.coef.abs() * h.powi(t.h_power as i32) * natural_size(ext, t.i, t.j))
        .fold(0.0, f64::max);
    rel.residual(h, value).abs() / rel.magnitude(h, value).max(floor)
}

/// `∮ xⁱ yʲ dy + i/(j+1)·I(i−1,j+1)`, relative.
pub fn dy_residual(lambda: f64, h: f64, i: usize, j: usize) -> f64 {
    use abelian_core::quadrature::{quad_dy, quad_iij};
    let lhs = quad_dy(lambda, h, i, j, 1e-13).unwrap().value;
    let rhs = if i == 0 {
        0.0
    } else {
        -(i as f64) / (j as f64 + 1.0) * quad_iij(lambda, h, i - 1, j + 1, 1e-13).unwrap().value
    };
    // exact forms such as ∮ yʲ dy vanish
    let floor = 1e-3 * natural_size(oval_extent(lambda, h), i as i64 - 1, j as i64 + 1);
    (lhs - rhs).abs() / (lhs.abs() + rhs.abs()).max(floor)
}

/// Scan points where `|I(h)| > 10³ε²`, and how many of them have a displacement
/// of sign `−sign(ε·I(h))` (the flow turns counter-clockwise, so
/// `ΔH = −ε·I(h)` to first order).
pub fn melnikov_agreement(
    integral: &HPoly<SurdScalar>,
    epsilon: f64,
    scan: &[abelian_core::sim::ScanRow],
) -> (usize, usize) {
    let pf = integral.map_to_f64();
    let mut checked = 0;
    let mut agree = 0;
    for row in scan {
        let i = pf.eval_f64(row.h);
        if i.abs() <= 1e3 * epsilon * epsilon {
            continue;
        }
        checked += 1;
        if row.displacement.signum() == -(epsilon * i).signum() {
            agree += 1;
        }
    }
    (checked, agree)
}

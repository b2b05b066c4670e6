//! Adaptive Gauss–Legendre quadrature with panel bisection.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::QuadError;

const ORDER: usize = 12;

/// Nodes and weights on [−1, 1], from Newton iteration on P_n.
fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre_rule(ORDER))
}

pub fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Integral and integral of |f| over one panel.
fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
    let (s, sa) = rule().iter().fold((0.0, 0.0), |(s, sa), &(x, w)| {
        let v = f(m + r * x);
        (s + w * v, sa + w * v.abs())
    });
    (s * r, sa * r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub est_error: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct GaussConfig {
    pub tol: f64,
    pub max_depth: u32,
}

impl Default for GaussConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_depth: 30 }
    }
}

/// ∫ₐᵇ f to relative tolerance `tol`, measured against ∫|f| so that
/// integrals which cancel to zero still terminate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: GaussConfig) -> Result<Quadrature, QuadError> {
    if cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(QuadError::InvalidTolerance(cfg.tol));
    }
    let (whole, abs) = panel(&f, a, b);
    let scale = abs.max(f64::MIN_POSITIVE);
    let mut out = Quadrature { value: 0.0, est_error: 0.0 };
    let mut converged = true;
    let mut stack = vec![(a, b, whole, 0u32)];
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (l, _) = panel(&f, lo, mid);
        let (r, _) = panel(&f, mid, hi);
        let fine = l + r;
        let err = (fine - coarse).abs();
        let allowed = cfg.tol * scale * (hi - lo) / (b - a);
        if err <= allowed || err <= 1e-15 * scale {
            out.value += fine;
            out.est_error += err;
        } else if depth >= cfg.max_depth {
            converged = false;
            out.value += fine;
            out.est_error += err;
        } else {
            stack.push((mid, hi, r, depth + 1));
            stack.push((lo, mid, l, depth + 1));
        }
    }
    if !out.value.is_finite() {
        return Err(QuadError::NonFinite);
    }
    if !converged {
        return Err(QuadError::NonConvergence { value: out.value, est_error: out.est_error });
    }
    Ok(out)
}

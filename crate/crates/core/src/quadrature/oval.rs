//! Line integrals over the level oval `H = h`.
//!
//! With `w = y + λ(x + x²)` the oval is the ellipse `w² + λ(1−λ)x² = 2λh`,
//! so `x = X sin φ`, `w = −√(λ(1−λ))·X cos φ` traces it once, counterclockwise,
//! for φ ∈ [−π/2, 3π/2]. The map is analytic, so no endpoint singularity is left.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::Perturbation;

use super::gauss::{integrate, GaussConfig};
use super::QuadError;

/// Energies below this are treated as the bare center.
pub const MIN_ENERGY: f64 = 1e-8;

pub fn hamiltonian(lambda: f64, x: f64, y: f64) -> f64 {
    0.5 * x * x + lambda * x.powi(3) + 0.5 * lambda * x.powi(4) + 0.5 * y * y / lambda + x * y + x * x * y
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oval {
    lambda: f64,
    h: f64,
    x_max: f64,
    root_c: f64,
}

impl Oval {
    pub fn new(lambda: f64, h: f64) -> Result<Self, QuadError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(QuadError::InvalidLambda(lambda));
        }
        if h.is_nan() || h <= 0.0 || !h.is_finite() {
            return Err(QuadError::NonPositiveEnergy(h));
        }
        Ok(Self { lambda, h, x_max: (2.0 * h / (1.0 - lambda)).sqrt(), root_c: (lambda * (1.0 - lambda)).sqrt() })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn energy(&self) -> f64 {
        self.h
    }

    /// Half-width of the oval in x.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn point(&self, phi: f64) -> (f64, f64) {
        let x = self.x_max * phi.sin();
        let w = -self.root_c * self.x_max * phi.cos();
        (x, w - self.lambda * (x + x * x))
    }

    /// `(dx/dφ, dy/dφ)`.
    pub fn tangent(&self, phi: f64) -> (f64, f64) {
        let x = self.x_max * phi.sin();
        let dx = self.x_max * phi.cos();
        let dw = self.root_c * self.x_max * phi.sin();
        (dx, dw - self.lambda * (1.0 + 2.0 * x) * dx)
    }

    /// The two points where the oval meets the parabola `w = 0`.
    pub fn turning_points(&self) -> [(f64, f64); 2] {
        [self.point(PI / 2.0), self.point(-PI / 2.0)]
    }

    /// `∮ P dx + Q dy` counterclockwise, for `form(x, y) = (P, Q)`.
    pub fn line_integral<F>(&self, form: F, cfg: GaussConfig) -> Result<OvalIntegral, QuadError>
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let integrand = |phi: f64| {
            let (x, y) = self.point(phi);
            let (dx, dy) = self.tangent(phi);
            let (p, q) = form(x, y);
            p * dx + q * dy
        };
        let q = integrate(integrand, -PI / 2.0, 1.5 * PI, cfg)?;
        Ok(OvalIntegral { value: q.value, est_error: q.est_error, below_resolution: false })
    }

    /// `∮ F(x, y) dx / H_y(x, y)`, which equals `−λ/√(λ(1−λ)) ∫ F dφ`.
    pub fn over_momentum<F: Fn(f64, f64) -> f64>(&self, f: F, cfg: GaussConfig) -> Result<OvalIntegral, QuadError> {
        let q = integrate(
            |phi| {
                let (x, y) = self.point(phi);
                f(x, y)
            },
            -PI / 2.0,
            1.5 * PI,
            cfg,
        )?;
        let k = -self.lambda / self.root_c;
        Ok(OvalIntegral { value: k * q.value, est_error: k.abs() * q.est_error, below_resolution: false })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OvalIntegral {
    pub value: f64,
    pub est_error: f64,
    /// Set when `h` is too small to resolve; `value` is then 0.
    pub below_resolution: bool,
}

impl OvalIntegral {
    fn center() -> Self {
        Self { value: 0.0, est_error: 0.0, below_resolution: true }
    }
}

fn cfg(tol: f64) -> GaussConfig {
    GaussConfig { tol, ..GaussConfig::default() }
}

fn with_oval<F>(lambda: f64, h: f64, body: F) -> Result<OvalIntegral, QuadError>
where
    F: FnOnce(&Oval) -> Result<OvalIntegral, QuadError>,
{
    if (0.0..MIN_ENERGY).contains(&h) {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(QuadError::InvalidLambda(lambda));
        }
        return Ok(OvalIntegral::center());
    }
    body(&Oval::new(lambda, h)?)
}

fn monomial(x: f64, y: f64, i: usize, j: usize) -> f64 {
    x.powi(i as i32) * y.powi(j as i32)
}

/// `∮ xⁱ yʲ dx`.
pub fn quad_iij(lambda: f64, h: f64, i: usize, j: usize, tol: f64) -> Result<OvalIntegral, QuadError> {
    with_oval(lambda, h, |o| o.line_integral(|x, y| (monomial(x, y, i, j), 0.0), cfg(tol)))
}

/// `∮ xⁱ yʲ dy`.
pub fn quad_dy(lambda: f64, h: f64, i: usize, j: usize, tol: f64) -> Result<OvalIntegral, QuadError> {
    with_oval(lambda, h, |o| o.line_integral(|x, y| (0.0, monomial(x, y, i, j)), cfg(tol)))
}

/// `∮ g dx − f dy` for the perturbation `(f, g)`.
pub fn quad_abelian(lambda: f64, h: f64, pert: &Perturbation, tol: f64) -> Result<OvalIntegral, QuadError> {
    with_oval(lambda, h, |o| {
        o.line_integral(
            |x, y| {
                let (f, g) = pert.eval(x, y);
                (g, -f)
            },
            cfg(tol),
        )
    })
}

/// `j ∮ xⁱ yʲ⁻¹ / (x + x² + y/λ) dx`, the h-derivative of `I(i,j)`.
pub fn quad_energy_derivative(lambda: f64, h: f64, i: usize, j: usize, tol: f64) -> Result<OvalIntegral, QuadError> {
    if j == 0 {
        return with_oval(lambda, h, |_| Ok(OvalIntegral { value: 0.0, est_error: 0.0, below_resolution: false }));
    }
    with_oval(lambda, h, |o| {
        let r = o.over_momentum(|x, y| monomial(x, y, i, j - 1), cfg(tol))?;
        Ok(OvalIntegral { value: j as f64 * r.value, est_error: j as f64 * r.est_error, ..r })
    })
}

/// `count` points around the oval, the last one repeating the first.
pub fn oval_points(lambda: f64, h: f64, count: usize) -> Result<Vec<(f64, f64)>, QuadError> {
    if count < 4 {
        return Err(QuadError::TooFewPoints(count));
    }
    let o = Oval::new(lambda, h)?;
    let step = 2.0 * PI / (count - 1) as f64;
    let mut pts: Vec<_> = (0..count - 1).map(|k| o.point(-PI / 2.0 + k as f64 * step)).collect();
    pts.push(pts[0]);
    Ok(pts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadRow {
    pub lambda: f64,
    pub h: f64,
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub est_error: f64,
}

impl QuadRow {
    pub const CSV_HEADER: &'static str = "lambda,h,i,j,value,est_error";

    pub fn csv(&self) -> String {
        format!("{},{},{},{},{},{}", self.lambda, self.h, self.i, self.j, self.value, self.est_error)
    }
}

/// Every `I(i,j)` with `i + j ≤ max_total` on the `lambdas × energies` grid,
/// in lexicographic (λ, h, i, j) order.
pub fn quad_grid(lambdas: &[f64], energies: &[f64], max_total: usize, tol: f64) -> Result<Vec<QuadRow>, QuadError> {
    let mut jobs = Vec::new();
    for &lambda in lambdas {
        for &h in energies {
            for i in 0..=max_total {
                for j in 0..=max_total - i {
                    jobs.push((lambda, h, i, j));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(lambda, h, i, j)| {
            let r = quad_iij(lambda, h, i, j, tol)?;
            Ok(QuadRow { lambda, h, i, j, value: r.value, est_error: r.est_error })
        })
        .collect()
}

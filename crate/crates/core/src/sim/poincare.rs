//! Return map on `{y = 0, x > 0}` and limit-cycle search.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quadrature::hamiltonian;

use super::system::{integrate_orbit, FlowConfig, StopCondition, System};
use super::SimError;

/// The `x > 0` with `H(x, 0) = h`; `H(·, 0)` is increasing there.
pub fn section_point(lambda: f64, h: f64) -> f64 {
    if h <= 0.0 {
        return 0.0;
    }
    let e = |x: f64| hamiltonian(lambda, x, 0.0);
    let mut hi = (2.0 * h).sqrt();
    while e(hi) < h {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if e(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if h - e(lo) <= e(hi) - h {
        lo
    } else {
        hi
    }
}

/// Next upward crossing of the positive x-axis starting from `(x0, 0)`.
pub fn poincare_return(system: &System, x0: f64, cfg: &FlowConfig) -> Result<f64, SimError> {
    if x0.is_nan() || x0 <= 0.0 {
        return Err(SimError::InvalidParameters(format!("section point must be positive, got {x0}")));
    }
    let tr = integrate_orbit(system, [x0, 0.0], cfg, StopCondition::Revolutions(1), false)?;
    Ok(tr.crossings[0].x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub x0: f64,
    pub h: f64,
    pub displacement: f64,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "x0,h,displacement";

    pub fn csv(&self) -> String {
        format!("{},{},{}", self.x0, self.h, self.displacement)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub section_x: f64,
    pub energy: f64,
    /// Sign of (return-map slope − 1): −1 attracting, +1 repelling.
    pub stability: i8,
    pub bracket: (f64, f64),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub flow: FlowConfig,
    pub grid: usize,
    /// Displacements smaller than this carry no sign.
    pub noise_floor: f64,
    pub bracket_width: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { flow: FlowConfig::default(), grid: 200, noise_floor: 1e-8, bracket_width: 1e-8 }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CycleSearch {
    pub scan: Vec<ScanRow>,
    pub cycles: Vec<CycleReport>,
}

/// Displacement `P(x0) − x0` at `grid` energies spaced evenly over `h_range`.
pub fn scan_displacement(
    system: &System,
    h_range: (f64, f64),
    grid: usize,
    cfg: &FlowConfig,
) -> Result<Vec<ScanRow>, SimError> {
    let (h_lo, h_hi) = h_range;
    if !(h_lo > 0.0 && h_hi > h_lo) || grid < 2 {
        return Err(SimError::InvalidParameters(format!("bad energy range ({h_lo}, {h_hi}) or grid {grid}")));
    }
    (0..grid)
        .into_par_iter()
        .map(|k| {
            let h = h_lo + (h_hi - h_lo) * k as f64 / (grid - 1) as f64;
            let x0 = section_point(system.lambda(), h);
            let x1 = poincare_return(system, x0, cfg)?;
            Ok(ScanRow { x0, h: hamiltonian(system.lambda(), x0, 0.0), displacement: x1 - x0 })
        })
        .collect()
}

fn sign(d: f64, floor: f64) -> i8 {
    if d > floor {
        1
    } else if d < -floor {
        -1
    } else {
        0
    }
}

/// Pairs of scan indices whose displacements have definite, opposite signs
/// with only sign-less points in between.
fn sign_changes(scan: &[ScanRow], floor: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, i8)> = None;
    for (k, row) in scan.iter().enumerate() {
        let s = sign(row.displacement, floor);
        if s == 0 {
            continue;
        }
        if let Some((j, prev)) = last {
            if prev != s {
                out.push((j, k));
            }
        }
        last = Some((k, s));
    }
    out
}

fn refine(system: &System, lo: &ScanRow, hi: &ScanRow, cfg: &SearchConfig) -> Result<CycleReport, SimError> {
    let d = |x: f64| poincare_return(system, x, &cfg.flow).map(|x1| x1 - x);
    let (mut a, mut b) = (lo.x0, hi.x0);
    let (mut da, mut db) = (lo.displacement, hi.displacement);
    while b - a > cfg.bracket_width {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let dm = d(m)?;
        if (dm > 0.0) == (da > 0.0) && dm != 0.0 {
            a = m;
            da = dm;
        } else {
            b = m;
            db = dm;
        }
    }
    let x = if db == da { 0.5 * (a + b) } else { a - da * (b - a) / (db - da) };
    let x = x.clamp(a, b);
    // slope of the displacement from the original grid bracket: less noisy than the refined one
    let slope = (hi.displacement - lo.displacement) / (hi.x0 - lo.x0);
    Ok(CycleReport {
        section_x: x,
        energy: hamiltonian(system.lambda(), x, 0.0),
        stability: if slope < 0.0 { -1 } else { 1 },
        bracket: (a, b),
    })
}

/// Scans, then refines every sign change of the displacement by bisection.
/// Reports come back ordered by `section_x`.
pub fn locate_cycles(system: &System, h_range: (f64, f64), cfg: &SearchConfig) -> Result<CycleSearch, SimError> {
    if cfg.grid < 16 {
        return Err(SimError::InvalidParameters(format!("grid must be at least 16, got {}", cfg.grid)));
    }
    let scan = scan_displacement(system, h_range, cfg.grid, &cfg.flow)?;
    let cycles = sign_changes(&scan, cfg.noise_floor)
        .into_par_iter()
        .map(|(i, j)| refine(system, &scan[i], &scan[j], cfg))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CycleSearch { scan, cycles })
}

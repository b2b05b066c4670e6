//! The perturbed planar system and its flow.

use serde::Serialize;

use crate::engine::Perturbation;
use crate::exactmath::rational_to_f64;
use crate::quadrature::hamiltonian;

use super::dopri5::{Dopri5, State, Step, Tolerances};
use super::SimError;

#[derive(Clone, Debug)]
pub struct System {
    lambda: f64,
    epsilon: f64,
    f: Vec<(i32, i32, f64)>,
    g: Vec<(i32, i32, f64)>,
}

fn flatten(t: &crate::engine::CoefTable) -> Vec<(i32, i32, f64)> {
    t.iter().map(|(&(i, j), c)| (i as i32, j as i32, rational_to_f64(c))).collect()
}

fn poly(terms: &[(i32, i32, f64)], x: f64, y: f64) -> f64 {
    terms.iter().map(|&(i, j, c)| c * x.powi(i) * y.powi(j)).sum()
}

impl System {
    pub fn new(lambda: f64, epsilon: f64, pert: &Perturbation) -> Result<Self, SimError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(SimError::InvalidParameters(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        if !epsilon.is_finite() {
            return Err(SimError::InvalidParameters(format!("epsilon must be finite, got {epsilon}")));
        }
        Ok(Self { lambda, epsilon, f: flatten(&pert.a), g: flatten(&pert.b) })
    }

    pub fn unperturbed(lambda: f64) -> Result<Self, SimError> {
        Self::new(lambda, 0.0, &Perturbation::new(0))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(dx/dt, dy/dt)`.
    pub fn vector_field(&self, x: f64, y: f64) -> (f64, f64) {
        let l = self.lambda;
        let mut dx = -y / l - x - x * x;
        let mut dy = x + y + 2.0 * x * y + 3.0 * l * x * x + 2.0 * l * x.powi(3);
        if self.epsilon != 0.0 {
            dx += self.epsilon * poly(&self.f, x, y);
            dy += self.epsilon * poly(&self.g, x, y);
        }
        (dx, dy)
    }

    pub fn energy(&self, x: f64, y: f64) -> f64 {
        hamiltonian(self.lambda, x, y)
    }

    /// Period of the linearised center, shared by every unperturbed orbit.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI * (self.lambda / (1.0 - self.lambda)).sqrt()
    }

    pub fn stepper(&self, start: State, tol: Tolerances) -> Dopri5<impl Fn(f64, &State) -> State + '_> {
        Dopri5::new(
            move |_, s: &State| {
                let (a, b) = self.vector_field(s[0], s[1]);
                [a, b]
            },
            0.0,
            start,
            tol,
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FlowConfig {
    pub tol: Tolerances,
    /// Escape radius on |x| and |y|.
    pub bound: f64,
    /// Cap on integration time, in unperturbed periods.
    pub max_periods: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { tol: Tolerances::default(), bound: 1e3, max_periods: 20.0 }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum StopCondition {
    Time(f64),
    /// Upward crossings of the positive x-axis.
    Revolutions(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Crossings of `{y = 0, x > 0}` in the direction of increasing y.
    pub crossings: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }
}

/// Time in `[t0, t1]` where the interpolated `y` vanishes; `y(t0) < 0 ≤ y(t1)`.
fn locate_crossing(step: &Step) -> Sample {
    let (mut lo, mut hi) = (step.t0, step.t1);
    let (mut ylo, mut yhi) = (step.y0[1], step.y1[1]);
    let mut side = 0i8;
    for _ in 0..200 {
        // Illinois regula falsi
        let t = if yhi != ylo { hi - yhi * (hi - lo) / (yhi - ylo) } else { 0.5 * (lo + hi) };
        let t = if t > lo && t < hi { t } else { 0.5 * (lo + hi) };
        let y = step.eval(t)[1];
        if y == 0.0 || hi - lo <= 1e-15 * hi.abs().max(1.0) {
            lo = t;
            hi = t;
            break;
        }
        if y < 0.0 {
            lo = t;
            ylo = y;
            if side == -1 {
                yhi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            yhi = y;
            if side == 1 {
                ylo *= 0.5;
            }
            side = 1;
        }
    }
    let t = 0.5 * (lo + hi);
    let s = step.eval(t);
    Sample { t, x: s[0], y: 0.0 }
}

/// Integrates from `start` until `until`, recording every accepted step when
/// `record` is set and every section crossing in any case.
pub fn integrate_orbit(
    system: &System,
    start: State,
    cfg: &FlowConfig,
    until: StopCondition,
    record: bool,
) -> Result<Trajectory, SimError> {
    let t_max = match until {
        StopCondition::Time(t) => t,
        StopCondition::Revolutions(n) => cfg.max_periods * system.period() * n.max(1) as f64,
    };
    let mut stepper = system.stepper(start, cfg.tol);
    let mut out = Trajectory::default();
    out.samples.push(Sample { t: 0.0, x: start[0], y: start[1] });
    loop {
        let step = stepper.step()?;
        let [x, y] = step.y1;
        if !(x.abs() <= cfg.bound && y.abs() <= cfg.bound) {
            return Err(SimError::Escaped { t: step.t1, x, y });
        }
        if step.y0[1] < 0.0 && y >= 0.0 {
            let c = locate_crossing(&step);
            if c.x > 0.0 {
                out.crossings.push(c);
                if let StopCondition::Revolutions(n) = until {
                    if out.crossings.len() >= n {
                        out.samples.push(c);
                        return Ok(out);
                    }
                }
            }
        }
        if let StopCondition::Time(t_end) = until {
            if step.t1 >= t_end {
                let s = step.eval(t_end);
                out.samples.push(Sample { t: t_end, x: s[0], y: s[1] });
                return Ok(out);
            }
        }
        if record {
            out.samples.push(Sample { t: step.t1, x, y });
        }
        if step.t1 > t_max {
            return Err(SimError::NoReturn { t_max });
        }
    }
}

//! Direct simulation of the perturbed flow: return maps and limit cycles.

pub mod dopri5;
pub mod poincare;
pub mod system;

pub use dopri5::{Dopri5, State, Step, Tolerances};
pub use poincare::{
    locate_cycles, poincare_return, scan_displacement, section_point, CycleReport, CycleSearch, ScanRow, SearchConfig,
};
pub use system::{integrate_orbit, FlowConfig, Sample, StopCondition, System, Trajectory};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("orbit left the bounding box at t = {t} ({x}, {y})")]
    Escaped { t: f64, x: f64, y: f64 },
    #[error("no return to the section before t = {t_max}")]
    NoReturn { t_max: f64 },
    #[error("{0}")]
    InvalidParameters(String),
}

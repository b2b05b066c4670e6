//! Dormand–Prince 5(4) with step-size control and the 4th-order continuous
//! extension, specialised to planar systems.

use super::SimError;

pub type State = [f64; 2];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12 }
    }
}

/// One accepted step together with its interpolant.
#[derive(Clone, Copy, Debug)]
pub struct Step {
    pub t0: f64,
    pub t1: f64,
    pub y0: State,
    pub y1: State,
    rcont: [State; 5],
}

impl Step {
    /// Dense output at `t ∈ [t0, t1]`.
    pub fn eval(&self, t: f64) -> State {
        let th = (t - self.t0) / (self.t1 - self.t0);
        let th1 = 1.0 - th;
        let r = &self.rcont;
        std::array::from_fn(|i| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i]))))
    }
}

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

pub struct Dopri5<F: Fn(f64, &State) -> State> {
    f: F,
    tol: Tolerances,
    t: f64,
    y: State,
    h: f64,
    k1: State,
    min_step: f64,
}

impl<F: Fn(f64, &State) -> State> Dopri5<F> {
    pub fn new(f: F, t0: f64, y0: State, tol: Tolerances) -> Self {
        let k1 = f(t0, &y0);
        let speed = k1.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-12);
        let h = (0.1 * tol.rtol.powf(0.2) / speed).min(0.1);
        Self { f, tol, t: t0, y: y0, h, k1, min_step: 1e-14 }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> State {
        self.y
    }

    /// Advances by one accepted step.
    pub fn step(&mut self) -> Result<Step, SimError> {
        let (t, y, k1) = (self.t, self.y, self.k1);
        loop {
            let h = self.h;
            if h.abs() < self.min_step * t.abs().max(1.0) {
                return Err(SimError::StepUnderflow { t });
            }
            let f = &self.f;
            let k2 = f(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
            let k3 = f(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = f(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = f(t + C5 * h, &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
            let k6 = f(t + h, &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h));
            let y1 = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
            let k7 = f(t + h, &y1);

            let err = ((0..2)
                .map(|i| {
                    let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                    let sc = self.tol.atol + self.tol.rtol * y[i].abs().max(y1[i].abs());
                    (e / sc).powi(2)
                })
                .sum::<f64>()
                / 2.0)
                .sqrt();
            if !err.is_finite() || y1.iter().any(|v| !v.is_finite()) {
                self.h *= 0.2;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if err <= 1.0 {
                let ydiff: State = std::array::from_fn(|i| y1[i] - y[i]);
                let bspl: State = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
                let rcont = [
                    y,
                    ydiff,
                    bspl,
                    std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]),
                    std::array::from_fn(|i| {
                        h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
                    }),
                ];
                self.t = t + h;
                self.y = y1;
                self.k1 = k7;
                self.h = h * factor;
                return Ok(Step { t0: t, t1: t + h, y0: y, y1, rcont });
            }
            self.h = h * factor.min(1.0);
        }
    }
}

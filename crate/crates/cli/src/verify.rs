//! Symbolic reductions and assembled integrals against oval quadrature.

use std::sync::Arc;

use abelian_core::engine::{
    assemble_abelian, dy_to_dx, level_for_degree, random_perturbation, Perturbation, ReductionTable,
};
use abelian_core::exactmath::{parse_rational, rational_to_f64, CoefField, HPoly, Scalar, SurdField, SurdScalar};
use abelian_core::quadrature::{quad_abelian, quad_iij};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::{pretty, CliError, VerifyArgs};

const LAMBDAS: [&str; 3] = ["1/4", "1/2", "3/4"];
const ENERGIES: [&str; 3] = ["1/10", "1", "5"];
const QUAD_TOL: f64 = 1e-12;

type Tables = Vec<(Arc<SurdField>, ReductionTable<SurdScalar>)>;

#[derive(Clone, Debug, Serialize)]
struct Check {
    lambda: String,
    h: String,
    /// `I(i,j)` or a description of the random perturbation.
    what: String,
    symbolic: f64,
    quadrature: f64,
    error: f64,
}

/// Relative error, or absolute error when the exact value is zero.
fn relative(exact: f64, approx: f64, scale: f64) -> f64 {
    let d = (approx - exact).abs();
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

fn exact_at(p: &HPoly<SurdScalar>, h: &BigRational) -> f64 {
    p.eval_coef(h).map_or(0.0, |v| v.to_f64())
}

fn parse(q: &str) -> BigRational {
    parse_rational(q).expect("literal rationals")
}

fn tables(n: usize) -> Result<Tables, CliError> {
    LAMBDAS
        .iter()
        .map(|l| {
            let f = SurdField::new(parse(l))?;
            let t = ReductionTable::build(&f, level_for_degree(n))?;
            Ok((f, t))
        })
        .collect()
}

fn grid_checks(tabs: &[(Arc<SurdField>, ReductionTable<SurdScalar>)], n: usize) -> Result<Vec<Check>, CliError> {
    let mut jobs = Vec::new();
    for (k, _) in tabs.iter().enumerate() {
        for h in ENERGIES {
            for i in 0..=n {
                for j in 0..=n - i {
                    jobs.push((k, h, i, j));
                }
            }
        }
    }
    jobs.into_par_iter()
        .map(|(k, h, i, j)| {
            let (f, t) = &tabs[k];
            let exact = exact_at(&t.reduce(i, j)?, &parse(h));
            let quad = quad_iij(rational_to_f64(f.lambda()), rational_to_f64(&parse(h)), i, j, QUAD_TOL)?.value;
            Ok(Check {
                lambda: f.lambda().to_string(),
                h: h.to_string(),
                what: format!("I({i},{j})"),
                symbolic: exact,
                quadrature: quad,
                error: relative(exact, quad, exact.abs()),
            })
        })
        .collect()
}

/// Σ |contribution of each monomial|, the scale for relative errors of I(h).
fn magnitude(pert: &Perturbation, t: &ReductionTable<SurdScalar>, h: &BigRational) -> Result<f64, CliError> {
    let mut s = 0.0;
    for (&(i, j), c) in &pert.b {
        s += (rational_to_f64(c) * exact_at(&t.reduce(i, j)?, h)).abs();
    }
    for (&(i, j), c) in &pert.a {
        if let Some((w, ti, tj)) = dy_to_dx::<f64>(i, j) {
            s += (rational_to_f64(c) * w * exact_at(&t.reduce(ti, tj)?, h)).abs();
        }
    }
    Ok(s)
}

fn random_checks(
    tabs: &[(Arc<SurdField>, ReductionTable<SurdScalar>)],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<Vec<Check>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jobs: Vec<_> = (0..samples)
        .map(|_| {
            let k = rng.gen_range(0..tabs.len());
            let h = ENERGIES[rng.gen_range(0..ENERGIES.len())];
            let deg = rng.gen_range(1..=n.max(1));
            (k, h, random_perturbation(&mut rng, deg, 0.5))
        })
        .collect();
    jobs.into_par_iter()
        .map(|(k, h, pert)| {
            let (f, t) = &tabs[k];
            let hq = parse(h);
            let exact = exact_at(&assemble_abelian(&pert, t)?, &hq);
            let lambda = <f64 as CoefField>::from_rational(f.lambda());
            let quad = quad_abelian(lambda, rational_to_f64(&hq), &pert, QUAD_TOL)?.value;
            Ok(Check {
                lambda: f.lambda().to_string(),
                h: h.to_string(),
                what: format!("degree {} with {} terms", pert.n, pert.a.len() + pert.b.len()),
                symbolic: exact,
                quadrature: quad,
                error: relative(exact, quad, magnitude(&pert, t, &hq)?),
            })
        })
        .collect()
}

fn worst(checks: &[Check]) -> Option<&Check> {
    checks.iter().max_by(|a, b| a.error.total_cmp(&b.error))
}

/// Report text and whether every check met the tolerance.
pub fn run(a: &VerifyArgs, csv: bool) -> Result<(String, bool), CliError> {
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if a.n > 12 {
        return Err(CliError::Usage("--n above 12 is not supported by verify".into()));
    }
    let tabs = tables(a.n.max(1))?;
    let grid = grid_checks(&tabs, a.n)?;
    let random = random_checks(&tabs, a.n, a.samples, a.seed)?;
    let max_grid = worst(&grid).map_or(0.0, |c| c.error);
    let max_random = worst(&random).map_or(0.0, |c| c.error);
    let passed = max_grid <= a.tol && max_random <= a.tol;
    let text = if csv {
        let mut s = String::from("kind,lambda,h,what,symbolic,quadrature,error\n");
        for (kind, list) in [("grid", &grid), ("random", &random)] {
            for c in list {
                s.push_str(&format!(
                    "{kind},{},{},{},{},{},{}\n",
                    c.lambda, c.h, c.what, c.symbolic, c.quadrature, c.error
                ));
            }
        }
        s
    } else {
        pretty(&json!({
            "tolerance": a.tol,
            "passed": passed,
            "grid_checks": grid.len(),
            "max_grid_error": max_grid,
            "worst_grid": worst(&grid),
            "random_checks": random.len(),
            "max_random_error": max_random,
            "worst_random": worst(&random),
            "seed": a.seed,
        }))
    };
    Ok((text, passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scale_is_absolute() {
        assert_eq!(relative(0.0, 1e-3, 0.0), 1e-3);
        assert!((relative(2.0, 2.002, 2.0) - 1e-3).abs() < 1e-12);
    }
}

//! `abelian`: command-line front end for the exact Abelian-integral pipeline.

mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use abelian_core::engine::{
    abelian_integral, hpoly_to_json, level_for_degree, normalize_cmv, synthesize, AbelianReport, CmvParameters,
    EngineError, Perturbation, ReductionTable,
};
use abelian_core::exactmath::{
    count_positive_roots, parse_rational, rational_to_f64, FloatField, HPoly, MathError, SurdField, SurdScalar,
};
use abelian_core::quadrature::{oval_points, quad_iij, QuadError, QuadRow};
use abelian_core::sim::{
    integrate_orbit, locate_cycles, section_point, FlowConfig, SearchConfig, SimError, StopCondition, System,
    Tolerances,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "abelian", version, about = "Exact Abelian integrals and limit cycles of a cubic isochronous system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Map (k1, k2, k3, k4) to λ and the time/x/y scale factors.
    Normalize(NormalizeArgs),
    /// Exact polynomial for I(i,j).
    Reduce(ReduceArgs),
    /// Coefficients of I(h) for a perturbation, with its positive zeros.
    Abelian(PertArgs),
    /// Positive zeros of I(h) with isolating intervals.
    Zeros(PertArgs),
    /// A perturbation whose I(h) vanishes at the given energies.
    Synth(SynthArgs),
    /// Symbolic results against quadrature; exit 4 when the tolerance is missed.
    Verify(VerifyArgs),
    /// Poincaré-map search for limit cycles of the perturbed flow.
    Simulate(SimulateArgs),
    /// Points on a level oval, or a single quadrature value.
    Oval(OvalArgs),
}

#[derive(Args)]
struct NormalizeArgs {
    #[arg(long, allow_hyphen_values = true)]
    k1: String,
    #[arg(long, allow_hyphen_values = true)]
    k2: String,
    #[arg(long, allow_hyphen_values = true)]
    k3: String,
    #[arg(long, allow_hyphen_values = true)]
    k4: String,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long, default_value = "1/2")]
    lambda: String,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    /// Evaluate in double precision (allows irrational λ such as 0.3183…).
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct PertArgs {
    /// Perturbation JSON file.
    #[arg(long)]
    pert: PathBuf,
    /// Overrides the λ stored in the file.
    #[arg(long)]
    lambda: Option<String>,
    /// Overrides the degree stored in the file.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "1/2")]
    lambda: String,
    /// Comma-separated positive rationals, e.g. `1/3,1/2`.
    #[arg(long)]
    zeros: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest admissible relative error.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Largest i + j on the grid.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Random perturbations checked through the full one-form.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    pert: PathBuf,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, default_value_t = 1e-4, allow_hyphen_values = true)]
    eps: f64,
    #[arg(long)]
    h_min: Option<f64>,
    #[arg(long)]
    h_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Integrator relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Dump the orbit through (x0, 0) as `t,x,y` instead of searching.
    #[arg(long)]
    orbit_x0: Option<f64>,
    #[arg(long, default_value_t = 1)]
    revolutions: usize,
}

#[derive(Args)]
struct OvalArgs {
    #[arg(long, default_value = "1/2")]
    lambda: String,
    #[arg(long)]
    h: f64,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, requires = "j")]
    i: Option<usize>,
    #[arg(long, requires = "i")]
    j: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

enum CliError {
    Usage(String),
    Math(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Math(m) | CliError::Verification(m) => m,
        }
    }
}

macro_rules! math_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Math(e.to_string())
            }
        }
    )*};
}
math_error!(MathError, EngineError, QuadError, SimError);

type Output = Result<String, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|text| emit(&cli, &text));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn run(cli: &Cli) -> Output {
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::Normalize(a) => no_csv(csv, "normalize").and_then(|_| cmd_normalize(a)),
        Command::Reduce(a) => no_csv(csv, "reduce").and_then(|_| cmd_reduce(a)),
        Command::Abelian(a) => no_csv(csv, "abelian").and_then(|_| cmd_abelian(a)),
        Command::Zeros(a) => no_csv(csv, "zeros").and_then(|_| cmd_zeros(a)),
        Command::Synth(a) => no_csv(csv, "synth").and_then(|_| cmd_synth(a)),
        Command::Verify(a) => {
            let (text, passed) = verify::run(a, csv)?;
            if passed {
                Ok(text)
            } else {
                emit(cli, &text)?;
                Err(CliError::Verification(format!("symbolic and quadrature values differ by more than {}", a.tol)))
            }
        }
        Command::Simulate(a) => cmd_simulate(a, csv),
        Command::Oval(a) => cmd_oval(a, csv),
    }
}

fn no_csv(csv: bool, cmd: &str) -> Result<(), CliError> {
    if csv {
        Err(CliError::Usage(format!("{cmd} only produces JSON")))
    } else {
        Ok(())
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn rational_arg(name: &str, text: &str) -> Result<num_rational::BigRational, CliError> {
    parse_rational(text).map_err(|e| CliError::Usage(format!("--{name}: {e}")))
}

fn float_lambda(text: &str) -> Result<f64, CliError> {
    match parse_rational(text) {
        Ok(q) => Ok(rational_to_f64(&q)),
        Err(_) => text.parse::<f64>().map_err(|_| CliError::Usage(format!("--lambda: cannot read {text:?}"))),
    }
}

fn exact_field(text: &str) -> Result<Arc<SurdField>, CliError> {
    let q = rational_arg("lambda", text)?;
    Ok(SurdField::new(q)?)
}

fn load_pert(path: &PathBuf) -> Result<Perturbation, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(Perturbation::parse(&text)?)
}

fn pert_lambda(cli_lambda: &Option<String>, pert: &Perturbation) -> Result<String, CliError> {
    cli_lambda
        .clone()
        .or_else(|| pert.lambda.clone())
        .ok_or_else(|| CliError::Usage("no λ given: pass --lambda or set \"lambda\" in the file".into()))
}

fn cmd_normalize(a: &NormalizeArgs) -> Output {
    let k = CmvParameters {
        k1: rational_arg("k1", &a.k1)?,
        k2: rational_arg("k2", &a.k2)?,
        k3: rational_arg("k3", &a.k3)?,
        k4: rational_arg("k4", &a.k4)?,
    };
    let n = normalize_cmv(&k)?;
    Ok(pretty(&serde_json::to_value(n).expect("plain data")))
}

const MAX_INDEX: usize = 40;

fn cmd_reduce(a: &ReduceArgs) -> Output {
    if a.i + a.j > MAX_INDEX {
        return Err(CliError::Usage(format!("i + j must not exceed {MAX_INDEX}")));
    }
    let level = level_for_degree(a.i + a.j);
    if a.float {
        let field = FloatField::new(float_lambda(&a.lambda)?)?;
        let p: HPoly<f64> = ReductionTable::build(&field, level)?.reduce(a.i, a.j)?;
        return Ok(pretty(&json!({
            "lambda": field.lambda,
            "i": a.i,
            "j": a.j,
            "coefficients": p.coeffs(),
        })));
    }
    let field = exact_field(&a.lambda)?;
    let p: HPoly<SurdScalar> = ReductionTable::build(&field, level)?.reduce(a.i, a.j)?;
    Ok(pretty(&json!({
        "lambda": field.lambda().to_string(),
        "i": a.i,
        "j": a.j,
        "coefficients": hpoly_to_json(&p),
    })))
}

fn abelian_value(a: &PertArgs, zeros_only: bool) -> Result<Value, CliError> {
    let mut pert = load_pert(&a.pert)?;
    if let Some(n) = a.n {
        pert.n = n;
        pert.validate()?;
    }
    let lambda = pert_lambda(&a.lambda, &pert)?;
    if a.float {
        let field = FloatField::new(float_lambda(&lambda)?)?;
        let p: HPoly<f64> = abelian_integral(&pert, &field)?;
        let alpha: Vec<f64> = (1..=pert.n).map(|k| p.coeff(k).copied().unwrap_or(0.0)).collect();
        let zeros = if p.is_zero() {
            Value::Null
        } else {
            serde_json::to_value(count_positive_roots(&p)?).expect("plain data")
        };
        return Ok(if zeros_only {
            zeros
        } else {
            json!({ "lambda": field.lambda, "n": pert.n, "alpha_f64": alpha, "zeros": zeros })
        });
    }
    let field = exact_field(&lambda)?;
    let p = abelian_integral::<SurdScalar>(&pert, &field)?;
    if zeros_only {
        if p.is_zero() {
            return Err(CliError::Math("I(h) vanishes identically; its zeros are not isolated".into()));
        }
        return Ok(serde_json::to_value(count_positive_roots(&p)?).expect("plain data"));
    }
    Ok(serde_json::to_value(AbelianReport::new(&field, pert.n, &p)?).expect("plain data"))
}

fn cmd_abelian(a: &PertArgs) -> Output {
    abelian_value(a, false).map(|v| pretty(&v))
}

fn cmd_zeros(a: &PertArgs) -> Output {
    abelian_value(a, true).map(|v| pretty(&v))
}

fn cmd_synth(a: &SynthArgs) -> Output {
    let field = exact_field(&a.lambda)?;
    let zeros = a.zeros.split(',').map(|z| rational_arg("zeros", z.trim())).collect::<Result<Vec<_>, _>>()?;
    let s = synthesize(&zeros, &field)?;
    Ok(pretty(&s.to_json()))
}

fn cmd_simulate(a: &SimulateArgs, csv: bool) -> Output {
    let pert = load_pert(&a.pert)?;
    let lambda = pert_lambda(&a.lambda, &pert)?;
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let system = System::new(float_lambda(&lambda)?, a.eps, &pert)?;
    let flow = FlowConfig { tol: Tolerances { rtol: a.tol, atol: a.tol * 1e-2 }, ..FlowConfig::default() };

    if let Some(x0) = a.orbit_x0 {
        let tr = integrate_orbit(&system, [x0, 0.0], &flow, StopCondition::Revolutions(a.revolutions), true)?;
        return Ok(if csv {
            let mut s = String::from("t,x,y\n");
            for p in &tr.samples {
                s.push_str(&format!("{},{},{}\n", p.t, p.x, p.y));
            }
            s
        } else {
            pretty(&json!({ "samples": tr.samples, "crossings": tr.crossings }))
        });
    }

    let h_min = a.h_min.unwrap_or(0.01);
    let h_max = match a.h_max {
        Some(h) => h,
        None => default_h_max(&pert, &lambda)?,
    };
    let cfg = SearchConfig { flow, grid: a.grid, ..SearchConfig::default() };
    let found = locate_cycles(&system, (h_min, h_max), &cfg)?;
    Ok(if csv {
        let mut s = format!("{}\n", abelian_core::sim::ScanRow::CSV_HEADER);
        for r in &found.scan {
            s.push_str(&r.csv());
            s.push('\n');
        }
        s
    } else {
        pretty(&json!({
            "lambda": system.lambda(),
            "epsilon": system.epsilon(),
            "h_range": [h_min, h_max],
            "grid": a.grid,
            "cycles": found.cycles,
        }))
    })
}

/// 1.5 × the largest positive zero of I(h), or 1.5 when there is none.
fn default_h_max(pert: &Perturbation, lambda: &str) -> Result<f64, CliError> {
    let field = FloatField::new(float_lambda(lambda)?)?;
    let p: HPoly<f64> = abelian_integral(pert, &field)?;
    if p.is_zero() {
        return Ok(1.5);
    }
    let r = count_positive_roots(&p)?;
    Ok(r.roots.last().map_or(1.5, |z| 1.5 * z.midpoint_f64()))
}

fn cmd_oval(a: &OvalArgs, csv: bool) -> Output {
    let lambda = float_lambda(&a.lambda)?;
    if let (Some(i), Some(j)) = (a.i, a.j) {
        let q = quad_iij(lambda, a.h, i, j, a.tol)?;
        let row = QuadRow { lambda, h: a.h, i, j, value: q.value, est_error: q.est_error };
        return Ok(if csv {
            format!("{}\n{}\n", QuadRow::CSV_HEADER, row.csv())
        } else {
            pretty(&json!({ "row": row, "below_resolution": q.below_resolution }))
        });
    }
    let pts = oval_points(lambda, a.h, a.count)?;
    Ok(if csv {
        let mut s = String::from("x,y\n");
        for (x, y) in &pts {
            s.push_str(&format!("{x},{y}\n"));
        }
        s
    } else {
        pretty(&json!({
            "lambda": lambda,
            "h": a.h,
            "section_x": section_point(lambda, a.h),
            "points": pts,
        }))
    })
}

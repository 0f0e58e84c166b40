use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use opineq_core::catalog::{
    find_spec, list_specs, sup_search, Fingerprint, InequalityResult, Mode, Params, DEFAULT_TOL,
};
use opineq_core::generators::{generate, GenOptions, InstanceBundle, Recipe, Rng};
use opineq_core::linalg::io::parse_matrix;
use opineq_core::linalg::{cartesian, polar, ComplexMatrix, FunctionPair};
use opineq_core::radii::{
    numerical_radius, operator_norm, spectral_radius, spectral_radius_gelfand,
};
use serde_json::json;

use crate::config::{CampaignConfig, Preset, SpecSelection};
use crate::{replay, run_campaign, HarnessError, EXIT_ERROR, EXIT_OK, EXIT_VIOLATION};

#[derive(Debug, Parser)]
#[command(
    name = "opineq",
    version,
    about = "Numerical checks of mixed Schwarz type operator inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a seeded campaign over the catalog.
    Run(RunArgs),
    /// Evaluate one inequality on a matrix file; other roles default to the identity.
    Check(CheckArgs),
    /// Print the numerical radius, spectral radius and norm of a matrix.
    Radius {
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Print the polar and Cartesian decompositions of a matrix as JSON.
    Decompose { matrix: PathBuf },
    /// Emit a generated instance bundle as JSON.
    Gen {
        /// Recipe label, e.g. thm1 or multi:3.
        #[arg(long)]
        recipe: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hermitian instead of Ginibre matrices.
        #[arg(long)]
        hermitian: bool,
    },
    /// Recompute a trial from a fingerprint file.
    Replay { fingerprint: PathBuf },
    /// List the catalog.
    List,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generator preset: standard or hermitian.
    #[arg(long)]
    preset: Option<String>,
    /// `all` or comma-separated ids.
    #[arg(long)]
    spec: Option<String>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Full JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV summary path.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// JSON-lines path for every trial row.
    #[arg(long)]
    rows: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    matrix: PathBuf,
    #[arg(long)]
    ineq: String,
    /// Role that receives the matrix; defaults to the first role of the recipe.
    #[arg(long)]
    role: Option<String>,
    /// Further operators as ROLE=path.
    #[arg(long = "op", value_name = "ROLE=PATH")]
    ops: Vec<String>,
    /// Power pair exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Use f(t) = t/(1+t), g(t) = 1+t.
    #[arg(long, conflicts_with = "alpha")]
    ratio: bool,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    young: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Operator count for multi-operator entries.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(
    command: Command,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, HarnessError> {
    match command {
        Command::Run(args) => run_command(args, out, err),
        Command::Check(args) => check_command(args, out),
        Command::Radius { matrix, tol } => {
            let a = read_matrix(&matrix)?;
            let w = numerical_radius(&a, tol)?;
            let report = json!({
                "numerical_radius": { "value": w.value, "lo": w.lo, "hi": w.hi, "method": w.method },
                "spectral_radius": { "value": spectral_radius(&a)?, "gelfand": spectral_radius_gelfand(&a, 40)? },
                "norm": operator_norm(&a)?,
            });
            emit(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Decompose { matrix } => {
            let a = read_matrix(&matrix)?;
            let p = polar(&a)?;
            let c = cartesian(&a);
            let report = json!({
                "polar": { "unitary": p.unitary, "modulus": p.modulus },
                "cartesian": { "real_part": c.real_part, "imag_part": c.imag_part },
            });
            emit(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            recipe,
            n,
            seed,
            hermitian,
        } => {
            let (kind, count) = Recipe::parse(&recipe)?;
            let bundle = generate(
                kind,
                n,
                count,
                GenOptions { hermitian },
                &mut Rng::new(seed),
            )?;
            emit(out, &bundle)?;
            Ok(EXIT_OK)
        }
        Command::Replay { fingerprint } => {
            let text = read_text(&fingerprint)?;
            let fp: Fingerprint = serde_json::from_str(&text)?;
            let result = replay(&fp)?;
            emit(out, &result)?;
            Ok(if result.is_violation() {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
        Command::List => {
            for (id, anchor, signature) in list_specs() {
                let mode = match find_spec(id)?.mode {
                    Mode::Asserted => "asserted",
                    Mode::Measured => "measured",
                };
                writeln!(out, "{id:<28} {mode:<9} {signature:<32} {anchor}")
                    .map_err(stdout_error)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_command(
    args: RunArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let mut config = match &args.config {
        Some(path) => CampaignConfig::from_file(path)?,
        None => CampaignConfig::default(),
    };
    if let Some(p) = &args.preset {
        config.preset = Preset::parse(p)?;
    }
    if let Some(s) = &args.spec {
        config.specs = SpecSelection::parse(s);
    }
    if let Some(d) = args.dims {
        config.dims = d;
    }
    if let Some(t) = args.trials {
        config.trials_per_dim = t;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(t) = args.tol {
        config.tol = t;
    }
    if let Some(s) = args.samples {
        config.samples = s;
    }
    if let Some(r) = args.restarts {
        config.restarts = r;
    }
    if args.report.is_some() {
        config.output.report = args.report;
    }
    if args.summary.is_some() {
        config.output.summary = args.summary;
    }
    if args.rows.is_some() {
        config.output.rows = args.rows;
    }
    let started = std::time::Instant::now();
    let report = run_campaign(&config)?;
    write!(out, "{}", report.table()).map_err(stdout_error)?;
    let t = &report.totals;
    writeln!(
        out,
        "trials {} violations {} measured_violations {} errors {} chain_failures {}",
        t.trials, t.violations, t.measured_violations, t.errors, t.chain_failures
    )
    .map_err(stdout_error)?;
    let _ = writeln!(err, "wall time {:.1} s", started.elapsed().as_secs_f64());
    Ok(if t.violations > 0 {
        EXIT_VIOLATION
    } else if t.errors > 0 {
        EXIT_ERROR
    } else {
        EXIT_OK
    })
}

fn check_command(args: CheckArgs, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let spec = find_spec(&args.ineq)?;
    let matrix = read_matrix(&args.matrix)?;
    let n = matrix.n();
    let pair = match (args.alpha, args.ratio) {
        (_, true) => Some(FunctionPair::Ratio),
        (Some(alpha), false) => Some(FunctionPair::PowerSplit { alpha }),
        (None, false) => None,
    };
    let count = spec.recipe_count(&Params {
        count: args.count.or(Some(2)),
        ..Params::default()
    });
    let params = Params {
        pair,
        p: args.p,
        young: args.young,
        a: args.a,
        b: args.b,
        count,
    };
    let label = spec.recipe_label(&params)?;
    let (recipe, _) = Recipe::parse(&label)?;
    let roles = recipe.roles(count);
    let main_role = match &args.role {
        Some(r) => r.clone(),
        None => roles.first().cloned().unwrap_or_else(|| "A".to_string()),
    };
    let mut operators: Vec<(String, ComplexMatrix)> = Vec::new();
    for spec_op in &args.ops {
        let (role, path) = spec_op.split_once('=').ok_or_else(|| {
            HarnessError::ConfigInvalid(format!("--op expects ROLE=PATH, got {spec_op:?}"))
        })?;
        operators.push((role.to_string(), read_matrix(Path::new(path))?));
    }
    operators.push((main_role, matrix));
    for role in roles {
        if !operators.iter().any(|(r, _)| *r == role) {
            operators.push((role, ComplexMatrix::identity(n)));
        }
    }
    let bundle = InstanceBundle::from_operators(&label, operators)?;
    let mut rng = Rng::new(args.seed);
    let result: InequalityResult =
        sup_search(spec.id, &bundle, &params, args.restarts, args.tol, &mut rng)?;
    emit(out, &result)?;
    Ok(if result.is_violation() {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn read_text(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, HarnessError> {
    Ok(parse_matrix(&read_text(path)?)?)
}

fn emit<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(stdout_error)
}

fn stdout_error(e: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: "<stdout>".to_string(),
        message: e.to_string(),
    }
}

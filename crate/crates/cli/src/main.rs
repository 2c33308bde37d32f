//! `bkm`: run the boundary knot method benchmarks, reproduce their tables and
//! verify the kernel catalog.

mod config;
mod output;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bkm_core::cases::{builtin, run_case, CaseError, CaseName, Report, RunOverrides};
use bkm_core::drm::DrmError;
use bkm_core::geometry::{KnotSet, Point2};
use bkm_core::solver::SolverError;
use bkm_core::verify;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use config::{OutputFormat, RawConfig, RbfChoice, RunConfig};

#[derive(Parser)]
#[command(name = "bkm", version, about = "Boundary knot method benchmarks and solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a benchmark case and print the report
    Run(RunArgs),
    /// Reproduce a published table (1 to 6)
    Table { index: usize },
    /// Run the kernel and particular-solution checks
    Verify,
}

#[derive(Args)]
struct RunArgs {
    /// Case name: helmholtz, laplace, convdiff_x, convdiff_xy, nonlinear_poisson, burger
    case: Option<String>,
    /// Flat `key = value` file; command-line flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    boundary_knots: Option<usize>,
    #[arg(long)]
    interior_knots: Option<usize>,
    #[arg(long, value_enum)]
    rbf: Option<RbfChoice>,
    /// Multiquadric shape parameter
    #[arg(long)]
    shape: Option<f64>,
    #[arg(long, value_enum)]
    output: Option<OutputFormat>,
    /// CSV file with `x,y` columns replacing the published points
    #[arg(long)]
    eval_points: Option<PathBuf>,
    /// Knot CSV (`x,y,kind,nx,ny`) replacing the generated layout
    #[arg(long)]
    knots: Option<PathBuf>,
    /// Write the knots actually used to this CSV file
    #[arg(long)]
    knots_out: Option<PathBuf>,
}

impl RunArgs {
    fn raw(&self) -> RawConfig {
        RawConfig {
            case: self.case.clone(),
            boundary_knots: self.boundary_knots,
            interior_knots: self.interior_knots,
            rbf: self.rbf,
            shape: self.shape,
            output: self.output,
            eval_points: self.eval_points.clone(),
            knots: self.knots.clone(),
            knots_out: self.knots_out.clone(),
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid configuration:\n{}", .0.iter().map(|m| format!("  - {m}")).collect::<Vec<_>>().join("\n"))]
    Validation(Vec<String>),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Check(String),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
            Self::Check(_) | Self::Io(_) => 1,
        }
    }

    fn invalid(msg: impl Into<String>) -> Self {
        Self::Validation(vec![msg.into()])
    }
}

fn classify(err: CaseError) -> CliError {
    match err {
        CaseError::Solver(SolverError::Validation(issues)) => CliError::Validation(issues),
        CaseError::Solver(SolverError::Singular { stage, pivot }) => CliError::Numerical(format!(
            "singular {stage} system (zero pivot at column {pivot}); condition estimate: inf"
        )),
        CaseError::Solver(SolverError::Linalg(e)) => CliError::Numerical(e.to_string()),
        CaseError::Solver(SolverError::Drm(e @ DrmError::Linalg(_))) => CliError::Numerical(e.to_string()),
        other => CliError::invalid(other.to_string()),
    }
}

#[derive(Deserialize)]
struct PointRow {
    x: f64,
    y: f64,
}

fn read_points(path: &Path) -> Result<Vec<Point2<f64>>, CliError> {
    let fail = |e: csv::Error| CliError::invalid(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(fail)?;
    let points = rdr
        .deserialize::<PointRow>()
        .map(|r| r.map(|p| Point2::new(p.x, p.y)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    if points.is_empty() {
        return Err(CliError::invalid(format!("{}: no evaluation points", path.display())));
    }
    Ok(points)
}

fn read_knots(path: &Path) -> Result<KnotSet<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display())))?;
    KnotSet::read_csv(file).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn cmd_run(args: &RunArgs, out: &mut impl Write) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => config::read_config(path).map_err(CliError::Validation)?,
        None => RawConfig::default(),
    };
    let run: RunConfig = config::validate(args.raw().or(file)).map_err(CliError::Validation)?;
    let decimals = output::table_decimals().map_err(CliError::invalid)?;
    let case = builtin::<f64>(run.case);

    let knots = match &run.knots {
        Some(path) => read_knots(path)?,
        None => KnotSet::on_ellipse(&case.problem.domain, run.boundary_n, run.interior_l)
            .map_err(|e| CliError::invalid(e.to_string()))?,
    };
    if let Some(path) = &run.knots_out {
        let file = File::create(path)?;
        knots.write_csv(file).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    }
    let overrides = RunOverrides {
        rbf_pair: Some(run.pair),
        eval_points: run.eval_points.as_deref().map(read_points).transpose()?,
        knots: Some(knots),
    };
    let report = run_case(&case, 0, 0, &overrides).map_err(classify)?;
    check_conditioning(&report)?;

    let text = match run.output {
        OutputFormat::Table => output::run_table(&case, &report, decimals),
        OutputFormat::Csv => output::csv(&report).map_err(|e| CliError::Io(e.into()))?,
        OutputFormat::Json => {
            let mut s = output::json(&report).map_err(|e| CliError::Io(e.into()))?;
            s.push('\n');
            s
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Condition estimates beyond `1/ε` leave no correct digits.
const SINGULAR_CONDITION: f64 = 1.0 / f64::EPSILON;

fn check_conditioning(report: &Report<f64>) -> Result<(), CliError> {
    let s = &report.summary;
    let stages = [("interpolation", s.condition_estimate_drm), ("collocation", Some(s.condition_estimate_bkm))];
    for (stage, estimate) in stages {
        if let Some(c) = estimate.filter(|c| !(*c < SINGULAR_CONDITION)) {
            return Err(CliError::Numerical(format!(
                "{stage} system is numerically singular; condition estimate: {c:.3e}"
            )));
        }
    }
    if report.rows.iter().any(|r| !r.computed.is_finite()) {
        return Err(CliError::Numerical(format!(
            "non-finite solution values; condition estimate (collocation): {:.3e}",
            s.condition_estimate_bkm
        )));
    }
    Ok(())
}

fn cmd_table(index: usize, out: &mut impl Write) -> Result<(), CliError> {
    let name = CaseName::from_table(index).map_err(|e| CliError::invalid(e.to_string()))?;
    let decimals = output::table_decimals().map_err(CliError::invalid)?;
    let case = builtin::<f64>(name);
    let report = run_case(&case, case.default_boundary, case.default_interior, &RunOverrides::default()).map_err(classify)?;
    check_conditioning(&report)?;
    out.write_all(output::published_table(&case, &report, decimals).as_bytes())?;
    Ok(())
}

fn cmd_verify(out: &mut impl Write) -> Result<(), CliError> {
    let report = verify::run_all();
    for check in &report.checks {
        writeln!(out, "{check}")?;
    }
    writeln!(out, "convection-diffusion kernel: {}", report.conv_diff_verdict)?;
    let failed = report.checks.iter().filter(|c| c.mandatory && !c.passed()).count();
    if failed > 0 {
        return Err(CliError::Check(format!("{failed} mandatory checks failed")));
    }
    writeln!(out, "all mandatory checks passed")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, &mut stdout),
        Command::Table { index } => cmd_table(*index, &mut stdout),
        Command::Verify => cmd_verify(&mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! `hartley`: apply transforms, run verification suites and solve the
//! second-kind equations from the command line.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hartley_core::equations::{residual_report, rhs_by_name, solve_fn, EquationId};
use hartley_core::funcspace::{catalog, fmt17, GridSpec, RealFunction};
use hartley_core::mellin::TauGrid;
use hartley_core::quadrature::QuadratureConfig;
use hartley_core::transforms::{OperatorId, Route, TransformConfig};
use hartley_core::verify::{run_suite, Suite, VerifyConfig};
use hartley_core::Error;

#[derive(Parser)]
#[command(name = "hartley", version, about = "Half-Hartley transforms and related singular integral equations")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Ratio q of the geometric x-grid used by norms and reports.
    #[arg(long, global = true, default_value_t = 2f64.powf(0.125))]
    grid_ratio: f64,
    /// Nodes on each side of x = 1 (the grid is q^-m .. q^m).
    #[arg(long, global = true, default_value_t = 64)]
    grid_half_span: usize,
    #[arg(long, global = true, default_value_t = 1e-10)]
    abs_tol: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    rel_tol: f64,
    /// Spacing of the Mellin τ-grid.
    #[arg(long, global = true, default_value_t = 0.02)]
    tau_step: f64,
    /// The τ-grid covers [-tau_max, tau_max].
    #[arg(long, global = true, default_value_t = 40.0)]
    tau_max: f64,
    /// Write reports into this directory instead of standard output.
    #[arg(long, global = true, env = "HARTLEY_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a transform of a catalog function on an x-range.
    Transform {
        #[arg(long)]
        op: String,
        #[arg(long = "fn")]
        function: String,
        #[arg(long, default_value = "kernel")]
        route: String,
        /// start:stop:count, geometrically spaced.
        #[arg(long, default_value = "0.25:4:16")]
        x: String,
        /// Apply the inverse transform instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Run a verification suite and write its JSON report.
    Verify { suite: String },
    /// Solve a second-kind equation for a named right-hand side.
    Solve {
        #[arg(long)]
        eq: String,
        #[arg(long, default_value = "exp-image")]
        g: String,
        #[arg(long, default_value = "0.5:2:4")]
        x: String,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotFound(_) | Error::Capability { .. } | Error::Config(_) | Error::Domain(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("output: {e}"))
    }
}

impl RunConfig {
    fn verify_config(&self) -> Result<VerifyConfig, Failure> {
        let quadrature = QuadratureConfig { abs_tol: self.abs_tol, rel_tol: self.rel_tol, ..Default::default() };
        quadrature.validate()?;
        let transform = TransformConfig { quadrature, tau: TauGrid::new(self.tau_step, self.tau_max)?, ..Default::default() };
        Ok(VerifyConfig { transform, grid: GridSpec::new(self.grid_ratio, self.grid_half_span)? })
    }

    /// Writes `body` to standard output or to `name` in the output directory.
    fn emit(&self, name: &str, body: &str) -> Result<(), Failure> {
        match &self.out_dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(name);
                fs::write(&path, body)?;
                eprintln!("wrote {}", path.display());
            }
            None => io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Parses `start:stop:count` into geometrically spaced abscissae.
fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Usage(format!("x-range must be start:stop:count with positive bounds, got `{s}`"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) || n == 0 {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let r = (b / a).ln();
    Ok((0..n)
        .map(|i| if i + 1 == n { b } else { a * (r * i as f64 / (n - 1) as f64).exp() })
        .collect())
}

/// Rows as CSV under `header`, or as a JSON array of objects.
fn table(format: Format, header: &[&str], rows: &[Vec<f64>]) -> String {
    match format {
        Format::Csv => {
            let mut out = header.join(",") + "\n";
            for row in rows {
                out += &row.iter().map(|v| fmt17(*v)).collect::<Vec<_>>().join(",");
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let m: serde_json::Map<String, serde_json::Value> =
                        header.iter().zip(row).map(|(h, v)| (h.to_string(), serde_json::json!(v))).collect();
                    serde_json::Value::Object(m)
                })
                .collect();
            serde_json::to_string_pretty(&objs).expect("json") + "\n"
        }
    }
}

fn finite_or_fail(v: f64, what: &str, x: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Numerical(format!("{what} failed at x = {x}")))
    }
}

fn cmd_transform(run: &RunConfig, op: &str, function: &str, route: &str, x: &str, inverse: bool) -> Result<(), Failure> {
    let op: OperatorId = op.parse()?;
    let route: Route = route.parse()?;
    let f = catalog(function)?;
    let xs = parse_range(x)?;
    let cfg = run.verify_config()?.transform;
    let tf = if inverse { cfg.inverse_fn(op, &f, route)? } else { cfg.forward_fn(op, &f, route)? };
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        rows.push(vec![x, finite_or_fail(tf.eval(x), op.name(), x)?]);
    }
    let dir = if inverse { "inverse" } else { "forward" };
    let name = format!("transform_{}_{dir}_{}_{}.{}", op.name(), function, route.name(), run.extension());
    run.emit(&name, &table(run.format, &["x", "value"], &rows))
}

fn cmd_verify(run: &RunConfig, suite: &str) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, &run.verify_config()?);
    let body = serde_json::to_string_pretty(&report).expect("json") + "\n";
    run.emit(&format!("verify_{}.json", suite.name()), &body)?;
    if report.passed() {
        Ok(())
    } else {
        for c in report.checks.iter().filter(|c| !c.pass) {
            eprintln!("failed: {} = {:e} (threshold {:e})", c.name, c.value, c.threshold);
        }
        Err(Failure::Checks)
    }
}

fn cmd_solve(run: &RunConfig, eq: &str, g: &str, x: &str) -> Result<(), Failure> {
    let eq: EquationId = eq.parse()?;
    let rhs: RealFunction = rhs_by_name(g)?;
    let xs = parse_range(x)?;
    let cfg = run.verify_config()?.transform;
    let f = solve_fn(&cfg, eq, &rhs)?;
    let res = residual_report(&cfg, eq, &f, None, Some(&rhs), &xs)?;
    let mut rows = Vec::with_capacity(xs.len());
    for (&x, r) in xs.iter().zip(&res.values) {
        rows.push(vec![x, finite_or_fail(f.eval(x), eq.name(), x)?, *r]);
    }
    let name = format!("solve_{}_{}.{}", eq.name(), g, run.extension());
    run.emit(&name, &table(run.format, &["x", "f", "residual"], &rows))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Transform { op, function, route, x, inverse } => cmd_transform(&cli.run, op, function, route, x, *inverse),
        Command::Verify { suite } => cmd_verify(&cli.run, suite),
        Command::Solve { eq, g, x } => cmd_solve(&cli.run, eq, g, x),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

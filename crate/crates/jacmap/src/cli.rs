//! Command-line front end.
//!
//! `run` parses an argument list and executes one subcommand, returning the
//! exit status and the exact text that would go to the standard streams;
//! the binary entry point is a thin wrapper around it, which keeps every
//! code path testable byte for byte. Output is deterministic for
//! deterministic inputs. Exit status: 0 on success, 1 on analysis failures
//! (non-invertible verdicts under `--strict`, failed inversions), 2 on
//! usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analyzer::{certify, normalize_translated, Certificate, PolyMap, Verdict};
use crate::certdoc::CertificateDocument;
use crate::dynamics::{
    basin_scan, eigen_certificate_sample, integrate, IntegrateOptions, VectorField,
};
use crate::inverter::{formal_inverse, InverseResult, DEFAULT_TRUNCATION_CAP};
use crate::oracle::{
    catalog, gen_quadratic_family, grid_injectivity, sample_corpus_map, CorpusOptions,
};
use crate::parse::{format_gap_set, parse_map, parse_poly};
use crate::poly::Rational;

/// Exit status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    status: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        message: message.into(),
    }
}

fn analysis_failure(message: impl Into<String>) -> Failure {
    Failure {
        status: 1,
        message: message.into(),
    }
}

#[derive(Parser)]
#[command(
    name = "jacmap",
    version,
    about = "Exact analyzer for planar polynomial maps",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide jacobian-map status, check conditions, print the verdict
    Analyze(AnalyzeCmd),
    /// Compute a polynomial inverse and verify it by exact composition
    Invert(InvertCmd),
    /// Print the gap set of a polynomial
    Gapset(GapsetCmd),
    /// Integrate the vector field attached to a map
    Simulate(SimulateCmd),
    /// Generate maps from known-invertible families
    Gen(GenCmd),
    /// Run the built-in worked examples against their expected facts
    Catalog(CatalogCmd),
}

#[derive(Args)]
struct ExprInput {
    /// Inline expression; omit when using --file
    #[arg(value_name = "EXPR", allow_hyphen_values = true)]
    expr: Option<String>,
    /// Read the expression from a file
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

impl ExprInput {
    fn text(&self) -> Result<String, Failure> {
        match (&self.expr, &self.file) {
            (Some(expr), None) => Ok(expr.clone()),
            (None, Some(path)) => fs::read_to_string(path)
                .map(|s| s.trim().to_string())
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display()))),
            (Some(_), Some(_)) => Err(usage("give an inline expression or --file, not both")),
            (None, None) => Err(usage("missing expression; pass it inline or via --file")),
        }
    }

    fn map(&self) -> Result<PolyMap, Failure> {
        let text = self.text()?;
        parse_map(&text).map_err(|e| usage(format!("bad map: {e}")))
    }
}

#[derive(Args)]
struct OutputArg {
    /// Write the output to a file instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable report
    Text,
    /// jacmap-cert/1 certificate document
    Cert,
}

#[derive(Args)]
struct AnalyzeCmd {
    #[command(flatten)]
    input: ExprInput,
    /// Exit with status 1 unless the verdict is invertible
    #[arg(long)]
    strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also scan an exact rational grid for image collisions: N points per
    /// axis on [A, B]^2 (text format only)
    #[arg(long, num_args = 3, value_names = ["A", "B", "N"], allow_hyphen_values = true)]
    grid: Option<Vec<String>>,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct InvertCmd {
    #[command(flatten)]
    input: ExprInput,
    /// Ceiling for the truncation degree of the fixed-point search
    #[arg(long, value_name = "D", default_value_t = DEFAULT_TRUNCATION_CAP)]
    cap: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct GapsetCmd {
    #[command(flatten)]
    input: ExprInput,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct SimulateCmd {
    #[command(flatten)]
    input: ExprInput,
    /// Integrate a single trajectory from this starting point
    #[arg(long, num_args = 2, value_names = ["U", "V"], allow_hyphen_values = true, conflicts_with = "basin")]
    start: Option<Vec<f64>>,
    /// Scan a grid of starting points and report convergence counts
    #[arg(long)]
    basin: bool,
    /// Basin grid: N points per axis on [A, B]^2 (default -2 2 10)
    #[arg(long, num_args = 3, value_names = ["A", "B", "N"], allow_hyphen_values = true, requires = "basin")]
    grid: Option<Vec<String>>,
    /// Integration horizon
    #[arg(long, value_name = "T", default_value_t = 50.0)]
    tmax: f64,
    /// Local error tolerance and convergence norm threshold
    #[arg(long, value_name = "E", default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct GenCmd {
    #[command(subcommand)]
    family: GenFamily,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Quadratic family: nonsingular linear map plus a squared line
    Quadratic(QuadraticArgs),
    /// Random compositions of univariate shears and nonsingular linear maps
    Elementary(ElementaryArgs),
}

#[derive(Args)]
struct QuadraticArgs {
    /// Family parameters (rationals)
    #[arg(num_args = 7, value_names = ["A", "B", "C", "D", "MU", "ALPHA", "BETA"], allow_hyphen_values = true)]
    params: Vec<String>,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct ElementaryArgs {
    /// Seed for the deterministic sampler
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// How many maps to print
    #[arg(long, value_name = "N", default_value_t = 1)]
    count: usize,
    /// Most composition steps per map
    #[arg(long, value_name = "N", default_value_t = 4)]
    max_steps: usize,
    /// Highest shear polynomial degree
    #[arg(long, value_name = "D", default_value_t = 6)]
    max_degree: u32,
    /// Largest absolute integer coefficient
    #[arg(long, value_name = "H", default_value_t = 8)]
    max_height: i64,
    #[command(flatten)]
    output: OutputArg,
}

#[derive(Args)]
struct CatalogCmd {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    output: OutputArg,
}

/// Parse an argument list and execute it, capturing the streams.
pub fn run<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let rendered = err.render().to_string();
            return if err.use_stderr() {
                CliOutcome {
                    status: 2,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                // --help and --version land here with success status
                CliOutcome {
                    status: 0,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(outcome) => outcome,
        Err(failure) => CliOutcome {
            status: failure.status,
            stdout: String::new(),
            stderr: format!("error: {}\n", failure.message),
        },
    }
}

fn execute(command: Command) -> Result<CliOutcome, Failure> {
    match command {
        Command::Analyze(cmd) => run_analyze(cmd),
        Command::Invert(cmd) => run_invert(cmd),
        Command::Gapset(cmd) => run_gapset(cmd),
        Command::Simulate(cmd) => run_simulate(cmd),
        Command::Gen(cmd) => run_gen(cmd),
        Command::Catalog(cmd) => run_catalog(cmd),
    }
}

fn deliver(
    status: i32,
    payload: String,
    stderr: String,
    out: &Option<PathBuf>,
) -> Result<CliOutcome, Failure> {
    let stdout = match out {
        None => payload,
        Some(path) => {
            fs::write(path, payload)
                .map_err(|e| analysis_failure(format!("cannot write {}: {e}", path.display())))?;
            String::new()
        }
    };
    Ok(CliOutcome {
        status,
        stdout,
        stderr,
    })
}

fn parse_rational_arg(text: &str) -> Result<Rational, Failure> {
    parse_poly(text)
        .ok()
        .and_then(|p| p.as_constant())
        .ok_or_else(|| usage(format!("`{text}` is not a rational number")))
}

fn parse_grid_arg(values: &[String]) -> Result<(Rational, Rational, usize), Failure> {
    let lo = parse_rational_arg(&values[0])?;
    let hi = parse_rational_arg(&values[1])?;
    if lo >= hi {
        return Err(usage("grid lower bound must be below the upper bound"));
    }
    let n: usize = values[2]
        .parse()
        .map_err(|_| usage(format!("`{}` is not a point count", values[2])))?;
    if n == 0 {
        return Err(usage("grid needs at least one point per axis"));
    }
    Ok((lo, hi, n))
}

fn render_verdict_line(verdict: &Verdict) -> String {
    match verdict {
        Verdict::Invertible { via } => {
            let labels: Vec<&str> = via.iter().map(|c| c.label()).collect();
            format!("verdict: invertible\nvia: {}\n", labels.join(", "))
        }
        other => format!("verdict: {}\n", other.label()),
    }
}

fn render_analysis(m: &PolyMap, cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "map: {m}");
    let _ = writeln!(out, "jacobian: {}", cert.report.is_jacobian);
    match &cert.report.det_value {
        Some(value) => {
            let _ = writeln!(out, "det: {value}");
        }
        None => {
            let _ = writeln!(out, "det-poly: {}", cert.report.det_poly);
        }
    }
    out.push_str(&render_verdict_line(&cert.verdict));
    let _ = writeln!(out, "trace-part-zero: {}", cert.flags.trace_part_zero);
    let _ = writeln!(out, "det-part-zero: {}", cert.flags.det_part_zero);
    out
}

fn run_analyze(cmd: AnalyzeCmd) -> Result<CliOutcome, Failure> {
    let m = cmd.input.map()?;
    let cert = certify(&m);
    let payload = match cmd.format {
        Format::Cert => {
            if cmd.grid.is_some() {
                return Err(usage("--grid is only available with --format text"));
            }
            CertificateDocument::from_certificate(&cert, None).emit()
        }
        Format::Text => {
            let mut text = render_analysis(&m, &cert);
            if let Some(values) = &cmd.grid {
                let (lo, hi, n) = parse_grid_arg(values)?;
                let report = grid_injectivity(&m, &lo, &hi, n);
                let _ = writeln!(
                    text,
                    "grid-scan: {} points on [{lo}, {hi}]^2, {} collisions",
                    report.points_tested,
                    report.collisions.len()
                );
                for ((x1, y1), (x2, y2)) in report.collisions.iter().take(3) {
                    let _ = writeln!(text, "collision: ({x1}, {y1}) and ({x2}, {y2})");
                }
            }
            text
        }
    };
    let status = if cmd.strict && !cert.verdict.is_invertible() {
        1
    } else {
        0
    };
    deliver(status, payload, String::new(), &cmd.output.out)
}

fn run_invert(cmd: InvertCmd) -> Result<CliOutcome, Failure> {
    let m = cmd.input.map()?;
    let result: InverseResult = formal_inverse(&m, cmd.cap)
        .map_err(|e| analysis_failure(format!("cannot invert {m}: {e}")))?;
    let payload = match cmd.format {
        Format::Cert => CertificateDocument::from_certificate(&certify(&m), Some(&result)).emit(),
        Format::Text => format!(
            "map: {m}\ninverse: {}\ntruncation-degree: {}\nverified: {}\n",
            result.inverse, result.truncation_degree_used, result.verified
        ),
    };
    deliver(0, payload, String::new(), &cmd.output.out)
}

fn run_gapset(cmd: GapsetCmd) -> Result<CliOutcome, Failure> {
    let text = cmd.input.text()?;
    let poly = parse_poly(&text).map_err(|e| usage(format!("bad polynomial: {e}")))?;
    let payload = format!("{}\n", format_gap_set(&poly.gap_set()));
    deliver(0, payload, String::new(), &cmd.output.out)
}

fn run_simulate(cmd: SimulateCmd) -> Result<CliOutcome, Failure> {
    let m = cmd.input.map()?;
    let field = VectorField::from_map(&m)
        .map_err(|e| analysis_failure(format!("cannot simulate {m}: {e}")))?;
    let opts = IntegrateOptions {
        t_max: cmd.tmax,
        tol: cmd.tol,
        ..Default::default()
    };

    if let Some(start) = &cmd.start {
        let traj = integrate(&field, start[0], start[1], &opts);
        let payload = traj.dump();
        let mut stderr = format!(
            "converged: {}, final norm {:.3e}, {} samples\n",
            traj.converged,
            traj.final_norm,
            traj.samples.len()
        );
        if traj.diverged {
            stderr.push_str("diverged: state norm left the tracked region\n");
        }
        if traj.step_underflow {
            stderr.push_str("step underflow: error control hit the minimum step\n");
        }
        return deliver(0, payload, stderr, &cmd.output.out);
    }

    if !cmd.basin {
        return Err(usage("choose --start U V or --basin"));
    }
    let default_grid = ["-2".to_string(), "2".to_string(), "10".to_string()];
    let grid_values: &[String] = cmd.grid.as_deref().unwrap_or(&default_grid);
    let (lo, hi, n) = parse_grid_arg(grid_values)?;
    use num_traits::ToPrimitive;
    let (lo_f, hi_f) = (
        lo.to_f64().unwrap_or(f64::NAN),
        hi.to_f64().unwrap_or(f64::NAN),
    );
    let report = basin_scan(&field, lo_f, hi_f, n, &opts);
    let normalized = normalize_translated(&m)
        .map_err(|e| analysis_failure(format!("cannot sample eigenvalues of {m}: {e}")))?;
    let eigen = eigen_certificate_sample(&normalized);
    let mut payload = format!(
        "basin: {}/{} converged on {}x{} grid over [{lo}, {hi}]^2\n",
        report.converged_count, report.total, n, n
    );
    for (u, v) in &report.failures {
        let _ = writeln!(payload, "failed: ({u}, {v})");
    }
    let _ = writeln!(
        payload,
        "eigen-sample: trace in [{}, {}], min det {}",
        eigen.min_trace, eigen.max_trace, eigen.min_det
    );
    deliver(0, payload, String::new(), &cmd.output.out)
}

fn run_gen(cmd: GenCmd) -> Result<CliOutcome, Failure> {
    match cmd.family {
        GenFamily::Quadratic(args) => {
            let mut params = Vec::with_capacity(7);
            for raw in &args.params {
                params.push(parse_rational_arg(raw)?);
            }
            let [a, b, c, d, mu, alpha, beta]: [Rational; 7] =
                params.try_into().expect("clap enforces 7 values");
            let m = gen_quadratic_family(a, b, c, d, mu, alpha, beta)
                .map_err(|e| analysis_failure(e.to_string()))?;
            deliver(0, format!("{m}\n"), String::new(), &args.output.out)
        }
        GenFamily::Elementary(args) => {
            let opts = CorpusOptions {
                max_steps: args.max_steps,
                max_shear_degree: args.max_degree,
                max_height: args.max_height,
                ..Default::default()
            };
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let mut payload = String::new();
            let mut stderr = String::new();
            for _ in 0..args.count {
                let (m, steps) = sample_corpus_map(&mut rng, &opts);
                let _ = writeln!(payload, "{m}");
                let described: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
                let _ = writeln!(stderr, "steps: {}", described.join(" ; "));
            }
            deliver(0, payload, stderr, &args.output.out)
        }
    }
}

fn run_catalog(cmd: CatalogCmd) -> Result<CliOutcome, Failure> {
    let entries = catalog();
    let mut payload = String::new();
    let mut all_ok = true;
    match cmd.format {
        Format::Cert => {
            for (i, entry) in entries.iter().enumerate() {
                let cert = certify(&entry.map);
                let inverse = if cert.verdict.is_invertible() {
                    formal_inverse(&entry.map, DEFAULT_TRUNCATION_CAP).ok()
                } else {
                    None
                };
                if i > 0 {
                    payload.push('\n');
                }
                payload.push_str(
                    &CertificateDocument::from_certificate(&cert, inverse.as_ref()).emit(),
                );
            }
        }
        Format::Text => {
            for entry in &entries {
                let problems = entry.check();
                let status = if problems.is_empty() { "ok" } else { "FAILED" };
                let _ = writeln!(payload, "{}: {status}", entry.name);
                let _ = writeln!(payload, "  map: {}", entry.map);
                let _ = writeln!(payload, "  summary: {}", entry.summary);
                let cert = certify(&entry.map);
                let _ = writeln!(payload, "  verdict: {}", cert.verdict.label());
                if let Verdict::Invertible { via } = &cert.verdict {
                    let labels: Vec<&str> = via.iter().map(|c| c.label()).collect();
                    let _ = writeln!(payload, "  via: {}", labels.join(", "));
                }
                if let Some(note) = entry.note {
                    let _ = writeln!(payload, "  note: {note}");
                }
                for problem in &problems {
                    let _ = writeln!(payload, "  problem: {problem}");
                    all_ok = false;
                }
            }
            let checked = entries.iter().filter(|e| e.check().is_empty()).count();
            let _ = writeln!(
                payload,
                "catalog: {checked}/{} entries check",
                entries.len()
            );
        }
    }
    let status = if all_ok { 0 } else { 1 };
    deliver(status, payload, String::new(), &cmd.output.out)
}

//! The `realbinom` command line: `eval`, `slice`, `verify`, `converge`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 domain error,
//! 64 usage or parse error, 74 output error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::{convergence_scan, ConvergenceReport, DEFAULT_R_GRID};
use crate::binom::{binom, Backend, BinomArgs};
use crate::error::{Error, Result};
use crate::fmt::decimal;
use crate::harness;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// Environment variable supplying the default `verify` seed.
pub const SEED_ENV: &str = "REALBINOM_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "realbinom",
    version,
    about = "Binomial coefficients of real arguments",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate B(r, alpha).
    Eval(EvalArgs),
    /// Write a 1-D slice of the B(r, alpha) surface as CSV.
    Slice(SliceArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Tabulate B(r, r*alpha) over its asymptotic form as CSV.
    Converge(ConvergeArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// stirling-loggamma | euler-gauss:<n> | closed-form-prop2
    #[arg(long, default_value = "stirling-loggamma")]
    pub backend: Backend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SliceMode {
    /// r fixed, alpha swept.
    FixedR,
    /// alpha fixed, r swept.
    FixedAlpha,
    /// r swept with alpha = fixed * r (fixed defaults to 0.5).
    Diagonal,
}

#[derive(Debug, Args)]
pub struct SliceArgs {
    #[arg(long, value_enum)]
    pub mode: SliceMode,
    #[arg(long, allow_negative_numbers = true)]
    pub fixed: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub end: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value = "stirling-loggamma")]
    pub backend: Backend,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    /// One JSON object per property.
    Jsonl,
    Text,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only properties whose name starts with this prefix.
    #[arg(long)]
    pub filter: Option<String>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: ReportFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include wall-clock timings (makes the output non-deterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Comma-separated, strictly increasing r values.
    #[arg(long = "r", value_delimiter = ',', allow_negative_numbers = true)]
    pub r_values: Vec<f64>,
    #[arg(long)]
    pub integer_only: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A 1-D slice of the `B(r, α)` surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceSpec {
    pub mode: SliceMode,
    pub fixed_value: f64,
    pub range_start: f64,
    pub range_end: f64,
    pub steps: usize,
    pub backend: Backend,
}

impl SliceSpec {
    pub fn new(
        mode: SliceMode,
        fixed_value: f64,
        range_start: f64,
        range_end: f64,
        steps: usize,
        backend: Backend,
    ) -> Result<Self> {
        if !(fixed_value.is_finite() && range_start.is_finite() && range_end.is_finite()) {
            return Err(Error::InvalidInput("slice bounds must be finite".into()));
        }
        if !(range_start < range_end) {
            return Err(Error::InvalidInput(format!(
                "slice needs start < end, got {range_start} and {range_end}"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidInput("slice needs at least 2 steps".into()));
        }
        Ok(SliceSpec {
            mode,
            fixed_value,
            range_start,
            range_end,
            steps,
            backend,
        })
    }

    /// Grid points `(r, α)` in sweep order; the last one sits exactly on
    /// `range_end`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let last = self.steps - 1;
        let span = self.range_end - self.range_start;
        (0..self.steps)
            .map(|i| {
                let t = if i == last {
                    self.range_end
                } else {
                    self.range_start + span * (i as f64 / last as f64)
                };
                match self.mode {
                    SliceMode::FixedR => (self.fixed_value, t),
                    SliceMode::FixedAlpha => (t, self.fixed_value),
                    SliceMode::Diagonal => (t, self.fixed_value * t),
                }
            })
            .collect()
    }
}

/// Writes `r,alpha,value,log_value,backend`, one row per grid point. Points
/// that cannot be evaluated keep their row with empty value fields; an
/// overflowing value keeps its log.
pub fn write_slice_csv(slice: &SliceSpec, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "r,alpha,value,log_value,backend")?;
    for (r, alpha) in slice.points() {
        let result = BinomArgs::new(r, alpha).and_then(|args| binom(args, slice.backend));
        let (value, log_value) = match result {
            Ok(res) => (decimal(res.value), decimal(res.log_value)),
            Err(Error::Overflow { log_value }) | Err(Error::Underflow { log_value }) => {
                (String::new(), decimal(log_value))
            }
            Err(_) => (String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            decimal(r),
            decimal(alpha),
            value,
            log_value,
            slice.backend
        )?;
    }
    Ok(())
}

pub fn write_convergence_csv(report: &ConvergenceReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "r,ratio,abs_dev")?;
    for row in &report.rows {
        writeln!(
            out,
            "{},{},{}",
            decimal(row.r),
            decimal(row.ratio),
            decimal(row.abs_dev)
        )?;
    }
    Ok(())
}

/// Human-readable summary of a convergence report.
pub fn monotonicity_summary(report: &ConvergenceReport) -> String {
    let verdict = if report.is_strictly_decreasing() {
        "strictly decreasing"
    } else if report.is_non_increasing() {
        "non-increasing"
    } else {
        "NOT monotone"
    };
    format!(
        "alpha={} rows={} abs_dev {} (last {})",
        decimal(report.alpha),
        report.rows.len(),
        verdict,
        decimal(report.last().abs_dev)
    )
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::UnknownProperty(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

fn report_error(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "error: {e}");
    exit_code(e)
}

/// Runs `body` against the requested output: a buffered file, or `stdout`.
fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    err: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> i32 {
    let result = match path {
        Some(p) => File::create(p).and_then(|f| {
            let mut w = BufWriter::new(f);
            body(&mut w)?;
            w.flush()
        }),
        None => body(stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let target = path.map_or("standard output".to_string(), |p| p.display().to_string());
            let _ = writeln!(err, "error: cannot write {target}: {e}");
            EXIT_IO
        }
    }
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let parsed = match BinomArgs::new(args.r, args.alpha) {
        Ok(a) => a,
        Err(e) => return report_error(err, &e),
    };
    let (value, log_value, err_estimate) = match binom(parsed, args.backend) {
        Ok(res) => (decimal(res.value), res.log_value, decimal(res.err_estimate)),
        Err(Error::Overflow { log_value }) => ("overflow".into(), log_value, "-".into()),
        Err(Error::Underflow { log_value }) => ("underflow".into(), log_value, "-".into()),
        Err(e) => return report_error(err, &e),
    };
    with_output(None, out, err, |w| {
        writeln!(w, "value = {value}")?;
        writeln!(w, "log_value = {}", decimal(log_value))?;
        writeln!(w, "backend = {}", args.backend)?;
        writeln!(w, "err_estimate = {err_estimate}")
    })
}

pub fn cmd_slice(args: &SliceArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let fixed = match (args.mode, args.fixed) {
        (_, Some(v)) => v,
        (SliceMode::Diagonal, None) => 0.5,
        (_, None) => {
            return report_error(
                err,
                &Error::InvalidInput("--fixed is required for fixed-r and fixed-alpha".into()),
            )
        }
    };
    let slice = match SliceSpec::new(
        args.mode,
        fixed,
        args.start,
        args.end,
        args.steps,
        args.backend,
    ) {
        Ok(s) => s,
        Err(e) => return report_error(err, &e),
    };
    with_output(args.output.as_deref(), out, err, |w| {
        write_slice_csv(&slice, w)
    })
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let prefix = args.filter.as_deref().unwrap_or("");
    let reports = match harness::run_matching(prefix, args.seed) {
        Ok(r) => r,
        Err(e) => return report_error(err, &e),
    };
    let code = with_output(args.output.as_deref(), out, err, |w| {
        for rep in &reports {
            let line = match args.format {
                ReportFormat::Jsonl => rep.to_json_line(args.timings),
                ReportFormat::Text => rep.to_text_line(args.timings),
            };
            writeln!(w, "{line}")?;
        }
        Ok(())
    });
    if code != EXIT_OK {
        return code;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let _ = writeln!(
        err,
        "{} of {} properties passed (seed {})",
        reports.len() - failed,
        reports.len(),
        args.seed
    );
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}

pub fn cmd_converge(args: &ConvergeArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let r_values: &[f64] = if args.r_values.is_empty() {
        &DEFAULT_R_GRID
    } else {
        &args.r_values
    };
    let report = match convergence_scan(args.alpha, r_values, args.integer_only) {
        Ok(r) => r,
        Err(e) => return report_error(err, &e),
    };
    let code = with_output(args.output.as_deref(), out, err, |w| {
        write_convergence_csv(&report, w)
    });
    if code == EXIT_OK {
        let _ = writeln!(err, "{}", monotonicity_summary(&report));
    }
    code
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match &cli.command {
        Command::Eval(a) => cmd_eval(a, out, err),
        Command::Slice(a) => cmd_slice(a, out, err),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Converge(a) => cmd_converge(a, out, err),
    }
}

//! Command-line front end: `validate`, `curvature`, `flow`, `classify`, `sweep`.
//!
//! Exit codes: 0 on success, 1 for mathematical failures (degenerate metric,
//! stall, failed extension check), 2 for usage, parse and domain errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::{self, ValidityReport};
use crate::curvature;
use crate::error::{Error, Result};
use crate::flow::{self, FlowOptions, FlowStatus, SingularityReport, Trajectory, TypeVerdict};
use crate::potential::{KahlerPotential, PotentialExpr};

#[derive(Debug, Parser)]
#[command(name = "blowup-mcf", version, about = "Mean curvature flow of hyperspheres in Kähler blow-ups of C^m")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that log S + g extends to a Kähler metric across the divisor.
    Validate(ValidateArgs),
    /// Principal curvatures, H and |A|² of the sphere of radius R.
    Curvature(CurvatureArgs),
    /// Integrate dR/dt = H(R) to the collapse and write the trajectory.
    Flow(FlowArgs),
    /// Integrate and report singularity time and type.
    Classify(FlowArgs),
    /// Run independent flows over a grid of initial radii.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PotentialArgs {
    /// g(S) in f = log S + g(S).
    #[arg(long, required_unless_present = "flat", conflicts_with = "flat", allow_hyphen_values = true)]
    potential: Option<String>,
    /// Use the Euclidean potential f = S instead.
    #[arg(long)]
    flat: bool,
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
    m: u32,
}

impl PotentialArgs {
    fn load(&self) -> Result<(KahlerPotential, String)> {
        match (&self.potential, self.flat) {
            (_, true) => Ok((KahlerPotential::Flat, "flat".to_string())),
            (Some(text), false) => Ok((KahlerPotential::parse(text)?, text.clone())),
            (None, false) => Err(Error::InvalidArgument("--potential is required".into())),
        }
    }
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, allow_hyphen_values = true)]
    potential: String,
    #[arg(long, default_value_t = blowup::DEFAULT_S_MAX)]
    s_max: f64,
    #[arg(long, default_value_t = blowup::DEFAULT_SAMPLES)]
    samples: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CurvatureArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    radius: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct FlowFlags {
    #[arg(long, default_value_t = 1e-8)]
    r_stop: f64,
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_steps: usize,
    /// Time between recorded samples (default: every accepted step).
    #[arg(long)]
    stride: Option<f64>,
}

impl FlowFlags {
    fn options(&self) -> FlowOptions {
        FlowOptions {
            r_stop: self.r_stop,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_steps: self.max_steps,
            output_stride: self.stride,
        }
    }
}

#[derive(Debug, Args)]
struct FlowArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    r0: f64,
    #[command(flatten)]
    flow: FlowFlags,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    r0_min: f64,
    #[arg(long)]
    r0_max: f64,
    #[arg(long)]
    steps: usize,
    #[command(flatten)]
    flow: FlowFlags,
    #[command(flatten)]
    output: OutputArgs,
}

/// Fixed 17-significant-digit scientific notation.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn csv_writer(w: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn csv_error(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn io_error(e: io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

/// Runs `body` against `--out` when given, otherwise against `stdout`.
fn with_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(io_error)
        }
        None => body(stdout),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate(a) => cmd_validate(a, stdout, stderr),
        Command::Curvature(a) => cmd_curvature(a, stdout),
        Command::Flow(a) => cmd_flow(a, stdout, stderr),
        Command::Classify(a) => cmd_classify(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn failure_message(report: &ValidityReport, condition: &str) -> String {
    let at = report
        .first_violation_s
        .map(|s| format!(" (first violation at S = {s})"))
        .unwrap_or_default();
    match condition {
        "g_S(0) > 0" => format!("g_S(0) = {}: extension condition fails", report.g_s_at_0),
        other => format!("{other}: positivity condition fails{at}"),
    }
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let expr = PotentialExpr::parse(&a.potential)?;
    let report = blowup::check_validity(&expr, a.s_max, a.samples)?;
    with_output(&a.output.out, stdout, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &report)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w).map_err(io_error)
        }
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record(["condition", "passed"]).map_err(csv_error)?;
            let rows = [
                ("g_S(0) > 0", report.cond_extension),
                ("1/S + g_S > 0", report.cond_positive_1),
                ("g_S + S g_SS > 0", report.cond_positive_2),
            ];
            for (name, ok) in rows {
                csv.write_record([name, if ok { "pass" } else { "fail" }]).map_err(csv_error)?;
            }
            csv.write_record(["g_S(0)", &num(report.g_s_at_0)]).map_err(csv_error)?;
            csv.flush().map_err(io_error)
        }
    })?;
    if report.is_valid() {
        return Ok(0);
    }
    for condition in report.failing_conditions() {
        writeln!(stderr, "{}", failure_message(&report, condition)).map_err(io_error)?;
    }
    Ok(1)
}

fn cmd_curvature(a: &CurvatureArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (pot, _) = a.potential.load()?;
    let sample = curvature::sample(&pot, a.potential.m, a.radius)?;
    with_output(&a.output.out, stdout, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer(&mut *w, &sample).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w).map_err(io_error)
        }
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record(["R", "lambda_tan", "lambda_last", "H", "A_sq"]).map_err(csv_error)?;
            csv.write_record([
                num(sample.r),
                num(sample.lambda_tan),
                num(sample.lambda_last),
                num(sample.h),
                num(sample.a_sq),
            ])
            .map_err(csv_error)?;
            csv.flush().map_err(io_error)
        }
    })?;
    Ok(0)
}

fn write_trajectory(w: &mut dyn Write, traj: &Trajectory, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *w, &traj.samples).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w).map_err(io_error)
        }
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record(["t", "R", "H", "A_sq"]).map_err(csv_error)?;
            for s in &traj.samples {
                csv.write_record([num(s.t), num(s.r), num(s.h), num(s.a_sq)]).map_err(csv_error)?;
            }
            csv.flush().map_err(io_error)
        }
    }
}

fn status_code(status: FlowStatus) -> i32 {
    match status {
        FlowStatus::Collapsed => 0,
        FlowStatus::Stalled | FlowStatus::MaxStepsExceeded => 1,
    }
}

fn cmd_flow<'a>(a: &FlowArgs, stdout: &'a mut dyn Write, stderr: &'a mut dyn Write) -> Result<i32> {
    let (pot, _) = a.potential.load()?;
    let m = a.potential.m;
    let traj = flow::integrate(&pot, m, a.r0, &a.flow.options())?;
    with_output(&a.output.out, stdout, |w| write_trajectory(w, &traj, a.output.format))?;

    // The summary goes to stdout unless stdout already carries the trajectory.
    let summary: &mut dyn Write = if a.output.out.is_some() { stdout } else { stderr };
    match traj.status {
        FlowStatus::Collapsed => {
            let rep = flow::classify(&pot, m, a.r0, &traj)?;
            writeln!(
                summary,
                "T_sing ≈ {:.6}, {}, limit ≈ {:.3}",
                rep.t_sing_trajectory,
                rep.verdict.label(),
                rep.limit_estimate
            )
            .map_err(io_error)?;
            writeln!(summary, "T_sing (quadrature) ≈ {:.6}", rep.t_sing_quadrature).map_err(io_error)?;
        }
        FlowStatus::Stalled => {
            let last = traj.last();
            writeln!(summary, "stalled at t = {}, R = {} (H = {})", last.t, last.r, last.h).map_err(io_error)?;
        }
        FlowStatus::MaxStepsExceeded => {
            let last = traj.last();
            writeln!(summary, "step budget exhausted at t = {}, R = {}", last.t, last.r).map_err(io_error)?;
        }
    }
    Ok(status_code(traj.status))
}

#[derive(Serialize)]
struct TimesJson {
    trajectory: f64,
    quadrature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<f64>,
}

#[derive(Serialize)]
struct LimitJson {
    estimate: f64,
    predicted: f64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    potential: &'a str,
    m: u32,
    #[serde(rename = "R0")]
    r0: f64,
    #[serde(rename = "T_sing")]
    t_sing: TimesJson,
    verdict: TypeVerdict,
    limit: LimitJson,
    c: f64,
}

impl<'a> ReportJson<'a> {
    fn new(potential: &'a str, m: u32, r0: f64, rep: &SingularityReport) -> Self {
        Self {
            potential,
            m,
            r0,
            t_sing: TimesJson {
                trajectory: rep.t_sing_trajectory,
                quadrature: rep.t_sing_quadrature,
                closed_form: rep.t_sing_closed_form,
            },
            verdict: rep.verdict,
            limit: LimitJson {
                estimate: rep.limit_estimate,
                predicted: rep.limit_predicted,
            },
            c: rep.c,
        }
    }
}

fn cmd_classify(a: &FlowArgs, stdout: &mut dyn Write) -> Result<i32> {
    let (pot, text) = a.potential.load()?;
    let m = a.potential.m;
    let traj = flow::integrate(&pot, m, a.r0, &a.flow.options())?;
    let rep = flow::classify(&pot, m, a.r0, &traj)?;
    with_output(&a.output.out, stdout, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &ReportJson::new(&text, m, a.r0, &rep))
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w).map_err(io_error)
        }
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record([
                "potential",
                "m",
                "R0",
                "T_sing_trajectory",
                "T_sing_quadrature",
                "T_sing_closed_form",
                "verdict",
                "limit_estimate",
                "limit_predicted",
                "c",
            ])
            .map_err(csv_error)?;
            csv.write_record([
                text.clone(),
                m.to_string(),
                num(a.r0),
                num(rep.t_sing_trajectory),
                num(rep.t_sing_quadrature),
                opt_num(rep.t_sing_closed_form),
                format!("{:?}", rep.verdict),
                num(rep.limit_estimate),
                num(rep.limit_predicted),
                num(rep.c),
            ])
            .map_err(csv_error)?;
            csv.flush().map_err(io_error)
        }
    })?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SweepRow {
    #[serde(rename = "R0")]
    r0: f64,
    #[serde(rename = "T_sing")]
    t_sing: Option<f64>,
    #[serde(rename = "T_sing_quadrature")]
    t_sing_quadrature: Option<f64>,
    limit_estimate: Option<f64>,
    verdict: Option<TypeVerdict>,
    error: Option<String>,
}

fn sweep_row(pot: &KahlerPotential, m: u32, r0: f64, opts: &FlowOptions) -> SweepRow {
    let run = || -> Result<SingularityReport> {
        let traj = flow::integrate(pot, m, r0, opts)?;
        flow::classify(pot, m, r0, &traj)
    };
    match run() {
        Ok(rep) => SweepRow {
            r0,
            t_sing: Some(rep.t_sing_trajectory),
            t_sing_quadrature: Some(rep.t_sing_quadrature),
            limit_estimate: Some(rep.limit_estimate),
            verdict: Some(rep.verdict),
            error: None,
        },
        Err(e) => SweepRow {
            r0,
            t_sing: None,
            t_sing_quadrature: None,
            limit_estimate: None,
            verdict: None,
            error: Some(e.to_string()),
        },
    }
}

fn cmd_sweep(a: &SweepArgs, stdout: &mut dyn Write) -> Result<i32> {
    if a.steps < 2 {
        return Err(Error::InvalidArgument(format!("--steps must be at least 2, got {}", a.steps)));
    }
    if !(a.r0_min > 0.0 && a.r0_min < a.r0_max && a.r0_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < r0_min < r0_max, got [{}, {}]",
            a.r0_min, a.r0_max
        )));
    }
    let (pot, _) = a.potential.load()?;
    let m = a.potential.m;
    let opts = a.flow.options();
    let last = (a.steps - 1) as f64;
    let rows: Vec<SweepRow> = (0..a.steps)
        .into_par_iter()
        .map(|i| {
            let r0 = a.r0_min + (a.r0_max - a.r0_min) * i as f64 / last;
            sweep_row(&pot, m, r0, &opts)
        })
        .collect();
    with_output(&a.output.out, stdout, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &rows).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            writeln!(w).map_err(io_error)
        }
        Format::Csv => {
            let mut csv = csv_writer(w);
            csv.write_record(["R0", "T_sing", "T_sing_quadrature", "limit_estimate", "verdict", "error"])
                .map_err(csv_error)?;
            for r in &rows {
                csv.write_record([
                    num(r.r0),
                    opt_num(r.t_sing),
                    opt_num(r.t_sing_quadrature),
                    opt_num(r.limit_estimate),
                    r.verdict.map(|v| format!("{v:?}")).unwrap_or_default(),
                    r.error.clone().unwrap_or_default(),
                ])
                .map_err(csv_error)?;
            }
            csv.flush().map_err(io_error)
        }
    })?;
    Ok(if rows.iter().all(|r| r.error.is_none()) { 0 } else { 1 })
}

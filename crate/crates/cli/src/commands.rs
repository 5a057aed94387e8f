//! Subcommands and the exit-code contract.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use cdsp_core::cdsp::{sweep_angle, SweepOptions};
use cdsp_core::{parse_measure, Analysis, AnalysisOptions, CostaraModel, SchurIdentification};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as Complex;
use serde::Serialize;

use crate::checks;
use crate::complex_lit::parse_complex;
use crate::report::{self, BuildInputs, C};
use crate::schema::validate_report;
use crate::{json, selftest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const SWEEP_HEADER: [&str; 7] = [
    "theta_deg",
    "verdict",
    "s_offdiag_re",
    "s_offdiag_im",
    "rootprod_re",
    "rootprod_im",
    "min_agler_n2",
];

#[derive(Parser, Debug)]
#[command(name = "cdsp", version, about = "Kernels, de Branges-Rovnyak identification and Cauchy dual tests for D(mu)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full pipeline and write a JSON report
    Analyze(AnalyzeArgs),
    /// Evaluate the kernels at one point pair
    Kernel(KernelArgs),
    /// Closed-form test for two atoms over a range of angles
    Sweep(SweepArgs),
    /// Reproduce the published constants for mu = delta_1 + delta_i
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Measure, e.g. "1;i" or "deg:0:w=2;deg:120"
    #[arg(long)]
    pub measure: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub trunc: usize,
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    #[arg(long)]
    pub skip_oracle: bool,
    /// Record wall time in the report (breaks byte-identity between runs)
    #[arg(long)]
    pub timing: bool,
    #[arg(long, default_value_t = checks::DEFAULT_SEED)]
    pub seed: u64,
    /// Include the unasserted residue-sum diagnostic
    #[arg(long)]
    pub diagnostics: bool,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long)]
    pub measure: String,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// start:stop:step in degrees
    #[arg(long)]
    pub angles: String,
    #[arg(long, default_value = "1,1")]
    pub weights: String,
    /// Output path (default stdout)
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub trunc: usize,
    /// Leave the min_agler_n2 column empty
    #[arg(long)]
    pub skip_oracle: bool,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long)]
    pub list: bool,
    /// Also print the residue-sum diagnostic
    #[arg(long)]
    pub diagnostics: bool,
    #[arg(long, hide = true)]
    pub inject_perturbation: Option<String>,
}

/// A failure with its exit code and message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<cdsp_core::Error> for Failure {
    fn from(e: cdsp_core::Error) -> Self {
        Failure {
            code: if e.is_input_error() { EXIT_INPUT } else { EXIT_NUMERIC },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(format!("io: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => analyze(&a, out),
        Command::Kernel(a) => kernel(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::Selftest(a) => run_selftest(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(path: Option<&PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs `analyze` and returns the validated report text.
pub fn analyze_report(a: &AnalyzeArgs) -> Result<String, Failure> {
    let start = Instant::now();
    let mu = parse_measure(&a.measure)?;
    let opts = AnalysisOptions {
        trunc: a.trunc,
        nmax: a.nmax,
        oracle: !a.skip_oracle,
    };
    let analysis = Analysis::run(&mu, &opts)?;
    let dev = checks::kernel_equality(&analysis.model, &analysis.ident, a.seed, checks::KERNEL_PAIRS);
    let rep = report::build(BuildInputs {
        text: &a.measure,
        mu: &mu,
        analysis: &analysis,
        seed: a.seed,
        kernel_pairs: checks::KERNEL_PAIRS,
        kernel_max_rel_dev: dev,
        wall_time_s: a.timing.then(|| start.elapsed().as_secs_f64()),
        diagnostics: a.diagnostics,
    });
    let text = json::to_string(&rep).map_err(|e| Failure {
        code: EXIT_NUMERIC,
        message: format!("serializing report: {e}"),
    })?;
    let value: serde_json::Value = serde_json::from_str(&text).expect("report text is JSON");
    if let Err(errors) = validate_report(&value) {
        return Err(Failure {
            code: EXIT_NUMERIC,
            message: format!("report failed schema validation: {}", errors.join("; ")),
        });
    }
    Ok(text)
}

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = analyze_report(a)?;
    emit(a.out.as_ref(), &text, out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct KernelOutput {
    z: C,
    lambda: C,
    k_tilde: C,
    k_hat: C,
    k: C,
    kernel_hb: C,
}

fn kernel(a: &KernelArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let z = parse_complex(&a.z).map_err(Failure::input)?;
    let lam = parse_complex(&a.lambda).map_err(Failure::input)?;
    for (name, p) in [("z", z), ("lambda", lam)] {
        if p.norm().is_nan() || p.norm() >= 1.0 {
            return Err(Failure::input(format!("{name} = {p} is not in the open unit disk")));
        }
    }
    let mu = parse_measure(&a.measure)?;
    let model = CostaraModel::build(&mu)?;
    let ident = SchurIdentification::build(&model)?;
    let o = KernelOutput {
        z: z.into(),
        lambda: lam.into(),
        k_tilde: model.kernel_tilde(z, lam).into(),
        k_hat: model.kernel_hat(z, lam).into(),
        k: model.kernel_full(z, lam).into(),
        kernel_hb: ident.kernel_hb(z, lam).into(),
    };
    let text = json::to_string(&o).expect("finite kernel values serialize");
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

/// Angles `start, start+step, …` up to `stop`, `round((stop−start)/step) + 1` of them.
pub fn parse_angles(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(format!("angles must be start:stop:step, got {text:?}"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("bad number {s:?} in angles"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err("angles must be finite".into());
    }
    if step <= 0.0 {
        return Err("angle step must be positive".into());
    }
    if stop < start {
        return Err("angle stop must not be below start".into());
    }
    let count = ((stop - start) / step).round() as usize + 1;
    if count > 100_000 {
        return Err(format!("{count} angles requested; limit is 100000"));
    }
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn parse_weights(text: &str) -> Result<(f64, f64), String> {
    let ws: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad weight {s:?}")))
        .collect::<Result<_, _>>()?;
    match ws.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two weights w1,w2, got {text:?}")),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text plus the errors of failed rows.
pub fn sweep_csv(thetas: &[f64], opts: &SweepOptions) -> (String, Vec<cdsp_core::Error>) {
    let rows = sweep_angle(thetas, opts);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).expect("in-memory write");
    let mut failed = Vec::new();
    for row in &rows {
        let theta = format!("{}", row.theta);
        let record: Vec<String> = match &row.outcome {
            Ok(p) => {
                let s = p.verdict.s_offdiag.unwrap_or(Complex::new(f64::NAN, f64::NAN));
                let rp = p
                    .verdict
                    .root_products
                    .first()
                    .copied()
                    .unwrap_or(Complex::new(f64::NAN, f64::NAN));
                vec![
                    theta,
                    p.verdict.verdict.as_str().into(),
                    num(s.re),
                    num(s.im),
                    num(rp.re),
                    num(rp.im),
                    p.min_agler_n2.map(num).unwrap_or_default(),
                ]
            }
            Err(e) => {
                failed.push(e.clone());
                let cell = format!("ERROR:{}", e.code());
                std::iter::once(theta).chain(std::iter::repeat_n(cell, 6)).collect()
            }
        };
        w.write_record(&record).expect("in-memory write");
    }
    let bytes = w.into_inner().expect("in-memory flush");
    (String::from_utf8(bytes).expect("ascii csv"), failed)
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let thetas = parse_angles(&a.angles).map_err(Failure::input)?;
    let weights = parse_weights(&a.weights).map_err(Failure::input)?;
    let opts = SweepOptions {
        weights,
        trunc: (!a.skip_oracle).then_some(a.trunc),
    };
    let (text, failed) = sweep_csv(&thetas, &opts);
    emit(a.csv.as_ref(), &text, out)?;
    if failed.len() == thetas.len() {
        let input = failed.iter().all(|e| e.is_input_error());
        return Err(Failure {
            code: if input { EXIT_INPUT } else { EXIT_NUMERIC },
            message: format!("every sweep row failed, first: {}", failed[0]),
        });
    }
    Ok(EXIT_OK)
}

fn quad_level_from_env() -> Result<u32, Failure> {
    match std::env::var(selftest::QUAD_LEVEL_ENV) {
        Err(_) => Ok(selftest::DEFAULT_QUAD_LEVEL),
        Ok(v) => match v.trim().parse::<u32>() {
            Ok(l @ 1..=3) => Ok(l),
            _ => Err(Failure::input(format!(
                "{} must be 1, 2 or 3, got {v:?}",
                selftest::QUAD_LEVEL_ENV
            ))),
        },
    }
}

fn run_selftest(a: &SelftestArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.list {
        for id in selftest::CHECK_IDS {
            writeln!(out, "{id}")?;
        }
        return Ok(EXIT_OK);
    }
    if let Some(id) = &a.inject_perturbation {
        if !selftest::CHECK_IDS.contains(&id.as_str()) {
            return Err(Failure::input(format!("unknown check id {id:?}")));
        }
    }
    let opts = selftest::SelftestOptions {
        quad_level: quad_level_from_env()?,
        perturb: a.inject_perturbation.clone(),
        diagnostics: a.diagnostics,
    };
    let results = selftest::run(&opts)?;
    out.write_all(selftest::render(&results, opts.quad_level).as_bytes())?;
    if opts.diagnostics {
        let mu = parse_measure(cdsp_core::reference::MEASURE)?;
        let model = CostaraModel::build(&mu)?;
        let v = cdsp_core::cdsp::a5_diagnostic(&model);
        writeln!(out, "diagnostic residue_sum {} (unasserted)", selftest::fmt_c(v))?;
    }
    Ok(if results.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

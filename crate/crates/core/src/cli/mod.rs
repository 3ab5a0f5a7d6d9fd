//! Command-line front end.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::connection::{patched_barrier_solution, transmission_from_currents};
use crate::error::{Error, ErrorClass, Result};
use crate::oracle::{solve_bound_states_exact, solve_scattering_exact, wavefunction_exact};
use crate::reflection::{born_report, once_reflected_report};
use crate::special_fn::airy;
use crate::verify;
use crate::wkb::{barrier_turning_points, exclusion_radius, quantize, transmission_wkb, Method, TransmissionReport};

pub use config::{Overrides, OutputFormat, RunConfig, Scan};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "SEMICLASSIC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "semiclassic", version, about = "Semiclassical tunnelling and reflection in one dimension")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem description (TOML).
    #[arg(long, short)]
    config: PathBuf,
    /// wkb, wkb-corrected, connection, born1, once-reflected or exact.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    energy: Option<f64>,
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// csv or text.
    #[arg(long)]
    format: Option<String>,
    /// Oracle grid size (odd).
    #[arg(long)]
    grid_points: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            method: self.method.clone(),
            energy: self.energy,
            output: self.output.clone(),
            format: self.format.clone(),
            grid_points: self.grid_points,
            ..Default::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Transmission at a single energy.
    Transmission {
        #[command(flatten)]
        common: Common,
    },
    /// Transmission over an energy range.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        e_min: Option<f64>,
        #[arg(long)]
        e_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Lowest bound-state energies of a well (methods wkb or exact).
    BoundStates {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        n_max: usize,
    },
    /// Wavefunction samples (methods connection or exact).
    Wavefunction {
        #[command(flatten)]
        common: Common,
        /// Sample count for the connection method.
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Ai, Bi and their derivatives at one point.
    Airy {
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Runs the built-in verification suite.
    Verify {
        /// Also write the per-check CSV here.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn report_for(config: &RunConfig, energy: f64) -> Result<TransmissionReport> {
    let problem = config.problem_at(energy)?;
    match config.method {
        Method::WkbLeading | Method::WkbCorrected => transmission_wkb(&problem, config.method),
        Method::ConnectionPatched => transmission_from_currents(&problem),
        Method::ExactNumerov => solve_scattering_exact(&problem, &config.oracle),
        Method::BornFirstOrder => born_report(&problem),
        Method::OnceReflected => once_reflected_report(&problem),
    }
}

/// Renders result rows as CSV (`E,T,R,sigma_star,method`) or as a sequence
/// of `[[result]]` tables.
pub fn render_reports(rows: &[(f64, TransmissionReport)], format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            out.push_str("E,T,R,sigma_star,method\n");
            for (e, r) in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    num(*e),
                    num(r.transmission),
                    num(r.reflection),
                    r.sigma_star.map(num).unwrap_or_default(),
                    r.method.label()
                ));
            }
        }
        OutputFormat::Text => {
            for (i, (e, r)) in rows.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str("[[result]]\n");
                out.push_str(&format!("E = {}\n", num(*e)));
                out.push_str(&format!("T = {}\n", num(r.transmission)));
                out.push_str(&format!("R = {}\n", num(r.reflection)));
                if let Some(s) = r.sigma_star {
                    out.push_str(&format!("sigma_star = {}\n", num(s)));
                }
                out.push_str(&format!("method = \"{}\"\n", r.method.label()));
            }
        }
    }
    out
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Config(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Numerical(format!("cannot start worker threads: {e}")))
}

/// Evaluates the configured method at every scan energy, in energy order.
pub fn run_scan(config: &RunConfig, scan: &Scan) -> Result<Vec<(f64, TransmissionReport)>> {
    let energies = scan.energies();
    let results: Vec<Result<TransmissionReport>> =
        thread_pool()?.install(|| energies.par_iter().map(|&e| report_for(config, e)).collect());
    energies
        .into_iter()
        .zip(results)
        .map(|(e, r)| {
            r.map(|r| (e, r))
                .map_err(|err| with_energy_context(err, e))
        })
        .collect()
}

fn with_energy_context(err: Error, energy: f64) -> Error {
    match err {
        Error::Regime(m) => Error::Regime(format!("at E = {energy}: {m}")),
        Error::Numerical(m) => Error::Numerical(format!("at E = {energy}: {m}")),
        other => other,
    }
}

/// Bound-state energies from semiclassical quantization or the oracle.
pub fn bound_states(config: &RunConfig, n_max: usize) -> Result<Vec<f64>> {
    let (lo, hi) = config.domain;
    let probe = config.problem_at(config.potential.evaluate(0.5 * (lo + hi))?)?;
    match config.method {
        Method::ExactNumerov => solve_bound_states_exact(&probe, n_max, &config.oracle),
        Method::WkbLeading => {
            let floor = probe.potential_min();
            let ceiling = probe.potential_at(lo).min(probe.potential_at(hi));
            if !(ceiling > floor) {
                return Err(Error::Spectrum(
                    "potential is not confining on the domain: edge values do not exceed the minimum".into(),
                ));
            }
            let span = ceiling - floor;
            let top = floor + span * (1.0 - 1e-9);
            let mut levels: Vec<f64> = Vec::with_capacity(n_max + 1);
            for n in 0..=n_max {
                let level = match levels.last() {
                    Some(&prev) => quantize(&probe, n as u32, (prev, top)),
                    None => [1e-3, 1e-4, 1e-5, 1e-2]
                        .iter()
                        .map(|f| quantize(&probe, 0, (floor + f * span, top)))
                        .find(|r| r.is_ok())
                        .unwrap_or_else(|| quantize(&probe, 0, (floor + 1e-3 * span, top))),
                };
                levels.push(level.map_err(|e| match e {
                    Error::Bracket(_) => Error::Spectrum(format!(
                        "fewer than {} levels lie below the edge value {ceiling}",
                        n + 1
                    )),
                    other => other,
                })?);
            }
            Ok(levels)
        }
        other => Err(Error::Config(format!(
            "bound-states supports methods wkb and exact, not {}",
            other.label()
        ))),
    }
}

/// Wavefunction CSV for the configured method.
pub fn wavefunction_csv(config: &RunConfig, points: usize) -> Result<String> {
    let problem = config.problem_at(config.single_energy()?)?;
    match config.method {
        Method::ExactNumerov => Ok(wavefunction_exact(&problem, &config.oracle)?.to_csv()),
        Method::ConnectionPatched => {
            if points < 2 {
                return Err(Error::Config(format!("--points must be at least 2, got {points}")));
            }
            let (a, b) = barrier_turning_points(&problem)?;
            let (ra, rb) = (exclusion_radius(&problem, a)?, exclusion_radius(&problem, b)?);
            let (lo, hi) = config.domain;
            let xs: Vec<f64> = (0..points)
                .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
                .filter(|&x| (x - a).abs() > ra && (x - b).abs() > rb)
                .collect();
            Ok(patched_barrier_solution(&problem, Complex64::new(1.0, 0.0), &xs)?.to_csv())
        }
        other => Err(Error::Config(format!(
            "wavefunction supports methods connection and exact, not {}",
            other.label()
        ))),
    }
}

fn emit(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Numerical(format!("cannot write to stdout: {e}")))
        }
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Transmission { common } => {
            let config = RunConfig::load(&common.config, &common.overrides())?;
            let e = config.single_energy()?;
            let row = (e, report_for(&config, e)?);
            emit(&render_reports(&[row], config.format), config.output.as_ref())?;
        }
        Command::Scan {
            common,
            e_min,
            e_max,
            steps,
        } => {
            let overrides = Overrides {
                e_min,
                e_max,
                steps,
                ..common.overrides()
            };
            let config = RunConfig::load(&common.config, &overrides)?;
            let scan = config
                .scan
                .ok_or_else(|| Error::Config("scan needs a [scan] section or --e-min/--e-max/--steps".into()))?;
            let rows = run_scan(&config, &scan)?;
            emit(&render_reports(&rows, config.format), config.output.as_ref())?;
        }
        Command::BoundStates { common, n_max } => {
            let config = RunConfig::load(&common.config, &common.overrides())?;
            let levels = bound_states(&config, n_max)?;
            let mut text = String::from("n,E,method\n");
            for (n, e) in levels.iter().enumerate() {
                text.push_str(&format!("{n},{},{}\n", num(*e), config.method.label()));
            }
            emit(&text, config.output.as_ref())?;
        }
        Command::Wavefunction { common, points } => {
            let config = RunConfig::load(&common.config, &common.overrides())?;
            emit(&wavefunction_csv(&config, points)?, config.output.as_ref())?;
        }
        Command::Airy { z } => {
            let a = airy(z)?;
            let text = format!(
                "z,ai,bi,ai_prime,bi_prime\n{},{},{},{},{}\n",
                num(z),
                num(a.ai),
                num(a.bi),
                num(a.ai_prime),
                num(a.bi_prime)
            );
            emit(&text, None)?;
        }
        Command::Verify { output } => {
            let results = thread_pool()?.install(verify::run_all);
            let mut table = String::new();
            for r in &results {
                table.push_str(&r.summary_line());
                table.push('\n');
            }
            emit(&table, None)?;
            if let Some(path) = output {
                emit(&verify::to_csv(&results), Some(&path))?;
            }
            if results.iter().any(|r| !r.passed()) {
                return Ok(exit_code(ErrorClass::Numerical));
            }
        }
    }
    Ok(0)
}

/// Process exit code for an error class.
pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Config => 2,
        ErrorClass::Regime => 3,
        ErrorClass::Numerical => 4,
    }
}

/// One-line diagnostic `error[class]: message`.
pub fn error_line(err: &Error) -> String {
    let tag = match err.class() {
        ErrorClass::Config => "config",
        ErrorClass::Regime => "regime",
        ErrorClass::Numerical => "numerical",
    };
    let msg = err.to_string().replace('\n', " ");
    format!("error[{tag}]: {msg}")
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", error_line(&Error::Config(first.to_string())));
            return 2;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("{}", error_line(&err));
            exit_code(err.class())
        }
    }
}

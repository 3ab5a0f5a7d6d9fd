//! Run configuration read from a TOML file, with command-line overrides
//! applied afterwards.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::oracle::OracleConfig;
use crate::potential::{PhysicalContext, PotentialModel, ScatteringProblem};
use crate::wkb::Method;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ContextSection {
    mass: Option<f64>,
    hbar: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSection {
    kind: String,
    height: Option<f64>,
    width: Option<f64>,
    center: Option<f64>,
    amplitude: Option<f64>,
    stiffness: Option<f64>,
    offset: Option<f64>,
    slope: Option<f64>,
    curvature: Option<f64>,
    xs: Option<Vec<f64>>,
    vs: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSection {
    energy: Option<f64>,
    domain: [f64; 2],
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RunSection {
    method: Option<String>,
    output: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq)]
#[serde(deny_unknown_fields)]
struct ScanSection {
    e_min: f64,
    e_max: f64,
    steps: usize,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct OracleSection {
    grid_points: Option<usize>,
    match_margin: Option<f64>,
    v_eps: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    context: ContextSection,
    potential: PotentialSection,
    problem: ProblemSection,
    #[serde(default)]
    run: RunSection,
    scan: Option<ScanSection>,
    #[serde(default)]
    oracle: OracleSection,
}

/// Output layout for result rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Text,
}

impl OutputFormat {
    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "text" | "structured-text" => Ok(OutputFormat::Text),
            other => Err(Error::Config(format!(
                "run.format: expected csv or text, got {other:?}"
            ))),
        }
    }
}

/// Energy sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scan {
    pub e_min: f64,
    pub e_max: f64,
    pub steps: usize,
}

impl Scan {
    pub fn new(e_min: f64, e_max: f64, steps: usize) -> Result<Self> {
        if steps < 2 {
            return Err(Error::Config(format!("scan.steps must be at least 2, got {steps}")));
        }
        if !(e_min < e_max) || !e_min.is_finite() || !e_max.is_finite() {
            return Err(Error::Config(format!(
                "scan needs finite e_min < e_max, got {e_min} and {e_max}"
            )));
        }
        Ok(Self { e_min, e_max, steps })
    }

    pub fn energies(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.e_max
                } else {
                    self.e_min + (self.e_max - self.e_min) * i as f64 / n as f64
                }
            })
            .collect()
    }
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub context: PhysicalContext,
    pub potential: PotentialModel,
    pub domain: (f64, f64),
    pub energy: Option<f64>,
    pub method: Method,
    pub scan: Option<Scan>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub oracle: OracleConfig,
}

/// Values given on the command line; each one replaces the file value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub method: Option<String>,
    pub energy: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<String>,
    pub grid_points: Option<usize>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub steps: Option<usize>,
}

fn required(field: Option<f64>, name: &str, kind: &str) -> Result<f64> {
    field.ok_or_else(|| Error::Config(format!("potential.{name} is required for kind {kind:?}")))
}

impl PotentialSection {
    fn build(self) -> Result<PotentialModel> {
        let kind = self.kind.as_str();
        let center = self.center.unwrap_or(0.0);
        let model = match kind {
            "square" => PotentialModel::square_barrier(
                required(self.height, "height", kind)?,
                required(self.width, "width", kind)?,
                center,
            ),
            "gaussian" => PotentialModel::gaussian_bump(
                required(self.amplitude, "amplitude", kind)?,
                required(self.width, "width", kind)?,
                center,
            ),
            "eckart" => PotentialModel::eckart(
                required(self.height, "height", kind)?,
                required(self.width, "width", kind)?,
                center,
            ),
            "harmonic" => PotentialModel::harmonic(required(self.stiffness, "stiffness", kind)?),
            "linear" => PotentialModel::linear_ramp(
                self.offset.unwrap_or(0.0),
                required(self.slope, "slope", kind)?,
            ),
            "parabolic" => PotentialModel::parabolic_barrier(
                required(self.height, "height", kind)?,
                required(self.curvature, "curvature", kind)?,
                center,
            ),
            "tabulated" => match (self.xs, self.vs) {
                (Some(xs), Some(vs)) => PotentialModel::tabulated(xs, vs),
                _ => return Err(Error::Config("potential.xs and potential.vs are required for kind \"tabulated\"".into())),
            },
            other => {
                return Err(Error::Config(format!(
                    "potential.kind: unknown shape {other:?} (expected square, gaussian, eckart, harmonic, linear, parabolic or tabulated)"
                )))
            }
        };
        model.map_err(|e| Error::Config(format!("potential: {e}")))
    }
}

fn parse_method(label: &str) -> Result<Method> {
    Method::from_label(label).ok_or_else(|| {
        Error::Config(format!(
            "run.method: unknown method {label:?} (expected wkb, wkb-corrected, connection, born1, once-reflected or exact)"
        ))
    })
}

impl RunConfig {
    /// Parses `text` (TOML) and applies `overrides`. `origin` names the
    /// source in diagnostics.
    pub fn parse(text: &str, origin: &str, overrides: &Overrides) -> Result<Self> {
        let file: FileConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("{origin}: {}", e.to_string().trim_end())))?;
        let context = PhysicalContext::new(
            file.context.mass.unwrap_or(1.0),
            file.context.hbar.unwrap_or(1.0),
        )
        .map_err(|e| Error::Config(format!("context: {e}")))?;
        let potential = file.potential.build()?;
        let [lo, hi] = file.problem.domain;
        if !(lo < hi) {
            return Err(Error::Config(format!("problem.domain must be increasing, got [{lo}, {hi}]")));
        }
        let method = parse_method(
            overrides
                .method
                .as_deref()
                .or(file.run.method.as_deref())
                .unwrap_or("wkb"),
        )?;
        let format = OutputFormat::from_label(
            overrides
                .format
                .as_deref()
                .or(file.run.format.as_deref())
                .unwrap_or("csv"),
        )?;
        let scan = match (file.scan, overrides.e_min, overrides.e_max, overrides.steps) {
            (None, None, None, None) => None,
            (s, a, b, n) => {
                let missing = |what: &str| Error::Config(format!("scan.{what} is missing"));
                Some(Scan::new(
                    a.or(s.map(|s| s.e_min)).ok_or_else(|| missing("e_min"))?,
                    b.or(s.map(|s| s.e_max)).ok_or_else(|| missing("e_max"))?,
                    n.or(s.map(|s| s.steps)).ok_or_else(|| missing("steps"))?,
                )?)
            }
        };
        let defaults = OracleConfig::default();
        let oracle = OracleConfig {
            grid_points: overrides
                .grid_points
                .or(file.oracle.grid_points)
                .unwrap_or(defaults.grid_points),
            match_margin: file.oracle.match_margin.unwrap_or(defaults.match_margin),
            v_eps: file.oracle.v_eps.unwrap_or(defaults.v_eps),
        };
        oracle.validate().map_err(|e| Error::Config(format!("oracle: {e}")))?;
        Ok(Self {
            context,
            potential,
            domain: (lo, hi),
            energy: overrides.energy.or(file.problem.energy),
            method,
            scan,
            output: overrides.output.clone().or(file.run.output),
            format,
            oracle,
        })
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string(), overrides)
    }

    /// The problem at energy `energy`.
    pub fn problem_at(&self, energy: f64) -> Result<ScatteringProblem> {
        ScatteringProblem::new(self.context, self.potential.clone(), energy, self.domain)
    }

    /// The configured single energy.
    pub fn single_energy(&self) -> Result<f64> {
        self.energy
            .ok_or_else(|| Error::Config("problem.energy is required (or pass --energy)".into()))
    }
}

//! Analytic one-dimensional potentials, classical turning points and local
//! wavenumbers.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::bisect;

/// Default number of panels for the turning-point bracketing scan.
pub const DEFAULT_SCAN_PANELS: usize = 2048;

/// Mass and reduced Planck constant defining the unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalContext {
    pub mass: f64,
    pub hbar: f64,
}

impl PhysicalContext {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { mass, hbar })
    }

    /// Natural units, m = ħ = 1.
    pub fn natural() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

impl Default for PhysicalContext {
    fn default() -> Self {
        Self::natural()
    }
}

/// Potential sampled on a strictly increasing grid, interpolated by a
/// natural cubic spline (continuous second derivative).
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    xs: Vec<f64>,
    vs: Vec<f64>,
    /// Spline second derivatives at the knots.
    curvature: Vec<f64>,
}

impl TabulatedPotential {
    pub fn new(xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        if xs.len() != vs.len() {
            return Err(Error::InvalidParameter(format!(
                "tabulated grid has {} positions but {} values",
                xs.len(),
                vs.len()
            )));
        }
        if xs.len() < 4 {
            return Err(Error::InvalidParameter(
                "tabulated potential needs at least 4 points".into(),
            ));
        }
        if xs.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated potential contains non-finite values".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "tabulated positions must be strictly increasing".into(),
            ));
        }
        let curvature = natural_spline_curvature(&xs, &vs);
        Ok(Self { xs, vs, curvature })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.vs
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    /// Spline value, extrapolating the end cubics outside the grid.
    fn spline(&self, x: f64) -> (f64, f64) {
        let i = self.interval(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.vs[i], self.vs[i + 1]);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let value = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let second = a * m0 + b * m1;
        (value, second)
    }
}

fn natural_spline_curvature(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    // Thomas algorithm on the interior knots.
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        if i > 1 {
            let w = h0 / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

/// A jump of a piecewise-smooth potential: position and one-sided limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discontinuity {
    pub x: f64,
    pub left: f64,
    pub right: f64,
}

/// The supported potential shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    /// `height` on |x - center| < width/2, zero elsewhere.
    SquareBarrier { height: f64, width: f64, center: f64 },
    /// `amplitude * exp(-((x - center)/width)^2)`.
    GaussianBump { amplitude: f64, width: f64, center: f64 },
    /// `height * sech^2((x - center)/width)`.
    EckartBarrier { height: f64, width: f64, center: f64 },
    /// `stiffness * x^2 / 2`.
    HarmonicWell { stiffness: f64 },
    /// `offset + slope * x`.
    LinearRamp { offset: f64, slope: f64 },
    /// `height - curvature * (x - center)^2 / 2`.
    ParabolicBarrier { height: f64, curvature: f64, center: f64 },
    Tabulated(TabulatedPotential),
}

fn sech(u: f64) -> f64 {
    let e = (-u.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

impl PotentialModel {
    pub fn square_barrier(height: f64, width: f64, center: f64) -> Result<Self> {
        let m = Self::SquareBarrier { height, width, center };
        m.validate()?;
        Ok(m)
    }

    pub fn gaussian_bump(amplitude: f64, width: f64, center: f64) -> Result<Self> {
        let m = Self::GaussianBump { amplitude, width, center };
        m.validate()?;
        Ok(m)
    }

    pub fn eckart(height: f64, width: f64, center: f64) -> Result<Self> {
        let m = Self::EckartBarrier { height, width, center };
        m.validate()?;
        Ok(m)
    }

    pub fn harmonic(stiffness: f64) -> Result<Self> {
        let m = Self::HarmonicWell { stiffness };
        m.validate()?;
        Ok(m)
    }

    pub fn linear_ramp(offset: f64, slope: f64) -> Result<Self> {
        let m = Self::LinearRamp { offset, slope };
        m.validate()?;
        Ok(m)
    }

    pub fn parabolic_barrier(height: f64, curvature: f64, center: f64) -> Result<Self> {
        let m = Self::ParabolicBarrier { height, curvature, center };
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(xs: Vec<f64>, vs: Vec<f64>) -> Result<Self> {
        Ok(Self::Tabulated(TabulatedPotential::new(xs, vs)?))
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::SquareBarrier { height, width, center } => {
                check_finite("height", height)?;
                check_positive("width", width)?;
                check_finite("center", center)
            }
            Self::GaussianBump { amplitude, width, center } => {
                check_finite("amplitude", amplitude)?;
                check_positive("width", width)?;
                check_finite("center", center)
            }
            Self::EckartBarrier { height, width, center } => {
                check_finite("height", height)?;
                check_positive("width", width)?;
                check_finite("center", center)
            }
            Self::HarmonicWell { stiffness } => check_positive("stiffness", stiffness),
            Self::LinearRamp { offset, slope } => {
                check_finite("offset", offset)?;
                check_finite("slope", slope)
            }
            Self::ParabolicBarrier { height, curvature, center } => {
                check_finite("height", height)?;
                check_positive("curvature", curvature)?;
                check_finite("center", center)
            }
            Self::Tabulated(_) => Ok(()),
        }
    }

    fn check_x(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("non-finite position {x}")));
        }
        if let Self::Tabulated(t) = self {
            let (lo, hi) = t.range();
            if x < lo || x > hi {
                return Err(Error::Domain(format!(
                    "x = {x} outside tabulated range [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    /// V(x).
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        match self {
            Self::SquareBarrier { height, width, center } => {
                let d = (x - center).abs();
                let half = 0.5 * width;
                if d < half {
                    *height
                } else if d == half {
                    0.5 * height
                } else {
                    0.0
                }
            }
            Self::GaussianBump { amplitude, width, center } => {
                let u = (x - center) / width;
                amplitude * (-u * u).exp()
            }
            Self::EckartBarrier { height, width, center } => {
                let s = sech((x - center) / width);
                height * s * s
            }
            Self::HarmonicWell { stiffness } => 0.5 * stiffness * x * x,
            Self::LinearRamp { offset, slope } => offset + slope * x,
            Self::ParabolicBarrier { height, curvature, center } => {
                let d = x - center;
                height - 0.5 * curvature * d * d
            }
            Self::Tabulated(t) => t.spline(x).0,
        }
    }

    /// dV/dx: analytic for closed forms, central difference for tabulated data.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(self.derivative_unchecked(x))
    }

    pub(crate) fn derivative_unchecked(&self, x: f64) -> f64 {
        match self {
            Self::SquareBarrier { .. } => 0.0,
            Self::GaussianBump { width, center, .. } => {
                let u = (x - center) / width;
                -2.0 * u / width * self.value_unchecked(x)
            }
            Self::EckartBarrier { height, width, center } => {
                let u = (x - center) / width;
                let s = sech(u);
                -2.0 * height * s * s * u.tanh() / width
            }
            Self::HarmonicWell { stiffness } => stiffness * x,
            Self::LinearRamp { slope, .. } => *slope,
            Self::ParabolicBarrier { curvature, center, .. } => -curvature * (x - center),
            Self::Tabulated(t) => {
                let h = 1e-6 * x.abs().max(1.0);
                (t.spline(x + h).0 - t.spline(x - h).0) / (2.0 * h)
            }
        }
    }

    /// d²V/dx².
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        self.check_x(x)?;
        Ok(self.second_derivative_unchecked(x))
    }

    pub(crate) fn second_derivative_unchecked(&self, x: f64) -> f64 {
        match self {
            Self::SquareBarrier { .. } | Self::LinearRamp { .. } => 0.0,
            Self::GaussianBump { width, center, .. } => {
                let u = (x - center) / width;
                (4.0 * u * u - 2.0) / (width * width) * self.value_unchecked(x)
            }
            Self::EckartBarrier { height, width, center } => {
                let u = (x - center) / width;
                let s2 = sech(u).powi(2);
                let t = u.tanh();
                height * (4.0 * s2 * t * t - 2.0 * s2 * s2) / (width * width)
            }
            Self::HarmonicWell { stiffness } => *stiffness,
            Self::ParabolicBarrier { curvature, .. } => -curvature,
            Self::Tabulated(t) => t.spline(x).1,
        }
    }

    /// Jumps of piecewise-constant models, in increasing order.
    pub fn discontinuities(&self) -> Vec<Discontinuity> {
        match *self {
            Self::SquareBarrier { height, width, center } if height != 0.0 => vec![
                Discontinuity {
                    x: center - 0.5 * width,
                    left: 0.0,
                    right: height,
                },
                Discontinuity {
                    x: center + 0.5 * width,
                    left: height,
                    right: 0.0,
                },
            ],
            _ => Vec::new(),
        }
    }

    /// Center of reflection symmetry, if the model is even about a point.
    pub fn symmetry_center(&self) -> Option<f64> {
        match *self {
            Self::SquareBarrier { center, .. }
            | Self::GaussianBump { center, .. }
            | Self::EckartBarrier { center, .. }
            | Self::ParabolicBarrier { center, .. } => Some(center),
            Self::HarmonicWell { .. } => Some(0.0),
            _ => None,
        }
    }

    /// Short lowercase name used in configs and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::SquareBarrier { .. } => "square",
            Self::GaussianBump { .. } => "gaussian",
            Self::EckartBarrier { .. } => "eckart",
            Self::HarmonicWell { .. } => "harmonic",
            Self::LinearRamp { .. } => "linear",
            Self::ParabolicBarrier { .. } => "parabolic",
            Self::Tabulated(_) => "tabulated",
        }
    }
}

/// Context, potential, energy and spatial window: one unit of work.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringProblem {
    pub context: PhysicalContext,
    pub potential: PotentialModel,
    pub energy: f64,
    pub domain: (f64, f64),
}

impl ScatteringProblem {
    pub fn new(
        context: PhysicalContext,
        potential: PotentialModel,
        energy: f64,
        domain: (f64, f64),
    ) -> Result<Self> {
        PhysicalContext::new(context.mass, context.hbar)?;
        potential.validate()?;
        if !energy.is_finite() {
            return Err(Error::InvalidParameter(format!("energy must be finite, got {energy}")));
        }
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "domain must satisfy x_min < x_max, got [{lo}, {hi}]"
            )));
        }
        if let PotentialModel::Tabulated(t) = &potential {
            let (tlo, thi) = t.range();
            if lo < tlo || hi > thi {
                return Err(Error::InvalidParameter(format!(
                    "domain [{lo}, {hi}] exceeds tabulated range [{tlo}, {thi}]"
                )));
            }
        }
        Ok(Self {
            context,
            potential,
            energy,
            domain,
        })
    }

    /// Same problem at a different energy.
    pub fn with_energy(&self, energy: f64) -> Self {
        Self {
            energy,
            ..self.clone()
        }
    }

    pub fn potential_at(&self, x: f64) -> f64 {
        self.potential.value_unchecked(x)
    }

    /// p(x)² = 2m(E - V(x)); negative in classically forbidden regions.
    pub fn momentum_squared(&self, x: f64) -> f64 {
        2.0 * self.context.mass * (self.energy - self.potential.value_unchecked(x))
    }

    /// Classical momentum p(x), clamped to zero where forbidden.
    pub fn momentum(&self, x: f64) -> f64 {
        self.momentum_squared(x).max(0.0).sqrt()
    }

    /// |p(x)| = √(2m(V - E)) in forbidden regions, zero where allowed.
    pub fn forbidden_momentum(&self, x: f64) -> f64 {
        (-self.momentum_squared(x)).max(0.0).sqrt()
    }

    /// Sampled maximum of V over the domain.
    pub fn potential_max(&self) -> f64 {
        self.sample_potential().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sampled minimum of V over the domain.
    pub fn potential_min(&self) -> f64 {
        self.sample_potential().fold(f64::INFINITY, f64::min)
    }

    fn sample_potential(&self) -> impl Iterator<Item = f64> + '_ {
        let (lo, hi) = self.domain;
        let n = 4 * DEFAULT_SCAN_PANELS;
        let centers = self
            .potential
            .symmetry_center()
            .filter(|c| *c > lo && *c < hi);
        (0..=n)
            .map(move |i| lo + (hi - lo) * i as f64 / n as f64)
            .chain(centers)
            .map(move |x| self.potential.value_unchecked(x))
    }
}

/// Classical turning points: zero, one or two roots of V(x) = E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TurningPoints {
    None,
    Single(f64),
    Pair { a: f64, b: f64 },
}

impl TurningPoints {
    pub fn count(&self) -> usize {
        match self {
            Self::None => 0,
            Self::Single(_) => 1,
            Self::Pair { .. } => 2,
        }
    }

    pub fn pair(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Pair { a, b } => Some((a, b)),
            _ => None,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match *self {
            Self::None => vec![],
            Self::Single(a) => vec![a],
            Self::Pair { a, b } => vec![a, b],
        }
    }
}

/// Locates the roots of V(x) - E with the default scan resolution.
pub fn find_turning_points(problem: &ScatteringProblem) -> Result<TurningPoints> {
    find_turning_points_with(problem, DEFAULT_SCAN_PANELS)
}

/// Bracketing scan over `panels` equal panels followed by bisection.
pub fn find_turning_points_with(problem: &ScatteringProblem, panels: usize) -> Result<TurningPoints> {
    if panels == 0 {
        return Err(Error::InvalidParameter("scan needs at least one panel".into()));
    }
    let (lo, hi) = problem.domain;
    let e = problem.energy;
    let f = |x: f64| problem.potential.value_unchecked(x) - e;
    let step = (hi - lo) / panels as f64;

    let mut roots: Vec<f64> = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    if f_prev == 0.0 {
        roots.push(lo);
    }
    for i in 1..=panels {
        let x = if i == panels { hi } else { lo + step * i as f64 };
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if f_prev != 0.0 && f_prev.signum() != fx.signum() {
            roots.push(bisect(f, x_prev, x, 0.0)?);
        }
        x_prev = x;
        f_prev = fx;
    }

    match roots.len() {
        0 => Ok(TurningPoints::None),
        1 => Ok(TurningPoints::Single(roots[0])),
        2 => Ok(TurningPoints::Pair {
            a: roots[0],
            b: roots[1],
        }),
        n => Err(Error::MultiWell { count: n }),
    }
}

/// k(x) = p/ħ when allowed, i·β(x) with β = √(2m(V-E))/ħ when forbidden.
pub fn local_wavenumber(problem: &ScatteringProblem, x: f64) -> Result<Complex64> {
    problem.potential.check_x(x)?;
    let p2 = problem.momentum_squared(x);
    let hbar = problem.context.hbar;
    if p2 >= 0.0 {
        Ok(Complex64::new(p2.sqrt() / hbar, 0.0))
    } else {
        Ok(Complex64::new(0.0, (-p2).sqrt() / hbar))
    }
}

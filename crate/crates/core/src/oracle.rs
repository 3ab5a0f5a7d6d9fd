//! Exact reference solutions of the stationary Schrödinger equation by the
//! fourth-order three-term (Numerov) recurrence on a uniform grid.
//!
//! Scattering states are integrated from the right edge, where only the
//! transmitted wave is present, and split into incident and reflected waves
//! at the left edge. Transmission is the ratio of the recurrence's conserved
//! discrete flux to the incident flux, so T + R = 1 holds to rounding.
//!
//! Jumps of the potential are placed on grid nodes, where the node value is
//! the average of the two sides and the recurrence picks up the extra
//! h³/12 · [ψ‴] term that the jump in ψ'' would otherwise leave behind.

use num_complex::Complex64;

use crate::connection::{RegionTag, WavefunctionTable};
use crate::error::{Error, Result};
use crate::potential::{find_turning_points, PhysicalContext, ScatteringProblem, TurningPoints};
use crate::wkb::{Method, TransmissionReport};

/// Grid and edge-flatness settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub grid_points: usize,
    /// Width of the strip next to each edge over which V must be constant.
    pub match_margin: f64,
    /// Allowed variation of V across that strip, relative to max(1, |E|).
    pub v_eps: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points: 20001,
            match_margin: 1.0,
            v_eps: 1e-10,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 1001 || self.grid_points.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be odd and >= 1001, got {}",
                self.grid_points
            )));
        }
        if !(self.match_margin >= 0.0 && self.match_margin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "match_margin must be non-negative, got {}",
                self.match_margin
            )));
        }
        if !(self.v_eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "v_eps must be positive, got {}",
                self.v_eps
            )));
        }
        Ok(())
    }
}

struct Jump {
    node: usize,
    /// Right minus left value of g = 2m(E - V)/ħ².
    dg: f64,
    /// Right minus left value of dg/dx.
    dg_prime: f64,
}

struct Grid {
    start: f64,
    h: f64,
    g: Vec<f64>,
    jumps: Vec<Jump>,
}

impl Grid {
    fn len(&self) -> usize {
        self.g.len()
    }

    fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.h
    }

    fn f(&self, i: usize) -> f64 {
        1.0 + self.h * self.h * self.g[i] / 12.0
    }

    fn jump_at(&self, i: usize) -> Option<&Jump> {
        self.jumps.iter().find(|j| j.node == i)
    }
}

fn build_grid(problem: &ScatteringProblem, config: &OracleConfig) -> Result<Grid> {
    config.validate()?;
    let (lo, hi) = problem.domain;
    let mut h = (hi - lo) / (config.grid_points - 1) as f64;
    let mut start = lo;
    let mut n = config.grid_points;

    let discs: Vec<_> = problem
        .potential
        .discontinuities()
        .into_iter()
        .filter(|d| d.x > lo && d.x < hi)
        .collect();
    if let (Some(first), Some(last)) = (discs.first(), discs.last()) {
        if discs.len() > 1 {
            let span = last.x - first.x;
            h = span / (span / h).ceil();
        }
        let left_steps = ((first.x - lo) / h - 1e-9).ceil();
        start = first.x - left_steps * h;
        let right_steps = ((hi - first.x) / h + 1e-9).floor();
        n = (left_steps + right_steps) as usize + 1;
    }

    let scale = 2.0 * problem.context.mass / (problem.context.hbar * problem.context.hbar);
    let mut g: Vec<f64> = (0..n)
        .map(|i| scale * (problem.energy - problem.potential_at(start + i as f64 * h)))
        .collect();
    let mut jumps = Vec::new();
    for d in &discs {
        let node = ((d.x - start) / h).round() as usize;
        let off = (start + node as f64 * h - d.x).abs();
        if off > 1e-9 * h.max(d.x.abs() * 1e-6) && off > 1e-12 {
            return Err(Error::Numerical(format!(
                "could not align the jump at {} with the grid (offset {off:.3e})",
                d.x
            )));
        }
        g[node] = scale * (problem.energy - 0.5 * (d.left + d.right));
        let eps = 1e-6 * h;
        let dv = problem.potential.derivative_unchecked(d.x + eps)
            - problem.potential.derivative_unchecked(d.x - eps);
        jumps.push(Jump {
            node,
            dg: -scale * (d.right - d.left),
            dg_prime: -scale * dv,
        });
    }
    Ok(Grid { start, h, g, jumps })
}

fn check_edges(problem: &ScatteringProblem, config: &OracleConfig) -> Result<()> {
    let (lo, hi) = problem.domain;
    let tol = config.v_eps * problem.energy.abs().max(1.0);
    for (edge, dir) in [(lo, 1.0), (hi, -1.0)] {
        let v0 = problem.potential_at(edge);
        for t in [0.25, 0.5, 0.75, 1.0] {
            let v = problem.potential_at(edge + dir * t * config.match_margin);
            if (v - v0).abs() > tol {
                return Err(Error::AsymptoticMatching(format!(
                    "potential varies by {:.3e} within {} of the edge at {edge}",
                    (v - v0).abs(),
                    config.match_margin
                )));
            }
        }
    }
    Ok(())
}

/// Wavenumber of the discrete plane wave that solves the recurrence exactly
/// for constant g = k².
fn discrete_wavenumber(g: f64, h: f64) -> Result<f64> {
    let q = h * h * g / 12.0;
    let c = (1.0 - 5.0 * q) / (1.0 + q);
    if !(c > -1.0 && c < 1.0) {
        return Err(Error::Numerical(format!(
            "grid step {h} too coarse for wavenumber {}",
            g.sqrt()
        )));
    }
    Ok(c.acos() / h)
}

/// Jump contribution h³/12 · [ψ‴] with [ψ‴] = -[g] ψ' - [g'] ψ.
fn jump_defect(grid: &Grid, jump: &Jump, psi: Complex64, dpsi: Complex64) -> Complex64 {
    let h = grid.h;
    -(dpsi * jump.dg + psi * jump.dg_prime) * (h * h * h / 12.0)
}

fn integrate_from_right(grid: &Grid, k_right: f64) -> Vec<Complex64> {
    let n = grid.len();
    let h = grid.h;
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    psi[n - 1] = Complex64::from_polar(1.0, k_right * grid.x(n - 1));
    psi[n - 2] = Complex64::from_polar(1.0, k_right * grid.x(n - 2));
    for i in (1..n - 1).rev() {
        let mut rhs = psi[i] * (2.0 * (1.0 - 5.0 * h * h * grid.g[i] / 12.0)) - psi[i + 1] * grid.f(i + 1);
        if let Some(jump) = grid.jump_at(i) {
            let dpsi = if i + 2 < n {
                (-psi[i] * 3.0 + psi[i + 1] * 4.0 - psi[i + 2]) / (2.0 * h)
            } else {
                (psi[i + 1] - psi[i]) / h
            };
            rhs += jump_defect(grid, jump, psi[i], dpsi);
        }
        psi[i - 1] = rhs / grid.f(i - 1);
    }
    psi
}

/// Full scattering solution on the oracle grid.
#[derive(Debug, Clone)]
pub struct ScatteringSolution {
    pub xs: Vec<f64>,
    /// ψ with the transmitted wave of unit amplitude.
    pub psi: Vec<Complex64>,
    /// Incident and reflected amplitudes of e^{±ik̃x} at the left edge.
    pub incident: Complex64,
    pub reflected: Complex64,
    pub k_left: f64,
    pub k_right: f64,
    pub transmission: f64,
    pub reflection: f64,
    step: f64,
}

impl ScatteringSolution {
    /// Reflection amplitude with the phase of the waves referred to `x_ref`.
    pub fn reflection_amplitude_at(&self, x_ref: f64) -> Complex64 {
        self.reflected / self.incident * Complex64::from_polar(1.0, -2.0 * self.k_left * x_ref)
    }

    /// Largest deviation of ψ from the two-wave fit over the first `count`
    /// nodes, relative to the incident amplitude.
    pub fn left_fit_residual(&self, count: usize) -> f64 {
        (0..count.min(self.xs.len()))
            .map(|j| {
                let x = self.xs[j];
                let fit = self.incident * Complex64::from_polar(1.0, self.k_left * x)
                    + self.reflected * Complex64::from_polar(1.0, -self.k_left * x);
                (self.psi[j] - fit).norm() / self.incident.norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn step(&self) -> f64 {
        self.step
    }
}

/// Integrates the scattering state and splits it at the left edge.
pub fn solve_scattering(problem: &ScatteringProblem, config: &OracleConfig) -> Result<ScatteringSolution> {
    check_edges(problem, config)?;
    let (lo, hi) = problem.domain;
    let floor = 1e-6;
    for edge in [lo, hi] {
        let gap = problem.energy - problem.potential_at(edge);
        if gap < floor {
            return Err(Error::ChannelClosed(format!(
                "E - V = {gap:.3e} at the edge x = {edge}; need at least {floor:e}"
            )));
        }
    }
    let grid = build_grid(problem, config)?;
    let n = grid.len();
    let h = grid.h;
    let k_right = discrete_wavenumber(grid.g[n - 1], h)?;
    let k_left = discrete_wavenumber(grid.g[0], h)?;
    let psi = integrate_from_right(&grid, k_right);

    let (x0, x1) = (grid.x(0), grid.x(1));
    let a0 = Complex64::from_polar(1.0, k_left * x0);
    let a1 = Complex64::from_polar(1.0, k_left * x1);
    let det = a0 / a1 - a1 / a0;
    let incident = (psi[0] / a1 - psi[1] / a0) / det;
    let reflected = (a0 * psi[1] - a1 * psi[0]) / det;

    let f_left = grid.f(0);
    let f_right = grid.f(n - 1);
    let flux = f_right * f_right * (k_right * h).sin();
    let incoming = f_left * f_left * (k_left * h).sin() * incident.norm_sqr();
    let transmission = flux / incoming;
    let reflection = reflected.norm_sqr() / incident.norm_sqr();
    if ((transmission + reflection) - 1.0).abs() > 1e-8 {
        return Err(Error::Numerical(format!(
            "flux balance violated: T + R - 1 = {:.3e}",
            transmission + reflection - 1.0
        )));
    }
    Ok(ScatteringSolution {
        xs: (0..n).map(|i| grid.x(i)).collect(),
        psi,
        incident,
        reflected,
        k_left,
        k_right,
        transmission,
        reflection,
        step: h,
    })
}

/// Exact transmission and reflection probabilities.
pub fn solve_scattering_exact(problem: &ScatteringProblem, config: &OracleConfig) -> Result<TransmissionReport> {
    let s = solve_scattering(problem, config)?;
    Ok(TransmissionReport {
        transmission: s.transmission,
        reflection: s.reflection,
        sigma_star: None,
        method: Method::ExactNumerov,
        leading_estimate: None,
    })
}

/// The exact scattering wavefunction on the oracle grid, scaled to unit
/// incident amplitude.
pub fn wavefunction_exact(problem: &ScatteringProblem, config: &OracleConfig) -> Result<WavefunctionTable> {
    let s = solve_scattering(problem, config)?;
    let tps = find_turning_points(problem).unwrap_or(TurningPoints::None);
    let pts = tps.points();
    let tags = s
        .xs
        .iter()
        .map(|&x| {
            if problem.momentum_squared(x) < 0.0 {
                RegionTag::Forbidden
            } else if pts.first().is_some_and(|&a| x < a) {
                RegionTag::AllowedLeft
            } else if pts.last().is_some_and(|&b| x > b) {
                RegionTag::AllowedRight
            } else {
                RegionTag::Allowed
            }
        })
        .collect();
    let psi = s.psi.iter().map(|v| v / s.incident).collect();
    WavefunctionTable::new(s.xs, psi, tags)
}

/// Sign changes of the solution shot from ψ = 0 at the left edge.
fn count_nodes(grid: &Grid) -> usize {
    let n = grid.len();
    let h = grid.h;
    let (mut p2, mut p1, mut p0) = (0.0f64, 0.0f64, 1e-30f64);
    let mut nodes = 0;
    let mut last_sign = 1.0;
    for i in 1..n - 1 {
        let mut rhs = p0 * 2.0 * (1.0 - 5.0 * h * h * grid.g[i] / 12.0) - p1 * grid.f(i - 1);
        if let Some(jump) = grid.jump_at(i) {
            let dpsi = if i >= 2 {
                (3.0 * p0 - 4.0 * p1 + p2) / (2.0 * h)
            } else {
                (p0 - p1) / h
            };
            rhs += jump_defect(grid, jump, Complex64::new(p0, 0.0), Complex64::new(dpsi, 0.0)).re;
        }
        let next = rhs / grid.f(i + 1);
        p2 = p1;
        p1 = p0;
        p0 = next;
        if p0 != 0.0 && p0.signum() != last_sign {
            nodes += 1;
            last_sign = p0.signum();
        }
        let big = p0.abs().max(p1.abs());
        if big > 1e100 {
            p0 /= big;
            p1 /= big;
            p2 /= big;
        }
    }
    nodes
}

/// Lowest `n_max + 1` bound-state energies of a confining well, each to
/// about 1e-12 relative, by bisection on the node count.
pub fn solve_bound_states_exact(
    problem: &ScatteringProblem,
    n_max: usize,
    config: &OracleConfig,
) -> Result<Vec<f64>> {
    let (lo, hi) = problem.domain;
    let ceiling = problem.potential_at(lo).min(problem.potential_at(hi));
    let floor = problem.potential_min();
    if !(ceiling > floor) {
        return Err(Error::Spectrum(
            "potential is not confining on the domain: edge values do not exceed the minimum".into(),
        ));
    }
    let nodes_at = |e: f64| -> Result<usize> { Ok(count_nodes(&build_grid(&problem.with_energy(e), config)?)) };

    let mut top = floor + (ceiling - floor).min(1.0);
    while nodes_at(top)? < n_max + 1 {
        if top >= ceiling {
            return Err(Error::Spectrum(format!(
                "fewer than {} levels lie below the edge value {ceiling}",
                n_max + 1
            )));
        }
        top = (floor + 2.0 * (top - floor)).min(ceiling);
    }

    let mut levels = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (mut a, mut b) = (levels.last().copied().unwrap_or(floor), top);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if nodes_at(mid)? > n {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= 1e-13 * mid.abs().max(1.0) {
                break;
            }
        }
        levels.push(0.5 * (a + b));
    }
    Ok(levels)
}

/// Transmission through a rectangular barrier of height `height` and width
/// `width` in closed form.
pub fn square_barrier_transmission(context: &PhysicalContext, height: f64, width: f64, energy: f64) -> f64 {
    let (m, hbar) = (context.mass, context.hbar);
    let delta = height - energy;
    if delta > 0.0 {
        let kappa = (2.0 * m * delta).sqrt() / hbar;
        let s = (kappa * width).sinh();
        1.0 / (1.0 + height * height * s * s / (4.0 * energy * delta))
    } else if delta < 0.0 {
        let q = (2.0 * m * -delta).sqrt() / hbar;
        let s = (q * width).sin();
        1.0 / (1.0 + height * height * s * s / (4.0 * energy * -delta))
    } else {
        let k2w2 = 2.0 * m * energy * width * width / (hbar * hbar);
        1.0 / (1.0 + k2w2 / 4.0)
    }
}

/// Transmission through V0 sech²(x/d) in closed form.
pub fn eckart_transmission(context: &PhysicalContext, height: f64, width: f64, energy: f64) -> f64 {
    let (m, hbar) = (context.mass, context.hbar);
    let pi = std::f64::consts::PI;
    let k = (2.0 * m * energy).sqrt() / hbar;
    let s = (pi * k * width).sinh().powi(2);
    let disc = 8.0 * m * height * width * width / (hbar * hbar) - 1.0;
    let c = if disc >= 0.0 {
        (0.5 * pi * disc.sqrt()).cosh().powi(2)
    } else {
        (0.5 * pi * (-disc).sqrt()).cos().powi(2)
    };
    s / (s + c)
}

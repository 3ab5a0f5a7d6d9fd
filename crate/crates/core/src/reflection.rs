//! Above-barrier reflection: the local coupling r = p'/(2p) between the two
//! WKB waves, iteration of the coupled amplitude equations, the
//! once-reflected amplitude, the phase-variable form of the wave equation
//! and its first-order momentum-space matrix elements.
//!
//! With ψ = p^{-1/2} [C₊ e^{iw/ħ} + C₋ e^{-iw/ħ}] the amplitudes obey
//! C₊' = r C₋ e^{-2iw/ħ} and C₋' = r C₊ e^{2iw/ħ}. A unit wave enters from the
//! left and nothing enters from the right, so C₊(-∞) = 1 and C₋(+∞) = 0; the
//! reflection amplitude is C₋(-∞), with the phase referred to the point where
//! w = 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::ScatteringProblem;
use crate::quadrature::{kronrod15, kronrod15_nodes};
use crate::wkb::{action_integral, momentum_derivatives, Method, TransmissionReport};

/// Default number of samples of the phase grid.
pub const DEFAULT_PHASE_POINTS: usize = 4096;

fn require_over_barrier(problem: &ScatteringProblem) -> Result<()> {
    let top = problem.potential_max();
    if problem.energy <= top {
        return Err(Error::Regime(format!(
            "reflection series needs E above the barrier top: E = {} <= max V = {top}",
            problem.energy
        )));
    }
    Ok(())
}

/// r(x) = p'/(2p) in a classically allowed region.
pub fn differential_reflection(problem: &ScatteringProblem, x: f64) -> Result<f64> {
    let (p, dp, _) = momentum_derivatives(problem, x)?;
    Ok(dp / (2.0 * p))
}

/// Samples of position, action w(x_min, x) and momentum.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub xs: Vec<f64>,
    pub ws: Vec<f64>,
    pub ps: Vec<f64>,
}

/// Phase grid with `points` equally spaced samples across the domain.
pub fn phase_grid(problem: &ScatteringProblem, points: usize) -> Result<PhaseGrid> {
    require_over_barrier(problem)?;
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "phase grid needs at least 2 points, got {points}"
        )));
    }
    let (lo, hi) = problem.domain;
    let step = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect();
    let mut ws = Vec::with_capacity(points);
    let mut w = 0.0;
    ws.push(w);
    for pair in xs.windows(2) {
        let (v, _) = kronrod15(&mut |x: f64| problem.momentum(x), pair[0], pair[1]);
        w += v;
        ws.push(w);
    }
    let ps = xs.iter().map(|&x| problem.momentum(x)).collect();
    Ok(PhaseGrid { xs, ws, ps })
}

/// Phase grid with the default resolution.
pub fn phase_transform(problem: &ScatteringProblem) -> Result<PhaseGrid> {
    phase_grid(problem, DEFAULT_PHASE_POINTS)
}

/// Amplitudes on the phase grid after Picard iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardAmplitudes {
    pub grid: PhaseGrid,
    pub c_plus: Vec<Complex64>,
    pub c_minus: Vec<Complex64>,
    pub iterations: usize,
    /// Largest change of either amplitude in the last sweep.
    pub last_change: f64,
}

impl PicardAmplitudes {
    /// C₋ at the left edge over C₊ there.
    pub fn reflection_amplitude(&self) -> Complex64 {
        self.c_minus[0] / self.c_plus[0]
    }
}

/// Iterates C₋(x) = -∫ₓ^∞ r C₊ e^{2iw/ħ} and C₊(x) = 1 + ∫_{-∞}^x r C₋ e^{-2iw/ħ}
/// from C₊ = 1, C₋ = 0 with the trapezoid rule, for at most `iterations`
/// sweeps or until the largest change falls below 1e-10.
pub fn picard_amplitudes(problem: &ScatteringProblem, iterations: usize) -> Result<PicardAmplitudes> {
    picard_amplitudes_on(problem, iterations, DEFAULT_PHASE_POINTS)
}

/// [`picard_amplitudes`] on a grid of `points` samples.
pub fn picard_amplitudes_on(
    problem: &ScatteringProblem,
    iterations: usize,
    points: usize,
) -> Result<PicardAmplitudes> {
    if iterations == 0 {
        return Err(Error::InvalidParameter("at least one iteration is required".into()));
    }
    let grid = phase_grid(problem, points)?;
    let n = grid.xs.len();
    let hbar = problem.context.hbar;
    let r: Vec<f64> = grid
        .xs
        .iter()
        .map(|&x| differential_reflection(problem, x))
        .collect::<Result<_>>()?;
    let up: Vec<Complex64> = grid
        .ws
        .iter()
        .zip(&r)
        .map(|(w, r)| Complex64::from_polar(*r, 2.0 * w / hbar))
        .collect();

    let mut c_plus = vec![Complex64::new(1.0, 0.0); n];
    let mut c_minus = vec![Complex64::new(0.0, 0.0); n];
    let mut done = 0;
    let mut change = f64::INFINITY;
    while done < iterations {
        let mut next_minus = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n - 1).rev() {
            let dx = grid.xs[i + 1] - grid.xs[i];
            let f0 = up[i] * c_plus[i];
            let f1 = up[i + 1] * c_plus[i + 1];
            next_minus[i] = next_minus[i + 1] - (f0 + f1) * (0.5 * dx);
        }
        let mut next_plus = vec![Complex64::new(1.0, 0.0); n];
        for i in 1..n {
            let dx = grid.xs[i] - grid.xs[i - 1];
            let f0 = up[i - 1].conj() * next_minus[i - 1];
            let f1 = up[i].conj() * next_minus[i];
            next_plus[i] = next_plus[i - 1] + (f0 + f1) * (0.5 * dx);
        }
        let scale = next_plus
            .iter()
            .chain(&next_minus)
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        change = c_plus
            .iter()
            .zip(&next_plus)
            .chain(c_minus.iter().zip(&next_minus))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale;
        c_plus = next_plus;
        c_minus = next_minus;
        done += 1;
        if change < 1e-10 {
            break;
        }
    }
    Ok(PicardAmplitudes {
        grid,
        c_plus,
        c_minus,
        iterations: done,
        last_change: change,
    })
}

/// ∫ amp(x) exp(i freq w(x_ref, x)/ħ) dx over the domain. Each panel spans at
/// most a quarter turn of the phase; panels are halved until two passes agree.
fn oscillatory_integral<F: Fn(f64) -> f64>(
    problem: &ScatteringProblem,
    x_ref: f64,
    freq: f64,
    amp: F,
) -> Result<Complex64> {
    let (lo, hi) = problem.domain;
    let hbar = problem.context.hbar;
    let offset = action_integral(problem, x_ref, lo)?;
    let p_max = (2.0 * problem.context.mass * (problem.energy - problem.potential_min())).sqrt();
    let quarter = if freq == 0.0 {
        f64::INFINITY
    } else {
        0.5 * std::f64::consts::PI * hbar / (freq.abs() * p_max)
    };
    let base = quarter.min((hi - lo) / 16.0);
    let mut panels = ((hi - lo) / base).ceil() as usize;

    let mut previous: Option<Complex64> = None;
    for _ in 0..8 {
        let width = (hi - lo) / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0;
        let mut w_start = offset;
        for j in 0..panels {
            let a = lo + width * j as f64;
            let b = if j + 1 == panels { hi } else { a + width };
            for (x, weight) in kronrod15_nodes(a, b) {
                let (dw, _) = kronrod15(&mut |s: f64| problem.momentum(s), a, x);
                let value = amp(x);
                magnitude += weight * value.abs();
                total += Complex64::from_polar(weight * value, freq * (w_start + dw) / hbar);
            }
            let (dw, _) = kronrod15(&mut |s: f64| problem.momentum(s), a, b);
            w_start += dw;
        }
        if let Some(prev) = previous {
            if (total - prev).norm() <= 1e-13 * magnitude.max(f64::MIN_POSITIVE) {
                return Ok(total);
            }
        }
        previous = Some(total);
        panels *= 2;
    }
    Err(Error::Numerical(
        "oscillatory quadrature did not settle after repeated panel halving".into(),
    ))
}

/// R ≈ -∫ r(x) e^{2iw(x₀,x)/ħ} dx with x₀ at the left edge of the domain.
pub fn once_reflected_coefficient(problem: &ScatteringProblem) -> Result<Complex64> {
    once_reflected_with_reference(problem, problem.domain.0)
}

/// As [`once_reflected_coefficient`] with the phase measured from `x_ref`.
pub fn once_reflected_with_reference(problem: &ScatteringProblem, x_ref: f64) -> Result<Complex64> {
    require_over_barrier(problem)?;
    let value = oscillatory_integral(problem, x_ref, 2.0, |x| {
        differential_reflection(problem, x).unwrap_or(f64::NAN)
    })?;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Numerical("once-reflected integrand is not finite".into()));
    }
    Ok(-value)
}

/// Reflection probability |R|² from the once-reflected amplitude.
pub fn once_reflected_report(problem: &ScatteringProblem) -> Result<TransmissionReport> {
    let r = once_reflected_coefficient(problem)?;
    let reflection = r.norm_sqr();
    Ok(TransmissionReport {
        transmission: 1.0 - reflection,
        reflection,
        sigma_star: None,
        method: Method::OnceReflected,
        leading_estimate: None,
    })
}

/// The three equivalent expressions for Ṽ at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationForms {
    /// (3p'² - 2pp'') / (4p⁴).
    pub analytic: f64,
    /// (σ₁'' + σ₁'²) / σ₀'².
    pub from_sigma1: f64,
    /// -(2/p) σ₂'.
    pub from_sigma2: f64,
}

/// All three forms of Ṽ at `x`.
pub fn effective_perturbation_forms(problem: &ScatteringProblem, x: f64) -> Result<PerturbationForms> {
    let (p, dp, d2p) = momentum_derivatives(problem, x)?;
    let s1p = -dp / (2.0 * p);
    let s1pp = (dp * dp - p * d2p) / (2.0 * p * p);
    let s2p = -(s1p * s1p + s1pp) / (2.0 * p);
    Ok(PerturbationForms {
        analytic: (3.0 * dp * dp - 2.0 * p * d2p) / (4.0 * p.powi(4)),
        from_sigma1: (s1pp + s1p * s1p) / (p * p),
        from_sigma2: -2.0 / p * s2p,
    })
}

/// Ṽ(x) = (3p'² - 2pp'')/(4p⁴), the extra term in d²φ/dw² + (1/ħ² + Ṽ)φ = 0
/// for φ = √(p/ħ) ψ.
pub fn effective_perturbation(problem: &ScatteringProblem, x: f64) -> Result<f64> {
    Ok(effective_perturbation_forms(problem, x)?.analytic)
}

/// Samples of Ṽ against the phase variable.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectivePerturbation {
    pub samples: Vec<(f64, f64)>,
}

/// Ṽ on every point of a phase grid.
pub fn effective_perturbation_samples(
    problem: &ScatteringProblem,
    grid: &PhaseGrid,
) -> Result<EffectivePerturbation> {
    let samples = grid
        .xs
        .iter()
        .zip(&grid.ws)
        .map(|(&x, &w)| Ok((w, effective_perturbation(problem, x)?)))
        .collect::<Result<_>>()?;
    Ok(EffectivePerturbation { samples })
}

fn check_on_shell(k: f64) -> Result<()> {
    if (k.abs() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "momenta are in units of the free wavenumber and must be ±1, got {k}"
        )));
    }
    Ok(())
}

/// ⟨k|Ṽ|k'⟩ = ∫ e^{i(k' - k)ξ/ħ} Ṽ(ξ) dξ over the phase variable ξ = w.
pub fn matrix_element(problem: &ScatteringProblem, k: f64, k_prime: f64) -> Result<Complex64> {
    require_over_barrier(problem)?;
    let (lo, hi) = problem.domain;
    let edge = effective_perturbation(problem, lo)?
        .abs()
        .max(effective_perturbation(problem, hi)?.abs());
    let peak = phase_grid(problem, 2049)?
        .xs
        .iter()
        .map(|&x| effective_perturbation(problem, x).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if peak > 0.0 && edge >= 1e-12 * peak {
        return Err(Error::Truncation(format!(
            "effective perturbation has not decayed at the domain edges: {edge:.3e} vs peak {peak:.3e}"
        )));
    }
    if peak == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    oscillatory_integral(problem, lo, k_prime - k, |x| {
        effective_perturbation(problem, x).unwrap_or(f64::NAN) * problem.momentum(x)
    })
}

/// First-order amplitude (iħ/2) ⟨k_f|Ṽ|k_i⟩ for on-shell momenta ±1; for
/// k_f = -k_i this is the reflection amplitude with phase referred to the
/// left edge.
pub fn born_first_order(problem: &ScatteringProblem, k_i: f64, k_f: f64) -> Result<Complex64> {
    check_on_shell(k_i)?;
    check_on_shell(k_f)?;
    let v = matrix_element(problem, k_f, k_i)?;
    Ok(Complex64::new(0.0, 0.5 * problem.context.hbar) * v)
}

/// Reflection probability from the first-order backscattering amplitude.
pub fn born_report(problem: &ScatteringProblem) -> Result<TransmissionReport> {
    let r = born_first_order(problem, 1.0, -1.0)?;
    let reflection = r.norm_sqr();
    Ok(TransmissionReport {
        transmission: 1.0 - reflection,
        reflection,
        sigma_star: None,
        method: Method::BornFirstOrder,
        leading_estimate: None,
    })
}

/// Free propagator (ħ²/2π) / (1 - (ħk)²) in the phase variable.
pub fn free_propagator(hbar: f64, k: f64) -> Result<f64> {
    let hk = hbar * k;
    if (hk.abs() - 1.0).abs() < 1e-6 {
        return Err(Error::PoleProximity(format!(
            "ħk = {hk} is within 1e-6 of a pole at ±1"
        )));
    }
    Ok(hbar * hbar / (2.0 * std::f64::consts::PI) / (1.0 - hk * hk))
}

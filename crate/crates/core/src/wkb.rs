//! WKB phase expansion: action integrals, barrier integrals, expansion terms,
//! semiclassical wavefunctions, tunnelling probabilities and the
//! quantization condition.

use num_complex::Complex64;

use crate::connection::{AmplitudePair, RegionTag, WavefunctionTable};
use crate::error::{Error, Result};
use crate::potential::{find_turning_points, ScatteringProblem, TurningPoints};
use crate::quadrature::{bisect, integrate};

/// Which approximation produced a transmission estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    WkbLeading,
    WkbCorrected,
    ConnectionPatched,
    BornFirstOrder,
    OnceReflected,
    ExactNumerov,
}

impl Method {
    /// Name used in CSV output and on the command line.
    pub fn label(self) -> &'static str {
        match self {
            Method::WkbLeading => "wkb",
            Method::WkbCorrected => "wkb-corrected",
            Method::ConnectionPatched => "connection",
            Method::BornFirstOrder => "born1",
            Method::OnceReflected => "once-reflected",
            Method::ExactNumerov => "exact",
        }
    }

    pub fn from_label(s: &str) -> Option<Method> {
        [
            Method::WkbLeading,
            Method::WkbCorrected,
            Method::ConnectionPatched,
            Method::BornFirstOrder,
            Method::OnceReflected,
            Method::ExactNumerov,
        ]
        .into_iter()
        .find(|m| m.label() == s)
    }
}

/// Transmission and reflection probabilities from one method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionReport {
    pub transmission: f64,
    pub reflection: f64,
    /// Barrier integral, when the problem has a tunnelling region.
    pub sigma_star: Option<f64>,
    pub method: Method,
    /// Bare exp(-2σ*) for comparison, when σ* is defined.
    pub leading_estimate: Option<f64>,
}

/// Expansion terms of the WKB phase at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbTerms {
    /// Action ∫ p dx from the reference point.
    pub sigma0: f64,
    /// -ln √p.
    pub sigma1: f64,
    /// Derivative of the second-order phase term.
    pub sigma2_prime: f64,
    pub evaluation_point: f64,
}

/// p, dp/dx and d²p/dx² at a point where p > 0.
pub fn momentum_derivatives(problem: &ScatteringProblem, x: f64) -> Result<(f64, f64, f64)> {
    let p2 = problem.momentum_squared(x);
    if !(p2 > 0.0) {
        return Err(Error::Domain(format!(
            "p(x)^2 = {p2:.3e} at x = {x}: point is not classically allowed"
        )));
    }
    let m = problem.context.mass;
    let p = p2.sqrt();
    let dv = problem.potential.derivative(x)?;
    let d2v = problem.potential.second_derivative(x)?;
    let dp = -m * dv / p;
    let d2p = -m * d2v / p - m * m * dv * dv / (p * p * p);
    Ok((p, dp, d2p))
}

/// ∫ f over [lo, hi] with x = lo + s² on the left half and x = hi - s² on
/// the right half, which smooths square-root behaviour at either end. Known
/// jumps of the potential inside the interval become extra break points.
fn integrate_root_ends<F: Fn(f64) -> f64>(
    problem: &ScatteringProblem,
    f: F,
    lo: f64,
    hi: f64,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let mut cuts = vec![lo];
    cuts.extend(
        problem
            .potential
            .discontinuities()
            .into_iter()
            .map(|d| d.x)
            .filter(|&x| x > lo && x < hi),
    );
    cuts.push(hi);

    let scale = (2.0 * problem.context.mass * (problem.energy.abs() + 1.0)).sqrt();
    let abs_tol = 1e-15 * (hi - lo) * scale;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let root = (mid - a).sqrt();
        let left = integrate_relaxing(|s: f64| 2.0 * s * f(a + s * s), root, abs_tol)?;
        let right = integrate_relaxing(|s: f64| 2.0 * s * f(b - s * s), root, abs_tol)?;
        total += left + right;
    }
    Ok(total)
}

// When E sits within rounding of V the momentum itself is noisy and the
// tightest tolerance cannot be met; relax in steps before giving up.
fn integrate_relaxing<F: Fn(f64) -> f64>(f: F, upper: f64, abs_tol: f64) -> Result<f64> {
    let mut last = None;
    for rel in [1e-14, 1e-12, 1e-10, 1e-8, 1e-6] {
        match integrate(&f, 0.0, upper, abs_tol, rel) {
            Ok(q) => return Ok(q.value),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn interior_turning_point(problem: &ScatteringProblem, lo: f64, hi: f64) -> Result<Option<f64>> {
    let tps = find_turning_points(problem)?;
    let guard = 1e-9 * (hi - lo).max(1e-300);
    Ok(tps
        .points()
        .into_iter()
        .find(|&t| t > lo + guard && t < hi - guard))
}

fn region_integral(problem: &ScatteringProblem, x0: f64, x: f64, forbidden: bool) -> Result<f64> {
    for v in [x0, x] {
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite position {v}")));
        }
        problem.potential.evaluate(v)?;
    }
    if x0 == x {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if x0 < x { (x0, x, 1.0) } else { (x, x0, -1.0) };
    if let Some(t) = interior_turning_point(problem, lo, hi)? {
        return Err(Error::Region(format!(
            "turning point at {t} lies strictly inside [{lo}, {hi}]"
        )));
    }
    let mid_p2 = problem.momentum_squared(0.5 * (lo + hi));
    if forbidden && mid_p2 > 0.0 {
        return Err(Error::Region(format!(
            "[{lo}, {hi}] is classically allowed, expected a forbidden interval"
        )));
    }
    if !forbidden && mid_p2 < 0.0 {
        return Err(Error::Region(format!(
            "[{lo}, {hi}] is classically forbidden, expected an allowed interval"
        )));
    }
    let value = if forbidden {
        integrate_root_ends(problem, |s| problem.forbidden_momentum(s), lo, hi)?
    } else {
        integrate_root_ends(problem, |s| problem.momentum(s), lo, hi)?
    };
    Ok(sign * value)
}

/// w(x0, x) = ∫ p dx' over a classically allowed interval (signed: negative
/// when x < x0).
pub fn action_integral(problem: &ScatteringProblem, x0: f64, x: f64) -> Result<f64> {
    region_integral(problem, x0, x, false)
}

/// ∫ |p| dx' over a classically forbidden interval, without the 1/ħ.
pub fn forbidden_action(problem: &ScatteringProblem, x0: f64, x: f64) -> Result<f64> {
    region_integral(problem, x0, x, true)
}

/// σ* = (1/ħ) ∫ₐᵇ √(2m(V - E)) dx between the two turning points of a barrier.
pub fn barrier_integral(problem: &ScatteringProblem, tp: &TurningPoints) -> Result<f64> {
    let Some((a, b)) = tp.pair() else {
        if problem.energy >= problem.potential_max() {
            return Err(Error::NoBarrier {
                energy: problem.energy,
            });
        }
        return Err(Error::Region(format!(
            "barrier integral needs two turning points, found {}",
            tp.count()
        )));
    };
    if problem.momentum_squared(0.5 * (a + b)) > 0.0 {
        return Err(Error::Region(format!(
            "[{a}, {b}] is a classically allowed well, not a barrier"
        )));
    }
    let s = integrate_root_ends(problem, |x| problem.forbidden_momentum(x), a, b)?;
    Ok(s / problem.context.hbar)
}

/// Outer turning points of a tunnelling problem; a no-barrier error when E
/// is above the barrier top.
pub fn barrier_turning_points(problem: &ScatteringProblem) -> Result<(f64, f64)> {
    if problem.energy >= problem.potential_max() {
        return Err(Error::NoBarrier {
            energy: problem.energy,
        });
    }
    let tp = find_turning_points(problem)?;
    match tp.pair() {
        Some((a, b)) if problem.momentum_squared(0.5 * (a + b)) < 0.0 => Ok((a, b)),
        _ => Err(Error::Region(format!(
            "expected a single barrier with two turning points, found {}",
            tp.count()
        ))),
    }
}

/// σ* for a barrier problem, locating the turning points first.
pub fn sigma_star(problem: &ScatteringProblem) -> Result<f64> {
    let (a, b) = barrier_turning_points(problem)?;
    barrier_integral(problem, &TurningPoints::Pair { a, b })
}

/// Airy length (ħ²/(2m|V'|))^{1/3} at a turning point; zero at a jump of the
/// potential, infinite where V' vanishes.
pub fn exclusion_radius(problem: &ScatteringProblem, turning_point: f64) -> Result<f64> {
    let jump = problem
        .potential
        .discontinuities()
        .iter()
        .any(|d| (d.x - turning_point).abs() <= 1e-9 * d.x.abs().max(1.0));
    if jump {
        return Ok(0.0);
    }
    let slope = problem.potential.derivative(turning_point)?.abs();
    if slope == 0.0 {
        return Ok(f64::INFINITY);
    }
    let hbar = problem.context.hbar;
    Ok((hbar * hbar / (2.0 * problem.context.mass * slope)).cbrt())
}

fn check_exclusion(problem: &ScatteringProblem, tps: &TurningPoints, x: f64) -> Result<()> {
    for t in tps.points() {
        let radius = exclusion_radius(problem, t)?;
        if (x - t).abs() < radius || (radius == 0.0 && x == t) {
            return Err(Error::TurningPointProximity {
                x,
                turning_point: t,
                radius,
            });
        }
    }
    Ok(())
}

/// σ0, σ1 and σ2' at `x`, with the action measured from `x0`.
pub fn wkb_terms(problem: &ScatteringProblem, x0: f64, x: f64) -> Result<WkbTerms> {
    let tps = find_turning_points(problem)?;
    check_exclusion(problem, &tps, x)?;
    let sigma0 = action_integral(problem, x0, x)?;
    let (p, dp, d2p) = momentum_derivatives(problem, x)?;
    // σ1' = -p'/(2p); σ1'' = (p'² - p p'')/(2p²); second order of the
    // Riccati equation gives 2σ0'σ2' + σ1'² + σ1'' = 0 with σ0' = p.
    let s1p = -dp / (2.0 * p);
    let s1pp = (dp * dp - p * d2p) / (2.0 * p * p);
    Ok(WkbTerms {
        sigma0,
        sigma1: -0.5 * p.ln(),
        sigma2_prime: -(s1p * s1p + s1pp) / (2.0 * p),
        evaluation_point: x,
    })
}

fn region_tag(problem: &ScatteringProblem, tps: &TurningPoints, x: f64) -> RegionTag {
    if problem.momentum_squared(x) < 0.0 {
        return RegionTag::Forbidden;
    }
    let pts = tps.points();
    match (pts.first(), pts.last()) {
        (Some(&first), Some(&last)) => {
            if x < first {
                RegionTag::AllowedLeft
            } else if x > last {
                RegionTag::AllowedRight
            } else {
                RegionTag::Allowed
            }
        }
        _ => RegionTag::Allowed,
    }
}

/// First-order WKB wavefunction sampled at `xs`.
///
/// In allowed regions ψ = p^{-1/2} [C₊ e^{iw/ħ} + C₋ e^{-iw/ħ}] with
/// w = w(x0, x); in forbidden regions ψ = |p|^{-1/2} [C₊ e^{-s/ħ} + C₋ e^{s/ħ}]
/// with s = ∫_{x0}^x |p| dx'. Each x must share its region with `x0`.
pub fn wkb_wavefunction(
    problem: &ScatteringProblem,
    amplitudes: AmplitudePair,
    x0: f64,
    xs: &[f64],
) -> Result<WavefunctionTable> {
    let tps = find_turning_points(problem)?;
    let hbar = problem.context.hbar;
    let mut psi = Vec::with_capacity(xs.len());
    let mut tags = Vec::with_capacity(xs.len());
    for &x in xs {
        check_exclusion(problem, &tps, x)?;
        let tag = region_tag(problem, &tps, x);
        let value = if tag == RegionTag::Forbidden {
            let s = forbidden_action(problem, x0, x)? / hbar;
            let amp = problem.forbidden_momentum(x).powf(-0.5);
            (amplitudes.c_plus * (-s).exp() + amplitudes.c_minus * s.exp()) * amp
        } else {
            let w = action_integral(problem, x0, x)? / hbar;
            let amp = problem.momentum(x).powf(-0.5);
            let phase = Complex64::from_polar(1.0, w);
            (amplitudes.c_plus * phase + amplitudes.c_minus * phase.conj()) * amp
        };
        psi.push(value);
        tags.push(tag);
    }
    WavefunctionTable::new(xs.to_vec(), psi, tags)
}

/// exp(-2σ*).
pub fn leading_transmission(sigma_star: f64) -> f64 {
    (-2.0 * sigma_star).exp()
}

/// exp(-2σ*) / (1 + exp(-2σ*)/4)², the transmission including the growing
/// exponential's contribution under the barrier.
pub fn corrected_transmission(sigma_star: f64) -> f64 {
    let t = (-2.0 * sigma_star).exp();
    t / (1.0 + 0.25 * t).powi(2)
}

/// Tunnelling probability from the barrier integral; `method` selects the
/// bare exponential or the corrected form.
pub fn transmission_wkb(problem: &ScatteringProblem, method: Method) -> Result<TransmissionReport> {
    let sigma = sigma_star(problem)?;
    let bare = leading_transmission(sigma);
    let transmission = match method {
        Method::WkbLeading => bare,
        Method::WkbCorrected => corrected_transmission(sigma),
        other => {
            return Err(Error::InvalidParameter(format!(
                "transmission_wkb does not implement method {}",
                other.label()
            )))
        }
    };
    Ok(TransmissionReport {
        transmission,
        reflection: 1.0 - transmission,
        sigma_star: Some(sigma),
        method,
        leading_estimate: Some(bare),
    })
}

/// Bare exp(-2σ*) report.
pub fn transmission_leading(problem: &ScatteringProblem) -> Result<TransmissionReport> {
    transmission_wkb(problem, Method::WkbLeading)
}

/// Corrected transmission report.
pub fn transmission_corrected(problem: &ScatteringProblem) -> Result<TransmissionReport> {
    transmission_wkb(problem, Method::WkbCorrected)
}

fn well_action(problem: &ScatteringProblem) -> Result<f64> {
    let tp = find_turning_points(problem)?;
    match tp.pair() {
        Some((a, b)) if problem.momentum_squared(0.5 * (a + b)) > 0.0 => {
            integrate_root_ends(problem, |x| problem.momentum(x), a, b)
        }
        _ => Err(Error::Region(format!(
            "quantization needs a well with two turning points at E = {}, found {}",
            problem.energy,
            tp.count()
        ))),
    }
}

/// Energy of level `n` from ∫ₐᵇ p dx = (n + ½)πħ, bracketed by `bracket`.
pub fn quantize(problem: &ScatteringProblem, n: u32, bracket: (f64, f64)) -> Result<f64> {
    let target = (n as f64 + 0.5) * std::f64::consts::PI * problem.context.hbar;
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "energy bracket must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    let f = |e: f64| -> Result<f64> { Ok(well_action(&problem.with_energy(e))? - target) };
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "quantization function does not change sign on [{lo}, {hi}] for n = {n}"
        )));
    }
    let mut failure = None;
    let e = bisect(
        |e| match f(e) {
            Ok(v) => v,
            Err(err) => {
                failure.get_or_insert(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-10,
    )?;
    match failure {
        Some(err) => Err(err),
        None => Ok(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{PhysicalContext, PotentialModel};
    use std::f64::consts::PI;

    fn problem(potential: PotentialModel, energy: f64, domain: (f64, f64)) -> ScatteringProblem {
        ScatteringProblem::new(PhysicalContext::natural(), potential, energy, domain).unwrap()
    }

    fn free(energy: f64) -> ScatteringProblem {
        problem(PotentialModel::linear_ramp(0.0, 0.0).unwrap(), energy, (-10.0, 10.0))
    }

    #[test]
    fn free_particle_action() {
        let p = free(0.5);
        assert!((action_integral(&p, 0.0, 2.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((action_integral(&p, 2.0, 0.0).unwrap() + 2.0).abs() < 1e-14);
        assert_eq!(action_integral(&p, 1.5, 1.5).unwrap(), 0.0);
    }

    #[test]
    fn harmonic_action_between_turning_points() {
        let p = problem(PotentialModel::harmonic(1.0).unwrap(), 0.5, (-5.0, 5.0));
        let w = action_integral(&p, -1.0, 1.0).unwrap();
        assert!((w - PI / 2.0).abs() < 1e-12, "{w}");
    }

    #[test]
    fn interior_turning_point_rejected() {
        let p = problem(PotentialModel::harmonic(1.0).unwrap(), 0.5, (-5.0, 5.0));
        assert!(matches!(action_integral(&p, 0.0, 3.0), Err(Error::Region(_))));
    }

    #[test]
    fn action_is_additive() {
        let p = problem(PotentialModel::gaussian_bump(0.3, 1.0, 0.0).unwrap(), 1.0, (-8.0, 8.0));
        let a = action_integral(&p, -3.0, 0.4).unwrap();
        let b = action_integral(&p, 0.4, 2.5).unwrap();
        let c = action_integral(&p, -3.0, 2.5).unwrap();
        assert!((a + b - c).abs() < 1e-12);
    }

    #[test]
    fn parabolic_barrier_integral() {
        let p = problem(PotentialModel::parabolic_barrier(1.0, 1.0, 0.0).unwrap(), 0.5, (-3.0, 3.0));
        let s = sigma_star(&p).unwrap();
        assert!(((s - PI / 2.0) / (PI / 2.0)).abs() < 1e-12, "{s}");
    }

    #[test]
    fn square_barrier_integral() {
        let p = problem(PotentialModel::square_barrier(1.0, 2.0, 0.0).unwrap(), 0.5, (-5.0, 5.0));
        let s = sigma_star(&p).unwrap();
        assert!((s - 2.0).abs() < 1e-12, "{s}");
        let p = p.with_energy(0.3);
        let s = sigma_star(&p).unwrap();
        assert!((s - 2.0 * 1.4f64.sqrt()).abs() < 1e-12, "{s}");
    }

    #[test]
    fn vanishing_barrier() {
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 1.0 - 1e-10, (-20.0, 20.0));
        assert!(sigma_star(&p).unwrap() < 1e-4);
        let over = p.with_energy(1.2);
        assert!(matches!(sigma_star(&over), Err(Error::NoBarrier { .. })));
    }

    #[test]
    fn transmission_formulas() {
        assert!((corrected_transmission(2.0) - 0.018_149_052_621_187_6).abs() < 1e-15);
        assert!((leading_transmission(2.0) - (-4.0f64).exp()).abs() < 1e-18);
        for s in [0.01, 0.5, 1.0, 3.0, 10.0] {
            assert!(corrected_transmission(s) <= leading_transmission(s));
        }
        assert!(corrected_transmission(200.0) < 1e-150);
    }

    #[test]
    fn report_is_unitary() {
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 0.4, (-20.0, 20.0));
        for r in [transmission_leading(&p).unwrap(), transmission_corrected(&p).unwrap()] {
            assert!(r.transmission > 0.0 && r.transmission < 1.0);
            assert_eq!(r.reflection, 1.0 - r.transmission);
        }
    }

    #[test]
    fn eckart_sigma_matches_closed_form() {
        // σ* = π d √(2m) (√V0 - √E) / ħ for V0 sech²(x/d).
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 0.2, (-20.0, 20.0));
        let exact = PI * 2f64.sqrt() * (1.0 - 0.2f64.sqrt());
        assert!((sigma_star(&p).unwrap() - exact).abs() < 1e-11);
    }

    #[test]
    fn harmonic_quantization() {
        let p = problem(PotentialModel::harmonic(1.0).unwrap(), 0.0, (-10.0, 10.0));
        let mut last = 0.0;
        for n in 0..=10u32 {
            let e = quantize(&p, n, (0.01, 20.0)).unwrap();
            assert!((e - (n as f64 + 0.5)).abs() < 1e-8, "n={n}: {e}");
            assert!(e > last);
            last = e;
        }
        assert!(matches!(quantize(&p, 3, (0.01, 1.0)), Err(Error::Bracket(_))));
    }

    #[test]
    fn flat_terms() {
        let t = wkb_terms(&free(0.5), 0.0, 1.0).unwrap();
        assert!((t.sigma1 - 0.0).abs() < 1e-15);
        assert_eq!(t.sigma2_prime, 0.0);
        assert!((t.sigma0 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ramp_terms_and_reflection_rate() {
        // V = -x, E = 0: turning point a = 0, allowed for x > 0, p = √(2x).
        let p = problem(PotentialModel::linear_ramp(0.0, -1.0).unwrap(), 0.0, (-5.0, 20.0));
        let x = 4.0;
        let t = wkb_terms(&p, 1.0, x).unwrap();
        assert!((t.sigma1 + 0.5 * (2.0 * x).sqrt().ln()).abs() < 1e-14);
        let (pp, dp, _) = momentum_derivatives(&p, x).unwrap();
        assert!((dp / (2.0 * pp) - 1.0 / (4.0 * x)).abs() < 1e-14);
        // σ2' = -p Ṽ / 2 with Ṽ = 5/(16 c² u³), c = √2.
        let v_tilde = 5.0 / (32.0 * x.powi(3));
        assert!((t.sigma2_prime + pp * v_tilde / 2.0).abs() < 1e-14);
    }

    #[test]
    fn exclusion_zone_enforced() {
        let p = problem(PotentialModel::linear_ramp(0.0, -1.0).unwrap(), 0.0, (-5.0, 20.0));
        let r = exclusion_radius(&p, 0.0).unwrap();
        assert!((r - 0.5f64.cbrt()).abs() < 1e-15);
        assert!(matches!(
            wkb_terms(&p, 1.0, 0.5 * r),
            Err(Error::TurningPointProximity { .. })
        ));
        let sq = problem(PotentialModel::square_barrier(1.0, 2.0, 0.0).unwrap(), 0.5, (-5.0, 5.0));
        assert_eq!(exclusion_radius(&sq, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn plane_wave_and_flat_forbidden_region() {
        let p = free(0.5);
        let xs = [-1.0, 0.0, 0.5, 2.0];
        let amps = AmplitudePair::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let t = wkb_wavefunction(&p, amps, 0.0, &xs).unwrap();
        for (x, psi) in xs.iter().zip(&t.psi) {
            assert!((psi - Complex64::new(0.0, *x).exp()).norm() < 1e-13);
        }
        let doubled = wkb_wavefunction(&p, amps.scaled(Complex64::new(2.0, 0.0)), 0.0, &xs).unwrap();
        for (a, b) in t.psi.iter().zip(&doubled.psi) {
            assert!((2.0 * a - b).norm() < 1e-14);
        }

        // Flat forbidden region: V = 1, E = 0.5, β = 1.
        let f = problem(PotentialModel::linear_ramp(1.0, 0.0).unwrap(), 0.5, (-10.0, 10.0));
        let amps = AmplitudePair::new(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0));
        let t = wkb_wavefunction(&f, amps, 0.0, &[1.0, 3.0]).unwrap();
        for (x, psi) in [1.0f64, 3.0].iter().zip(&t.psi) {
            let expect = (-x).exp() + 0.5 * x.exp();
            assert!((psi.re - expect).abs() < 1e-12 * expect);
        }
        assert!(t.region_tags.iter().all(|t| *t == RegionTag::Forbidden));
    }

    #[test]
    fn wavefunction_residual_away_from_turning_points() {
        // Slowly varying Gaussian well; check ψ'' + k²ψ against k²ψ.
        let p = problem(PotentialModel::gaussian_bump(-0.5, 4.0, 0.0).unwrap(), 0.3, (-30.0, 30.0));
        let amps = AmplitudePair::new(Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1));
        let h = 1e-3;
        for x in [-6.0, -2.0, 0.5, 3.0, 7.0] {
            let t = wkb_wavefunction(&p, amps, 0.0, &[x - h, x, x + h]).unwrap();
            let d2 = (t.psi[0] - 2.0 * t.psi[1] + t.psi[2]) / (h * h);
            let k2 = p.momentum_squared(x);
            let residual = (d2 + k2 * t.psi[1]).norm() / (k2 * t.psi[1].norm());
            assert!(residual < 0.05, "x={x}: {residual}");
        }
    }
}

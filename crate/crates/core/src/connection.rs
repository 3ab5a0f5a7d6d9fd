//! Matching across turning points, the three-region barrier solution and
//! probability currents.
//!
//! Allowed-region amplitudes are expressed on the basis
//! k^{-1/2} cos(θ - π/4), k^{-1/2} sin(θ - π/4), where θ is the phase ∫ k dx
//! accumulated between the point and the turning point. Forbidden-region
//! amplitudes multiply β^{-1/2} exp(∓∫ β dx), again measured from the
//! turning point.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::{PhysicalContext, ScatteringProblem};
use crate::special_fn::airy;
use crate::wkb::{
    action_integral, barrier_turning_points, exclusion_radius, forbidden_action, sigma_star,
    Method, TransmissionReport,
};

/// Coefficients of the right- and left-moving WKB waves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub c_plus: Complex64,
    pub c_minus: Complex64,
}

impl AmplitudePair {
    pub fn new(c_plus: Complex64, c_minus: Complex64) -> Self {
        Self { c_plus, c_minus }
    }

    pub fn scaled(self, s: Complex64) -> Self {
        Self {
            c_plus: self.c_plus * s,
            c_minus: self.c_minus * s,
        }
    }
}

/// Where a sample lies relative to the turning points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionTag {
    AllowedLeft,
    Forbidden,
    AllowedRight,
    /// Allowed, with no barrier on either side (free problems and wells).
    Allowed,
}

impl RegionTag {
    pub fn label(self) -> &'static str {
        match self {
            RegionTag::AllowedLeft => "allowed_left",
            RegionTag::Forbidden => "forbidden",
            RegionTag::AllowedRight => "allowed_right",
            RegionTag::Allowed => "allowed",
        }
    }
}

/// A sampled complex wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    pub xs: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub region_tags: Vec<RegionTag>,
}

impl WavefunctionTable {
    pub fn new(xs: Vec<f64>, psi: Vec<Complex64>, region_tags: Vec<RegionTag>) -> Result<Self> {
        if xs.len() != psi.len() || xs.len() != region_tags.len() {
            return Err(Error::InvalidParameter(format!(
                "table columns differ in length: {} / {} / {}",
                xs.len(),
                psi.len(),
                region_tags.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "table positions must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            xs,
            psi,
            region_tags,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// CSV with header `x,re_psi,im_psi,region`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,re_psi,im_psi,region\n");
        for ((x, psi), tag) in self.xs.iter().zip(&self.psi).zip(&self.region_tags) {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{}", x, psi.re, psi.im, tag.label());
        }
        out
    }
}

/// Coefficients on the (cos, sin) allowed-region basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllowedAmplitudes {
    pub cos: Complex64,
    pub sin: Complex64,
}

/// Coefficients of the decaying and growing forbidden-region exponentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForbiddenAmplitudes {
    pub decaying: Complex64,
    pub growing: Complex64,
}

/// Sign of the potential slope at a turning point: from V' where it is
/// non-zero, otherwise from the side on which the motion is forbidden.
pub fn turning_point_orientation(problem: &ScatteringProblem, turning_point: f64) -> Result<f64> {
    let slope = problem.potential.derivative(turning_point)?;
    if slope != 0.0 {
        return Ok(slope.signum());
    }
    let d = 1e-7 * turning_point.abs().max(1.0);
    let left = problem.momentum_squared(turning_point - d);
    let right = problem.momentum_squared(turning_point + d);
    if left > 0.0 && right < 0.0 {
        Ok(1.0)
    } else if left < 0.0 && right > 0.0 {
        Ok(-1.0)
    } else {
        Err(Error::Orientation(format!(
            "cannot orient the turning point at {turning_point}"
        )))
    }
}

/// Rising potential (allowed on the left): (2/√k) cos ↔ (1/√β) e^{-∫β} and
/// (1/√k) sin ↔ -(1/√β) e^{+∫β}.
pub fn connect_increasing(slope_sign: f64, allowed: AllowedAmplitudes) -> Result<ForbiddenAmplitudes> {
    if !(slope_sign > 0.0) {
        return Err(Error::Orientation(format!(
            "connect_increasing needs dV/dx > 0, got slope sign {slope_sign}"
        )));
    }
    Ok(ForbiddenAmplitudes {
        decaying: allowed.cos * 0.5,
        growing: -allowed.sin,
    })
}

/// Falling potential (allowed on the right): (1/√β) e^{-∫β} → (2/√k) cos and
/// -(1/√β) e^{+∫β} → (1/√k) sin.
pub fn connect_decreasing(slope_sign: f64, forbidden: ForbiddenAmplitudes) -> Result<AllowedAmplitudes> {
    if !(slope_sign < 0.0) {
        return Err(Error::Orientation(format!(
            "connect_decreasing needs dV/dx < 0, got slope sign {slope_sign}"
        )));
    }
    Ok(AllowedAmplitudes {
        cos: forbidden.decaying * 2.0,
        sin: -forbidden.growing,
    })
}

/// j = Re[(ħ/(i m)) ψ* dψ/dx].
pub fn probability_current(psi: Complex64, dpsi_dx: Complex64, context: &PhysicalContext) -> f64 {
    context.hbar / context.mass * (psi.conj() * dpsi_dx).im
}

/// Amplitudes of the patched solution in every region, for an outgoing wave
/// 2B k^{-1/2} exp(i(θ - π/4)) to the right of the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchedAmplitudes {
    pub sigma_star: f64,
    /// Forbidden region, exponentials measured from the right turning point.
    pub inner_right: ForbiddenAmplitudes,
    /// Same solution, exponentials measured from the left turning point.
    pub inner_left: ForbiddenAmplitudes,
    /// Left allowed region on the (cos, sin) basis.
    pub left: AllowedAmplitudes,
    /// Coefficient of k^{-1/2} e^{-i(θ-π/4)}, the wave moving toward the barrier.
    pub incident: Complex64,
    /// Coefficient of k^{-1/2} e^{+i(θ-π/4)}, the wave moving away.
    pub reflected: Complex64,
    pub transmitted: Complex64,
}

/// Carries the outgoing amplitude B back through a barrier of integral σ*.
pub fn patched_amplitudes(sigma_star: f64, outgoing: Complex64) -> PatchedAmplitudes {
    let transmitted = outgoing * 2.0;
    let right_allowed = AllowedAmplitudes {
        cos: transmitted,
        sin: transmitted * Complex64::i(),
    };
    // Inverse of the falling-edge map.
    let inner_right = ForbiddenAmplitudes {
        decaying: right_allowed.cos * 0.5,
        growing: -right_allowed.sin,
    };
    // ∫ₓᵇ β = σ* - ∫ₐˣ β swaps the roles of the exponentials.
    let (grow, shrink) = (sigma_star.exp(), (-sigma_star).exp());
    let inner_left = ForbiddenAmplitudes {
        decaying: inner_right.growing * grow,
        growing: inner_right.decaying * shrink,
    };
    // Inverse of the rising-edge map.
    let left = AllowedAmplitudes {
        cos: inner_left.decaying * 2.0,
        sin: -inner_left.growing,
    };
    let i = Complex64::i();
    PatchedAmplitudes {
        sigma_star,
        inner_right,
        inner_left,
        left,
        incident: left.cos * 0.5 + left.sin * i * 0.5,
        reflected: left.cos * 0.5 - left.sin * i * 0.5,
        transmitted,
    }
}

/// Incident, reflected and transmitted currents of the patched solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchedCurrents {
    pub incident: f64,
    pub reflected: f64,
    pub transmitted: f64,
}

impl PatchedCurrents {
    /// Net current on the left, incident minus reflected.
    pub fn net_left(&self) -> f64 {
        self.incident - self.reflected
    }
}

/// Currents from the closed forms: j_III = 4|B|² ħ/m and
/// j_inc, j_ref = 4|B|² (e^{σ*} ± ¼e^{-σ*})² ħ/m.
pub fn patched_currents(sigma_star: f64, outgoing: Complex64, context: &PhysicalContext) -> PatchedCurrents {
    let unit = 4.0 * outgoing.norm_sqr() * context.hbar / context.mass;
    let (up, down) = (sigma_star.exp(), 0.25 * (-sigma_star).exp());
    PatchedCurrents {
        incident: unit * (up + down).powi(2),
        reflected: unit * (up - down).powi(2),
        transmitted: unit,
    }
}

/// Transmission as transmitted over incident current of the patched solution.
pub fn transmission_from_sigma(sigma_star: f64) -> f64 {
    let c = patched_currents(sigma_star, Complex64::new(1.0, 0.0), &PhysicalContext::natural());
    c.transmitted / c.incident
}

/// Current-ratio transmission report for a barrier problem.
pub fn transmission_from_currents(problem: &ScatteringProblem) -> Result<TransmissionReport> {
    let sigma = sigma_star(problem)?;
    let c = patched_currents(sigma, Complex64::new(1.0, 0.0), &problem.context);
    let transmission = c.transmitted / c.incident;
    Ok(TransmissionReport {
        transmission,
        reflection: c.reflected / c.incident,
        sigma_star: Some(sigma),
        method: Method::ConnectionPatched,
        leading_estimate: Some((-2.0 * sigma).exp()),
    })
}

fn check_outside(problem: &ScatteringProblem, t: f64, x: f64) -> Result<()> {
    let radius = exclusion_radius(problem, t)?;
    if (x - t).abs() < radius || x == t {
        return Err(Error::TurningPointProximity {
            x,
            turning_point: t,
            radius,
        });
    }
    Ok(())
}

/// Three-region patched barrier wavefunction at `xs` for outgoing amplitude B.
pub fn patched_barrier_solution(
    problem: &ScatteringProblem,
    outgoing: Complex64,
    xs: &[f64],
) -> Result<WavefunctionTable> {
    let (a, b) = barrier_turning_points(problem)?;
    turning_point_orientation(problem, a).and_then(|s| {
        if s > 0.0 {
            Ok(())
        } else {
            Err(Error::Orientation(format!("left turning point {a} is not on a rising edge")))
        }
    })?;
    let sigma = sigma_star(problem)?;
    let amps = patched_amplitudes(sigma, outgoing);
    let hbar = problem.context.hbar;
    let shift = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);

    let mut psi = Vec::with_capacity(xs.len());
    let mut tags = Vec::with_capacity(xs.len());
    for &x in xs {
        check_outside(problem, a, x)?;
        check_outside(problem, b, x)?;
        if x > b {
            let theta = action_integral(problem, b, x)? / hbar;
            let k = problem.momentum(x) / hbar;
            psi.push(amps.transmitted * Complex64::from_polar(1.0, theta) * shift / k.sqrt());
            tags.push(RegionTag::AllowedRight);
        } else if x < a {
            let theta = action_integral(problem, x, a)? / hbar;
            let k = problem.momentum(x) / hbar;
            let phase = theta - std::f64::consts::FRAC_PI_4;
            let v = amps.left.cos * phase.cos() + amps.left.sin * phase.sin();
            psi.push(v / k.sqrt());
            tags.push(RegionTag::AllowedLeft);
        } else {
            let s = forbidden_action(problem, x, b)? / hbar;
            let beta = problem.forbidden_momentum(x) / hbar;
            let v = amps.inner_right.decaying * (-s).exp() + amps.inner_right.growing * s.exp();
            psi.push(v / beta.sqrt());
            tags.push(RegionTag::Forbidden);
        }
    }
    WavefunctionTable::new(xs.to_vec(), psi, tags)
}

/// Which Airy function to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AiryBasis {
    Ai,
    Bi,
}

/// Scale factor λ in z = λ (x - a) for the linearized potential at `a`.
pub fn airy_scale(problem: &ScatteringProblem, turning_point: f64) -> Result<f64> {
    let mu = problem.potential.derivative(turning_point)?;
    if mu == 0.0 {
        return Err(Error::Linearization {
            x: turning_point,
            turning_point,
        });
    }
    let hbar = problem.context.hbar;
    Ok((2.0 * problem.context.mass * mu / (hbar * hbar)).cbrt())
}

/// Ai(z(x)) or Bi(z(x)) with z = (2mμ/ħ²)^{1/3} (x - a), μ = V'(a), at
/// positions where the potential is close to its tangent line.
pub fn airy_local_solution(
    problem: &ScatteringProblem,
    turning_point: f64,
    xs: &[f64],
    basis: AiryBasis,
) -> Result<WavefunctionTable> {
    let lambda = airy_scale(problem, turning_point)?;
    let mu = problem.potential.derivative(turning_point)?;
    let v_a = problem.potential.evaluate(turning_point)?;
    let floor = 1e-14 * problem.energy.abs().max(1.0);
    let mut psi = Vec::with_capacity(xs.len());
    let mut tags = Vec::with_capacity(xs.len());
    for &x in xs {
        let v = problem.potential.evaluate(x)?;
        let deviation = (v - v_a - mu * (x - turning_point)).abs();
        if deviation > 0.1 * (problem.energy - v).abs() + floor {
            return Err(Error::Linearization { x, turning_point });
        }
        let pair = airy(lambda * (x - turning_point))?;
        let value = match basis {
            AiryBasis::Ai => pair.ai,
            AiryBasis::Bi => pair.bi,
        };
        psi.push(Complex64::new(value, 0.0));
        let forbidden = problem.momentum_squared(x) < 0.0;
        tags.push(if forbidden {
            RegionTag::Forbidden
        } else if (x < turning_point) == (mu > 0.0) {
            RegionTag::AllowedLeft
        } else {
            RegionTag::AllowedRight
        });
    }
    WavefunctionTable::new(xs.to_vec(), psi, tags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::PotentialModel;
    use crate::special_fn::airy_asymptotic_terms;
    use crate::wkb::corrected_transmission;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn problem(potential: PotentialModel, energy: f64, domain: (f64, f64)) -> ScatteringProblem {
        ScatteringProblem::new(PhysicalContext::natural(), potential, energy, domain).unwrap()
    }

    #[test]
    fn increasing_map_examples() {
        let f = connect_increasing(1.0, AllowedAmplitudes { cos: c(2.0, 0.0), sin: c(0.0, 0.0) }).unwrap();
        assert_eq!((f.decaying, f.growing), (c(1.0, 0.0), c(0.0, 0.0)));
        let f = connect_increasing(1.0, AllowedAmplitudes { cos: c(0.0, 0.0), sin: c(1.0, 0.0) }).unwrap();
        assert_eq!(f.growing, c(-1.0, 0.0));
        assert!(matches!(
            connect_increasing(-1.0, AllowedAmplitudes { cos: c(1.0, 0.0), sin: c(0.0, 0.0) }),
            Err(Error::Orientation(_))
        ));
    }

    #[test]
    fn decreasing_map_examples() {
        let a = connect_decreasing(-1.0, ForbiddenAmplitudes { decaying: c(1.0, 0.0), growing: c(0.0, 0.0) }).unwrap();
        assert_eq!(a.cos, c(2.0, 0.0));
        let a = connect_decreasing(-1.0, ForbiddenAmplitudes { decaying: c(0.0, 0.0), growing: c(-1.0, 0.0) }).unwrap();
        assert_eq!(a.sin, c(1.0, 0.0));
        assert!(connect_decreasing(1.0, ForbiddenAmplitudes { decaying: c(1.0, 0.0), growing: c(0.0, 0.0) }).is_err());
    }

    #[test]
    fn patched_left_region_amplitudes() {
        let b = c(0.3, -0.7);
        let s = 1.3;
        let amps = patched_amplitudes(s, b);
        let i = Complex64::i();
        let up = s.exp();
        let down = 0.25 * (-s).exp();
        assert!((amps.incident - (-2.0 * i * b * (up + down))).norm() < 1e-14);
        assert!((amps.reflected - (-2.0 * i * b * (up - down))).norm() < 1e-14);
        assert!((amps.left.cos - (-4.0 * i * b * up)).norm() < 1e-14);
        assert!((amps.left.sin - (-b * (-s).exp())).norm() < 1e-14);
    }

    #[test]
    fn current_ratio_is_corrected_transmission() {
        for s in [0.5, 1.0, 2.0, 4.0] {
            let t = transmission_from_sigma(s);
            assert!((t - corrected_transmission(s)).abs() <= 1e-14 * t.max(1e-300) + 1e-17);
        }
        assert!((transmission_from_sigma(2.0) - 0.018_149).abs() < 1e-6);
        let ctx = PhysicalContext::natural();
        for b in [c(1.0, 0.0), c(-3.0, 2.0), c(1e-4, 0.0)] {
            let cur = patched_currents(2.0, b, &ctx);
            let t = cur.transmitted / cur.incident;
            assert!((t - transmission_from_sigma(2.0)).abs() < 1e-15);
            assert!(((cur.net_left() - cur.transmitted) / cur.transmitted).abs() < 1e-12);
            assert!((cur.reflected / cur.incident + t - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn current_of_plane_wave() {
        let ctx = PhysicalContext::natural();
        let x = 0.37;
        let psi = Complex64::from_polar(1.0, x);
        let d = psi * Complex64::i();
        assert!((probability_current(psi, d, &ctx) - 1.0).abs() < 1e-15);
        assert_eq!(probability_current(c(0.4, 0.0), c(-1.2, 0.0), &ctx), 0.0);
        assert!((probability_current(psi * 2.0, d * 2.0, &ctx) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn zero_amplitude_gives_zero_table() {
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 0.4, (-20.0, 20.0));
        let t = patched_barrier_solution(&p, c(0.0, 0.0), &[-5.0, 0.0, 5.0]).unwrap();
        assert!(t.psi.iter().all(|v| v.norm() == 0.0));
        assert_eq!(
            t.region_tags,
            vec![RegionTag::AllowedLeft, RegionTag::Forbidden, RegionTag::AllowedRight]
        );
    }

    #[test]
    fn patched_current_mirrors_across_eckart_barrier() {
        // On a symmetric barrier the net current at -x (left) equals the
        // transmitted current at x (right), both from the sampled table.
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 0.4, (-20.0, 20.0));
        let ctx = p.context;
        let h = 1e-5;
        for x in [3.0, 5.0, 8.0] {
            let right = patched_barrier_solution(&p, c(0.8, 0.1), &[x - h, x, x + h]).unwrap();
            let left = patched_barrier_solution(&p, c(0.8, 0.1), &[-x - h, -x, -x + h]).unwrap();
            let j = |t: &WavefunctionTable| {
                probability_current(t.psi[1], (t.psi[2] - t.psi[0]) / (2.0 * h), &ctx)
            };
            let (jr, jl) = (j(&right), j(&left));
            assert!(((jl - jr) / jr).abs() < 1e-6, "x={x}: {jl} vs {jr}");
            assert!(((jr - 4.0 * 0.65) / 2.6).abs() < 1e-6);
        }
    }

    #[test]
    fn patched_rejects_turning_point_samples() {
        let p = problem(PotentialModel::eckart(1.0, 1.0, 0.0).unwrap(), 0.4, (-20.0, 20.0));
        let (_, b) = barrier_turning_points(&p).unwrap();
        assert!(matches!(
            patched_barrier_solution(&p, c(1.0, 0.0), &[b + 1e-3]),
            Err(Error::TurningPointProximity { .. })
        ));
    }

    fn ramp() -> ScatteringProblem {
        // V = x, E = 0: turning point at 0, forbidden for x > 0.
        problem(PotentialModel::linear_ramp(0.0, 1.0).unwrap(), 0.0, (-20.0, 20.0))
    }

    #[test]
    fn airy_solution_solves_ramp_equation() {
        let p = ramp();
        let h = 1e-2;
        for x in [-3.0, -1.0, 0.0, 0.7, 2.0] {
            let xs = [x - 2.0 * h, x - h, x, x + h, x + 2.0 * h];
            let t = airy_local_solution(&p, 0.0, &xs, AiryBasis::Ai).unwrap();
            let v: Vec<f64> = t.psi.iter().map(|c| c.re).collect();
            let d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
            let residual = -0.5 * d2 + (x - p.energy) * v[2];
            assert!(residual.abs() < 1e-7, "x={x}: {residual}");
        }
        let at = airy_local_solution(&p, 0.0, &[0.0], AiryBasis::Ai).unwrap();
        assert!((at.psi[0].re - airy(0.0).unwrap().ai).abs() < 1e-16);
    }

    #[test]
    fn airy_solution_rejects_curved_region() {
        let p = problem(PotentialModel::harmonic(1.0).unwrap(), 0.5, (-5.0, 5.0));
        assert!(airy_local_solution(&p, 1.0, &[1.01], AiryBasis::Ai).is_ok());
        assert!(matches!(
            airy_local_solution(&p, 1.0, &[-0.5], AiryBasis::Ai),
            Err(Error::Linearization { .. })
        ));
    }

    #[test]
    fn phase_matches_airy_variable() {
        let p = ramp();
        let lambda = airy_scale(&p, 0.0).unwrap();
        for x in [-1.0, -4.0] {
            let z: f64 = lambda * x;
            let theta = action_integral(&p, x, 0.0).unwrap() / p.context.hbar;
            assert!((theta - 2.0 / 3.0 * (-z).powf(1.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn connection_forms_follow_airy_asymptotics() {
        // Ai on the ramp is the decaying solution with coefficient √λ/(2√π);
        // its allowed-side continuation must follow Ai within 5%.
        let p = ramp();
        let lambda = airy_scale(&p, 0.0).unwrap();
        let hbar = p.context.hbar;
        let d = lambda.sqrt() / (2.0 * std::f64::consts::PI.sqrt());
        // Rising edge: a decaying coefficient d pairs with cos coefficient 2d.
        let f = connect_increasing(1.0, AllowedAmplitudes { cos: c(2.0 * d, 0.0), sin: c(0.0, 0.0) }).unwrap();
        assert!((f.decaying.re - d).abs() < 1e-16);
        let allowed = c(2.0 * d, 0.0);
        for z in [3.0f64, 5.0, 8.0] {
            let x = z / lambda;
            let beta = p.forbidden_momentum(x) / hbar;
            let s = forbidden_action(&p, 0.0, x).unwrap() / hbar;
            let wkb = d * (-s).exp() / beta.sqrt();
            let exact = airy(z).unwrap().ai;
            assert!(((wkb - exact) / exact).abs() < 0.05, "z={z}");

            let x = -z / lambda;
            let k = p.momentum(x) / hbar;
            let theta = action_integral(&p, x, 0.0).unwrap() / hbar;
            let wkb = allowed.re * (theta - std::f64::consts::FRAC_PI_4).cos() / k.sqrt();
            let exact = airy(-z).unwrap().ai;
            let envelope = 1.0 / (std::f64::consts::PI.sqrt() * z.powf(0.25));
            assert!((wkb - exact).abs() < 0.05 * envelope, "z=-{z}");
            let lead = airy_asymptotic_terms(-z, 0).unwrap().ai;
            assert!((wkb - lead).abs() < 1e-10 * envelope);
        }
    }

    #[test]
    fn csv_layout() {
        let t = WavefunctionTable::new(
            vec![0.0, 1.0],
            vec![c(1.0, -0.5), c(0.0, 2.0)],
            vec![RegionTag::AllowedLeft, RegionTag::Forbidden],
        )
        .unwrap();
        assert_eq!(
            t.to_csv(),
            "x,re_psi,im_psi,region\n\
             0.0000000000000000e0,1.0000000000000000e0,-5.0000000000000000e-1,allowed_left\n\
             1.0000000000000000e0,0.0000000000000000e0,2.0000000000000000e0,forbidden\n"
        );
        assert!(WavefunctionTable::new(vec![1.0, 0.0], vec![c(0.0, 0.0); 2], vec![RegionTag::Allowed; 2]).is_err());
    }
}

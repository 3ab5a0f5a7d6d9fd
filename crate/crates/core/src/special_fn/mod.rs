//! Airy functions on the real line, their large-argument expansions, the
//! modified-Bessel representation and a quadrature check of the integral form.

mod bessel;
mod dd;

use std::f64::consts::{FRAC_PI_4, PI};

pub use bessel::{bessel_i, bessel_k, I_SERIES_LIMIT};
use dd::DoubleDouble;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Largest |z| accepted by [`airy`].
pub const AIRY_MAX_ARG: f64 = 30.0;

/// |z| at which [`airy`] switches from the power series to the asymptotic
/// expansions.
pub const AIRY_SWITCHOVER: f64 = 8.0;

/// Smallest |z| accepted by [`airy_asymptotic`].
pub const ASYMPTOTIC_MIN_ARG: f64 = 3.0;

/// Ai, Bi and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub bi: f64,
    pub ai_prime: f64,
    pub bi_prime: f64,
}

impl AiryPair {
    pub fn wronskian(&self) -> f64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

// Ai(0) = 3^(-2/3)/Γ(2/3) and -Ai'(0) = 3^(-1/3)/Γ(1/3), split hi + lo.
const C1: DoubleDouble = DoubleDouble::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const C2: DoubleDouble = DoubleDouble::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const SQRT3: DoubleDouble = DoubleDouble::new(1.732_050_807_568_877_2, 1.003_508_422_180_690_3e-16);

/// Ai, Bi, Ai', Bi' at real `z`, |z| ≤ 30.
///
/// Uses the Maclaurin series in the auxiliary functions f and g (summed in
/// double-double so the cancellation for large |z| stays harmless) up to
/// |z| = 8, and the asymptotic expansions truncated at their smallest term
/// beyond that.
pub fn airy(z: f64) -> Result<AiryPair> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("airy argument must be finite, got {z}")));
    }
    if z.abs() > AIRY_MAX_ARG {
        return Err(Error::Range(format!(
            "|z| = {} exceeds {AIRY_MAX_ARG}; use airy_asymptotic",
            z.abs()
        )));
    }
    if z.abs() <= AIRY_SWITCHOVER {
        Ok(airy_series(z))
    } else {
        Ok(asymptotic_sum(z, usize::MAX))
    }
}

fn airy_series(z: f64) -> AiryPair {
    let zd = DoubleDouble::from_f64(z);
    let z3 = zd * zd * zd;
    let tiny = 1e-34;

    // f = Σ z^{3k} / (3^k k! · 2·5·…(3k-1)),  g = Σ z^{3k+1} / (3^k k! · 4·7·…(3k+1))
    let mut f_term = DoubleDouble::from_f64(1.0);
    let mut f_sum = f_term;
    let mut g_term = zd;
    let mut g_sum = g_term;
    // f' starts at z²/2, g' at 1.
    let mut fp_term = (zd * zd).div_f64(2.0);
    let mut fp_sum = fp_term;
    let mut gp_term = DoubleDouble::from_f64(1.0);
    let mut gp_sum = gp_term;

    for k in 1..400u32 {
        let k3 = 3.0 * k as f64;
        f_term = (f_term * z3).div_f64(k3 * (k3 - 1.0));
        g_term = (g_term * z3).div_f64((k3 + 1.0) * k3);
        gp_term = (gp_term * z3).div_f64(k3 * (k3 - 2.0));
        f_sum = f_sum + f_term;
        g_sum = g_sum + g_term;
        gp_sum = gp_sum + gp_term;
        if k >= 2 {
            fp_term = (fp_term * z3).div_f64((k3 - 1.0) * (k3 - 3.0));
            fp_sum = fp_sum + fp_term;
        }
        let small = |t: DoubleDouble, s: DoubleDouble| t.abs() <= tiny * s.abs().max(1e-300);
        if k >= 2
            && small(f_term, f_sum)
            && small(g_term, g_sum)
            && small(fp_term, fp_sum)
            && small(gp_term, gp_sum)
        {
            break;
        }
    }

    let ai = C1 * f_sum - C2 * g_sum;
    let bi = SQRT3 * (C1 * f_sum + C2 * g_sum);
    let ai_prime = C1 * fp_sum - C2 * gp_sum;
    let bi_prime = SQRT3 * (C1 * fp_sum + C2 * gp_sum);
    AiryPair {
        ai: ai.to_f64(),
        bi: bi.to_f64(),
        ai_prime: ai_prime.to_f64(),
        bi_prime: bi_prime.to_f64(),
    }
}

/// Coefficients u_k and v_k of the large-argument expansions.
fn asymptotic_coefficients(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    u.push(1.0);
    v.push(1.0);
    for k in 1..=n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Sum the asymptotic expansions with at most `max_terms` correction terms,
/// stopping earlier at the smallest term.
fn asymptotic_sum(z: f64, max_terms: usize) -> AiryPair {
    let x = z.abs();
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let cap = max_terms.min(60);
    let (u, v) = asymptotic_coefficients(cap.max(1) + 1);

    // Number of terms kept: stop before terms start growing or once they are
    // negligible.
    let mut n = 0;
    let mut prev = 1.0;
    while n < cap {
        let t = u[n + 1] / zeta.powi(n as i32 + 1);
        if t >= prev || t < 1e-17 {
            break;
        }
        prev = t;
        n += 1;
    }

    let fourth = x.powf(0.25);
    let rsqpi = 1.0 / PI.sqrt();
    if z > 0.0 {
        let (mut su_neg, mut su_pos, mut sv_neg, mut sv_pos) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..=n {
            let p = zeta.powi(-(k as i32));
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            su_neg += sign * u[k] * p;
            su_pos += u[k] * p;
            sv_neg += sign * v[k] * p;
            sv_pos += v[k] * p;
        }
        let decay = (-zeta).exp();
        let grow = zeta.exp();
        AiryPair {
            ai: 0.5 * rsqpi / fourth * decay * su_neg,
            ai_prime: -0.5 * rsqpi * fourth * decay * sv_neg,
            bi: rsqpi / fourth * grow * su_pos,
            bi_prime: rsqpi * fourth * grow * sv_pos,
        }
    } else {
        let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
        for k in 0..=n {
            let p = zeta.powi(-(k as i32));
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                ue += sign * u[k] * p;
                ve += sign * v[k] * p;
            } else {
                uo += sign * u[k] * p;
                vo += sign * v[k] * p;
            }
        }
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        AiryPair {
            ai: rsqpi / fourth * (c * ue + s * uo),
            ai_prime: rsqpi * fourth * (s * ve - c * vo),
            bi: rsqpi / fourth * (-s * ue + c * uo),
            bi_prime: rsqpi * fourth * (c * ve + s * vo),
        }
    }
}

/// Large-|z| expansions of Ai, Bi, Ai', Bi', truncated at the smallest term.
/// The exponential forms are used for z > 0, the oscillatory ones for z < 0.
pub fn airy_asymptotic(z: f64) -> Result<AiryPair> {
    airy_asymptotic_terms(z, usize::MAX)
}

/// As [`airy_asymptotic`] with at most `terms` corrections after the leading
/// term; `terms = 0` gives the bare leading forms.
pub fn airy_asymptotic_terms(z: f64, terms: usize) -> Result<AiryPair> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("airy argument must be finite, got {z}")));
    }
    if z.abs() < ASYMPTOTIC_MIN_ARG {
        return Err(Error::Accuracy(format!(
            "asymptotic Airy forms need |z| >= {ASYMPTOTIC_MIN_ARG}, got {z}"
        )));
    }
    Ok(asymptotic_sum(z, terms))
}

/// Ai, Bi and derivatives on z > 0 through modified Bessel functions of
/// order ±1/3 and ±2/3 at ζ = (2/3) z^{3/2}.
pub fn airy_bessel_form(z: f64) -> Result<AiryPair> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Domain(format!(
            "Bessel representation needs z > 0, got {z}"
        )));
    }
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let third = 1.0 / 3.0;
    let i_m13 = bessel_i(-third, zeta)?;
    let i_p13 = bessel_i(third, zeta)?;
    let i_m23 = bessel_i(-2.0 * third, zeta)?;
    let i_p23 = bessel_i(2.0 * third, zeta)?;
    let sqrt3 = 3f64.sqrt();

    // The differences I_{-ν} - I_ν cancel badly once ζ grows; there they are
    // replaced by (2/π) sin(νπ) K_ν, which is the same quantity.
    let (ai, ai_prime) = if zeta <= 2.0 {
        (z.sqrt() / 3.0 * (i_m13 - i_p13), z / 3.0 * (i_p23 - i_m23))
    } else {
        let k13 = bessel_k(third, zeta)?;
        let k23 = bessel_k(2.0 * third, zeta)?;
        (
            (z / 3.0).sqrt() / PI * k13,
            -z / (PI * sqrt3) * k23,
        )
    };
    Ok(AiryPair {
        ai,
        bi: (z / 3.0).sqrt() * (i_m13 + i_p13),
        ai_prime,
        bi_prime: z / sqrt3 * (i_m23 + i_p23),
    })
}

/// Ai(z) from (1/π) ∫₀^∞ cos(zt + t³/3) dt for |z| ≤ 2.
///
/// The finite part is integrated panel by panel with each panel spanning at
/// most a quarter period of the phase; the tail beyond t = 12 comes from
/// three integration-by-parts terms.
pub fn airy_laplace_contour(z: f64) -> Result<f64> {
    if !(z.abs() <= 2.0) {
        return Err(Error::Range(format!(
            "integral representation is validated only for |z| <= 2, got {z}"
        )));
    }
    let cut = (120.0 * PI).cbrt().max(12.0);
    let phase = |t: f64| z * t + t * t * t / 3.0;

    let mut body = 0.0;
    let mut t = 0.0;
    while t < cut {
        let look = t + 0.25;
        let rate = z.abs() + look * look;
        let dt = (0.25f64).min(0.5 * PI / rate).min(cut - t);
        let q = integrate(|s: f64| phase(s).cos(), t, t + dt, 1e-16, 1e-14)?;
        body += q.value;
        t += dt;
    }

    let q = z + cut * cut;
    let (s, c) = phase(cut).sin_cos();
    let tail = -s / q + 2.0 * cut * c / q.powi(3) - s * (2.0 / q.powi(4) - 12.0 * cut * cut / q.powi(5));
    Ok((body + tail) / PI)
}

/// Residual of the order-1/3 Bessel equation τ²φ'' + τφ' + (τ² - 1/9)φ for
/// φ(τ) = ψ(z)/√(-z), τ = (2/3)(-z)^{3/2}, with derivatives in τ taken by
/// fourth-order central differences.
pub fn bessel_transform_residual<F: Fn(f64) -> f64>(z: f64, psi: F) -> Result<f64> {
    if !(z < -0.5 && z.is_finite()) {
        return Err(Error::Domain(format!(
            "Bessel transform check needs z < -0.5, got {z}"
        )));
    }
    let tau = 2.0 / 3.0 * (-z).powf(1.5);
    let phi = |t: f64| {
        let zz = -(1.5 * t).powf(2.0 / 3.0);
        psi(zz) / (-zz).sqrt()
    };
    let h = (2e-3 * tau.max(1.0)).min(0.2 * tau);
    let (m2, m1, c0, p1, p2) = (
        phi(tau - 2.0 * h),
        phi(tau - h),
        phi(tau),
        phi(tau + h),
        phi(tau + 2.0 * h),
    );
    let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let d2 = (-m2 + 16.0 * m1 - 30.0 * c0 + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok((tau * tau * d2 + tau * d1 + (tau * tau - 1.0 / 9.0) * c0).abs())
}

/// [`bessel_transform_residual`] applied to Ai.
pub fn bessel_transform_check(z: f64) -> Result<f64> {
    if !(z < -0.5) {
        return Err(Error::Domain(format!(
            "Bessel transform check needs z < -0.5, got {z}"
        )));
    }
    bessel_transform_residual(z, |x| airy(x).map(|p| p.ai).unwrap_or(f64::NAN))
}

/// Value of φ(τ) = Ai(z)/√(-z) used to scale the transform residual.
pub fn bessel_transform_scale(z: f64) -> Result<f64> {
    Ok(airy(z)?.ai / (-z).sqrt())
}

/// Sectors at infinity where exp(zt - t³/3) decays, so a Laplace contour may
/// start or end there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContourSector {
    C1,
    C2,
    C3,
}

impl ContourSector {
    pub const ALL: [ContourSector; 3] = [ContourSector::C1, ContourSector::C2, ContourSector::C3];

    /// Open interval of arg t covered by the sector.
    pub fn arg_range(self) -> (f64, f64) {
        match self {
            ContourSector::C1 => (-PI / 6.0, PI / 6.0),
            ContourSector::C2 => (PI / 2.0, 5.0 * PI / 6.0),
            ContourSector::C3 => (7.0 * PI / 6.0, 3.0 * PI / 2.0),
        }
    }

    /// Whether the ray arg t = `theta` lies inside the sector (angles taken
    /// modulo 2π).
    pub fn contains(self, theta: f64) -> bool {
        let (lo, hi) = self.arg_range();
        let two_pi = 2.0 * PI;
        let t = lo + (theta - lo).rem_euclid(two_pi);
        t > lo && t < hi
    }

    /// Sector containing the ray, if any.
    pub fn of_angle(theta: f64) -> Option<ContourSector> {
        Self::ALL.into_iter().find(|s| s.contains(theta))
    }
}

/// True when exp(-t³/3) decays along the ray arg t = `theta`.
pub fn integrand_decays(theta: f64) -> bool {
    (3.0 * theta).cos() > 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // 30-digit reference values.
    #[test]
    fn series_matches_reference_points() {
        let p = airy(1.0).unwrap();
        assert!(rel(p.ai, 0.135_292_416_312_881_42) < 1e-14);
        assert!(rel(p.bi, 1.207_423_594_952_871_3) < 1e-14);
        assert!(rel(p.ai_prime, -0.159_147_441_296_793_21) < 1e-14);
        assert!(rel(p.bi_prime, 0.932_435_933_392_775_63) < 1e-14);

        let p = airy(-1.0).unwrap();
        assert!(rel(p.ai, 0.535_560_883_292_352_12) < 1e-14);
        assert!(rel(p.bi, 0.103_997_389_496_944_61) < 1e-13);
        assert!(rel(p.ai_prime, -0.010_160_567_116_645_209) < 1e-12);
        assert!(rel(p.bi_prime, 0.592_375_626_422_792_35) < 1e-14);

        assert!(rel(airy(4.0).unwrap().ai, 9.515_638_512_048_018_7e-4) < 1e-13);
        assert!(rel(airy(5.0).unwrap().ai, 1.083_444_281_360_744_2e-4) < 1e-13);
        assert!(rel(airy(5.0).unwrap().bi, 657.792_044_171_171_18) < 1e-13);
        let p = airy(8.0).unwrap();
        assert!(rel(p.ai, 4.692_207_616_099_231_6e-8) < 1e-12);
        assert!(rel(p.bi, 1_199_586.004_124_459_9) < 1e-13);
        assert!(rel(airy(-5.0).unwrap().ai, 0.350_761_009_024_114_32) < 1e-12);
    }

    #[test]
    fn asymptotic_branch_matches_reference_points() {
        let p = airy(10.0).unwrap();
        assert!(rel(p.ai, 1.104_753_255_289_868_6e-10) < 1e-13);
        assert!(rel(p.bi, 455_641_153.548_225_14) < 1e-13);
        assert!(rel(p.ai_prime, -3.520_633_676_738_923_6e-10) < 1e-13);
        assert!(rel(p.bi_prime, 1_429_236_134.482_865_8) < 1e-13);

        let p = airy(-10.0).unwrap();
        assert!(rel(p.ai, 0.040_241_238_486_443_191) < 1e-12);
        assert!(rel(p.bi, -0.314_679_829_643_838_63) < 1e-13);
        assert!(rel(p.ai_prime, 0.996_265_044_132_790_06) < 1e-13);
        assert!(rel(p.bi_prime, 0.119_414_113_399_909_24) < 1e-12);
    }

    #[test]
    fn switchover_is_seamless() {
        for z in [-8.0, 8.0] {
            let s = airy_series(z);
            let a = asymptotic_sum(z, usize::MAX);
            for (x, y) in [(s.ai, a.ai), (s.bi, a.bi), (s.ai_prime, a.ai_prime), (s.bi_prime, a.bi_prime)] {
                assert!((x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1e-3), "z={z}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn values_at_origin() {
        let p = airy(0.0).unwrap();
        let g23 = statrs::function::gamma::gamma(2.0 / 3.0);
        assert!(rel(p.ai, 3f64.powf(-2.0 / 3.0) / g23) < 1e-15);
        assert!(rel(p.bi, 3f64.powf(-1.0 / 6.0) / g23) < 1e-15);
    }

    #[test]
    fn wronskian_at_one() {
        assert!((airy(1.0).unwrap().wronskian() - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn ai_decreases_on_positive_axis() {
        let mut last = airy(0.0).unwrap().ai;
        for i in 1..=300 {
            let v = airy(i as f64 * 0.1).unwrap().ai;
            assert!(v > 0.0 && v < last);
            last = v;
        }
    }

    #[test]
    fn range_guard() {
        assert!(matches!(airy(30.5), Err(Error::Range(_))));
        assert!(matches!(airy(-31.0), Err(Error::Range(_))));
        assert!(airy(30.0).is_ok());
    }

    #[test]
    fn asymptotic_close_to_series_at_ten() {
        for z in [10.0, -10.0] {
            let a = airy_asymptotic(z).unwrap();
            let s = airy_series(z);
            assert!(rel(a.ai, s.ai) < 1e-3);
        }
        let lead = airy_asymptotic_terms(10.0, 0).unwrap();
        let zeta = 2.0 / 3.0 * 10f64.powf(1.5);
        let expect = (-zeta).exp() / (2.0 * PI.sqrt() * 10f64.powf(0.25));
        assert_eq!(lead.ai, expect);
    }

    #[test]
    fn asymptotic_requires_large_argument() {
        assert!(matches!(airy_asymptotic(2.0), Err(Error::Accuracy(_))));
        assert!(airy_asymptotic(-3.0).is_ok());
    }

    #[test]
    fn leading_error_shrinks_with_argument() {
        let mut last = f64::INFINITY;
        for z in [4.0, 6.0, 8.0, 10.0, 15.0, 20.0] {
            let e = rel(airy_asymptotic_terms(z, 0).unwrap().ai, airy(z).unwrap().ai);
            assert!(e < last, "z={z}");
            last = e;
        }
    }

    #[test]
    fn oscillatory_zeros_follow_phase() {
        // Leading Ai on z < 0 vanishes where (2/3)|z|^{3/2} + π/4 = nπ.
        for n in 6..9 {
            let zeta = n as f64 * PI - FRAC_PI_4;
            let z = -(1.5 * zeta).powf(2.0 / 3.0);
            let lead = airy_asymptotic_terms(z, 0).unwrap();
            assert!(lead.ai.abs() < 1e-12);
            // The true zero lies nearby.
            assert!(airy(z).unwrap().ai.abs() < 2e-3);
        }
    }

    #[test]
    fn bi_over_ai_growth() {
        for z in [4.0, 6.0, 9.0] {
            let p = airy(z).unwrap();
            let growth = (4.0 / 3.0 * z.powf(1.5)).exp();
            let ratio = p.bi / p.ai / growth;
            assert!((ratio - 2.0).abs() < 0.1, "z={z}: {ratio}");
        }
    }

    #[test]
    fn bessel_form_agrees() {
        for z in [1e-6, 0.1, 1.0, 2.0, 3.3, 4.0, 5.0] {
            let b = airy_bessel_form(z).unwrap();
            let s = airy(z).unwrap();
            assert!(rel(b.ai, s.ai) < 1e-9, "Ai z={z}");
            assert!(rel(b.bi, s.bi) < 1e-9, "Bi z={z}");
            assert!(rel(b.ai_prime, s.ai_prime) < 1e-9, "Ai' z={z}");
            assert!(rel(b.bi_prime, s.bi_prime) < 1e-9, "Bi' z={z}");
        }
        assert!(airy_bessel_form(0.0).is_err());
    }

    #[test]
    fn bessel_form_limit_at_origin() {
        let b = airy_bessel_form(1e-12).unwrap();
        assert!(rel(b.ai, airy(0.0).unwrap().ai) < 1e-6);
    }

    #[test]
    fn laplace_integral_agrees() {
        for z in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let v = airy_laplace_contour(z).unwrap();
            assert!((v - airy(z).unwrap().ai).abs() < 1e-6, "z={z}");
        }
        assert!(airy_laplace_contour(2.5).is_err());
    }

    #[test]
    fn transform_residual_small() {
        for z in [-2.0, -5.0, -0.75] {
            let r = bessel_transform_check(z).unwrap();
            let scale = bessel_transform_scale(z).unwrap().abs().max(1.0);
            assert!(r <= 1e-6 * scale, "z={z}: {r}");
        }
    }

    #[test]
    fn transform_residual_is_linear() {
        let f = |x: f64| (x * x).sin() + x;
        let r1 = bessel_transform_residual(-2.0, f).unwrap();
        let r2 = bessel_transform_residual(-2.0, |x| 2.0 * f(x)).unwrap();
        assert!(rel(r2, 2.0 * r1) < 1e-12);
    }

    #[test]
    fn sectors_are_descent_directions() {
        for s in ContourSector::ALL {
            let (lo, hi) = s.arg_range();
            for i in 1..50 {
                let th = lo + (hi - lo) * i as f64 / 50.0;
                assert!(integrand_decays(th));
                assert_eq!(ContourSector::of_angle(th), Some(s));
            }
        }
        assert_eq!(ContourSector::of_angle(PI / 3.0), None);
        assert_eq!(ContourSector::of_angle(-PI / 2.0 - 0.1), Some(ContourSector::C3));
    }
}

//! Modified Bessel functions of real order for positive real argument.

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Argument above which `bessel_i` switches to the large-x expansion.
pub const I_SERIES_LIMIT: f64 = 12.0;

/// I_ν(x) for x > 0: ascending series up to `I_SERIES_LIMIT`, the
/// exponential asymptotic expansion beyond.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("bessel_i needs x > 0, got {x}")));
    }
    if x <= I_SERIES_LIMIT {
        Ok(bessel_i_series(nu, x))
    } else {
        Ok(bessel_i_asymptotic(nu, x))
    }
}

fn bessel_i_series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    let mut term = half.powf(nu) / gamma(nu + 1.0);
    let mut sum = term;
    for k in 1..500 {
        let k = k as f64;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn bessel_i_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut coeff = 1.0;
    let mut sum: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        coeff *= -(mu - odd * odd) / (8.0 * k as f64 * x);
        if coeff.abs() >= prev || coeff.abs() < 1e-17 * sum.abs() {
            break;
        }
        sum += coeff;
        prev = coeff.abs();
    }
    x.exp() / (2.0 * std::f64::consts::PI * x).sqrt() * sum
}

/// K_ν(x) for x > 0 from K_ν(x) = ∫₀^∞ exp(-x cosh t) cosh(νt) dt.
///
/// The integrand is entire and doubly-exponentially decaying, so a plain
/// trapezoid rule with step 1/32 is accurate to rounding.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("bessel_k needs x > 0, got {x}")));
    }
    let h = 1.0 / 32.0;
    // exp(-x (cosh t - 1)) carries the decay; exp(-x) is restored at the end.
    let f = |t: f64| (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
    let mut sum = 0.5 * f(0.0);
    let mut k = 1;
    loop {
        let v = f(k as f64 * h);
        sum += v;
        if v < 1e-18 * sum || k > 100_000 {
            break;
        }
        k += 1;
    }
    Ok(h * sum * (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit evaluation.
    #[test]
    fn i_series_values() {
        let v = bessel_i(1.0 / 3.0, 1.0).unwrap();
        assert!((v - 1.064_631_397_889_529_5).abs() < 1e-14, "{v}");
        let v = bessel_i(-1.0 / 3.0, 2.5).unwrap();
        assert!((v / 3.209_357_066_711_413_1 - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn i_switchover_is_continuous() {
        for nu in [-2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0] {
            let s = bessel_i_series(nu, 14.0);
            let a = bessel_i_asymptotic(nu, 14.0);
            assert!((s / a - 1.0).abs() < 1e-10, "nu={nu}: {s} vs {a}");
        }
    }

    #[test]
    fn k_values() {
        let v = bessel_k(1.0 / 3.0, 1.0).unwrap();
        assert!((v - 0.438_430_633_441_534_36).abs() < 1e-14, "{v}");
        let v = bessel_k(2.0 / 3.0, 7.0).unwrap();
        assert!((v / 4.376_232_217_363_939e-4 - 1.0).abs() < 1e-13, "{v}");
    }

    #[test]
    fn k_from_i_reflection() {
        // K_ν = π/(2 sin νπ) (I_{-ν} - I_ν)
        let nu = 1.0 / 3.0;
        let x = 0.7;
        let via_i = std::f64::consts::PI / (2.0 * (nu * std::f64::consts::PI).sin())
            * (bessel_i(-nu, x).unwrap() - bessel_i(nu, x).unwrap());
        assert!((bessel_k(nu, x).unwrap() / via_i - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(bessel_i(0.5, 0.0).is_err());
        assert!(bessel_k(0.5, -1.0).is_err());
    }
}

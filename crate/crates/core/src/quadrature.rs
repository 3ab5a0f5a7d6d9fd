//! Gauss–Kronrod quadrature and bracketing root search.
//!
//! The adaptive driver is generic over the integrand's value type so the
//! same code integrates real momenta and complex phase factors.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae on [-1, 1], non-negative half, descending.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the 7-point rule embedded at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be accumulated by the quadrature rules.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

/// Fixed 15-point Kronrod rule on [a, b]; returns the Kronrod value and the
/// |K15 - G7| difference as an error estimate.
pub fn kronrod15<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let pair = f1 + f2;
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let err = (kronrod - gauss).magnitude();
    (kronrod, err)
}

/// Nodes and weights of the 15-point Kronrod rule mapped to [a, b].
pub fn kronrod15_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[2 * j] = (center - half * XGK[j], half * WGK[j]);
        out[2 * j + 1] = (center + half * XGK[j], half * WGK[j]);
    }
    out[14] = (center, half * WGK[7]);
    out
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quadrature<V>> {
    const MAX_SEGMENTS: usize = 4000;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("non-finite integration limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature {
            value: V::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }

    let (value, error) = kronrod15(&mut f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut evaluations = 15;

    loop {
        let total = segments.iter().fold(V::zero(), |acc, s| acc + s.value);
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error: total_err,
                evaluations,
            });
        }
        if segments.len() >= MAX_SEGMENTS {
            return Err(Error::Numerical(format!(
                "adaptive quadrature on [{a}, {b}] did not converge: error {total_err:.3e} > {target:.3e}"
            )));
        }

        let (worst, _) = segments
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, s)| {
                if s.error > be {
                    (i, s.error)
                } else {
                    (bi, be)
                }
            });
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            return Err(Error::Numerical(format!(
                "adaptive quadrature exhausted resolution near x = {mid}"
            )));
        }
        let (v1, e1) = kronrod15(&mut f, seg.a, mid);
        let (v2, e2) = kronrod15(&mut f, mid, seg.b);
        evaluations += 30;
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
    }
}

/// Bisection for a sign change of `f` on [lo, hi].
///
/// Iterates until the bracket is narrower than `rel_tol * max(1, |x|)` or
/// cannot be split further in floating point.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo:.3e}, {f_hi:.3e})"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * mid.abs().max(1.0) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

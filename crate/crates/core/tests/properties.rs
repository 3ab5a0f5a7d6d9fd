use num_complex::Complex64;
use proptest::prelude::*;

use semiclassic::connection::{connect_decreasing, connect_increasing, patched_currents, AllowedAmplitudes};
use semiclassic::oracle::{eckart_transmission, solve_scattering, OracleConfig};
use semiclassic::potential::{find_turning_points, PhysicalContext, PotentialModel, ScatteringProblem};
use semiclassic::reflection::{effective_perturbation_forms, once_reflected_with_reference};
use semiclassic::special_fn::airy;
use semiclassic::wkb::{corrected_transmission, leading_transmission, sigma_star};

fn problem(potential: PotentialModel, energy: f64, domain: (f64, f64)) -> ScatteringProblem {
    ScatteringProblem::new(PhysicalContext::natural(), potential, energy, domain).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #[test]
    fn airy_wronskian(z in -10.0..10.0f64) {
        let w = airy(z).unwrap().wronskian();
        prop_assert!((w - std::f64::consts::FRAC_1_PI).abs() < 1e-10);
    }

    #[test]
    fn airy_derivative_consistent(z in -8.0..4.0f64) {
        let h = 1e-3;
        let f = |s: f64| airy(s).unwrap();
        let fd = (f(z - 2.0 * h).ai - 8.0 * f(z - h).ai + 8.0 * f(z + h).ai - f(z + 2.0 * h).ai) / (12.0 * h);
        prop_assert!((fd - f(z).ai_prime).abs() < 1e-9);
    }

    #[test]
    fn potential_derivatives_match_differences(
        a in 0.1..3.0f64, w in 0.3..3.0f64, c in -2.0..2.0f64, x in -4.0..4.0f64, which in 0..3usize
    ) {
        let v = match which {
            0 => PotentialModel::gaussian_bump(a, w, c),
            1 => PotentialModel::eckart(a, w, c),
            _ => PotentialModel::parabolic_barrier(a, w, c),
        }.unwrap();
        let h = 1e-4;
        let fd = (v.evaluate(x + h).unwrap() - v.evaluate(x - h).unwrap()) / (2.0 * h);
        let d = v.derivative(x).unwrap();
        prop_assert!((fd - d).abs() < 1e-6 * (1.0 + d.abs()));
        let fd2 = (v.derivative(x + h).unwrap() - v.derivative(x - h).unwrap()) / (2.0 * h);
        let d2 = v.second_derivative(x).unwrap();
        prop_assert!((fd2 - d2).abs() < 1e-6 * (1.0 + d2.abs()));
    }

    #[test]
    fn turning_points_symmetric(c in -2.0..2.0f64, frac in 0.05..0.95f64, w in 0.5..2.0f64) {
        let p = problem(PotentialModel::gaussian_bump(1.0, w, c).unwrap(), frac, (c - 10.0, c + 10.0));
        let (a, b) = find_turning_points(&p).unwrap().pair().unwrap();
        prop_assert!(a < c && c < b);
        prop_assert!((a + b - 2.0 * c).abs() < 1e-9);
    }

    #[test]
    fn connection_maps_linear_and_inverse(c1 in complex(), s1 in complex(), c2 in complex(), s2 in complex(), k in -3.0..3.0f64) {
        let x = AllowedAmplitudes { cos: c1, sin: s1 };
        let y = AllowedAmplitudes { cos: c2, sin: s2 };
        let sum = AllowedAmplitudes { cos: c1 + c2 * k, sin: s1 + s2 * k };
        let fx = connect_increasing(1.0, x).unwrap();
        let fy = connect_increasing(1.0, y).unwrap();
        let fs = connect_increasing(1.0, sum).unwrap();
        prop_assert!((fs.decaying - (fx.decaying + fy.decaying * k)).norm() < 1e-12);
        prop_assert!((fs.growing - (fx.growing + fy.growing * k)).norm() < 1e-12);
        let back = connect_decreasing(-1.0, fx).unwrap();
        prop_assert!((back.cos - c1).norm() < 1e-12 && (back.sin - s1).norm() < 1e-12);
    }

    #[test]
    fn patched_currents_conserve(sigma in 0.0..30.0f64, b in complex()) {
        let c = patched_currents(sigma, b, &PhysicalContext::natural());
        prop_assert!((c.net_left() - c.transmitted).abs() <= 1e-12 * c.incident);
        prop_assert!(corrected_transmission(sigma) <= leading_transmission(sigma));
    }

    #[test]
    fn eckart_closed_form_bounded_and_rising(e in 0.01..3.0f64, de in 0.001..0.5f64) {
        let ctx = PhysicalContext::natural();
        let t1 = eckart_transmission(&ctx, 1.0, 1.0, e);
        let t2 = eckart_transmission(&ctx, 1.0, 1.0, e + de);
        prop_assert!((0.0..=1.0).contains(&t1) && t2 > t1);
    }

    #[test]
    fn sigma_shrinks_as_energy_rises(e in 0.05..0.9f64, de in 0.01..0.09f64) {
        let v = PotentialModel::eckart(1.0, 1.0, 0.0).unwrap();
        let s1 = sigma_star(&problem(v.clone(), e, (-15.0, 15.0))).unwrap();
        let s2 = sigma_star(&problem(v, e + de, (-15.0, 15.0))).unwrap();
        prop_assert!(s2 < s1 && s2 > 0.0);
    }

    #[test]
    fn perturbation_forms_coincide(a in 0.05..0.9f64, x in -3.0..3.0f64) {
        let p = problem(PotentialModel::gaussian_bump(a, 1.0, 0.0).unwrap(), 1.5, (-8.0, 8.0));
        let f = effective_perturbation_forms(&p, x).unwrap();
        let scale = f.analytic.abs().max(1e-12);
        prop_assert!((f.from_sigma1 - f.analytic).abs() < 1e-8 * scale);
        prop_assert!((f.from_sigma2 - f.analytic).abs() < 1e-8 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn oracle_unitarity(a in 0.1..2.0f64, e in 0.1..3.0f64, which in 0..3usize) {
        let (v, dom) = match which {
            0 => (PotentialModel::gaussian_bump(a, 1.0, 0.0).unwrap(), (-8.0, 8.0)),
            1 => (PotentialModel::eckart(a, 1.0, 0.0).unwrap(), (-15.0, 15.0)),
            _ => (PotentialModel::square_barrier(a, 1.5, 0.0).unwrap(), (-4.0, 4.0)),
        };
        let cfg = OracleConfig { grid_points: 4001, ..OracleConfig::default() };
        let s = solve_scattering(&problem(v, e, dom), &cfg).unwrap();
        prop_assert!((s.transmission + s.reflection - 1.0).abs() < 1e-8);
        prop_assert!(s.transmission >= 0.0 && s.reflection >= 0.0);
    }

    #[test]
    fn reflection_probability_ignores_reference(shift in -5.0..5.0f64, a in 0.005..0.05f64) {
        let p = problem(PotentialModel::gaussian_bump(a, 1.0, 0.0).unwrap(), 2.0, (-8.0, 8.0));
        let base = once_reflected_with_reference(&p, -8.0).unwrap().norm_sqr();
        let moved = once_reflected_with_reference(&p, -8.0 + shift).unwrap().norm_sqr();
        prop_assert!((moved / base - 1.0).abs() < 1e-10);
    }
}

//! Randomized invariants of the special functions, grids, quadrature,
//! symbols and margins.

use std::f64::consts::{PI, SQRT_2};

use hartley_core::equations::{symmetrize, triviality_margin, EquationId, MuEquationId};
use hartley_core::funcspace::{catalog, GridFunction, GridSpec};
use hartley_core::mellin::{check_lambda, multiplier_eval, MellinSpectrum, MultiplierId, TauGrid};
use hartley_core::quadrature::{integrate_finite, QuadratureConfig};
use hartley_core::specfun::{fresnel_pair, gamma_critical, lommel_kernel};
use num_complex::Complex64;
use proptest::prelude::*;

fn small_tau_grid() -> TauGrid {
    TauGrid::new(0.5, 5.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gamma_on_critical_line_is_conjugate_symmetric(tau in -10.0f64..10.0) {
        let a = gamma_critical(tau).unwrap();
        let b = gamma_critical(-tau).unwrap();
        prop_assert!((b - a.conj()).norm() < 1e-12);
        let rel = (a.norm_sqr() * (PI * tau).cosh() - PI).abs() / PI;
        prop_assert!(rel < 1e-10, "relative deviation {rel}");
    }

    #[test]
    fn fresnel_pair_is_bounded(x in 0.0f64..50.0) {
        let (s, c) = fresnel_pair(x).unwrap();
        prop_assert!(s >= 0.0 && c >= 0.0);
        if x >= 25.0 {
            prop_assert!((s - 0.5).abs() < 0.13 && (c - 0.5).abs() < 0.13);
        }
    }

    #[test]
    fn reciprocal_grid_closure(ratio in 1.001f64..2.0, span in 1usize..200, pick in 0.0f64..1.0) {
        let g = GridSpec::new(ratio, span).unwrap();
        let k = ((pick * (2 * span) as f64).round() as i64) - span as i64;
        // negative nodes are defined as reciprocals of positive ones
        prop_assert_eq!(g.node(-k.abs()), 1.0 / g.node(k.abs()));
        let f = GridFunction::sample(&catalog("exp").unwrap(), g).unwrap();
        let r = f.reflected();
        // f(1/x) by index reversal only
        prop_assert_eq!(r.at(k), f.at(-k));
    }

    #[test]
    fn finite_integration_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, hi in 0.5f64..8.0) {
        let cfg = QuadratureConfig::default();
        let e = |t: f64| (-t).exp();
        let g = |t: f64| (-t * t).exp() * t.cos();
        let ie = integrate_finite(e, 0.0, hi, &cfg).unwrap();
        let ig = integrate_finite(g, 0.0, hi, &cfg).unwrap();
        let ic = integrate_finite(|t| a * e(t) + b * g(t), 0.0, hi, &cfg).unwrap();
        let expected = a * ie.value + b * ig.value;
        let tol = 2.0 * (cfg.abs_tol + cfg.rel_tol * (a.abs() * ie.value.abs() + b.abs() * ig.value.abs()));
        prop_assert!((ic.value - expected).abs() <= tol, "{} vs {}", ic.value, expected);
    }

    #[test]
    fn iterated_hartley_symbol_window(tau in -60.0f64..60.0) {
        let m = multiplier_eval(MultiplierId::Hh2, None, tau).unwrap().norm();
        // 2 + O(sech πτ): rounds to 2 exactly once |τ| passes about 12
        prop_assert!(m >= 2.0 && m <= 4.0 + 1e-12, "|m| = {m}");
        if tau.abs() < 10.0 {
            prop_assert!(m > 2.0);
        }
        if tau.abs() > 1e-3 {
            prop_assert!(m < 4.0);
        }
    }

    #[test]
    fn iterated_denominator_floor(lambda in -1.999f64..1.999, tau in -20.0f64..20.0) {
        let v = multiplier_eval(MultiplierId::D3_23, Some(Complex64::new(lambda, 0.0)), tau).unwrap();
        prop_assert!(v.norm() >= 2.0 - lambda.abs() - 1e-12);
    }

    #[test]
    fn symbols_of_real_operators_are_conjugate_symmetric(tau in 0.0f64..30.0, lambda in -1.2f64..1.2, which in 0usize..17) {
        let id = MultiplierId::ALL[which];
        let l = id.takes_lambda().then(|| Complex64::new(lambda, 0.0));
        if let Some(l) = l {
            prop_assume!(check_lambda(id, l).is_ok());
        }
        let p = multiplier_eval(id, l, tau).unwrap();
        let m = multiplier_eval(id, l, -tau).unwrap();
        prop_assert!((m - p.conj()).norm() <= 1e-12 * p.norm().max(1.0));
    }

    #[test]
    fn bounded_symbol_lambda_domain(lambda in -4.0f64..4.0) {
        let ok = check_lambda(MultiplierId::D3_23, Complex64::new(lambda, 0.0)).is_ok();
        prop_assert_eq!(ok, lambda.abs() < 2.0);
        let ok = check_lambda(MultiplierId::D3_28, Complex64::new(lambda, 0.0)).is_ok();
        prop_assert_eq!(ok, lambda.abs() < (2.0 * PI).sqrt());
    }

    #[test]
    fn margin_decreases_in_lambda_magnitude(a in 0.0f64..SQRT_2, b in 0.0f64..SQRT_2) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mu = MuEquationId::Mu3_12;
        prop_assert!(triviality_margin(mu, lo) > triviality_margin(mu, hi));
        prop_assert_eq!(triviality_margin(mu, -hi), triviality_margin(mu, hi));
        prop_assert!(triviality_margin(mu, hi) > 0.0);
    }

    #[test]
    fn margin_sign_matches_threshold(lambda in -3.5f64..3.5, which in 0usize..3) {
        let mu = [MuEquationId::Mu3_12, MuEquationId::Mu3_24, MuEquationId::Mu3_29][which];
        prop_assume!((lambda.abs() - mu.threshold()).abs() > 1e-9);
        prop_assert_eq!(triviality_margin(mu, lambda) > 0.0, lambda.abs() < mu.threshold());
    }

    #[test]
    fn symmetrization_is_a_projection(
        re in prop::collection::vec(-1.0f64..1.0, 21),
        im in prop::collection::vec(-1.0f64..1.0, 21),
        odd in any::<bool>(),
    ) {
        let eq = if odd { EquationId::Eq3_10 } else { EquationId::Eq3_5 };
        let sign = eq.symmetry_sign().unwrap();
        let values: Vec<Complex64> = re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect();
        let phi = MellinSpectrum::new(small_tau_grid(), values).unwrap();
        let once = symmetrize(eq, &phi).unwrap();
        let twice = symmetrize(eq, &once).unwrap();
        let v = once.values();
        let n = v.len();
        for i in 0..n {
            prop_assert!((v[i] - sign * v[n - 1 - i]).norm() < 1e-15);
            prop_assert!((v[i] - twice.values()[i]).norm() < 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lommel_kernel_is_decreasing(x in 0.01f64..99.0, step in 0.01f64..1.0) {
        let y = (x * (1.0 + step)).min(100.0);
        prop_assume!(y > x);
        prop_assert!(lommel_kernel(x).unwrap() > lommel_kernel(y).unwrap());
    }
}

#[test]
fn equation_names_round_trip() {
    for eq in EquationId::ALL {
        assert_eq!(eq.name().parse::<EquationId>().unwrap(), eq);
    }
    for mu in [MuEquationId::Mu3_12, MuEquationId::Mu3_24, MuEquationId::Mu3_29] {
        assert_eq!(mu.name().parse::<MuEquationId>().unwrap(), mu);
    }
    assert!("EQ_9_9".parse::<EquationId>().is_err());
}

//! Agreement between independent realizations of the same operator.

use hartley_core::equations::{mu_residual, MuEquationId};
use hartley_core::funcspace::catalog;
use hartley_core::transforms::{Direction, OperatorId, Route, TransformConfig};

const XS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// Closed inverse kernels, compositions of elementary inverses and the
/// spectral division, applied to catalog functions.
#[test]
fn inverse_routes_agree() {
    let cfg = TransformConfig::default();
    for name in ["exp", "gauss"] {
        let g = catalog(name).unwrap();
        // fcfs pits the principal-value form of FS∘FC against its oscillatory composition
        for op in std::iter::once(OperatorId::Fcfs).chain(OperatorId::COMPOSITE) {
            let report = cfg.route_report(op, Direction::Inverse, &g, &XS).unwrap();
            assert!(report.values.iter().all(Option::is_some), "{}", op.name());
            assert!(report.max_dev < 1e-3, "{} on {name}: inverse routes differ by {:e}", op.name(), report.max_dev);
        }
    }
}

/// The first μ-equation at λ = 0 is the iterated half-Hartley transform.
#[test]
fn mu_equation_at_zero_is_the_iterated_transform() {
    let cfg = TransformConfig::default();
    for name in ["exp", "gauss"] {
        let f = catalog(name).unwrap();
        let mu = mu_residual(&cfg, MuEquationId::Mu3_12, &f, 0.0, &XS).unwrap();
        let hh2 = XS
            .iter()
            .map(|&x| cfg.forward(OperatorId::Hh2, &f, Route::Kernel, x).unwrap().abs())
            .fold(0.0, f64::max);
        assert!((mu - hh2).abs() < 1e-6, "{name}: {mu} vs {hh2}");
    }
}

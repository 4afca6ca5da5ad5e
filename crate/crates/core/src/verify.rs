//! Verification suites shared by the command-line tool and the test suite.
//! Each suite returns named checks with a measured value, its threshold and
//! a verdict.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;

use crate::equations::{
    build_solution_from_phi, even_phi_profiles, residual, solve_fn, solve_stieltjes_second_kind, stieltjes_image_of_exp,
    triviality_margin, EquationId, HilbertVariant, MuEquationId,
};
use crate::error::{Error, Result};
use crate::funcspace::{catalog, l2_norm, GridFunction, GridSpec, RealFunction, CATALOG_NAMES};
use crate::mellin::{mellin_forward, parseval_norm};
use crate::specfun::{bessel_k0, digamma_neg_half, fresnel_pair, gamma_critical, lommel_kernel};
use crate::transforms::{Direction, OperatorId, Route, TransformConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Parseval,
    Routes,
    Reciprocity,
    Norms,
    Isometry,
    Equations,
    Margins,
    Specfun,
    All,
}

impl Suite {
    /// The individual suites, in the order `All` runs them.
    pub const EACH: [Suite; 8] = [
        Suite::Parseval,
        Suite::Routes,
        Suite::Reciprocity,
        Suite::Norms,
        Suite::Isometry,
        Suite::Equations,
        Suite::Margins,
        Suite::Specfun,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Parseval => "parseval",
            Suite::Routes => "routes",
            Suite::Reciprocity => "reciprocity",
            Suite::Norms => "norms",
            Suite::Isometry => "isometry",
            Suite::Equations => "equations",
            Suite::Margins => "margins",
            Suite::Specfun => "specfun",
            Suite::All => "all",
        }
    }

    /// Wall-clock budget of the suite.
    pub fn budget(self) -> Duration {
        let secs = match self {
            Suite::Parseval => 10,
            Suite::Routes => 120,
            Suite::Reciprocity => 300,
            Suite::Norms => 30,
            Suite::Isometry => 20,
            Suite::Equations => 120,
            Suite::Margins => 5,
            Suite::Specfun => 5,
            Suite::All => 610,
        };
        Duration::from_secs(secs)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == key)
            .ok_or_else(|| Error::NotFound(s.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when value < threshold.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check { name: name.into(), value, threshold, pass: value < threshold }
    }

    fn failed(name: impl Into<String>, threshold: f64, err: &Error) -> Check {
        Check { name: format!("{} ({err})", name.into()), value: f64::NAN, threshold, pass: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    pub config_echo: serde_json::Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Settings for a verification run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyConfig {
    pub transform: TransformConfig,
    pub grid: GridSpec,
}

impl VerifyConfig {
    pub fn echo(&self) -> serde_json::Value {
        let q = &self.transform.quadrature;
        json!({
            "grid": { "ratio": self.grid.ratio, "half_span": self.grid.half_span },
            "tau": { "step": self.transform.tau.step, "max": self.transform.tau.max },
            "quadrature": {
                "abs_tol": q.abs_tol,
                "rel_tol": q.rel_tol,
                "max_subdivisions": q.max_subdivisions,
                "truncation_tail_bound": q.truncation_tail_bound,
                "pv_window": q.pv_window,
                "max_cells": q.max_cells,
            },
            "memo_tol": [self.transform.memo_tol.0, self.transform.memo_tol.1],
        })
    }
}

const ROUTE_XS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
const RESIDUAL_XS: [f64; 3] = [0.5, 1.0, 2.0];

/// Runs one suite (or all of them) and reports every check.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Report {
    let start = Instant::now();
    let checks = match suite {
        Suite::Parseval => parseval(cfg),
        Suite::Routes => routes(cfg),
        Suite::Reciprocity => reciprocity(cfg),
        Suite::Norms => norms(cfg),
        Suite::Isometry => isometry(cfg),
        Suite::Equations => equations(cfg),
        Suite::Margins => margins(),
        Suite::Specfun => specfun(),
        Suite::All => Suite::EACH
            .into_iter()
            .flat_map(|s| {
                run_suite(s, cfg).checks.into_iter().map(move |mut c| {
                    c.name = format!("{}/{}", s.name(), c.name);
                    c
                })
            })
            .collect(),
    };
    Report { suite: suite.name().into(), checks, config_echo: cfg.echo(), elapsed: start.elapsed() }
}

fn catalog_fn(name: &str) -> RealFunction {
    catalog(name).expect("catalog name")
}

/// ‖a − b‖/‖b‖ on the grid.
fn relative_l2(a: &RealFunction, b: &RealFunction, grid: GridSpec) -> Result<f64> {
    let diff: Vec<f64> = grid.nodes().iter().map(|&x| a.eval(x) - b.eval(x)).collect();
    if diff.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite value on the grid".into()));
    }
    let num = l2_norm(&GridFunction::from_values(grid, diff)?);
    Ok(num / l2_norm(&GridFunction::sample(b, grid)?))
}

fn parseval(cfg: &VerifyConfig) -> Vec<Check> {
    CATALOG_NAMES
        .iter()
        .map(|&name| {
            let f = catalog_fn(name);
            let label = format!("parseval[{name}]");
            let r = (|| {
                let grid_norm = l2_norm(&GridFunction::sample(&f, cfg.grid)?);
                let spec_norm = parseval_norm(&mellin_forward(&f, cfg.transform.tau)?);
                Ok::<_, Error>((grid_norm - spec_norm).abs())
            })();
            match r {
                Ok(v) => Check::below(label, v, 1e-6),
                Err(e) => Check::failed(label, 1e-6, &e),
            }
        })
        .collect()
}

fn routes(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for op in OperatorId::COMPOSITE {
        for name in ["exp", "gauss"] {
            let f = catalog_fn(name);
            let label = format!("route-agreement[{op},{name}]");
            match cfg.transform.route_report(op, Direction::Forward, &f, &ROUTE_XS) {
                Ok(r) => out.push(Check::below(label, r.max_dev, 1e-4)),
                Err(e) => out.push(Check::failed(label, 1e-4, &e)),
            }
        }
    }
    out
}

/// Relative L₂ error of inverse∘forward, both by the kernel route.
pub fn reciprocity_error(cfg: &TransformConfig, op: OperatorId, f: &RealFunction, grid: GridSpec) -> Result<f64> {
    let fwd = cfg.memo(&cfg.forward_fn(op, f, Route::Kernel)?);
    let back = cfg.inverse_fn(op, &fwd, Route::Kernel)?;
    relative_l2(&back, f, grid)
}

fn reciprocity(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for op in OperatorId::ALL {
        for name in ["exp", "gauss", "bump"] {
            let f = catalog_fn(name);
            let label = format!("reciprocity[{op},{name}]");
            match reciprocity_error(&cfg.transform, op, &f, cfg.grid) {
                Ok(v) => out.push(Check::below(label, v, 1e-3)),
                Err(e) => out.push(Check::failed(label, 1e-3, &e)),
            }
        }
    }
    out
}

fn norms(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for op in OperatorId::ALL {
        let Some((lo, hi)) = op.norm_bounds() else { continue };
        if lo == hi {
            continue;
        }
        for name in CATALOG_NAMES {
            let label = format!("norm-ratio[{op},{name}] in [{lo}, {hi:.6}]");
            match cfg.transform.norm_ratio(op, &catalog_fn(name)) {
                Ok(v) => out.push(Check { name: label, value: v, threshold: hi, pass: v >= lo && v <= hi }),
                Err(e) => out.push(Check::failed(label, hi, &e)),
            }
        }
    }
    for (op, want) in [(OperatorId::Hh2, 3.3306), (OperatorId::Hhfc, 1.8092)] {
        let label = format!("norm-ratio[{op},exp] = {want}");
        match cfg.transform.norm_ratio(op, &catalog_fn("exp")) {
            Ok(v) => out.push(Check::below(label, (v - want).abs(), 1e-3)),
            Err(e) => out.push(Check::failed(label, 1e-3, &e)),
        }
    }
    out
}

fn isometry(cfg: &VerifyConfig) -> Vec<Check> {
    let mut out = Vec::new();
    for op in [OperatorId::Fc, OperatorId::Fs, OperatorId::Fcfs] {
        for name in CATALOG_NAMES {
            let label = format!("isometry[{op},{name}]");
            match cfg.transform.norm_ratio(op, &catalog_fn(name)) {
                Ok(v) => out.push(Check::below(label, (v - 1.0).abs(), 1e-4)),
                Err(e) => out.push(Check::failed(label, 1e-4, &e)),
            }
        }
    }
    out
}

fn equations(cfg: &VerifyConfig) -> Vec<Check> {
    let t = &cfg.transform;
    let mut out = Vec::new();
    let push = |out: &mut Vec<Check>, label: String, r: Result<f64>| match r {
        Ok(v) => out.push(Check::below(label, v, 1e-3)),
        Err(e) => out.push(Check::failed(label, 1e-3, &e)),
    };
    // the second-kind Stieltjes pair: solve then apply recovers g
    for name in CATALOG_NAMES {
        let g = catalog_fn(name);
        let r = (|| {
            let f = t.memo(&solve_fn(t, EquationId::Eq3_1, &g)?);
            let back = solve_fn(t, EquationId::Eq3_2, &f)?;
            relative_l2(&back, &g, cfg.grid)
        })();
        push(&mut out, format!("stieltjes-roundtrip[{name}]"), r);
    }
    let r = solve_stieltjes_second_kind(t, &stieltjes_image_of_exp(), 1.0).map(|v| (v - (-1f64).exp()).abs());
    push(&mut out, "stieltjes-plug-back[exp-image,x=1]".into(), r);
    // solutions built from even φ satisfy the homogeneous equations
    match even_phi_profiles(t.tau) {
        Ok(profiles) => {
            for eq in [EquationId::Eq3_5, EquationId::Eq3_6] {
                for (pname, phi) in &profiles {
                    let r = build_solution_from_phi(eq, phi, None)
                        .and_then(|f| residual(t, eq, &f, None, None, &RESIDUAL_XS));
                    push(&mut out, format!("phi-solution-residual[{eq},{pname}]"), r);
                }
            }
        }
        Err(e) => out.push(Check::failed("phi-profiles", 1e-3, &e)),
    }
    // second-kind Hilbert equations: solve for the image of exp, plug back
    for (variant, eq, op) in [
        (HilbertVariant::C, EquationId::HilbC, OperatorId::Hhfc),
        (HilbertVariant::S, EquationId::HilbS, OperatorId::Hhfs),
    ] {
        let r = (|| {
            let g = t.memo(&t.forward_fn(op, &catalog_fn("exp"), Route::Kernel)?);
            let f = solve_fn(t, eq, &g)?;
            residual(t, eq, &f, None, Some(&g), &RESIDUAL_XS)
        })();
        push(&mut out, format!("hilbert-plug-back[{variant:?}]"), r);
    }
    out
}

/// `n` evenly spaced points of [a, b].
fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn margins() -> Vec<Check> {
    let mut out = Vec::new();
    for (mu, span) in [(MuEquationId::Mu3_12, 2.0), (MuEquationId::Mu3_24, 2.5), (MuEquationId::Mu3_29, 3.0)] {
        let thr = mu.threshold();
        let wrong = linspace(-span, span, 50)
            .into_iter()
            .filter(|&l| (triviality_margin(mu, l) > 0.0) != (l.abs() < thr))
            .count();
        out.push(Check { name: format!("margin-sign-scan[{mu}]"), value: wrong as f64, threshold: 0.0, pass: wrong == 0 });
        let edge = triviality_margin(mu, thr).abs().max(triviality_margin(mu, -thr).abs());
        out.push(Check::below(format!("margin-boundary-zero[{mu}]"), edge, 1e-10));
    }
    let m0 = triviality_margin(MuEquationId::Mu3_12, 0.0);
    out.push(Check::below("margin[MU_3_12,lambda=0] = 2", (m0 - 2.0).abs(), 1e-12));
    let m = triviality_margin(MuEquationId::Mu3_24, 1.9);
    out.push(Check::below("margin[MU_3_24,lambda=1.9] = 0.39", (m - 0.39).abs(), 1e-12));
    out
}

fn specfun() -> Vec<Check> {
    let mut out = Vec::new();
    let mut push = |label: &str, got: Result<f64>, want: f64| match got {
        Ok(v) => out.push(Check::below(label, (v - want).abs(), 1e-6)),
        Err(e) => out.push(Check::failed(label, 1e-6, &e)),
    };
    push("K0(1)", bessel_k0(1.0), 0.421_024_438_240_708_3);
    push("L(0+)", lommel_kernel(1e-9), PI / 2.0);
    push("Gamma(1/2)", gamma_critical(0.0).map(|z| z.re), PI.sqrt());
    push("psi(-1/2)", digamma_neg_half(0), 0.036_489_973_978_576_52);
    push("Fresnel C(inf)", fresnel_pair(1e14).map(|p| p.1), 0.5);
    push("Fresnel S(inf)", fresnel_pair(1e14).map(|p| p.0), 0.5);
    push("Fresnel C(0)", fresnel_pair(0.0).map(|p| p.1), 0.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_suites_pass() {
        let cfg = VerifyConfig::default();
        for s in [Suite::Margins, Suite::Specfun, Suite::Parseval] {
            let r = run_suite(s, &cfg);
            assert!(r.passed(), "{s}: {:?}", r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        }
    }

    #[test]
    fn report_schema() {
        let r = run_suite(Suite::Margins, &VerifyConfig::default());
        let v = serde_json::to_value(&r).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 3);
        for k in ["suite", "checks", "config_echo"] {
            assert!(v.get(k).is_some());
        }
        let c = &v["checks"][0];
        for k in ["name", "value", "threshold", "pass"] {
            assert!(c.get(k).is_some());
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert_eq!("ALL".parse::<Suite>().unwrap(), Suite::All);
    }

    #[test]
    fn linspace_ends() {
        let v = linspace(-2.0, 2.0, 50);
        assert_eq!(v.len(), 50);
        assert_eq!((v[0], v[49]), (-2.0, 2.0));
    }
}

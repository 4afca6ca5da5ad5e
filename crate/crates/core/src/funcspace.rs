//! Function representations: evaluator-backed `RealFunction`, the
//! reciprocal-closed geometric grid, sampled `GridFunction`, L₂ norms and
//! the catalog of reference test functions.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, DecayClass, QuadratureConfig};
use crate::specfun::{exp_e1, ln_gamma};

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// Known values of f*(1/2 + iτ) as a function of τ.
pub type MellinEvaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

pub(crate) const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Closed-form transforms attached to catalog functions.
#[derive(Clone, Default)]
pub struct References {
    pub fourier_cos: Option<Evaluator>,
    pub fourier_sin: Option<Evaluator>,
    pub stieltjes: Option<Evaluator>,
}

/// A real function on (0, ∞) with decay metadata.
#[derive(Clone)]
pub struct RealFunction {
    label: String,
    evaluator: Evaluator,
    decay_hint: DecayClass,
    known_mellin: Option<MellinEvaluator>,
    references: References,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("decay_hint", &self.decay_hint)
            .field("known_mellin", &self.known_mellin.is_some())
            .finish()
    }
}

impl RealFunction {
    pub fn new<F>(label: impl Into<String>, decay_hint: DecayClass, evaluator: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RealFunction {
            label: label.into(),
            evaluator: Arc::new(evaluator),
            decay_hint,
            known_mellin: None,
            references: References::default(),
        }
    }

    pub fn from_evaluator(label: impl Into<String>, decay_hint: DecayClass, evaluator: Evaluator) -> Self {
        RealFunction {
            label: label.into(),
            evaluator,
            decay_hint,
            known_mellin: None,
            references: References::default(),
        }
    }

    pub fn zero() -> Self {
        RealFunction::new("zero", DecayClass::Compact(0.0), |_| 0.0).with_mellin(|_| Complex64::new(0.0, 0.0))
    }

    pub fn with_mellin<M>(mut self, m: M) -> Self
    where
        M: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        self.known_mellin = Some(Arc::new(m));
        self
    }

    pub fn with_references(mut self, r: References) -> Self {
        self.references = r;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decay_hint(&self) -> DecayClass {
        self.decay_hint
    }

    pub fn known_mellin(&self) -> Option<&MellinEvaluator> {
        self.known_mellin.as_ref()
    }

    pub fn references(&self) -> &References {
        &self.references
    }

    /// True when the function is identically zero by construction.
    pub fn is_zero(&self) -> bool {
        matches!(self.decay_hint, DecayClass::Compact(b) if b <= 0.0)
    }

    /// c·f, keeping the known Mellin transform.
    pub fn scaled(&self, c: f64) -> RealFunction {
        let f = self.evaluator.clone();
        let mut out = RealFunction::new(format!("{}*{}", c, self.label), self.decay_hint, move |x| c * f(x));
        if let Some(m) = self.known_mellin.clone() {
            out.known_mellin = Some(Arc::new(move |t| m(t) * c));
        }
        out
    }

    /// a·f + b·g.
    pub fn combine(a: f64, f: &RealFunction, b: f64, g: &RealFunction) -> RealFunction {
        let (fe, ge) = (f.evaluator.clone(), g.evaluator.clone());
        let hint = weaker(f.decay_hint, g.decay_hint);
        let mut out = RealFunction::new(format!("{a}*{}+{b}*{}", f.label, g.label), hint, move |x| {
            a * fe(x) + b * ge(x)
        });
        if let (Some(mf), Some(mg)) = (f.known_mellin.clone(), g.known_mellin.clone()) {
            out.known_mellin = Some(Arc::new(move |t| mf(t) * a + mg(t) * b));
        }
        out
    }
}

/// The slower of two decay classes.
pub fn weaker(a: DecayClass, b: DecayClass) -> DecayClass {
    use DecayClass::*;
    match (a, b) {
        (Algebraic(p), Algebraic(q)) => Algebraic(p.min(q)),
        (Algebraic(p), _) | (_, Algebraic(p)) => Algebraic(p),
        (Exponential(p), Exponential(q)) => Exponential(p.min(q)),
        (Exponential(p), _) | (_, Exponential(p)) => Exponential(p),
        (Gaussian(p), Gaussian(q)) => Gaussian(p.min(q)),
        (Gaussian(p), _) | (_, Gaussian(p)) => Gaussian(p),
        (Compact(p), Compact(q)) => Compact(p.max(q)),
    }
}

/// Geometric grid x_k = q^k, k = -m..m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub ratio: f64,
    pub half_span: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { ratio: 2f64.powf(0.125), half_span: 64 }
    }
}

impl GridSpec {
    pub fn new(ratio: f64, half_span: usize) -> Result<Self> {
        if !(ratio > 1.0) || !ratio.is_finite() || half_span == 0 {
            return Err(Error::Config(format!("grid needs ratio > 1 and half_span >= 1, got {ratio}, {half_span}")));
        }
        Ok(GridSpec { ratio, half_span })
    }

    pub fn len(&self) -> usize {
        2 * self.half_span + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn log_step(&self) -> f64 {
        self.ratio.ln()
    }

    /// Node q^k; negative k are exact reciprocals of the positive ones.
    pub fn node(&self, k: i64) -> f64 {
        let up = (k.unsigned_abs() as f64 * self.log_step()).exp();
        if k >= 0 {
            up
        } else {
            1.0 / up
        }
    }

    /// Nodes in increasing order, index i ↔ k = i - m.
    pub fn nodes(&self) -> Vec<f64> {
        let m = self.half_span as i64;
        (-m..=m).map(|k| self.node(k)).collect()
    }

    /// The same span with the logarithmic step halved.
    pub fn refined(&self) -> GridSpec {
        GridSpec { ratio: self.ratio.sqrt(), half_span: 2 * self.half_span }
    }
}

/// Samples of a function on a `GridSpec`.
#[derive(Debug, Clone)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
    source: Option<RealFunction>,
}

impl GridFunction {
    pub fn sample(f: &RealFunction, spec: GridSpec) -> Result<Self> {
        let values: Vec<f64> = spec.nodes().iter().map(|&x| f.eval(x)).collect();
        if let Some(x) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite sample of {} at node {}", f.label(), spec.nodes()[x])));
        }
        Ok(GridFunction { spec, values, source: Some(f.clone()) })
    }

    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::Config(format!("expected {} values, got {}", spec.len(), values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite grid value".into()));
        }
        Ok(GridFunction { spec, values, source: None })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> Option<&RealFunction> {
        self.source.as_ref()
    }

    /// Value at node k (k = -m..m).
    pub fn at(&self, k: i64) -> f64 {
        self.values[(k + self.spec.half_span as i64) as usize]
    }

    /// Samples of f(1/x) on the same grid, by index reflection.
    pub fn reflected(&self) -> GridFunction {
        let mut values = self.values.clone();
        values.reverse();
        GridFunction { spec: self.spec, values, source: None }
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,value")?;
        for (x, v) in self.spec.nodes().iter().zip(&self.values) {
            writeln!(w, "{},{}", fmt17(*x), fmt17(*v))?;
        }
        Ok(())
    }
}

/// Decimal with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{:.16e}", v)
}

/// L₂(0,∞) norm: trapezoid in u = ln x.  With a known source the rule is
/// run on a subdivision of the grid step and continued past both grid ends
/// until the integrand is negligible, which keeps it spectrally accurate;
/// otherwise the grid samples are used and the ends are extended
/// geometrically.
pub fn l2_norm(f: &GridFunction) -> f64 {
    match &f.source {
        Some(src) => source_norm(src, f.spec),
        None => sample_norm(f),
    }
}

const FINE_STEP: f64 = 0.01;
const U_LIMIT: f64 = 60.0;

fn source_norm(src: &RealFunction, spec: GridSpec) -> f64 {
    let sub = (spec.log_step() / FINE_STEP).ceil().max(1.0);
    let h = spec.log_step() / sub;
    let w = |u: f64| {
        let x = u.exp();
        let v = src.eval(x);
        v * v * x
    };
    let mut sum = w(0.0);
    let mut peak = sum.abs();
    for dir in [1.0, -1.0] {
        let mut quiet = 0;
        let mut k = 1usize;
        loop {
            let u = dir * k as f64 * h;
            let v = w(u);
            if !v.is_finite() {
                break;
            }
            sum += v;
            peak = peak.max(v.abs());
            let past_grid = u.abs() > spec.log_step() * spec.half_span as f64;
            if past_grid && v.abs() <= 1e-18 * peak.max(f64::MIN_POSITIVE) {
                quiet += 1;
                if quiet > 8 {
                    break;
                }
            } else {
                quiet = 0;
            }
            if u.abs() > U_LIMIT {
                // remaining mass from the local geometric rate
                let prev = w(dir * (k - 1) as f64 * h);
                if v > 0.0 && prev > v {
                    let r = v / prev;
                    sum += v * r / (1.0 - r);
                }
                break;
            }
            k += 1;
        }
    }
    (sum * h).max(0.0).sqrt()
}

fn sample_norm(f: &GridFunction) -> f64 {
    let h = f.spec.log_step();
    let nodes = f.spec.nodes();
    let n = nodes.len();
    let w: Vec<f64> = nodes.iter().zip(&f.values).map(|(x, v)| v * v * x).collect();
    let mut sum: f64 = w.iter().sum();
    // w(u) = f² x behaves like e^{βu} near each end
    for (end, inner) in [(0, 1), (n - 1, n - 2)] {
        if n < 2 || w[end] <= 0.0 || w[inner] <= w[end] {
            continue;
        }
        let r = w[end] / w[inner];
        sum += w[end] * r / (1.0 - r);
    }
    (sum * h).max(0.0).sqrt()
}

// bump: support [1, 2] in t, i.e. ln t ∈ [0, ln 2]; a gaussian core in
// ln t with a smooth cutoff, so the Mellin spectrum is tiny past |τ| = 40
const BUMP_CORE: f64 = 6.0;
const BUMP_EDGE: f64 = 0.5;

fn bump_shape(t: f64) -> f64 {
    if !(t > 1.0 && t < 2.0) {
        return 0.0;
    }
    let a = 0.5 * std::f64::consts::LN_2;
    let v = (t.ln() - a) / a;
    let d = 1.0 - v * v;
    if d <= 0.0 {
        0.0
    } else {
        (-BUMP_CORE * v * v - BUMP_EDGE / d).exp()
    }
}

fn bump_normalization() -> f64 {
    static N: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *N.get_or_init(|| {
        let cfg = QuadratureConfig { abs_tol: 1e-15, rel_tol: 1e-13, ..Default::default() };
        let mass = integrate_finite(|t| bump_shape(t).powi(2), 1.0, 2.0, &cfg)
            .expect("bump mass integral")
            .value;
        1.0 / mass.sqrt()
    })
}

pub const CATALOG_NAMES: [&str; 5] = ["exp", "texp", "gauss", "bump", "recip_sym"];

/// Reference test functions with closed-form transforms.
pub fn catalog(name: &str) -> Result<RealFunction> {
    let c = SQRT_2_OVER_PI;
    let f = match name {
        "exp" => RealFunction::new("exp", DecayClass::Exponential(1.0), |t| (-t).exp())
            .with_mellin(|tau| ln_gamma(Complex64::new(0.5, tau)).exp())
            .with_references(References {
                fourier_cos: Some(Arc::new(move |x| c / (1.0 + x * x))),
                fourier_sin: Some(Arc::new(move |x| c * x / (1.0 + x * x))),
                stieltjes: Some(Arc::new(|x| exp_e1(x).unwrap_or(f64::NAN))),
            }),
        "texp" => RealFunction::new("texp", DecayClass::Exponential(1.0), |t| t * (-t).exp())
            .with_mellin(|tau| {
                let s = Complex64::new(0.5, tau);
                s * ln_gamma(s).exp()
            })
            .with_references(References {
                fourier_cos: Some(Arc::new(move |x| {
                    let d = 1.0 + x * x;
                    c * (1.0 - x * x) / (d * d)
                })),
                fourier_sin: Some(Arc::new(move |x| {
                    let d = 1.0 + x * x;
                    c * 2.0 * x / (d * d)
                })),
                stieltjes: Some(Arc::new(|x| 1.0 - x * exp_e1(x).unwrap_or(f64::NAN))),
            }),
        "gauss" => RealFunction::new("gauss", DecayClass::Gaussian(1.0), |t| (-t * t).exp())
            .with_mellin(|tau| 0.5 * ln_gamma(Complex64::new(0.25, 0.5 * tau)).exp())
            .with_references(References {
                fourier_cos: Some(Arc::new(move |x| c * 0.5 * PI.sqrt() * (-0.25 * x * x).exp())),
                ..Default::default()
            }),
        "bump" => {
            let n = bump_normalization();
            RealFunction::new("bump", DecayClass::Compact(2.0), move |t| n * bump_shape(t))
        }
        "recip_sym" => {
            // t^{-1/2} e^{-t-1/t} satisfies f(x) = f(1/x)/x
            let fourier = move |x: f64| {
                let p = Complex64::new(1.0, -x);
                (PI / p).sqrt() * (-2.0 * p.sqrt()).exp() * c
            };
            RealFunction::new("recip_sym", DecayClass::Exponential(1.0), |t| {
                if t <= 0.0 {
                    0.0
                } else {
                    (-t - 1.0 / t).exp() / t.sqrt()
                }
            })
            .with_references(References {
                fourier_cos: Some(Arc::new(move |x| fourier(x).re)),
                fourier_sin: Some(Arc::new(move |x| fourier(x).im)),
                stieltjes: None,
            })
        }
        "zero" => RealFunction::zero(),
        other => return Err(Error::NotFound(other.to_string())),
    };
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_oscillatory, integrate_semiinf_from, OscKind};

    #[test]
    fn grid_is_reciprocal_closed() {
        for spec in [GridSpec::default(), GridSpec::new(1.37, 11).unwrap()] {
            let m = spec.half_span as i64;
            for k in 0..=m {
                assert_eq!(spec.node(-k), 1.0 / spec.node(k));
            }
            let nodes = spec.nodes();
            assert_eq!(nodes.len(), 2 * spec.half_span + 1);
            assert_eq!(nodes[spec.half_span], 1.0);
        }
        let d = GridSpec::default().nodes();
        assert!((d[0] - 2f64.powi(-8)).abs() < 1e-15 && (d[128] - 256.0).abs() < 1e-11);
    }

    #[test]
    fn reflection_is_index_reversal() {
        let spec = GridSpec::new(2f64.powf(0.25), 8).unwrap();
        let f = catalog("exp").unwrap();
        let g = GridFunction::sample(&f, spec).unwrap();
        let r = g.reflected();
        for k in -8..=8i64 {
            assert_eq!(r.at(k), g.at(-k));
            assert!((r.at(k) - f.eval(1.0 / spec.node(k))).abs() < 1e-15);
        }
    }

    #[test]
    fn norms_of_catalog() {
        let spec = GridSpec::default();
        let zero = GridFunction::from_values(spec, vec![0.0; spec.len()]).unwrap();
        assert_eq!(l2_norm(&zero), 0.0);
        let e = GridFunction::sample(&catalog("exp").unwrap(), spec).unwrap();
        assert!((l2_norm(&e) - 0.5f64.sqrt()).abs() < 1e-9);
        let b = GridFunction::sample(&catalog("bump").unwrap(), spec).unwrap();
        assert!((l2_norm(&b) - 1.0).abs() < 1e-7, "{}", l2_norm(&b));
        let g = GridFunction::sample(&catalog("gauss").unwrap(), spec).unwrap();
        assert!((l2_norm(&g) - (PI / 8.0).sqrt().sqrt()).abs() < 1e-9);
    }

    #[test]
    fn norms_are_refinement_stable() {
        let spec = GridSpec::default();
        for name in CATALOG_NAMES {
            let f = catalog(name).unwrap();
            let a = l2_norm(&GridFunction::sample(&f, spec).unwrap());
            let b = l2_norm(&GridFunction::sample(&f, spec.refined()).unwrap());
            assert!((a - b).abs() < 1e-4 * b, "{name}: {a} vs {b}");
        }
    }

    #[test]
    fn sourceless_norm_uses_extrapolated_tails() {
        let spec = GridSpec::default();
        let f = catalog("exp").unwrap();
        let vals = spec.nodes().iter().map(|&x| f.eval(x)).collect();
        let g = GridFunction::from_values(spec, vals).unwrap();
        assert!((l2_norm(&g) - 0.5f64.sqrt()).abs() < 1e-4, "{}", l2_norm(&g));
    }

    #[test]
    fn catalog_basics() {
        let e = catalog("exp").unwrap();
        let m = e.known_mellin().unwrap()(0.0);
        assert!((m.re - PI.sqrt()).abs() < 1e-14 && m.im.abs() < 1e-15);
        let fc = e.references().fourier_cos.as_ref().unwrap();
        assert!((fc(1.0) - 0.398_942_280_401_432_7).abs() < 1e-15);
        assert_eq!(catalog("bump").unwrap().eval(0.5), 0.0);
        assert!(matches!(catalog("nope"), Err(Error::NotFound(_))));
        let r = catalog("recip_sym").unwrap();
        for &x in &[0.3, 1.7, 5.0] {
            assert!((r.eval(x) - r.eval(1.0 / x) / x).abs() < 1e-15);
        }
    }

    #[test]
    fn catalog_fourier_references_match_quadrature() {
        let cfg = QuadratureConfig::default();
        let nodes = GridSpec::new(2f64.powf(0.5), 10).unwrap().nodes();
        for name in ["exp", "texp", "gauss", "recip_sym"] {
            let f = catalog(name).unwrap();
            let refs = f.references().clone();
            for &x in nodes.iter().take(20) {
                let e = f.evaluator().clone();
                if let Some(fc) = &refs.fourier_cos {
                    let v = integrate_oscillatory(|t| e(t), x, OscKind::Cos, f.decay_hint(), &cfg).unwrap();
                    assert!((SQRT_2_OVER_PI * v.value - fc(x)).abs() < 1e-8, "{name} Fc at {x}");
                }
                if let Some(fs) = &refs.fourier_sin {
                    let v = integrate_oscillatory(|t| e(t), x, OscKind::Sin, f.decay_hint(), &cfg).unwrap();
                    assert!((SQRT_2_OVER_PI * v.value - fs(x)).abs() < 1e-8, "{name} Fs at {x}");
                }
            }
        }
    }

    #[test]
    fn mellin_references_match_quadrature() {
        let cfg = QuadratureConfig { abs_tol: 1e-12, rel_tol: 1e-11, ..Default::default() };
        for name in ["exp", "texp", "gauss"] {
            let f = catalog(name).unwrap();
            let m = f.known_mellin().unwrap().clone();
            for &tau in &[0.0, 0.7, -2.0] {
                let e = f.evaluator().clone();
                let re = integrate_semiinf_from(
                    |t| e(t) * (tau * t.ln()).cos() / t.sqrt(),
                    0.0,
                    f.decay_hint(),
                    &cfg,
                )
                .unwrap()
                .value;
                let e = f.evaluator().clone();
                let im = integrate_semiinf_from(
                    |t| e(t) * (tau * t.ln()).sin() / t.sqrt(),
                    0.0,
                    f.decay_hint(),
                    &cfg,
                )
                .unwrap()
                .value;
                let z = m(tau);
                assert!((z.re - re).abs() < 1e-8 && (z.im - im).abs() < 1e-8, "{name} at {tau}: {z} vs {re}+{im}i");
            }
        }
    }
}

//! Operator registry for the half-line Fourier, half-Hartley and composite
//! transforms.  Each operator can be applied forward or inverse by up to
//! three routes: nested quadrature of its constituents (direct), one
//! quadrature against the closed-form kernel (kernel), or multiplication of
//! the Mellin spectrum by the operator symbol (spectral).

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::funcspace::{fmt17, l2_norm, GridFunction, GridSpec, RealFunction, SQRT_2_OVER_PI};
use crate::mellin::{
    apply_multiplier, divide_multiplier, inverse_unchecked, spectrum_of, MellinSpectrum, MultiplierId, TauGrid,
};
use crate::memo::memoize;
use crate::quadrature::{
    integrate_graded, integrate_oscillatory, integrate_pv, integrate_semiinf_from, DecayClass, OscKind,
    QuadratureConfig,
};
use crate::specfun::{cosine_aux, fresnel_deviation, fresnel_pair, lommel_kernel, psi_kernel_remainders, psi_kernels};

const C: f64 = SQRT_2_OVER_PI;
/// Decay assumed for transform outputs: a 1/x tail is what a nonzero
/// sine-type component leaves behind.
pub(crate) const OUTPUT_DECAY: DecayClass = DecayClass::Algebraic(1.0);

/// The Lommel kernel behind a process-wide interpolation cache; each direct
/// evaluation is itself a quadrature.
fn lommel_cached(y: f64) -> f64 {
    static CACHE: OnceLock<RealFunction> = OnceLock::new();
    let f = CACHE.get_or_init(|| {
        let inner = RealFunction::new("lommel", DecayClass::Algebraic(1.0), |y| lommel_kernel(y).unwrap_or(f64::NAN));
        memoize(&inner, 1e-15, 1e-10)
    });
    f.eval(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorId {
    Fc,
    Fs,
    Hh,
    Fcfs,
    Hh2,
    Hhfc,
    Hhfs,
    Hhfcfs,
    Hh2fc,
    Hh2fs,
    Hh2fcfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Direct,
    Kernel,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Building blocks of the direct routes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Fc,
    Fs,
    Hh,
    /// Fresnel-kernel inverse of the half-Hartley transform
    HhInv,
    /// log-kernel inverse of the iterated half-Hartley transform
    Hh2Inv,
    /// FS∘FC through its principal-value kernel
    FsFc,
}

impl OperatorId {
    pub const ALL: [OperatorId; 11] = [
        OperatorId::Fc,
        OperatorId::Fs,
        OperatorId::Hh,
        OperatorId::Fcfs,
        OperatorId::Hh2,
        OperatorId::Hhfc,
        OperatorId::Hhfs,
        OperatorId::Hhfcfs,
        OperatorId::Hh2fc,
        OperatorId::Hh2fs,
        OperatorId::Hh2fcfs,
    ];

    pub const COMPOSITE: [OperatorId; 7] = [
        OperatorId::Hh2,
        OperatorId::Hhfc,
        OperatorId::Hhfs,
        OperatorId::Hhfcfs,
        OperatorId::Hh2fc,
        OperatorId::Hh2fs,
        OperatorId::Hh2fcfs,
    ];

    pub fn name(self) -> &'static str {
        use OperatorId::*;
        match self {
            Fc => "fc",
            Fs => "fs",
            Hh => "hh",
            Fcfs => "fcfs",
            Hh2 => "hh2",
            Hhfc => "hhfc",
            Hhfs => "hhfs",
            Hhfcfs => "hhfcfs",
            Hh2fc => "hh2fc",
            Hh2fs => "hh2fs",
            Hh2fcfs => "hh2fcfs",
        }
    }

    pub fn multiplier(self) -> MultiplierId {
        use OperatorId::*;
        match self {
            Fc => MultiplierId::Fc,
            Fs => MultiplierId::Fs,
            Hh => MultiplierId::Hh,
            Fcfs => MultiplierId::Fcfs,
            Hh2 => MultiplierId::Hh2,
            Hhfc => MultiplierId::Hhfc,
            Hhfs => MultiplierId::Hhfs,
            Hhfcfs => MultiplierId::Hhfcfs,
            Hh2fc => MultiplierId::Hh2fc,
            Hh2fs => MultiplierId::Hh2fs,
            Hh2fcfs => MultiplierId::Hh2fcfs,
        }
    }

    /// Constituents applied right to left.
    fn forward_chain(self) -> &'static [Step] {
        use OperatorId::*;
        match self {
            Fc => &[Step::Fc],
            Fs => &[Step::Fs],
            Hh => &[Step::Hh],
            Fcfs => &[Step::Fc, Step::Fs],
            Hh2 => &[Step::Hh, Step::Hh],
            Hhfc => &[Step::Hh, Step::Fc],
            Hhfs => &[Step::Hh, Step::Fs],
            Hhfcfs => &[Step::Hh, Step::Fc, Step::Fs],
            Hh2fc => &[Step::Hh, Step::Hh, Step::Fc],
            Hh2fs => &[Step::Hh, Step::Hh, Step::Fs],
            Hh2fcfs => &[Step::Hh, Step::Hh, Step::Fc, Step::Fs],
        }
    }

    fn inverse_chain(self) -> Option<&'static [Step]> {
        use OperatorId::*;
        match self {
            Fc => Some(&[Step::Fc]),
            Fs => Some(&[Step::Fs]),
            Hh => None,
            Fcfs => Some(&[Step::Fs, Step::Fc]),
            Hh2 => Some(&[Step::HhInv, Step::HhInv]),
            Hhfc => Some(&[Step::Fc, Step::HhInv]),
            Hhfs => Some(&[Step::Fs, Step::HhInv]),
            Hhfcfs => Some(&[Step::FsFc, Step::HhInv]),
            Hh2fc => Some(&[Step::Fc, Step::Hh2Inv]),
            Hh2fs => Some(&[Step::Fs, Step::Hh2Inv]),
            Hh2fcfs => Some(&[Step::FsFc, Step::Hh2Inv]),
        }
    }

    pub fn routes(self, dir: Direction) -> Vec<Route> {
        let mut out = Vec::with_capacity(3);
        let direct = match dir {
            Direction::Forward => true,
            Direction::Inverse => self.inverse_chain().is_some(),
        };
        if direct {
            out.push(Route::Direct);
        }
        out.push(Route::Kernel);
        out.push(Route::Spectral);
        out
    }

    /// Bounds on ‖Tf‖/‖f‖ stated for the operator, if any.
    pub fn norm_bounds(self) -> Option<(f64, f64)> {
        use OperatorId::*;
        match self {
            Fc | Fs | Fcfs => Some((1.0, 1.0)),
            Hh2 | Hh2fc | Hh2fs | Hh2fcfs => Some((1.0, 8.0)),
            Hhfc | Hhfs | Hhfcfs => Some((1.0, 2.0 * std::f64::consts::SQRT_2)),
            Hh => None,
        }
    }

    /// Short description of how the inverse is realized by each route.
    pub fn inverse_descriptor(self) -> &'static str {
        use OperatorId::*;
        match self {
            Fc => "self-inverse",
            Fs => "self-inverse",
            Hh => "Fresnel kernel",
            Fcfs => "Hilbert kernel x/(x^2-t^2); composition Fs after Fc",
            Hh2 => "log kernel; composition of two Fresnel inverses",
            Hhfc => "Hilbert kernel; composition Fc after the Fresnel inverse",
            Hhfs => "Hilbert kernel; composition Fs after the Fresnel inverse",
            Hhfcfs => "Fresnel-type kernel; composition FS∘FC (Hilbert kernel) after the Fresnel inverse",
            Hh2fc => "psi-series kernel; composition Fc after the log-kernel inverse",
            Hh2fs => "psi-series kernel; composition Fs after the log-kernel inverse",
            Hh2fcfs => "log and Hilbert kernels; composition FS∘FC (Hilbert kernel) after the log-kernel inverse",
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let l = s.to_ascii_lowercase();
        OperatorId::ALL
            .into_iter()
            .find(|op| op.name() == l)
            .ok_or_else(|| Error::NotFound(format!("operator {s}")))
    }
}

impl Route {
    pub const ALL: [Route; 3] = [Route::Direct, Route::Kernel, Route::Spectral];

    pub fn name(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Kernel => "kernel",
            Route::Spectral => "spectral",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let l = s.to_ascii_lowercase();
        Route::ALL
            .into_iter()
            .find(|r| r.name() == l)
            .ok_or_else(|| Error::NotFound(format!("route {s}")))
    }
}

/// ε/expm1(2ε), the common factor of the log-diagonal kernels; 1/2 at ε = 0.
pub(crate) fn log_ratio(eps: f64) -> f64 {
    if eps.abs() < 1e-3 {
        let e2 = eps * eps;
        0.5 * (1.0 - eps + e2 / 3.0 - e2 * e2 / 45.0)
    } else {
        eps / (2.0 * eps).exp_m1()
    }
}

/// √(xt)(ln x − ln t)/(x² − t²), with the removable diagonal 1/(2x).
pub fn log_kernel(x: f64, t: f64) -> f64 {
    let eps = (t / x).ln();
    (t / x).sqrt() / x * log_ratio(eps)
}

/// ln(x/t)/(x² − t²), with the removable diagonal 1/(2x²).
pub fn log_difference_kernel(x: f64, t: f64) -> f64 {
    log_ratio((t / x).ln()) / (x * x)
}

/// Integral kernel k(x, t) of the kernel route, identity parts excluded:
/// the route computes a·f(x) + ∫ k(x,t) f(t) dt.  Principal-value kernels
/// are rejected on the diagonal.
pub fn kernel_eval(op: OperatorId, dir: Direction, x: f64, t: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("kernel arguments must be positive, got x={x}, t={t}")));
    }
    let y = x * t;
    let pv = |v: f64| -> Result<f64> {
        if t == x {
            Err(Error::Domain(format!("{op} kernel is principal-value singular at t = x")))
        } else {
            Ok(v)
        }
    };
    use Direction::*;
    use OperatorId::*;
    let v = match (op, dir) {
        (Fc, _) => C * y.cos(),
        (Fs, _) => C * y.sin(),
        (Hh, Forward) => C * (y.cos() + y.sin()),
        (Hh, Inverse) => {
            let (s, c) = fresnel_pair(y)?;
            C * (y.sin() * s + y.cos() * c)
        }
        (Fcfs, Forward) => pv(2.0 / PI * t / (t * t - x * x))?,
        (Fcfs, Inverse) => pv(2.0 / PI * x / (x * x - t * t))?,
        (Hh2, Forward) => 2.0 / PI / (x + t),
        (Hh2, Inverse) => -log_kernel(x, t) / (PI * PI),
        (Hhfc, Forward) => pv(2.0 / PI * x / (x * x - t * t))?,
        (Hhfc, Inverse) => pv((x * t).sqrt() / (PI * (t * t - x * x)))?,
        (Hhfs, Forward) => pv(2.0 / PI * t / (t * t - x * x))?,
        (Hhfs, Inverse) => pv((x * t).sqrt() / (PI * (x * x - t * t)))?,
        (Hhfcfs, Forward) => C * (y.sin() - y.cos()) + 2.0 * C / PI * lommel_kernel(y)?,
        (Hhfcfs, Inverse) => C * (0.5 * (y.sin() - y.cos()) - fresnel_deviation(y)),
        (Hh2fc, Forward) => 2.0 * C * y.cos() + 2.0 * C / PI * cosine_aux(y),
        (Hh2fs, Forward) => 2.0 * C * y.sin() + 2.0 * C / PI * lommel_kernel(y)?,
        (Hh2fc, Inverse) => psi_kernels(y).0,
        (Hh2fs, Inverse) => psi_kernels(y).1,
        (Hh2fcfs, Forward) => {
            pv(4.0 / (PI * PI) * t * log_difference_kernel(x, t) + 4.0 / PI * t / (t * t - x * x))?
        }
        (Hh2fcfs, Inverse) => pv(log_kernel(x, t) / (PI * PI) + (x * t).sqrt() / (PI * (x * x - t * t)))?,
    };
    Ok(v)
}

/// Numerical settings shared by all routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformConfig {
    pub quadrature: QuadratureConfig,
    pub tau: TauGrid,
    /// Accuracy demanded of memoized inner transforms (absolute, relative).
    pub memo_tol: (f64, f64),
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig { quadrature: QuadratureConfig::default(), tau: TauGrid::default(), memo_tol: (1e-11, 1e-9) }
    }
}

pub(crate) fn finite(v: f64, what: &str, x: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("{what} is not finite at x = {x}")))
    }
}

/// Wraps a fallible pointwise evaluation as a `RealFunction`; failures
/// surface as NaN and are reported by whoever consumes the value.
fn lift<F>(label: String, hint: DecayClass, f: F) -> RealFunction
where
    F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
{
    RealFunction::new(label, hint, move |x| f(x).unwrap_or(f64::NAN))
}

impl TransformConfig {
    fn inner(&self) -> TransformConfig {
        TransformConfig { quadrature: self.quadrature.tightened(0.01), ..*self }
    }

    pub(crate) fn memo(&self, f: &RealFunction) -> RealFunction {
        memoize(f, self.memo_tol.0, self.memo_tol.1)
    }

    fn osc(&self, f: &RealFunction, x: f64, kind: OscKind) -> Result<f64> {
        if f.is_zero() {
            return Ok(0.0);
        }
        let e = f.evaluator().clone();
        let r = integrate_oscillatory(move |t| e(t), x, kind, f.decay_hint(), &self.quadrature)?;
        finite(C * r.value, "oscillatory integral", x)
    }

    fn fc(&self, f: &RealFunction, x: f64) -> Result<f64> {
        self.osc(f, x, OscKind::Cos)
    }

    fn fs(&self, f: &RealFunction, x: f64) -> Result<f64> {
        self.osc(f, x, OscKind::Sin)
    }

    /// ∫₀^∞ k(t) f(t) dt for a non-oscillatory kernel, split at `split`.
    pub(crate) fn smooth<K>(&self, f: &RealFunction, k: K, split: f64, kernel_decay: DecayClass) -> Result<f64>
    where
        K: Fn(f64) -> f64,
    {
        if f.is_zero() {
            return Ok(0.0);
        }
        let e = f.evaluator().clone();
        let g = |t: f64| {
            let v = e(t);
            if v == 0.0 {
                0.0
            } else {
                k(t) * v
            }
        };
        let hint = f.decay_hint().product(kernel_decay);
        let support = match f.decay_hint() {
            DecayClass::Compact(b) => b,
            _ => f64::INFINITY,
        };
        let cut = split.min(support);
        let left = integrate_graded(g, 0.0, cut, f.decay_hint().length_scale(), &self.quadrature)?.value;
        let right = if support > cut { integrate_semiinf_from(g, cut, hint, &self.quadrature)?.value } else { 0.0 };
        Ok(left + right)
    }

    /// PV ∫₀^∞ g(t)/(t − x) dt.
    pub(crate) fn pv<G: Fn(f64) -> f64>(&self, f: &RealFunction, g: G, x: f64, hint: DecayClass) -> Result<f64> {
        if f.is_zero() {
            return Ok(0.0);
        }
        Ok(integrate_pv(g, x, hint, &self.quadrature)?.value)
    }

    fn hh_inverse(&self, f: &RealFunction, x: f64) -> Result<f64> {
        let half = 0.5 * (self.fc(f, x)? + self.fs(f, x)?);
        let dev = self.smooth(f, |t| fresnel_deviation(x * t), 1.0 / x, DecayClass::Algebraic(1.5))?;
        finite(half + C * dev, "Fresnel inverse", x)
    }

    fn hh2_inverse(&self, f: &RealFunction, x: f64) -> Result<f64> {
        let k = self.smooth(f, |t| log_kernel(x, t), x, DecayClass::Algebraic(1.4))?;
        finite(0.5 * f.eval(x) - k / (PI * PI), "log-kernel inverse", x)
    }

    fn step(&self, step: Step, f: &RealFunction, x: f64) -> Result<f64> {
        match step {
            Step::Fc => self.fc(f, x),
            Step::Fs => self.fs(f, x),
            Step::Hh => Ok(self.fc(f, x)? + self.fs(f, x)?),
            Step::HhInv => self.hh_inverse(f, x),
            Step::Hh2Inv => self.hh2_inverse(f, x),
            Step::FsFc => {
                let e = f.evaluator().clone();
                self.pv(f, |t| -x * e(t) / (t + x), x, f.decay_hint()).map(|v| 2.0 / PI * v)
            }
        }
    }

    /// Applies `chain` right to left; inner stages are memoized functions.
    fn chain_fn(&self, chain: &[Step], f: &RealFunction, label: String) -> RealFunction {
        let mut cur = f.clone();
        let n = chain.len();
        for (i, &s) in chain.iter().rev().enumerate() {
            let last = i + 1 == n;
            let cfg = if last { *self } else { self.inner() };
            let g = cur.clone();
            let stage = lift(format!("{s:?}({})", g.label()), OUTPUT_DECAY, move |x| cfg.step(s, &g, x));
            cur = if last { stage } else { self.memo(&stage) };
        }
        RealFunction::from_evaluator(label, OUTPUT_DECAY, cur.evaluator().clone())
    }

    pub(crate) fn forward_kernel_at(&self, op: OperatorId, f: &RealFunction, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("transforms are evaluated at x > 0, got {x}")));
        }
        if f.is_zero() {
            return Ok(0.0);
        }
        let e = f.evaluator().clone();
        let h = f.decay_hint();
        use OperatorId::*;
        let v = match op {
            Fc => self.fc(f, x)?,
            Fs => self.fs(f, x)?,
            Hh => self.fc(f, x)? + self.fs(f, x)?,
            Fcfs => 2.0 / PI * self.pv(f, |t| t * e(t) / (t + x), x, h)?,
            Hh2 => {
                2.0 * f.eval(x) + 2.0 / PI * self.smooth(f, |t| 1.0 / (x + t), x, DecayClass::Algebraic(1.0))?
            }
            Hhfc => f.eval(x) + 2.0 / PI * self.pv(f, |t| -x * e(t) / (t + x), x, h)?,
            Hhfs => f.eval(x) + 2.0 / PI * self.pv(f, |t| t * e(t) / (t + x), x, h)?,
            Hhfcfs => {
                let l = self.smooth(f, |t| lommel_cached(x * t), 1.0 / x, DecayClass::Algebraic(1.0))?;
                self.fs(f, x)? - self.fc(f, x)? + 2.0 * C / PI * l
            }
            Hh2fc => {
                let g = self.smooth(f, |t| cosine_aux(x * t), 1.0 / x, DecayClass::Algebraic(2.0))?;
                2.0 * self.fc(f, x)? + 2.0 * C / PI * g
            }
            Hh2fs => {
                let l = self.smooth(f, |t| lommel_cached(x * t), 1.0 / x, DecayClass::Algebraic(1.0))?;
                2.0 * self.fs(f, x)? + 2.0 * C / PI * l
            }
            Hh2fcfs => {
                let lg = self.smooth(f, |t| t * log_difference_kernel(x, t), x, DecayClass::Algebraic(0.9))?;
                4.0 / (PI * PI) * lg + 4.0 / PI * self.pv(f, |t| t * e(t) / (t + x), x, h)?
            }
        };
        finite(v, op.name(), x)
    }

    pub(crate) fn inverse_kernel_at(&self, op: OperatorId, g: &RealFunction, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("transforms are evaluated at x > 0, got {x}")));
        }
        if g.is_zero() {
            return Ok(0.0);
        }
        let e = g.evaluator().clone();
        let sqrt_hint = g.decay_hint().times_power(0.5).divided_by_t();
        use OperatorId::*;
        let v = match op {
            Fc => self.fc(g, x)?,
            Fs => self.fs(g, x)?,
            Hh => self.hh_inverse(g, x)?,
            Fcfs => 2.0 / PI * self.pv(g, |t| -x * e(t) / (t + x), x, g.decay_hint())?,
            Hh2 => self.hh2_inverse(g, x)?,
            Hhfc => 0.5 * g.eval(x) + self.pv(g, |t| (x * t).sqrt() * e(t) / (t + x), x, sqrt_hint)? / PI,
            Hhfs => 0.5 * g.eval(x) - self.pv(g, |t| (x * t).sqrt() * e(t) / (t + x), x, sqrt_hint)? / PI,
            Hhfcfs => {
                let dev = self.smooth(g, |t| fresnel_deviation(x * t), 1.0 / x, DecayClass::Algebraic(1.5))?;
                0.5 * (self.fs(g, x)? - self.fc(g, x)?) - C * dev
            }
            Hh2fc => {
                let r = self.smooth(g, |t| psi_kernel_remainders(x * t).0, 1.0 / x, DecayClass::Algebraic(1.4))?;
                0.5 * self.fc(g, x)? + r
            }
            Hh2fs => {
                let r = self.smooth(g, |t| psi_kernel_remainders(x * t).1, 1.0 / x, DecayClass::Algebraic(1.4))?;
                0.5 * self.fs(g, x)? + r
            }
            Hh2fcfs => {
                let k = self.smooth(g, |t| log_kernel(x, t), x, DecayClass::Algebraic(1.4))?;
                k / (PI * PI) - self.pv(g, |t| (x * t).sqrt() * e(t) / (t + x), x, sqrt_hint)? / PI
            }
        };
        finite(v, op.name(), x)
    }

    fn spectral_fn(&self, label: String, spec: MellinSpectrum) -> Result<RealFunction> {
        if spec.asymmetry() > 1e-8 {
            return Err(Error::NonSymmetric(spec.asymmetry()));
        }
        let spec = Arc::new(spec);
        let s2 = spec.clone();
        Ok(RealFunction::new(label, OUTPUT_DECAY, move |x| inverse_unchecked(&s2, x))
            .with_mellin(move |tau| lookup(&spec, tau)))
    }

    /// The transform Tf as a function of x.
    pub fn forward_fn(&self, op: OperatorId, f: &RealFunction, route: Route) -> Result<RealFunction> {
        let label = format!("{}({})", op.name(), f.label());
        if f.is_zero() {
            return Ok(RealFunction::zero());
        }
        match route {
            Route::Direct => Ok(self.chain_fn(op.forward_chain(), f, label)),
            Route::Kernel => {
                let (cfg, g) = (*self, f.clone());
                Ok(lift(label, OUTPUT_DECAY, move |x| cfg.forward_kernel_at(op, &g, x)))
            }
            Route::Spectral => {
                let spec = spectrum_of(f, self.tau)?;
                self.spectral_fn(label, apply_multiplier(&spec, op.multiplier(), None)?)
            }
        }
    }

    /// The inverse transform T⁻¹g as a function of x.
    pub fn inverse_fn(&self, op: OperatorId, g: &RealFunction, route: Route) -> Result<RealFunction> {
        let label = format!("{}^-1({})", op.name(), g.label());
        if g.is_zero() {
            return Ok(RealFunction::zero());
        }
        match route {
            Route::Direct => match op.inverse_chain() {
                Some(chain) => Ok(self.chain_fn(chain, g, label)),
                None => Err(Error::Capability { op: op.name().into(), route: "direct inverse".into() }),
            },
            Route::Kernel => {
                let (cfg, h) = (*self, g.clone());
                Ok(lift(label, OUTPUT_DECAY, move |x| cfg.inverse_kernel_at(op, &h, x)))
            }
            Route::Spectral => {
                let spec = spectrum_of(g, self.tau)?;
                self.spectral_fn(label, divide_multiplier(&spec, op.multiplier(), None)?)
            }
        }
    }

    pub fn forward(&self, op: OperatorId, f: &RealFunction, route: Route, x: f64) -> Result<f64> {
        check_x(x)?;
        match route {
            Route::Kernel => self.forward_kernel_at(op, f, x),
            _ => finite(self.forward_fn(op, f, route)?.eval(x), op.name(), x),
        }
    }

    pub fn inverse(&self, op: OperatorId, g: &RealFunction, route: Route, x: f64) -> Result<f64> {
        check_x(x)?;
        match route {
            Route::Kernel => self.inverse_kernel_at(op, g, x),
            _ => finite(self.inverse_fn(op, g, route)?.eval(x), op.name(), x),
        }
    }

    /// ‖Tf‖/‖f‖ on the default grid with the spectral route for Tf; NaN for f ≡ 0.
    pub fn norm_ratio(&self, op: OperatorId, f: &RealFunction) -> Result<f64> {
        let spec = GridSpec::default();
        let den = l2_norm(&GridFunction::sample(f, spec)?);
        if den == 0.0 {
            return Ok(f64::NAN);
        }
        let tf = self.forward_fn(op, f, Route::Spectral)?;
        Ok(l2_norm(&GridFunction::sample(&tf, spec)?) / den)
    }

    /// Values of every available route at `xs`, with the largest pairwise gap.
    pub fn route_report(&self, op: OperatorId, dir: Direction, f: &RealFunction, xs: &[f64]) -> Result<RouteReport> {
        let mut values: [Option<Vec<f64>>; 3] = [None, None, None];
        for route in op.routes(dir) {
            let func = match dir {
                Direction::Forward => self.forward_fn(op, f, route)?,
                Direction::Inverse => self.inverse_fn(op, f, route)?,
            };
            let mut col = Vec::with_capacity(xs.len());
            for &x in xs {
                col.push(finite(func.eval(x), op.name(), x)?);
            }
            let slot = Route::ALL.iter().position(|r| *r == route).expect("route index");
            values[slot] = Some(col);
        }
        Ok(RouteReport::new(op, dir, xs.to_vec(), values))
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("transforms are evaluated at x > 0, got {x}")))
    }
}

/// Spectrum value at the nearest grid τ (zero outside the grid).
pub(crate) fn lookup(spec: &MellinSpectrum, tau: f64) -> num_complex::Complex64 {
    let g = spec.grid();
    let n = g.half_len() as i64;
    let k = (tau / g.step).round() as i64;
    if k.abs() > n {
        num_complex::Complex64::new(0.0, 0.0)
    } else {
        spec.values()[(k + n) as usize]
    }
}

/// Per-route values on an x-grid.
#[derive(Debug, Clone)]
pub struct RouteReport {
    pub operator: OperatorId,
    pub direction: Direction,
    pub xs: Vec<f64>,
    /// Indexed like `Route::ALL`; `None` for routes not evaluated.
    pub values: [Option<Vec<f64>>; 3],
    pub max_dev: f64,
}

impl RouteReport {
    fn new(operator: OperatorId, direction: Direction, xs: Vec<f64>, values: [Option<Vec<f64>>; 3]) -> Self {
        let mut r = RouteReport { operator, direction, xs, values, max_dev: 0.0 };
        r.max_dev = (0..r.xs.len()).map(|i| r.deviation_at(i)).fold(0.0, f64::max);
        r
    }

    /// Largest pairwise deviation among evaluated routes at the i-th abscissa.
    pub fn deviation_at(&self, i: usize) -> f64 {
        let vals: Vec<f64> = self.values.iter().flatten().map(|c| c[i]).collect();
        let mut d = 0.0f64;
        for a in 0..vals.len() {
            for b in a + 1..vals.len() {
                d = d.max((vals[a] - vals[b]).abs());
            }
        }
        d
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,route_direct,route_kernel,route_spectral,max_dev")?;
        for (i, x) in self.xs.iter().enumerate() {
            let cell = |k: usize| self.values[k].as_ref().map(|c| fmt17(c[i])).unwrap_or_default();
            writeln!(w, "{},{},{},{},{}", fmt17(*x), cell(0), cell(1), cell(2), fmt17(self.deviation_at(i)))?;
        }
        Ok(())
    }
}

/// Forward transform with the default configuration.
pub fn forward(op: OperatorId, f: &RealFunction, route: Route, x: f64) -> Result<f64> {
    TransformConfig::default().forward(op, f, route, x)
}

/// Inverse transform with the default configuration.
pub fn inverse(op: OperatorId, g: &RealFunction, route: Route, x: f64) -> Result<f64> {
    TransformConfig::default().inverse(op, g, route, x)
}

/// `TransformConfig::norm_ratio` with the default configuration.
pub fn norm_ratio(op: OperatorId, f: &RealFunction) -> Result<f64> {
    TransformConfig::default().norm_ratio(op, f)
}

//! Mellin analysis on the critical line Re s = 1/2: forward and inverse
//! transforms, the Parseval norm, and the multiplier symbols of every
//! operator and equation denominator.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcspace::{fmt17, RealFunction, SQRT_2_OVER_PI};
use crate::quadrature::DecayClass;
use crate::specfun::ln_gamma;

/// Uniform symmetric τ-grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauGrid {
    pub step: f64,
    pub max: f64,
}

impl Default for TauGrid {
    fn default() -> Self {
        TauGrid { step: 0.02, max: 40.0 }
    }
}

impl TauGrid {
    pub fn new(step: f64, max: f64) -> Result<Self> {
        if !(step > 0.0) || !(max >= step) || !(max / step < 1e7) {
            return Err(Error::Config(format!("invalid tau grid: step {step}, max {max}")));
        }
        Ok(TauGrid { step, max })
    }

    /// Number of points on each side of τ = 0.
    pub fn half_len(&self) -> usize {
        (self.max / self.step).round() as usize
    }

    pub fn taus(&self) -> Vec<f64> {
        let n = self.half_len() as i64;
        (-n..=n).map(|k| k as f64 * self.step).collect()
    }
}

/// Samples of f*(1/2 + iτ) on a `TauGrid`.
#[derive(Debug, Clone)]
pub struct MellinSpectrum {
    grid: TauGrid,
    values: Vec<Complex64>,
    asymmetry: f64,
}

impl MellinSpectrum {
    pub fn new(grid: TauGrid, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.half_len();
        if values.len() != 2 * n + 1 {
            return Err(Error::Config(format!("expected {} spectrum values, got {}", 2 * n + 1, values.len())));
        }
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let mut asym = 0.0f64;
        for k in 0..=n {
            let d = (values[n - k] - values[n + k].conj()).norm();
            asym = asym.max(d);
        }
        let asymmetry = if peak > 0.0 { asym / peak } else { 0.0 };
        Ok(MellinSpectrum { grid, values, asymmetry })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: TauGrid, f: F) -> Result<Self> {
        let values = grid.taus().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: TauGrid) -> Self {
        let n = grid.half_len();
        MellinSpectrum { grid, values: vec![Complex64::new(0.0, 0.0); 2 * n + 1], asymmetry: 0.0 }
    }

    pub fn grid(&self) -> TauGrid {
        self.grid
    }

    pub fn taus(&self) -> Vec<f64> {
        self.grid.taus()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// max |v(-τ) - conj v(τ)| relative to the peak magnitude.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    /// Pointwise product with another function of τ.
    pub fn map<F: Fn(f64, Complex64) -> Complex64>(&self, f: F) -> Result<Self> {
        let values = self.taus().into_iter().zip(&self.values).map(|(t, v)| f(t, *v)).collect();
        Self::new(self.grid, values)
    }

    /// τ ↦ v(-τ), i.e. the transform of x^{-1} f(1/x).
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        MellinSpectrum { grid: self.grid, values, asymmetry: self.asymmetry }
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "tau,re,im")?;
        for (t, v) in self.taus().iter().zip(&self.values) {
            writeln!(w, "{},{},{}", fmt17(*t), fmt17(v.re), fmt17(v.im))?;
        }
        Ok(())
    }
}

const U_SPAN: f64 = 40.0;
const U_STEP: f64 = 0.02;
const U_SPAN_ALGEBRAIC: f64 = 12.0;
/// Slowest e^{-rate·|u|} end behaviour accepted for tail extrapolation.
const MIN_TAIL_RATE: f64 = 0.2;

/// f*(1/2 + iτ) = ∫ f(e^u) e^{u/2} e^{iτu} du by the trapezoid rule in u,
/// with power-law end corrections.  Only τ ≥ 0 is computed; negative τ is
/// filled by conjugation.
pub fn mellin_forward(f: &RealFunction, grid: TauGrid) -> Result<MellinSpectrum> {
    if f.is_zero() {
        return Ok(MellinSpectrum::zero(grid));
    }
    let u_hi = match f.decay_hint() {
        DecayClass::Compact(b) => b.ln().min(U_SPAN),
        // slowly decaying inputs are usually quadrature outputs with an
        // absolute error floor, which e^{u/2} would amplify
        DecayClass::Algebraic(_) => U_SPAN_ALGEBRAIC,
        _ => U_SPAN,
    };
    let u_lo = -U_SPAN;
    let m = ((u_hi - u_lo) / U_STEP).ceil() as usize;
    let du = (u_hi - u_lo) / m as f64;
    let us: Vec<f64> = (0..=m).map(|j| u_lo + j as f64 * du).collect();
    let g: Vec<f64> = us.iter().map(|&u| f.eval(u.exp()) * (0.5 * u).exp()).collect();
    if let Some(bad) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite sample of {} at x = {:e}", f.label(), us[bad].exp())));
    }
    let peak = g.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if peak == 0.0 {
        return Ok(MellinSpectrum::zero(grid));
    }
    // exponential fits at both ends: g ≈ g0 e^{α(u-u0)} below, g ≈ gm e^{-β(u-um)} above
    let fit = |inner: f64, outer: f64| -> Option<f64> {
        if outer == 0.0 {
            return Some(f64::INFINITY);
        }
        if inner == 0.0 || inner.signum() != outer.signum() {
            return None;
        }
        let rate = (inner / outer).ln() / du;
        (rate > MIN_TAIL_RATE).then_some(rate)
    };
    let alpha = fit(g[1], g[0]);
    let beta = match f.decay_hint() {
        DecayClass::Compact(_) => Some(f64::INFINITY),
        _ => fit(g[m - 1], g[m]),
    };
    // ends without a usable exponential fit must already be negligible
    for (rate, end) in [(alpha, g[0]), (beta, g[m])] {
        if rate.is_none() && end.abs() > 1e-8 * peak {
            return Err(Error::InsufficientDecay(end.abs() / peak));
        }
    }
    let mut w = g.clone();
    w[0] *= 0.5;
    w[m] *= 0.5;
    let n = grid.half_len();
    let mut values = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    for k in 0..=n {
        let tau = k as f64 * grid.step;
        let rot = Complex64::from_polar(1.0, tau * du);
        let mut ph = Complex64::from_polar(1.0, tau * u_lo);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, wj) in w.iter().enumerate() {
            if j % 256 == 0 {
                // refresh the phase to avoid drift of the rotation recurrence
                ph = Complex64::from_polar(1.0, tau * us[j]);
            }
            acc += ph * *wj;
            ph *= rot;
        }
        acc *= du;
        let it = Complex64::new(0.0, tau);
        if let Some(a) = alpha.filter(|a| a.is_finite()) {
            acc += Complex64::from_polar(g[0], tau * u_lo) / (it + a);
        }
        if let Some(b) = beta.filter(|b| b.is_finite()) {
            acc += Complex64::from_polar(g[m], tau * u_hi) / (Complex64::new(b, 0.0) - it);
        }
        values[n + k] = acc;
        values[n - k] = acc.conj();
    }
    MellinSpectrum::new(grid, values)
}

/// f*(1/2 + iτ) from the known transform when available, else numerically.
pub fn spectrum_of(f: &RealFunction, grid: TauGrid) -> Result<MellinSpectrum> {
    match f.known_mellin() {
        Some(m) => MellinSpectrum::from_fn(grid, |t| m(t)),
        None => mellin_forward(f, grid),
    }
}

const SYMMETRY_TOL: f64 = 1e-8;

/// (1/2π) ∫ f*(1/2+iτ) x^{-1/2-iτ} dτ by the trapezoid rule.
pub fn mellin_inverse(spec: &MellinSpectrum, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("mellin_inverse needs finite x > 0, got {x}")));
    }
    if spec.asymmetry > SYMMETRY_TOL {
        return Err(Error::NonSymmetric(spec.asymmetry));
    }
    Ok(inverse_unchecked(spec, x))
}

pub(crate) fn inverse_unchecked(spec: &MellinSpectrum, x: f64) -> f64 {
    let n = spec.grid.half_len();
    let h = spec.grid.step;
    let lx = x.ln();
    let v = &spec.values;
    let rot = Complex64::from_polar(1.0, -h * lx);
    let mut ph = rot;
    let mut acc = 0.0;
    for k in 1..=n {
        if k % 256 == 0 {
            ph = Complex64::from_polar(1.0, -(k as f64) * h * lx);
        }
        // pair τ and -τ; the imaginary parts cancel by symmetry
        let re = (v[n + k] * ph).re + (v[n - k] * ph.conj()).re;
        acc += if k == n { 0.5 * re } else { re };
        ph *= rot;
    }
    acc += v[n].re;
    acc * h / (2.0 * PI) / x.sqrt()
}

/// √((1/2π) ∫ |f*(1/2+iτ)|² dτ).
pub fn parseval_norm(spec: &MellinSpectrum) -> f64 {
    let h = spec.grid.step;
    let last = spec.values.len() - 1;
    let s: f64 = spec
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| if i == 0 || i == last { 0.5 * v.norm_sqr() } else { v.norm_sqr() })
        .sum();
    (s * h / (2.0 * PI)).sqrt()
}

/// Which Mellin argument a symbol multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionKind {
    /// (Tf)*(s) = m(s) f*(s)
    Plain,
    /// (Tf)*(s) = m(s) f*(1-s)
    Reflected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierId {
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
    D3_11,
    D3_14,
    D3_19,
    D3_23,
    D3_25,
    D3_28,
}

impl MultiplierId {
    pub const ALL: [MultiplierId; 17] = [
        MultiplierId::Fc,
        MultiplierId::Fs,
        MultiplierId::Hh,
        MultiplierId::Fcfs,
        MultiplierId::Hh2,
        MultiplierId::Hhfc,
        MultiplierId::Hhfs,
        MultiplierId::Hhfcfs,
        MultiplierId::Hh2fc,
        MultiplierId::Hh2fs,
        MultiplierId::Hh2fcfs,
        MultiplierId::D3_11,
        MultiplierId::D3_14,
        MultiplierId::D3_19,
        MultiplierId::D3_23,
        MultiplierId::D3_25,
        MultiplierId::D3_28,
    ];

    pub fn reflection_kind(self) -> ReflectionKind {
        use MultiplierId::*;
        match self {
            Fc | Fs | Hh | Hhfcfs | Hh2fc | Hh2fs => ReflectionKind::Reflected,
            _ => ReflectionKind::Plain,
        }
    }

    pub fn takes_lambda(self) -> bool {
        use MultiplierId::*;
        matches!(self, D3_11 | D3_14 | D3_19 | D3_23 | D3_25 | D3_28)
    }

    pub fn name(self) -> &'static str {
        use MultiplierId::*;
        match self {
            Fc => "M_FC",
            Fs => "M_FS",
            Hh => "M_HH",
            Fcfs => "M_FCFS",
            Hh2 => "M_HH2",
            Hhfc => "M_HHFC",
            Hhfs => "M_HHFS",
            Hhfcfs => "M_HHFCFS",
            Hh2fc => "M_HH2FC",
            Hh2fs => "M_HH2FS",
            Hh2fcfs => "M_HH2FCFS",
            D3_11 => "D_3_11",
            D3_14 => "D_3_14",
            D3_19 => "D_3_19",
            D3_23 => "D_3_23",
            D3_25 => "D_3_25",
            D3_28 => "D_3_28",
        }
    }
}

/// Admissibility of λ for a denominator symbol.
pub fn check_lambda(id: MultiplierId, lambda: Complex64) -> Result<()> {
    use MultiplierId::*;
    let ok = match id {
        D3_11 | D3_14 => ((1.0 - lambda).norm() - 1.0).abs() >= 1e-6,
        D3_19 | D3_23 | D3_25 => lambda.norm() < 2.0,
        D3_28 => lambda.norm() < (2.0 * PI).sqrt(),
        _ => true,
    };
    if ok && lambda.re.is_finite() && lambda.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} is not admissible for {}", id.name())))
    }
}

/// A complex number stored as mantissa · e^{scale}, to keep products of
/// exponentially large and small factors finite at large |τ|.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    scale: f64,
    m: Complex64,
}

impl Scaled {
    fn mul(self, o: Scaled) -> Scaled {
        Scaled { scale: self.scale + o.scale, m: self.m * o.m }
    }
    fn div(self, o: Scaled) -> Scaled {
        Scaled { scale: self.scale - o.scale, m: self.m / o.m }
    }
    fn times(self, z: Complex64) -> Scaled {
        Scaled { scale: self.scale, m: self.m * z }
    }
    fn value(self) -> Complex64 {
        self.m * self.scale.exp()
    }
}

/// Elementary factors of the symbols at s = 1/2 + iτ.
struct Trig {
    gamma: Scaled,
    gamma_refl: Scaled,
    sin_th: Scaled,
    cos_th: Scaled,
    cos_plus_sin: Scaled,
    one_plus_sin_pi_s: Scaled,
    sin2_th: Scaled,
    tan_th: Complex64,
    cot_th: Complex64,
    sech_pi_tau: f64,
}

impl Trig {
    fn at(tau: f64) -> Trig {
        let a = 0.5 * PI * tau;
        let abs_a = a.abs();
        let sg = if tau < 0.0 { -1.0 } else { 1.0 };
        let e = (-2.0 * abs_a).exp();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let lg = ln_gamma(Complex64::new(0.5, tau));
        let ch = 0.5 * (1.0 + e);
        let sh = 0.5 * (1.0 - e);
        let sech = 2.0 * e / (1.0 + e * e);
        let tanh = sg * (1.0 - e * e) / (1.0 + e * e);
        Trig {
            gamma: Scaled { scale: lg.re, m: Complex64::from_polar(1.0, lg.im) },
            gamma_refl: Scaled { scale: lg.re, m: Complex64::from_polar(1.0, -lg.im) },
            sin_th: Scaled { scale: abs_a, m: Complex64::new(ch, sg * sh) * r2 },
            cos_th: Scaled { scale: abs_a, m: Complex64::new(ch, -sg * sh) * r2 },
            cos_plus_sin: Scaled { scale: abs_a, m: Complex64::new(ch * std::f64::consts::SQRT_2, 0.0) },
            one_plus_sin_pi_s: Scaled { scale: 2.0 * abs_a, m: Complex64::new(2.0 * ch * ch, 0.0) },
            sin2_th: Scaled { scale: 2.0 * abs_a, m: Complex64::new(0.5 * e, sg * 0.25 * (1.0 - e * e)) },
            tan_th: Complex64::new(sech, tanh),
            cot_th: Complex64::new(sech, -tanh),
            sech_pi_tau: sech,
        }
    }
}

/// sech(πτ) = 1/sin(πs) on the critical line.
pub fn sech_pi(tau: f64) -> f64 {
    let e = (-PI * tau.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Value of the symbol `id` at s = 1/2 + iτ (λ only for the D_* ids).
pub fn multiplier_eval(id: MultiplierId, lambda: Option<Complex64>, tau: f64) -> Result<Complex64> {
    if !tau.is_finite() {
        return Err(Error::Domain(format!("tau must be finite, got {tau}")));
    }
    let lambda = match (id.takes_lambda(), lambda) {
        (true, Some(l)) => {
            check_lambda(id, l)?;
            l
        }
        (true, None) => return Err(Error::Domain(format!("{} needs a lambda", id.name()))),
        (false, _) => Complex64::new(0.0, 0.0),
    };
    let t = Trig::at(tau);
    let c = Complex64::new(SQRT_2_OVER_PI, 0.0);
    let one = Complex64::new(1.0, 0.0);
    use MultiplierId::*;
    let v = match id {
        Fc => t.gamma.mul(t.cos_th).times(c).value(),
        Fs => t.gamma.mul(t.sin_th).times(c).value(),
        Hh => t.gamma.mul(t.cos_plus_sin).times(c).value(),
        Fcfs => t.cot_th,
        Hh2 => Complex64::new(2.0 + 2.0 * t.sech_pi_tau, 0.0),
        Hhfc => one + t.tan_th,
        Hhfs => one + t.cot_th,
        Hhfcfs => t.gamma.mul(t.cos_plus_sin).times(c * t.tan_th).value(),
        Hh2fc => t.gamma.mul(t.one_plus_sin_pi_s).div(t.sin_th).times(c).value(),
        Hh2fs => t.gamma.mul(t.one_plus_sin_pi_s).div(t.cos_th).times(c).value(),
        Hh2fcfs => t.one_plus_sin_pi_s.div(t.sin2_th).value(),
        D3_11 => t.tan_th + one - lambda,
        D3_14 => t.cot_th + one - lambda,
        D3_19 => t.gamma_refl.mul(t.cos_th).times(c * (one + t.cot_th)).value() - lambda,
        D3_23 => t.gamma_refl.mul(t.one_plus_sin_pi_s).div(t.cos_th).times(c).value() + lambda,
        D3_25 => t.gamma_refl.mul(t.one_plus_sin_pi_s).div(t.sin_th).times(c).value() + lambda,
        D3_28 => t.one_plus_sin_pi_s.div(t.sin2_th).times(Complex64::new((PI / 2.0).sqrt(), 0.0)).value() + lambda,
    };
    Ok(v)
}

/// Spectrum of Tf from the spectrum of f, for the operator with symbol `id`.
pub fn apply_multiplier(spec: &MellinSpectrum, id: MultiplierId, lambda: Option<Complex64>) -> Result<MellinSpectrum> {
    let src = match id.reflection_kind() {
        ReflectionKind::Plain => spec.clone(),
        ReflectionKind::Reflected => spec.reflected(),
    };
    let taus = src.taus();
    let mut values = Vec::with_capacity(taus.len());
    for (t, v) in taus.iter().zip(src.values()) {
        values.push(multiplier_eval(id, lambda, *t)? * v);
    }
    MellinSpectrum::new(spec.grid(), values)
}

/// Spectrum of f from the spectrum of Tf (inverse of `apply_multiplier`).
pub fn divide_multiplier(spec: &MellinSpectrum, id: MultiplierId, lambda: Option<Complex64>) -> Result<MellinSpectrum> {
    let taus = spec.taus();
    let mut values = Vec::with_capacity(taus.len());
    for (t, v) in taus.iter().zip(spec.values()) {
        let m = multiplier_eval(id, lambda, *t)?;
        if m.norm() == 0.0 {
            return Err(Error::Numerical(format!("{} vanishes at tau = {t}", id.name())));
        }
        values.push(v / m);
    }
    let out = MellinSpectrum::new(spec.grid(), values)?;
    Ok(match id.reflection_kind() {
        ReflectionKind::Plain => out,
        ReflectionKind::Reflected => out.reflected(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::catalog;
    use crate::specfun::gamma_critical;

    fn small_grid() -> TauGrid {
        TauGrid::new(0.02, 10.0).unwrap()
    }

    #[test]
    fn forward_of_exp_is_gamma() {
        let spec = mellin_forward(&catalog("exp").unwrap(), small_grid()).unwrap();
        for (t, v) in spec.taus().iter().zip(spec.values()) {
            let g = gamma_critical(*t).unwrap();
            assert!((v - g).norm() < 1e-6, "tau={t}: {v} vs {g}");
        }
    }

    #[test]
    fn forward_of_indicator() {
        let ind = RealFunction::new("ind", DecayClass::Compact(1.0), |t| if t <= 1.0 { 1.0 } else { 0.0 });
        let spec = mellin_forward(&ind, TauGrid::new(0.5, 5.0).unwrap()).unwrap();
        for (t, v) in spec.taus().iter().zip(spec.values()) {
            let expect = Complex64::new(0.5, *t).inv();
            assert!((v - expect).norm() < 1e-3, "tau={t} {v} {expect}");
        }
        // Parseval norm of 1/(1/2+iτ) over a long grid is 1
        let long = MellinSpectrum::from_fn(TauGrid::new(0.01, 4000.0).unwrap(), |t| Complex64::new(0.5, t).inv()).unwrap();
        assert!((parseval_norm(&long) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn zero_function_and_zero_spectrum() {
        let z = mellin_forward(&RealFunction::zero(), small_grid()).unwrap();
        assert!(z.values().iter().all(|v| v.norm() == 0.0));
        assert_eq!(mellin_inverse(&z, 1.3).unwrap(), 0.0);
        assert_eq!(parseval_norm(&z), 0.0);
    }

    #[test]
    fn inverse_roundtrips() {
        let grid = TauGrid::default();
        let g = MellinSpectrum::from_fn(grid, |t| gamma_critical(t).unwrap()).unwrap();
        assert!((mellin_inverse(&g, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-9);
        let gauss = catalog("gauss").unwrap();
        let spec = mellin_forward(&gauss, grid).unwrap();
        for &x in &[0.5, 1.0, 2.0] {
            assert!((mellin_inverse(&spec, x).unwrap() - gauss.eval(x)).abs() < 1e-6);
        }
        assert!((parseval_norm(&g) - 0.5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn inverse_rejects_asymmetric_spectrum() {
        let bad = MellinSpectrum::from_fn(small_grid(), |t| Complex64::new(t, 0.0)).unwrap();
        assert!(matches!(mellin_inverse(&bad, 1.0), Err(Error::NonSymmetric(_))));
    }

    #[test]
    fn forward_rejects_slow_decay() {
        let slow = RealFunction::new("slow", DecayClass::Algebraic(0.6), |t| (1.0 + t).powf(-0.6));
        assert!(matches!(mellin_forward(&slow, small_grid()), Err(Error::InsufficientDecay(_))));
    }

    #[test]
    fn symbol_examples() {
        let m = multiplier_eval(MultiplierId::Hh2, None, 0.0).unwrap();
        assert!((m.re - 4.0).abs() < 1e-15);
        let m = multiplier_eval(MultiplierId::Fcfs, None, 0.0).unwrap();
        assert!((m - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let m = multiplier_eval(MultiplierId::Hh2, None, 5.0).unwrap();
        assert!((m.re - (2.0 + 2.0 / (5.0 * PI).cosh())).abs() < 1e-6);
    }

    // straightforward complex evaluation, valid for moderate τ
    fn naive(id: MultiplierId, lambda: Complex64, tau: f64) -> Complex64 {
        let s = Complex64::new(0.5, tau);
        let th = s * (PI / 2.0);
        let g = gamma_critical(tau).unwrap();
        let g1 = gamma_critical(-tau).unwrap();
        let c = SQRT_2_OVER_PI;
        let sp = (s * PI).sin();
        let one = Complex64::new(1.0, 0.0);
        use MultiplierId::*;
        match id {
            Fc => g * th.cos() * c,
            Fs => g * th.sin() * c,
            Hh => g * (th.cos() + th.sin()) * c,
            Fcfs => th.cos() / th.sin(),
            Hh2 => (one + sp) * 2.0 / sp,
            Hhfc => one + th.tan(),
            Hhfs => one + one / th.tan(),
            Hhfcfs => g * th.sin() * (one + th.tan()) * c,
            Hh2fc => g * (one + sp) / th.sin() * c,
            Hh2fs => g * (one + sp) / th.cos() * c,
            Hh2fcfs => (one + sp) / (th.sin() * th.sin()),
            D3_11 => th.tan() + one - lambda,
            D3_14 => one / th.tan() + one - lambda,
            D3_19 => g1 * th.cos() * (one + one / th.tan()) * c - lambda,
            D3_23 => g1 * (one + sp) / th.cos() * c + lambda,
            D3_25 => g1 * (one + sp) / th.sin() * c + lambda,
            D3_28 => (one + sp) / (th.sin() * th.sin()) * (PI / 2.0).sqrt() + lambda,
        }
    }

    #[test]
    fn symbols_match_direct_complex_trigonometry() {
        let lambda = Complex64::new(0.7, 0.0);
        for id in MultiplierId::ALL {
            for &tau in &[-7.5, -1.0, -0.1, 0.0, 0.3, 2.0, 9.0] {
                let l = id.takes_lambda().then_some(lambda);
                let a = multiplier_eval(id, l, tau).unwrap();
                let b = naive(id, lambda, tau);
                assert!((a - b).norm() < 1e-11 * b.norm().max(1.0), "{} at {tau}: {a} vs {b}", id.name());
            }
        }
    }

    #[test]
    fn symbols_stay_finite_far_out() {
        for id in MultiplierId::ALL {
            let l = id.takes_lambda().then_some(Complex64::new(0.5, 0.0));
            for &tau in &[250.0, -1e3, 1e5] {
                let v = multiplier_eval(id, l, tau).unwrap();
                assert!(v.re.is_finite() && v.im.is_finite(), "{} at {tau}", id.name());
            }
        }
        // |HH symbol| → √2 and |HH2FCFS| → 2
        assert!((multiplier_eval(MultiplierId::Hh, None, 1e4).unwrap().norm() - 2f64.sqrt()).abs() < 1e-9);
        assert!((multiplier_eval(MultiplierId::Hh2fcfs, None, 1e4).unwrap().norm() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lambda_admissibility() {
        assert!(multiplier_eval(MultiplierId::D3_11, Some(Complex64::new(2.0, 0.0)), 0.0).is_err());
        assert!(multiplier_eval(MultiplierId::D3_11, Some(Complex64::new(0.0, 0.0)), 0.0).is_err());
        assert!(multiplier_eval(MultiplierId::D3_11, Some(Complex64::new(0.5, 0.0)), 0.0).is_ok());
        assert!(multiplier_eval(MultiplierId::D3_23, Some(Complex64::new(2.0, 0.0)), 0.0).is_err());
        assert!(multiplier_eval(MultiplierId::D3_28, Some(Complex64::new(2.5, 0.0)), 0.0).is_ok());
        assert!(multiplier_eval(MultiplierId::D3_28, Some(Complex64::new(2.6, 0.0)), 0.0).is_err());
        assert!(multiplier_eval(MultiplierId::D3_19, None, 0.0).is_err());
    }

    #[test]
    fn multiplier_roundtrip() {
        let grid = small_grid();
        let spec = MellinSpectrum::from_fn(grid, |t| gamma_critical(t).unwrap()).unwrap();
        for id in [MultiplierId::Hh, MultiplierId::Hh2fc, MultiplierId::Fcfs] {
            let img = apply_multiplier(&spec, id, None).unwrap();
            assert!(img.asymmetry() < 1e-12);
            let back = divide_multiplier(&img, id, None).unwrap();
            for (a, b) in back.values().iter().zip(spec.values()) {
                assert!((a - b).norm() < 1e-12 * b.norm().max(1e-30));
            }
        }
    }

    #[test]
    fn parseval_matches_grid_norm() {
        use crate::funcspace::{l2_norm, GridFunction, GridSpec, CATALOG_NAMES};
        for name in CATALOG_NAMES {
            let f = catalog(name).unwrap();
            let a = l2_norm(&GridFunction::sample(&f, GridSpec::default()).unwrap());
            let b = parseval_norm(&mellin_forward(&f, TauGrid::default()).unwrap());
            assert!((a - b).abs() < 1e-6, "{name}: {a} vs {b}");
        }
    }
}

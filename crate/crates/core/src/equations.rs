//! Singular integral and integro-functional equations built on the
//! transforms: closed-form solvers of the second-kind Stieltjes and Hilbert
//! equations, solution representations from Mellin data φ, residuals, the
//! auxiliary μ-equations and their triviality margins.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcspace::{catalog, fmt17, RealFunction};
use crate::mellin::{check_lambda, inverse_unchecked, multiplier_eval, sech_pi, MellinSpectrum, MultiplierId, TauGrid};
use crate::quadrature::{integrate_pv, DecayClass};
use crate::specfun::exp_e1;
use crate::transforms::{finite, log_kernel, log_ratio, lookup, OperatorId, TransformConfig, OUTPUT_DECAY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationId {
    /// f + (1/π)∫ f(t)/(x+t) dt = g
    Eq3_1,
    /// g − (2/π²)∫ √(xt) ln(x/t)/(x²−t²) g(t) dt = f, solved for g
    Eq3_2,
    /// f + (2/π) PV∫ x f(t)/(x²−t²) dt = g
    HilbC,
    /// f + (2/π) PV∫ t f(t)/(t²−x²) dt = g
    HilbS,
    /// f(1/x)/x = (2/π) PV∫ t f(t)/(t²−x²) dt
    Eq3_3,
    /// f(1/x)/x = (2/π) PV∫ x f(t)/(x²−t²) dt
    Eq3_4,
    /// f(x) = (2/π) PV∫ xt f(t)/(x²t²−1) dt
    Eq3_5,
    /// f(x) = (2/π) PV∫ f(t)/(1−x²t²) dt
    Eq3_6,
    /// (H₊F_c f)(x) = λ f(1/x)/x
    Eq3_10,
    /// (H₊F_s f)(x) = λ f(1/x)/x
    Eq3_13,
    /// λ f + H₊F_cF_s f = 0
    Eq3_18,
    /// H₊²F_c f = λ f
    Eq3_21,
    /// H₊²F_s f = λ f
    Eq3_22,
    /// √(π/2) H₊²F_cF_s f = λ f(1/x)/x
    Eq3_27,
}

/// Factor dividing φ in a solution representation f* = φ/denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// cos(πs/2)
    Cos,
    /// sin(πs/2)
    Sin,
    Symbol(MultiplierId),
}

impl Denominator {
    pub fn eval(self, lambda: Option<f64>, tau: f64) -> Result<Complex64> {
        let theta = Complex64::new(0.25 * PI, 0.5 * PI * tau);
        match self {
            Denominator::Cos => Ok(theta.cos()),
            Denominator::Sin => Ok(theta.sin()),
            Denominator::Symbol(id) => multiplier_eval(id, lambda.map(|l| Complex64::new(l, 0.0)), tau),
        }
    }
}

impl EquationId {
    pub const ALL: [EquationId; 14] = [
        EquationId::Eq3_1,
        EquationId::Eq3_2,
        EquationId::HilbC,
        EquationId::HilbS,
        EquationId::Eq3_3,
        EquationId::Eq3_4,
        EquationId::Eq3_5,
        EquationId::Eq3_6,
        EquationId::Eq3_10,
        EquationId::Eq3_13,
        EquationId::Eq3_18,
        EquationId::Eq3_21,
        EquationId::Eq3_22,
        EquationId::Eq3_27,
    ];

    pub fn name(self) -> &'static str {
        use EquationId::*;
        match self {
            Eq3_1 => "EQ_3_1",
            Eq3_2 => "EQ_3_2",
            HilbC => "EQ_HILB_C",
            HilbS => "EQ_HILB_S",
            Eq3_3 => "EQ_3_3",
            Eq3_4 => "EQ_3_4",
            Eq3_5 => "EQ_3_5",
            Eq3_6 => "EQ_3_6",
            Eq3_10 => "EQ_3_10",
            Eq3_13 => "EQ_3_13",
            Eq3_18 => "EQ_3_18",
            Eq3_21 => "EQ_3_21",
            Eq3_22 => "EQ_3_22",
            Eq3_27 => "EQ_3_27",
        }
    }

    pub fn denominator(self) -> Option<Denominator> {
        use EquationId::*;
        use MultiplierId::*;
        match self {
            Eq3_3 | Eq3_5 => Some(Denominator::Cos),
            Eq3_4 | Eq3_6 => Some(Denominator::Sin),
            Eq3_10 => Some(Denominator::Symbol(D3_11)),
            Eq3_13 => Some(Denominator::Symbol(D3_14)),
            Eq3_18 => Some(Denominator::Symbol(D3_19)),
            Eq3_21 => Some(Denominator::Symbol(D3_23)),
            Eq3_22 => Some(Denominator::Symbol(D3_25)),
            Eq3_27 => Some(Denominator::Symbol(D3_28)),
            Eq3_1 | Eq3_2 | HilbC | HilbS => None,
        }
    }

    /// ±1 in φ(s) = ±φ(1−s); `None` for the inhomogeneous equations.
    pub fn symmetry_sign(self) -> Option<f64> {
        use EquationId::*;
        match self {
            Eq3_10 | Eq3_13 => Some(-1.0),
            Eq3_1 | Eq3_2 | HilbC | HilbS => None,
            _ => Some(1.0),
        }
    }

    pub fn takes_lambda(self) -> bool {
        matches!(self.denominator(), Some(Denominator::Symbol(_)))
    }

    /// Whether the equation has a right-hand side g.
    pub fn is_inhomogeneous(self) -> bool {
        self.symmetry_sign().is_none()
    }

    pub fn lambda_domain(self) -> &'static str {
        use EquationId::*;
        match self {
            Eq3_10 | Eq3_13 => "complex lambda with | |1 - lambda| - 1 | >= 1e-6",
            Eq3_18 | Eq3_21 | Eq3_22 => "|lambda| < 2",
            Eq3_27 => "|lambda| < sqrt(2 pi)",
            _ => "no lambda",
        }
    }

    fn check(self, lambda: Option<f64>) -> Result<()> {
        match (self.denominator(), lambda) {
            (Some(Denominator::Symbol(id)), Some(l)) => check_lambda(id, Complex64::new(l, 0.0)),
            (Some(Denominator::Symbol(_)), None) => Err(Error::Domain(format!("{} needs a lambda", self.name()))),
            (_, Some(_)) => Err(Error::Domain(format!("{} takes no lambda", self.name()))),
            (_, None) => Ok(()),
        }
    }
}

impl fmt::Display for EquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "stieltjes2k" => Some(EquationId::Eq3_1),
            "stieltjes2k_inverse" => Some(EquationId::Eq3_2),
            "hilbert_c" => Some(EquationId::HilbC),
            "hilbert_s" => Some(EquationId::HilbS),
            _ => None,
        };
        alias
            .or_else(|| EquationId::ALL.into_iter().find(|e| e.name().to_ascii_lowercase() == key))
            .ok_or_else(|| Error::NotFound(s.to_string()))
    }
}

/// The two second-kind Hilbert equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HilbertVariant {
    C,
    S,
}

impl HilbertVariant {
    fn operator(self) -> OperatorId {
        match self {
            HilbertVariant::C => OperatorId::Hhfc,
            HilbertVariant::S => OperatorId::Hhfs,
        }
    }
}

/// The singular part of the solution kernel, ±√(xt)/(π(t²−x²)).
pub fn hilbert_kernel(variant: HilbertVariant, x: f64, t: f64) -> Result<f64> {
    if !(x > 0.0 && t > 0.0) || x == t {
        return Err(Error::Domain(format!("hilbert kernel needs distinct positive arguments, got ({x}, {t})")));
    }
    let k = (x * t).sqrt() / (PI * (t * t - x * x));
    Ok(match variant {
        HilbertVariant::C => k,
        HilbertVariant::S => -k,
    })
}

fn stieltjes(cfg: &TransformConfig, f: &RealFunction, x: f64) -> Result<f64> {
    cfg.smooth(f, |t| 1.0 / (x + t), x, DecayClass::Algebraic(1.0))
}

/// ∫ √(xt) ln(x/t)/(x²−t²) g(t) dt.
fn log_integral(cfg: &TransformConfig, g: &RealFunction, x: f64) -> Result<f64> {
    cfg.smooth(g, |t| log_kernel(x, t), x, DecayClass::Algebraic(1.4))
}

/// ln(x/t)/(x − t), with the removable diagonal 1/x.
pub fn log_quotient_kernel(x: f64, t: f64) -> f64 {
    2.0 * log_ratio(0.5 * (t / x).ln()) / x
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("equations are evaluated at x > 0, got {x}")))
    }
}

/// f(x) + (1/π)∫ f(t)/(x+t) dt.
pub fn apply_stieltjes_second_kind(cfg: &TransformConfig, f: &RealFunction, x: f64) -> Result<f64> {
    check_x(x)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    finite(f.eval(x) + stieltjes(cfg, f, x)? / PI, "Stieltjes equation", x)
}

/// The solution f(x) of f + (1/π)∫ f(t)/(x+t) dt = g.
pub fn solve_stieltjes_second_kind(cfg: &TransformConfig, g: &RealFunction, x: f64) -> Result<f64> {
    check_x(x)?;
    if g.is_zero() {
        return Ok(0.0);
    }
    finite(g.eval(x) - 2.0 / (PI * PI) * log_integral(cfg, g, x)?, "Stieltjes solution", x)
}

/// The solution f(x) of the second-kind Hilbert equation of the given variant.
pub fn solve_hilbert_second_kind(cfg: &TransformConfig, g: &RealFunction, variant: HilbertVariant, x: f64) -> Result<f64> {
    check_x(x)?;
    cfg.inverse_kernel_at(variant.operator(), g, x)
}

/// Solution value of one of the inhomogeneous equations for the
/// right-hand side g.
pub fn solve(cfg: &TransformConfig, eq: EquationId, g: &RealFunction, x: f64) -> Result<f64> {
    match eq {
        EquationId::Eq3_1 => solve_stieltjes_second_kind(cfg, g, x),
        EquationId::Eq3_2 => apply_stieltjes_second_kind(cfg, g, x),
        EquationId::HilbC => solve_hilbert_second_kind(cfg, g, HilbertVariant::C, x),
        EquationId::HilbS => solve_hilbert_second_kind(cfg, g, HilbertVariant::S, x),
        _ => Err(Error::Capability { op: eq.name().into(), route: "closed-form solve".into() }),
    }
}

/// `solve` as a function of x; failures surface as NaN.
pub fn solve_fn(cfg: &TransformConfig, eq: EquationId, g: &RealFunction) -> Result<RealFunction> {
    if !eq.is_inhomogeneous() {
        return Err(Error::Capability { op: eq.name().into(), route: "closed-form solve".into() });
    }
    if g.is_zero() {
        return Ok(RealFunction::zero());
    }
    let (cfg, g2) = (*cfg, g.clone());
    Ok(RealFunction::new(format!("{}[{}]", eq.name(), g.label()), OUTPUT_DECAY, move |x| {
        solve(&cfg, eq, &g2, x).unwrap_or(f64::NAN)
    }))
}

/// e^{-x} + (1/π) e^x E1(x), the left side of the Stieltjes equation for f = e^{-x}.
pub fn stieltjes_image_of_exp() -> RealFunction {
    RealFunction::new("exp-image", DecayClass::Algebraic(1.0), |x| {
        (-x).exp() + exp_e1(x).unwrap_or(f64::NAN) / PI
    })
}

/// Right-hand sides by name: the catalog, `zero` and `exp-image`.
pub fn rhs_by_name(name: &str) -> Result<RealFunction> {
    match name {
        "zero" => Ok(RealFunction::zero()),
        "exp-image" => Ok(stieltjes_image_of_exp()),
        _ => catalog(name),
    }
}

/// Projection of φ onto φ(s) = ±φ(1−s), i.e. the even or odd part in τ.
pub fn symmetrize(eq: EquationId, phi: &MellinSpectrum) -> Result<MellinSpectrum> {
    let sign = eq
        .symmetry_sign()
        .ok_or_else(|| Error::Capability { op: eq.name().into(), route: "solution representation".into() })?;
    let v = phi.values();
    let n = v.len();
    let out = (0..n).map(|i| 0.5 * (v[i] + sign * v[n - 1 - i])).collect();
    MellinSpectrum::new(phi.grid(), out)
}

/// f* = φ/denominator on the τ-grid, after symmetrizing φ.
///
/// φ whose part of the declared parity is smaller than the discarded part
/// is rejected, as is a λ outside the equation's domain.
pub fn solution_spectrum(eq: EquationId, phi: &MellinSpectrum, lambda: Option<f64>) -> Result<MellinSpectrum> {
    let den = eq
        .denominator()
        .ok_or_else(|| Error::Capability { op: eq.name().into(), route: "solution representation".into() })?;
    eq.check(lambda)?;
    let sym = symmetrize(eq, phi)?;
    let kept: f64 = sym.values().iter().map(|z| z.norm_sqr()).sum();
    let total: f64 = phi.values().iter().map(|z| z.norm_sqr()).sum();
    if total - kept > kept && total > 0.0 {
        return Err(Error::Domain(format!("phi has the wrong parity for {}", eq.name())));
    }
    let taus = sym.taus();
    let mut values = Vec::with_capacity(taus.len());
    for (t, p) in taus.iter().zip(sym.values()) {
        values.push(p / den.eval(lambda, *t)?);
    }
    let spec = MellinSpectrum::new(phi.grid(), values)?;
    if spec.asymmetry() > 1e-8 {
        return Err(Error::NonSymmetric(spec.asymmetry()));
    }
    Ok(spec)
}

/// The function with Mellin transform φ(s)/denominator(s).
pub fn build_solution_from_phi(eq: EquationId, phi: &MellinSpectrum, lambda: Option<f64>) -> Result<RealFunction> {
    let spec = solution_spectrum(eq, phi, lambda)?;
    if spec.values().iter().all(|z| z.norm() == 0.0) {
        return Ok(RealFunction::zero());
    }
    let spec = Arc::new(spec);
    let s2 = spec.clone();
    Ok(RealFunction::new(format!("{}-solution", eq.name()), OUTPUT_DECAY, move |x| inverse_unchecked(&s2, x))
        .with_mellin(move |tau| lookup(&spec, tau)))
}

/// φ = f*·denominator recovered from a solution's Mellin data.
pub fn phi_of_solution(eq: EquationId, f: &RealFunction, lambda: Option<f64>, grid: TauGrid) -> Result<MellinSpectrum> {
    let den = eq
        .denominator()
        .ok_or_else(|| Error::Capability { op: eq.name().into(), route: "solution representation".into() })?;
    let spec = crate::mellin::spectrum_of(f, grid)?;
    let taus = spec.taus();
    let mut values = Vec::with_capacity(taus.len());
    for (t, v) in taus.iter().zip(spec.values()) {
        values.push(v * den.eval(lambda, *t)?);
    }
    MellinSpectrum::new(grid, values)
}

/// Even test profiles sech(πτ/2)·{1, e^{−τ²/8}, 1/(1+τ²)}.
pub fn even_phi_profiles(grid: TauGrid) -> Result<Vec<(&'static str, MellinSpectrum)>> {
    let base = |t: f64| 1.0 / (0.5 * PI * t).cosh();
    Ok(vec![
        ("sech", MellinSpectrum::from_fn(grid, |t| Complex64::new(base(t), 0.0))?),
        ("sech-gauss", MellinSpectrum::from_fn(grid, |t| Complex64::new(base(t) * (-t * t / 8.0).exp(), 0.0))?),
        ("sech-lorentz", MellinSpectrum::from_fn(grid, |t| Complex64::new(base(t) / (1.0 + t * t), 0.0))?),
    ])
}

/// LHS − RHS of `eq` at x for the unknown f.  `rhs` is g for the
/// inhomogeneous equations (absent means g ≡ 0) and must be absent otherwise.
pub fn residual_at(
    cfg: &TransformConfig,
    eq: EquationId,
    f: &RealFunction,
    lambda: Option<f64>,
    rhs: Option<&RealFunction>,
    x: f64,
) -> Result<f64> {
    check_x(x)?;
    if lambda.is_some() != eq.takes_lambda() {
        return Err(Error::Domain(format!("{}: {}", eq.name(), eq.lambda_domain())));
    }
    if rhs.is_some() && !eq.is_inhomogeneous() {
        return Err(Error::Domain(format!("{} is homogeneous", eq.name())));
    }
    let g = rhs.map(|g| g.eval(x)).unwrap_or(0.0);
    let lam = lambda.unwrap_or(0.0);
    let fx = f.eval(x);
    let refl = f.eval(1.0 / x) / x;
    let e = f.evaluator().clone();
    let h = f.decay_hint();
    let fwd = |op: OperatorId| cfg.forward_kernel_at(op, f, x);
    // PV at the reciprocal node 1/x
    let pv_recip = |g: &dyn Fn(f64) -> f64, hint: DecayClass| -> Result<f64> {
        if f.is_zero() {
            return Ok(0.0);
        }
        Ok(integrate_pv(g, 1.0 / x, hint, &cfg.quadrature)?.value)
    };
    use EquationId::*;
    let v = match eq {
        Eq3_1 => fx + stieltjes(cfg, f, x)? / PI - g,
        Eq3_2 => fx - 2.0 / (PI * PI) * log_integral(cfg, f, x)? - g,
        HilbC => fwd(OperatorId::Hhfc)? - g,
        HilbS => fwd(OperatorId::Hhfs)? - g,
        Eq3_3 => refl - fwd(OperatorId::Fcfs)?,
        Eq3_4 => refl - (fwd(OperatorId::Hhfc)? - fx),
        Eq3_5 => fx - 2.0 / PI * pv_recip(&|t| t * e(t) / (x * t + 1.0), h)?,
        Eq3_6 => fx - 2.0 / PI * pv_recip(&|t| -e(t) / (x * (x * t + 1.0)), h.divided_by_t())?,
        Eq3_10 => fwd(OperatorId::Hhfc)? - lam * refl,
        Eq3_13 => fwd(OperatorId::Hhfs)? - lam * refl,
        Eq3_18 => lam * fx + fwd(OperatorId::Hhfcfs)?,
        Eq3_21 => fwd(OperatorId::Hh2fc)? - lam * fx,
        Eq3_22 => fwd(OperatorId::Hh2fs)? - lam * fx,
        Eq3_27 => (0.5 * PI).sqrt() * fwd(OperatorId::Hh2fcfs)? - lam * refl,
    };
    finite(v, eq.name(), x)
}

/// Pointwise residuals on an abscissa set.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub equation: String,
    pub lambda: Option<f64>,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

impl ResidualReport {
    /// max |residual|.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn to_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,residual")?;
        for (x, v) in self.xs.iter().zip(&self.values) {
            writeln!(w, "{},{}", fmt17(*x), fmt17(*v))?;
        }
        Ok(())
    }
}

/// Residuals of `eq` for f at each of `xs`; f is memoized first.
pub fn residual_report(
    cfg: &TransformConfig,
    eq: EquationId,
    f: &RealFunction,
    lambda: Option<f64>,
    rhs: Option<&RealFunction>,
    xs: &[f64],
) -> Result<ResidualReport> {
    let f = if f.is_zero() { f.clone() } else { cfg.memo(f) };
    let values = xs.iter().map(|&x| residual_at(cfg, eq, &f, lambda, rhs, x)).collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport { equation: eq.name().into(), lambda, xs: xs.to_vec(), values })
}

/// max over `xs` of |LHS − RHS|.
pub fn residual(
    cfg: &TransformConfig,
    eq: EquationId,
    f: &RealFunction,
    lambda: Option<f64>,
    rhs: Option<&RealFunction>,
    xs: &[f64],
) -> Result<f64> {
    Ok(residual_report(cfg, eq, f, lambda, rhs, xs)?.max_abs())
}

/// The scalar μ-equations whose symbols decide triviality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MuEquationId {
    /// (2−λ²)μ + (2/π)∫ μ/(x+t)
    Mu3_12,
    /// (4−λ²)μ + (8/π)∫ μ/(x+t) + (4/π²)∫ ln(x/t) μ/(x−t)
    Mu3_24,
    /// (2π−λ²)μ + 4∫ μ/(x+t) + (2/π)∫ ln(x/t) μ/(x−t)
    Mu3_29,
}

impl MuEquationId {
    pub const ALL: [MuEquationId; 3] = [MuEquationId::Mu3_12, MuEquationId::Mu3_24, MuEquationId::Mu3_29];

    pub fn name(self) -> &'static str {
        match self {
            MuEquationId::Mu3_12 => "MU_3_12",
            MuEquationId::Mu3_24 => "MU_3_24",
            MuEquationId::Mu3_29 => "MU_3_29",
        }
    }

    /// Symbol on the critical line, in the sign convention of the
    /// φ-side identity it comes from.
    pub fn symbol(self, lambda: f64, tau: f64) -> f64 {
        let h = sech_pi(tau);
        let l2 = lambda * lambda;
        match self {
            MuEquationId::Mu3_12 => 2.0 - l2 + 2.0 * h,
            MuEquationId::Mu3_24 => (l2 - 4.0) - 4.0 * h * h - 8.0 * h,
            MuEquationId::Mu3_29 => l2 - 2.0 * PI * (1.0 + h * h + 2.0 * h),
        }
    }

    /// Sign making the symbol positive for small λ.
    fn orientation(self) -> f64 {
        match self {
            MuEquationId::Mu3_12 => 1.0,
            _ => -1.0,
        }
    }

    /// |λ| below which the margin is positive.
    pub fn threshold(self) -> f64 {
        match self {
            MuEquationId::Mu3_12 => 2f64.sqrt(),
            MuEquationId::Mu3_24 => 2.0,
            MuEquationId::Mu3_29 => (2.0 * PI).sqrt(),
        }
    }

    fn limit(self, lambda: f64) -> f64 {
        let t = self.threshold();
        t * t - lambda * lambda
    }
}

impl fmt::Display for MuEquationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MuEquationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase();
        MuEquationId::ALL.into_iter().find(|m| m.name() == key).ok_or_else(|| Error::NotFound(s.to_string()))
    }
}

/// Left side of the μ-equation at x.
pub fn mu_residual_at(cfg: &TransformConfig, mu: MuEquationId, f: &RealFunction, lambda: f64, x: f64) -> Result<f64> {
    check_x(x)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let l2 = lambda * lambda;
    let s = stieltjes(cfg, f, x)?;
    let logq = || cfg.smooth(f, |t| log_quotient_kernel(x, t), x, DecayClass::Algebraic(0.9));
    let fx = f.eval(x);
    let v = match mu {
        MuEquationId::Mu3_12 => (2.0 - l2) * fx + 2.0 / PI * s,
        MuEquationId::Mu3_24 => (4.0 - l2) * fx + 8.0 / PI * s + 4.0 / (PI * PI) * logq()?,
        MuEquationId::Mu3_29 => (2.0 * PI - l2) * fx + 4.0 * s + 2.0 / PI * logq()?,
    };
    finite(v, mu.name(), x)
}

/// max over `xs` of |left side of the μ-equation|.
pub fn mu_residual(cfg: &TransformConfig, mu: MuEquationId, f: &RealFunction, lambda: f64, xs: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &x in xs {
        worst = worst.max(mu_residual_at(cfg, mu, f, lambda, x)?.abs());
    }
    Ok(worst)
}

/// Infimum of the (positively oriented) symbol over τ ∈ [0, 40] and its
/// τ → ∞ limit.  A positive margin certifies that only the zero solution
/// exists.
pub fn triviality_margin(mu: MuEquationId, lambda: f64) -> f64 {
    let grid = TauGrid::default();
    let scan = grid
        .taus()
        .into_iter()
        .filter(|t| *t >= 0.0)
        .map(|t| mu.orientation() * mu.symbol(lambda, t))
        .fold(f64::INFINITY, f64::min);
    scan.min(mu.limit(lambda))
}

#[derive(Debug, Clone, Serialize)]
pub struct MarginCertificate {
    pub equation: String,
    pub lambda: f64,
    pub margin: f64,
    pub verdict: String,
}

pub fn certify(mu: MuEquationId, lambda: f64) -> MarginCertificate {
    let margin = triviality_margin(mu, lambda);
    let verdict = if margin > 0.0 { "only the trivial solution" } else { "not certified" };
    MarginCertificate { equation: mu.name().into(), lambda, margin, verdict: verdict.into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::forward;
    use crate::transforms::Route;

    fn cfg() -> TransformConfig {
        TransformConfig::default()
    }

    #[test]
    fn stieltjes_pair_on_exp() {
        let c = cfg();
        let e = catalog("exp").unwrap();
        let v = apply_stieltjes_second_kind(&c, &e, 1.0).unwrap();
        let want = (-1f64).exp() + exp_e1(1.0).unwrap() / PI;
        assert!((v - want).abs() < 1e-10 && (v - 0.5577).abs() < 1e-4, "{v}");
        let g = stieltjes_image_of_exp();
        for x in [0.5, 1.0, 2.0] {
            let f = solve_stieltjes_second_kind(&c, &g, x).unwrap();
            assert!((f - (-x).exp()).abs() < 1e-8, "x={x}: {f}");
        }
        assert_eq!(solve_stieltjes_second_kind(&c, &RealFunction::zero(), 1.0).unwrap(), 0.0);
        assert_eq!(apply_stieltjes_second_kind(&c, &RealFunction::zero(), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn stieltjes_solution_is_linear() {
        let c = cfg();
        let (a, b) = (catalog("exp").unwrap(), catalog("gauss").unwrap());
        let sum = RealFunction::combine(1.0, &a, 1.0, &b);
        let lhs = solve_stieltjes_second_kind(&c, &sum, 1.0).unwrap();
        let rhs = solve_stieltjes_second_kind(&c, &a, 1.0).unwrap() + solve_stieltjes_second_kind(&c, &b, 1.0).unwrap();
        assert!((lhs - rhs).abs() < 2e-9);
    }

    #[test]
    fn hilbert_plug_back() {
        let c = cfg();
        let e = catalog("exp").unwrap();
        for variant in [HilbertVariant::C, HilbertVariant::S] {
            let eq = if variant == HilbertVariant::C { EquationId::HilbC } else { EquationId::HilbS };
            let g = c.forward_fn(variant.operator(), &e, Route::Kernel).unwrap();
            let g = c.memo(&g);
            let f = solve_fn(&c, eq, &g).unwrap();
            let r = residual(&c, eq, &f, None, Some(&g), &[1.0]).unwrap();
            assert!(r < 1e-6, "{variant:?}: {r:e}");
            assert!((f.eval(1.0) - (-1f64).exp()).abs() < 1e-6);
        }
        assert_eq!(solve_hilbert_second_kind(&c, &RealFunction::zero(), HilbertVariant::C, 1.0).unwrap(), 0.0);
        let k = hilbert_kernel(HilbertVariant::C, 1.0, 2.0).unwrap();
        assert_eq!(k, -hilbert_kernel(HilbertVariant::C, 2.0, 1.0).unwrap());
    }

    #[test]
    fn cosine_family_solutions_satisfy_their_equations() {
        let c = cfg();
        let grid = TauGrid::default();
        let (_, phi) = even_phi_profiles(grid).unwrap().remove(0);
        for eq in [EquationId::Eq3_5, EquationId::Eq3_6, EquationId::Eq3_3, EquationId::Eq3_4] {
            let f = build_solution_from_phi(eq, &phi, None).unwrap();
            let r = residual(&c, eq, &f, None, None, &[0.5, 1.0, 2.0]).unwrap();
            assert!(r < 1e-6, "{eq}: {r:e}");
            assert!(f.eval(1.0).abs() > 1e-3);
        }
    }

    #[test]
    fn generic_functions_leave_a_residual() {
        let e = catalog("exp").unwrap();
        let r = residual(&cfg(), EquationId::Eq3_5, &e, None, None, &[1.0]).unwrap();
        assert!(r > 1e-2);
    }

    #[test]
    fn symmetrization_and_rejection() {
        let grid = TauGrid::new(0.5, 4.0).unwrap();
        let phi = MellinSpectrum::from_fn(grid, |t| Complex64::new(1.0 + 0.3 * t, 0.0)).unwrap();
        let even = symmetrize(EquationId::Eq3_5, &phi).unwrap();
        for v in even.values() {
            assert!((v.re - 1.0).abs() < 1e-15 && v.im == 0.0);
        }
        // an odd φ for an even-symmetry equation
        let odd = MellinSpectrum::from_fn(grid, |t| Complex64::new(0.0, t)).unwrap();
        assert!(solution_spectrum(EquationId::Eq3_5, &odd, None).is_err());
        assert!(solution_spectrum(EquationId::Eq3_10, &odd, Some(0.5)).is_ok());
        // λ = 0 and λ = 2 sit on |1−λ| = 1
        assert!(solution_spectrum(EquationId::Eq3_10, &odd, Some(0.0)).is_err());
        assert!(solution_spectrum(EquationId::Eq3_10, &odd, Some(2.0)).is_err());
        assert!(solution_spectrum(EquationId::Eq3_21, &phi, Some(2.0)).is_err());
        assert!(solution_spectrum(EquationId::Eq3_21, &phi, None).is_err());
        assert!(solution_spectrum(EquationId::Eq3_1, &phi, None).is_err());
        let zero = MellinSpectrum::zero(grid);
        assert!(build_solution_from_phi(EquationId::Eq3_5, &zero, None).unwrap().is_zero());
    }

    #[test]
    fn phi_round_trip_keeps_symmetry() {
        let grid = TauGrid::default();
        let (_, phi) = even_phi_profiles(grid).unwrap().remove(1);
        for (eq, lam) in [(EquationId::Eq3_18, Some(1.0)), (EquationId::Eq3_27, Some(-2.0)), (EquationId::Eq3_6, None)] {
            let f = build_solution_from_phi(eq, &phi, lam).unwrap();
            let back = phi_of_solution(eq, &f, lam, grid).unwrap();
            let v = back.values();
            let n = v.len();
            let asym = (0..n).map(|i| (v[i] - v[n - 1 - i]).norm()).fold(0.0, f64::max);
            assert!(asym < 1e-8, "{eq}: {asym:e}");
        }
    }

    #[test]
    fn zero_and_scaling() {
        let c = cfg();
        let z = RealFunction::zero();
        for eq in EquationId::ALL {
            let lam = if eq.takes_lambda() { Some(0.5) } else { None };
            assert_eq!(residual(&c, eq, &z, lam, None, &[0.7, 1.3]).unwrap(), 0.0, "{eq}");
        }
        let e = catalog("gauss").unwrap();
        let r1 = residual(&c, EquationId::Eq3_13, &e, Some(0.5), None, &[1.0]).unwrap();
        let r2 = residual(&c, EquationId::Eq3_13, &e.scaled(2.0), Some(0.5), None, &[1.0]).unwrap();
        assert!((r2 - 2.0 * r1).abs() < 1e-9 * r1.max(1.0));
    }

    #[test]
    fn mu_equations() {
        let c = cfg();
        let e = catalog("exp").unwrap();
        let v = mu_residual_at(&c, MuEquationId::Mu3_12, &e, 0.0, 1.0).unwrap();
        let hh2 = forward(OperatorId::Hh2, &e, Route::Kernel, 1.0).unwrap();
        assert!((v - hh2).abs() < 1e-9 && (v - 1.1154).abs() < 1e-4, "{v}");
        for lam in [-1.4, -0.7, 0.0, 0.9, 1.41] {
            assert!(mu_residual_at(&c, MuEquationId::Mu3_12, &e, lam, 1.0).unwrap() > 0.0);
        }
        assert_eq!(mu_residual(&c, MuEquationId::Mu3_24, &RealFunction::zero(), 1.0, &[1.0]).unwrap(), 0.0);
        // ∫₀^∞ ln(x/t) e^{-t}/(x−t) dt at x = 1, by direct quadrature of the kernel
        let direct = crate::quadrature::integrate_finite(|t: f64| log_quotient_kernel(1.0, t) * (-t).exp(), 0.0, 60.0, &c.quadrature)
            .unwrap()
            .value;
        let via = (mu_residual_at(&c, MuEquationId::Mu3_29, &e, 0.0, 1.0).unwrap()
            - 2.0 * PI * (-1f64).exp()
            - 4.0 * exp_e1(1.0).unwrap())
            * PI
            / 2.0;
        assert!((direct - via).abs() < 1e-8, "{direct} {via}");
        assert!((log_quotient_kernel(2.0, 2.0) - 0.5).abs() < 1e-15);
        assert!((log_quotient_kernel(2.0, 2.0000001) - 0.5).abs() < 1e-7);
    }

    #[test]
    fn margins() {
        assert!((triviality_margin(MuEquationId::Mu3_12, 0.0) - 2.0).abs() < 1e-15);
        assert!(triviality_margin(MuEquationId::Mu3_12, 2f64.sqrt()).abs() < 1e-10);
        assert!((triviality_margin(MuEquationId::Mu3_24, 1.9) - 0.39).abs() < 1e-12);
        assert!(triviality_margin(MuEquationId::Mu3_29, 2.6) < 0.0);
        assert_eq!(certify(MuEquationId::Mu3_12, 0.3).verdict, "only the trivial solution");
    }

    #[test]
    fn names_parse() {
        for eq in EquationId::ALL {
            assert_eq!(eq.name().parse::<EquationId>().unwrap(), eq);
        }
        assert_eq!("stieltjes2k".parse::<EquationId>().unwrap(), EquationId::Eq3_1);
        assert!("bogus".parse::<EquationId>().is_err());
        assert_eq!("mu_3_24".parse::<MuEquationId>().unwrap(), MuEquationId::Mu3_24);
    }
}

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2n} / (2n (2n-1)) for n = 1..9
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
];

/// Principal branch of ln Γ(z) (continuous along Re z > 0).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 20.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// A point s = 1/2 + iτ of the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    tau: f64,
}

impl CriticalPoint {
    pub fn new(tau: f64) -> Result<Self> {
        if !tau.is_finite() {
            return Err(Error::Domain(format!("critical-line ordinate must be finite, got {tau}")));
        }
        Ok(CriticalPoint { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(0.5, self.tau)
    }

    /// The point 1 - s, which on the critical line is the conjugate.
    pub fn reflect(&self) -> CriticalPoint {
        CriticalPoint { tau: -self.tau }
    }
}

pub const GAMMA_TAU_LIMIT: f64 = 200.0;

/// Γ(1/2 + iτ) for |τ| ≤ 200.
pub fn gamma_critical(tau: f64) -> Result<Complex64> {
    if !tau.is_finite() || tau.abs() > GAMMA_TAU_LIMIT {
        return Err(Error::Domain(format!("gamma_critical needs |tau| <= 200, got {tau}")));
    }
    Ok(ln_gamma(Complex64::new(0.5, tau)).exp())
}

/// ψ(1/2 + m) for m ≥ 0 by upward recurrence from ψ(1/2) = -γ - 2 ln 2.
pub fn digamma_half(m: u32) -> f64 {
    let mut psi = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
    for j in 0..m {
        psi += 1.0 / (j as f64 + 0.5);
    }
    psi
}

/// ψ(-1/2 - 2k) by downward recurrence ψ(x) = ψ(x+1) - 1/x from ψ(1/2).
pub fn digamma_neg_half(k: u32) -> Result<f64> {
    if k > 200 {
        return Err(Error::Domain(format!("digamma_neg_half needs k <= 200, got {k}")));
    }
    let mut psi = digamma_half(0);
    let mut x = 0.5;
    let target = -0.5 - 2.0 * k as f64;
    while x > target {
        x -= 1.0;
        psi -= 1.0 / x;
    }
    Ok(psi)
}

/// (3/2)_{2k}, in log space once the product overflows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pochhammer {
    Value(f64),
    Log { ln_abs: f64, sign: f64 },
}

impl Pochhammer {
    pub fn ln_abs(&self) -> f64 {
        match *self {
            Pochhammer::Value(v) => v.abs().ln(),
            Pochhammer::Log { ln_abs, .. } => ln_abs,
        }
    }

    pub fn sign(&self) -> f64 {
        match *self {
            Pochhammer::Value(v) => v.signum(),
            Pochhammer::Log { sign, .. } => sign,
        }
    }

    /// Plain value; infinite when only the logarithm is representable.
    pub fn value(&self) -> f64 {
        match *self {
            Pochhammer::Value(v) => v,
            Pochhammer::Log { sign, .. } => sign * f64::INFINITY,
        }
    }
}

pub fn pochhammer_3half(k: u32) -> Result<Pochhammer> {
    if k > 200 {
        return Err(Error::Domain(format!("pochhammer_3half needs k <= 200, got {k}")));
    }
    let mut prod = 1.0f64;
    let mut ln_abs = 0.0f64;
    let mut in_log = false;
    for j in 0..2 * k {
        let factor = 1.5 + j as f64;
        if !in_log {
            let next = prod * factor;
            if next.is_finite() {
                prod = next;
                continue;
            }
            in_log = true;
            ln_abs = prod.ln();
        }
        ln_abs += factor.ln();
    }
    Ok(if in_log {
        Pochhammer::Log { ln_abs, sign: 1.0 }
    } else {
        Pochhammer::Value(prod)
    })
}

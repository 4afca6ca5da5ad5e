use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;
const SERIES_LIMIT: f64 = 4.0;
const ASYMPTOTIC_FROM: f64 = 40.0;

/// Nodes and weights for ∫₀^∞ e^{-v} φ(v) dv (exp-sinh substitution, weights include e^{-v}).
pub(crate) fn laplace_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let h = 1.0 / 32.0;
        let mut out = Vec::new();
        let mut w: f64 = -4.0;
        while w <= 3.0 + 1e-12 {
            let v = (0.5 * PI * w.sinh()).exp();
            let weight = h * 0.5 * PI * w.cosh() * v * (-v).exp();
            if weight > 0.0 {
                out.push((v, weight));
            }
            w += h;
        }
        out
    })
}

// ∫₀^∞ e^{-v} (y + i v)^{-1/2} dv for y > 4
fn tail_integral(y: f64) -> Complex64 {
    if y >= ASYMPTOTIC_FROM {
        // x^{-1/2} Σ (1/2)_n (-i/y)^n, truncated at the smallest term
        let z = Complex64::new(0.0, -1.0 / y);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let mut n = 0.0;
        loop {
            let next = term * z * (n + 0.5);
            if next.norm() >= term.norm() || next.norm() < 1e-18 * sum.norm() {
                if next.norm() < term.norm() {
                    sum += next;
                }
                break;
            }
            sum += next;
            term = next;
            n += 1.0;
        }
        return sum / y.sqrt();
    }
    laplace_rule()
        .iter()
        .map(|&(v, w)| Complex64::new(y, v).powf(-0.5) * w)
        .sum()
}

// √(2/π) ∫₀^{√y} e^{i t²} dt by its Maclaurin series
fn series(y: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(y.sqrt(), 0.0); // i^n y^{n+1/2} / n!
    let mut n = 0u32;
    loop {
        let term = pow / (2.0 * n as f64 + 1.0);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) && n > 2 {
            break;
        }
        n += 1;
        pow *= Complex64::new(0.0, y / n as f64);
        if n > 200 {
            break;
        }
    }
    sum * SQRT_2_OVER_PI
}

/// Fresnel integrals in the argument-√x convention:
/// S(x) = √(2/π)∫₀^{√x} sin t² dt, C(x) = √(2/π)∫₀^{√x} cos t² dt.
pub fn fresnel_pair(x: f64) -> Result<(f64, f64)> {
    if !(x >= 0.0) || x.is_infinite() {
        if x == f64::INFINITY {
            return Ok((0.5, 0.5));
        }
        return Err(Error::Domain(format!("fresnel_pair needs x >= 0, got {x}")));
    }
    if x <= SERIES_LIMIT {
        let z = series(x);
        return Ok((z.im, z.re));
    }
    // C + iS = (1+i)/2 - √(2/π) (i/2) e^{ix} J
    let e = Complex64::new(0.0, 0.5) * Complex64::new(0.0, x).exp() * tail_integral(x);
    let z = Complex64::new(0.5, 0.5) - e * SQRT_2_OVER_PI;
    Ok((z.im, z.re))
}

/// sin(x)(S(x) - 1/2) + cos(x)(C(x) - 1/2): the decaying part of the
/// Fresnel inverse kernel sin·S + cos·C = (sin + cos)/2 + deviation.
/// Equals -1/2 at 0 and decays like x^{-3/2}.
pub fn fresnel_deviation(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        let z = series(x.max(0.0));
        return x.sin() * (z.im - 0.5) + x.cos() * (z.re - 0.5);
    }
    tail_integral(x).im / (2.0 * PI).sqrt()
}

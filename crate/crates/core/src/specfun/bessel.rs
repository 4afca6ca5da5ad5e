use std::f64::consts::PI;

use super::gamma::EULER_GAMMA;
use super::fresnel::laplace_rule;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_finite, QuadratureConfig};

/// Modified Bessel function K0(x), x > 0.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("bessel_k0 needs x > 0, got {x}")));
    }
    Ok(k0_unchecked(x))
}

pub(crate) fn k0_unchecked(x: f64) -> f64 {
    if x <= 2.0 {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut i0 = 1.0;
        let mut harmonic = 0.0;
        let mut rest = 0.0;
        for k in 1..40 {
            let kf = k as f64;
            term *= q / (kf * kf);
            harmonic += 1.0 / kf;
            i0 += term;
            rest += term * harmonic;
            if term < 1e-18 {
                break;
            }
        }
        -((0.5 * x).ln() + EULER_GAMMA) * i0 + rest
    } else {
        // Steed's continued fraction (Temme's CF2) at order zero
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..10_000 {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < 1e-17 {
                break;
            }
        }
        let _ = h;
        (PI / (2.0 * x)).sqrt() * (-x).exp() / s
    }
}

/// L(x) = ∫₀^∞ y K0(y) / √(y² + x²) dy.  L(0) = π/2, L(x) ~ 1/x.
///
/// S_{-1/2,1/2}(x) = L(x)/√x, so the Lommel part of the sine-minus-cosine
/// composition kernel is (2√x/π) S_{-1/2,1/2}(x) = (2/π) L(x).
pub fn lommel_kernel(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("lommel_kernel needs finite x > 0, got {x}")));
    }
    // the K0 factor has no mass beyond y ≈ 50, so the split never goes past it
    let b = x.clamp(1.0, 50.0);
    let scale = 1.0 / x.max(1.0);
    let cfg = QuadratureConfig {
        abs_tol: 1e-10 * scale,
        rel_tol: 1e-12,
        ..Default::default()
    };
    let integrand = |y: f64| {
        if y <= 0.0 {
            0.0
        } else {
            y * k0_unchecked(y) / (y * y + x * x).sqrt()
        }
    };
    let head = integrate_finite(integrand, 0.0, b, &cfg)?;
    let tail = integrate_finite(
        |v: f64| {
            if v <= 0.0 {
                0.0
            } else {
                integrand(b - v.ln()) / v
            }
        },
        0.0,
        1.0,
        &cfg,
    )?;
    Ok(head.value + tail.value)
}

/// Sine-type Lommel kernel S_{-1/2,1/2}(x) = L(x)/√x.
pub fn lommel_s_half(x: f64) -> Result<f64> {
    Ok(lommel_kernel(x)? / x.sqrt())
}

/// (2/π) x^{-2} L(1/x), the inverted-argument form, also written as
/// (2x^{-3/2}/π) S_{-3/2,-1/2}(1/x).  Kept for comparison only: it is not
/// the Lommel part of the cosine composition kernel (see `cosine_aux`).
pub fn lommel_inverted_form(x: f64) -> Result<f64> {
    Ok(2.0 / PI * lommel_kernel(1.0 / x)? / (x * x))
}

const SICI_SERIES_LIMIT: f64 = 4.0;

fn sici_series(y: f64) -> (f64, f64) {
    let y2 = y * y;
    let mut si = 0.0;
    let mut ci = 0.0;
    // t_n = (-1)^n y^{2n+1}/(2n+1)!,  u_n = (-1)^n y^{2n}/(2n)!
    let mut t = y;
    let mut u = 1.0;
    for n in 0..60 {
        let nf = n as f64;
        si += t / (2.0 * nf + 1.0);
        if n > 0 {
            ci += u / (2.0 * nf);
        }
        u = -u * y2 / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
        t = -t * y2 / ((2.0 * nf + 2.0) * (2.0 * nf + 3.0));
        if t.abs() < 1e-18 && u.abs() < 1e-18 {
            break;
        }
    }
    (si, EULER_GAMMA + y.ln() + ci)
}

/// Auxiliary function of the sine/cosine integrals, f(y) = ∫₀^∞ e^{-yu}/(1+u²) du.
/// Coincides with `lommel_kernel`; computed here by an independent route.
pub fn sine_aux(y: f64) -> f64 {
    if y <= 0.0 {
        return PI / 2.0;
    }
    if y <= SICI_SERIES_LIMIT {
        let (si, ci) = sici_series(y);
        return ci * y.sin() - (si - PI / 2.0) * y.cos();
    }
    laplace_rule()
        .iter()
        .map(|&(v, w)| {
            let r = v / y;
            w / (1.0 + r * r)
        })
        .sum::<f64>()
        / y
}

/// Auxiliary function g(y) = ∫₀^∞ u e^{-yu}/(1+u²) du; logarithmic at 0.
/// Its Mellin transform is (π/2) Γ(s)/sin(πs/2).
pub fn cosine_aux(y: f64) -> f64 {
    if y <= 0.0 {
        return f64::INFINITY;
    }
    if y <= SICI_SERIES_LIMIT {
        let (si, ci) = sici_series(y);
        return -ci * y.cos() - (si - PI / 2.0) * y.sin();
    }
    laplace_rule()
        .iter()
        .map(|&(v, w)| {
            let r = v / y;
            w * r / (1.0 + r * r)
        })
        .sum::<f64>()
        / y
}

/// e^x E1(x), x > 0; the Stieltjes transform of e^{-t}.
pub fn exp_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("exp_e1 needs x > 0, got {x}")));
    }
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x / kf;
            sum += term / kf;
            if term.abs() < 1e-18 {
                break;
            }
        }
        Ok(x.exp() * (-EULER_GAMMA - x.ln() - sum))
    } else {
        // modified Lentz on 1/(x+1- 1/(x+3- 4/(x+5- ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        Ok(h)
    }
}

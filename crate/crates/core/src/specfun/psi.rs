//! The ψ-series kernels of the inverse cosine/sine iterated half-Hartley
//! transforms,
//!
//!   k_c(y) = (√y/π) Σ t_k [1 + (2/π)(ψ(-1/2-2k) - ln y)],
//!   k_s(y) = (√y/π) Σ t_k [1 - (2/π)(ψ(-1/2-2k) - ln y)],
//!   t_k = (-1)^k y^{2k} / (3/2)_{2k}.
//!
//! The series is entire but its terms reach e^y in size, so it is summed in
//! double-double up to y = 30.  Past that the decaying parts
//! r_c = k_c - cos y/√(2π) and r_s = k_s - sin y/√(2π) are taken from their
//! asymptotic expansion, whose terms are the residues at s = 3/2 + 2k.

use std::f64::consts::PI;

use super::gamma::digamma_half;
use crate::dd::Dd;

/// Arguments up to which the power series is summed.
pub const PSI_SERIES_LIMIT: f64 = 30.0;

const PSI_HALF: Dd = Dd::new(-1.963_510_026_021_423_5, 6.958_428_133_802_03e-17);
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// (S0, Sψ) = (Σ t_k, Σ ψ(-1/2-2k) t_k), each accurate to ~1e-16 absolute.
fn series_sums(y: f64) -> (f64, f64) {
    let (y2h, y2l) = {
        let p = y * y;
        (p, y.mul_add(y, -p))
    };
    let y2 = Dd::new(y2h, y2l);
    let mut t = Dd::from_f64(1.0);
    let mut psi = PSI_HALF.add(Dd::from_f64(2.0));
    let mut s0 = t;
    let mut sp = t.mul(psi);
    let mut k = 0u32;
    loop {
        k += 1;
        let kk = f64::from(k);
        t = t.mul(y2).div_f64(4.0 * kk * kk - 0.25).neg();
        psi = psi
            .add(Dd::from_f64(1.0).div_f64(2.0 * kk - 0.5))
            .add(Dd::from_f64(1.0).div_f64(2.0 * kk + 0.5));
        s0 = s0.add(t);
        let term = t.mul(psi);
        sp = sp.add(term);
        if 2.0 * kk > y && term.hi.abs() < 1e-34 * sp.hi.abs().max(1.0) {
            break;
        }
    }
    (s0.to_f64(), sp.to_f64())
}

fn series_kernels(y: f64) -> (f64, f64) {
    if y == 0.0 {
        return (0.0, 0.0);
    }
    let (s0, sp) = series_sums(y);
    let mix = 2.0 / PI * (sp - y.ln() * s0);
    let pre = y.sqrt() / PI;
    (pre * (s0 + mix), pre * (s0 - mix))
}

/// Asymptotic (r_c, r_s) for large y.
fn asymptotic_remainders(y: f64) -> (f64, f64) {
    let ly = y.ln();
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    // g_k = Γ(3/2 + 2k) y^{-3/2-2k}
    let mut g = 0.5 * PI.sqrt() * y.powf(-1.5);
    let (mut hc, mut hs) = (0.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 0u32..200 {
        if k > 0 {
            let s0 = 1.5 + 2.0 * f64::from(k);
            g *= (s0 - 2.0) * (s0 - 1.0) / (y * y);
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // cos(π s0/2) = -(-1)^k/√2, sin(π s0/2) = (-1)^k/√2
        let (cs, sn) = (-sign * r2, sign * r2);
        let d = digamma_half(1 + 2 * k) - ly;
        let tc = g * (d * cs - 0.5 * PI * sn);
        let ts = g * (d * sn + 0.5 * PI * cs);
        let size = tc.abs() + ts.abs();
        if size > prev {
            break;
        }
        hc += tc;
        hs += ts;
        prev = size;
        if size < 1e-17 * (hc.abs() + hs.abs()) {
            break;
        }
    }
    let scale = 4.0 / (PI * PI) / (2.0 * (2.0 * PI).sqrt());
    (scale * hc, scale * hs)
}

/// Decaying parts (r_c, r_s) of the ψ-series kernels, y ≥ 0.
pub fn psi_kernel_remainders(y: f64) -> (f64, f64) {
    if y <= PSI_SERIES_LIMIT {
        let (kc, ks) = series_kernels(y);
        (kc - y.cos() * INV_SQRT_2PI, ks - y.sin() * INV_SQRT_2PI)
    } else {
        asymptotic_remainders(y)
    }
}

/// (k_c(y), k_s(y)), y ≥ 0.
pub fn psi_kernels(y: f64) -> (f64, f64) {
    if y <= PSI_SERIES_LIMIT {
        series_kernels(y)
    } else {
        let (rc, rs) = asymptotic_remainders(y);
        (rc + y.cos() * INV_SQRT_2PI, rs + y.sin() * INV_SQRT_2PI)
    }
}

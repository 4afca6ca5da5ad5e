//! Special functions of the transform kernels: Γ on the critical line,
//! ψ at negative half-integers, Fresnel integrals, K0, the Lommel kernel
//! (3/2)_{2k} and the ψ-series inverse kernels.

mod bessel;
mod fresnel;
mod gamma;
mod psi;

pub use bessel::{bessel_k0, cosine_aux, exp_e1, lommel_inverted_form, lommel_kernel, lommel_s_half, sine_aux};
pub use fresnel::{fresnel_deviation, fresnel_pair};
pub use psi::{psi_kernel_remainders, psi_kernels, PSI_SERIES_LIMIT};
pub use gamma::{
    digamma_half, digamma_neg_half, gamma_critical, ln_gamma, pochhammer_3half, CriticalPoint, Pochhammer,
    EULER_GAMMA, GAMMA_TAU_LIMIT,
};

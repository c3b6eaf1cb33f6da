//! Finite Ginzburg–Kaplan theory: `B̃`, the Γ operator and `γ̃`, zeta and dual zeta operators,
//! and the special functionals of the case `π ≅ τ∨`.

mod factor;
mod special;
mod zeta;

pub use factor::{b_tilde, b_tilde_table, class_function_residual, gamma_operator, gk_gamma, GammaResult};
pub use special::{
    bessel_zeta, dual_special_argument, exceptional_terms, lambda1, lambda1_averaged, lambda1_dual,
    lambda1_dual_functional, lambda1_functional, lambda2, lambda2_dual, lambda2_dual_functional,
    lambda2_dual_normalization, lambda2_functional, paired_whittaker_vectors, swap_reduction_constant,
    tau_whittaker_function, ExceptionalTerms, ModifiedFeResiduals,
};
pub use zeta::{dual_zeta_operator, zeta_argument, zeta_operator};

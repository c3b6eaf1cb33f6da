//! Level-zero local factors as rational functions in `X = ω_Π(ϖ) ω_ρ(ϖ) q^{−cs}`, and the
//! evaluation rules for lifted Whittaker functions. No p-adic objects are modeled: the local field
//! enters only through valuations, residue reductions and unit images.

mod factors;
mod lift;
mod ratfun;

pub use factors::{
    functional_equation_mismatch, jpss_gamma, local_dual_zeta, local_functional_equation_check, local_gamma,
    local_zeta, LevelZeroParams, LocalInputs,
};
pub use lift::{DiagonalCorner, LiftedWhittakerRule};
pub use ratfun::{Poly, RatFun, COEFF_TOL};

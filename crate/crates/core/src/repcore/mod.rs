//! Unitary matrix models of representations of `GL_n(F_q)`: the Gelfand–Graev model, its
//! decomposition into generic irreducibles, cuspidality, Whittaker and Bessel data.

mod decompose;
mod gelfand_graev;
mod rep;
mod schur;

pub use decompose::{
    commutant_probe_residual, cuspidals, decompose_multiplicity_free, generic_irreducibles, group_average,
    subspace_character_norms,
};
pub use gelfand_graev::{GelfandGraev, MonomialMap, MAX_GG_DIM};
pub use rep::{dual_pairing, Action, Rep, RepSource, WhittakerFunctional};
pub use schur::swap_identity_residual;

//! Matrices over `F_q`, enumeration of `GL_n(F_q)`, parabolic coset tables and the
//! structural block matrices used by the Whittaker and zeta constructions.

mod coset;
mod group;
mod matrix;
mod structural;

pub use coset::{CosetDecomposition, CosetKind, CosetTable, MAX_COSETS};
pub use group::{enumerate_group, generators, gl_order, index_of_parabolic, Composition, MAX_ENUMERATED_ORDER};
pub use matrix::{FqMatrix, MAX_N};
pub use structural::{
    bessel_argument, diag_k, dual_zeta_argument, kappa_matrix, rectangular_matrices, y_group, KcCharacter,
    RootPosition,
};

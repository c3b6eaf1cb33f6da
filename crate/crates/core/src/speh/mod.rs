//! Speh representations inside `τ^{∘c}`: Hecke operators, Speh and Steinberg projectors,
//! `(k,c)` Whittaker vectors and functionals, Bessel–Speh functions.

mod hecke;
mod model;
mod projector;
mod whittaker;

pub use hecke::{all_reduced_words, apply_columns, block_permutation, block_transposition, length, reduced_words, HeckeAlgebra, Perm};
pub use model::{trace_of_product, CosetOperator, InducedModel, TauTable, MAX_DENSE_DIM, MAX_MODEL_DIM};
pub use projector::{apply_projector, poincare_poly, projector_trace, ProjectorForm, ProjectorKind};
pub use whittaker::{kc_functional_recursive, plan_coefficients, recursive_plan, EvaluationTerm, KcProjector, SpehModel};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gamma::{lambda1_dual_functional, lambda1_functional};
use crate::glgroup::{FqMatrix, KcCharacter};
use crate::linalg::{bilinear, C64, ZERO};
use crate::speh::{kc_functional_recursive, plan_coefficients, recursive_plan, InducedModel};

/// Which corner of `GL_{kc}` a diagonal `t = diag(ϖ^{i_1}, …, ϖ^{i_c})` occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalCorner {
    /// `diag(t, I_{(k−1)c})`.
    Leading,
    /// `diag(I_{(k−1)c}, t)`.
    Trailing,
}

/// Evaluation rules for the lift `𝓛W_f` of a finite `(k,c)` Whittaker function to the level-zero
/// Speh representation: values on `z·u·k₀` and on diagonal elements with valuations.
///
/// `W_f(g) = λ(ρ(g)f)` for the recursive functional with the given top-level split.
#[derive(Debug, Clone)]
pub struct LiftedWhittakerRule {
    model: Arc<InducedModel>,
    f: Vec<C64>,
    split: (usize, usize),
    functional: Vec<C64>,
    character: KcCharacter,
    u_rho: C64,
}

impl LiftedWhittakerRule {
    /// `u_rho = ω_ρ(ϖ)` for the level-zero `ρ` built from `τ`; the Speh representation of `ρ` then
    /// has central character `ω_ρ^c`.
    pub fn new(model: Arc<InducedModel>, f: Vec<C64>, u_rho: C64, split: Option<(usize, usize)>) -> Result<Self> {
        if f.len() != model.dim() {
            return Err(Error::Inconsistent(format!("vector of length {} in a model of dimension {}", f.len(), model.dim())));
        }
        if (u_rho.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("ω_ρ(ϖ) must have modulus 1".into()));
        }
        let c = model.c();
        let (split, functional) = if c == 1 {
            ((1, 0), plan_coefficients(&model, &recursive_plan(&model, 1, None)?))
        } else {
            let split = split.unwrap_or((1, c - 1));
            (split, kc_functional_recursive(&model, split)?)
        };
        let character = KcCharacter::new(model.k(), c, model.psi());
        Ok(LiftedWhittakerRule { model, f, split, functional, character, u_rho })
    }

    pub fn model(&self) -> &Arc<InducedModel> {
        &self.model
    }

    /// The finite Whittaker function `W_f(g)`.
    pub fn finite(&self, g: &FqMatrix) -> C64 {
        bilinear(&self.functional, &self.model.apply_action(g, &self.f))
    }

    /// `𝓛W(ϖ^m · u · k₀) = ω_ρ(ϖ)^{cm} ψ_{(k,c)}(u) W(k̄₀)` for `u ∈ U_{(c^k)}` and `k₀` given by its
    /// reduction.
    pub fn eval(&self, valuation: i64, u: &FqMatrix, k0: &FqMatrix) -> Result<C64> {
        let psi = self.character.eval(u)?;
        let center = self.u_rho.powi((self.model.c() as i64 * valuation) as i32);
        Ok(center * psi * self.finite(k0))
    }

    /// Necessary condition for `𝓛W` to be nonzero on the diagonal element with the given valuations.
    pub fn diagonal_supported(&self, corner: DiagonalCorner, valuations: &[i64]) -> bool {
        let ok = match corner {
            DiagonalCorner::Leading => valuations.iter().all(|&i| i >= 0),
            DiagonalCorner::Trailing => valuations.iter().all(|&i| i <= 0),
        };
        if !ok {
            return false;
        }
        self.model.k() <= self.model.c() || valuations.iter().all(|&i| i == 0)
    }

    /// `𝓛W` on `diag(t, I)` or `diag(I, t)`. Zero outside the support; `W(I)` when `t` is a unit;
    /// for `k = c` and `t = ϖ^{±m} I_c` the special value
    /// `ω_ρ(ϖ)^{±m} q^{−(m+1)(c−1)C(c,2)} ⟨f(I), Λ₁⟩` (resp. `Λ₁∨`).
    pub fn diagonal_value(&self, corner: DiagonalCorner, valuations: &[i64]) -> Result<C64> {
        let (k, c, q) = (self.model.k(), self.model.c(), self.model.q());
        if valuations.len() != c {
            return Err(Error::Domain(format!("expected {c} valuations, got {}", valuations.len())));
        }
        if !self.diagonal_supported(corner, valuations) {
            return Ok(ZERO);
        }
        if valuations.iter().all(|&i| i == 0) {
            return Ok(self.finite(&FqMatrix::identity(k * c, q)));
        }
        if k < c {
            return Err(Error::Unsupported("diagonal values with k < c".into()));
        }
        let first = valuations[0];
        if valuations.iter().any(|&i| i != first) {
            return Ok(ZERO);
        }
        let m = first.unsigned_abs() as i32;
        let needed = match corner {
            DiagonalCorner::Leading => (1, c - 1),
            DiagonalCorner::Trailing => (c - 1, 1),
        };
        if self.split != needed {
            return Err(Error::Inconsistent(format!(
                "the special value on this corner needs W built from the split {needed:?}, not {:?}",
                self.split
            )));
        }
        let id = FqMatrix::identity(k * c, q);
        let (functional, unit) = match corner {
            DiagonalCorner::Leading => (lambda1_functional(&self.model, &id)?, self.u_rho.powi(m)),
            DiagonalCorner::Trailing => (lambda1_dual_functional(&self.model, &id)?, self.u_rho.powi(-m)),
        };
        let binom = (c * (c - 1) / 2) as f64;
        let scale = (q as f64).powf(-((m + 1) as f64) * (c - 1) as f64 * binom);
        Ok(unit * scale * bilinear(&functional, &self.f))
    }
}

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::Fq;
use crate::glgroup::{bessel_argument, enumerate_group, FqMatrix};
use crate::linalg::{sup_norm, CMat, C64};
use crate::repcore::Rep;
use crate::speh::SpehModel;

/// `γ̃(π × τ, ψ)` with the sign-corrected `γ = ω_π(−1)^{k−1} γ̃` and the distance of the
/// Γ operator from the scalar `γ̃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult {
    pub gamma_tilde: C64,
    pub gamma: C64,
    pub schur_residual: f64,
}

fn require_gamma_shape(speh: &SpehModel, pi: &Rep) -> Result<()> {
    let model = speh.model();
    if model.k() < 2 {
        return Err(Error::Unsupported("gamma factors need k >= 2".into()));
    }
    if pi.n() != model.c() || pi.q() != model.q() {
        return Err(Error::Inconsistent(format!(
            "pi lives on GL_{}(F_{}) but the Speh model needs GL_{}(F_{})",
            pi.n(),
            pi.q(),
            model.c(),
            model.q()
        )));
    }
    Ok(())
}

/// `B̃(h) = B([[0, I_{(k−1)c}], [h, 0]])` for `h ∈ GL_c`.
pub fn b_tilde(speh: &SpehModel, h: &FqMatrix) -> Result<C64> {
    let model = speh.model();
    if h.n() != model.c() || h.q() != model.q() {
        return Err(Error::Domain(format!("B̃ needs an element of GL_{}(F_{})", model.c(), model.q())));
    }
    Ok(speh.bessel(&bessel_argument(h, model.k())?))
}

/// `B̃` on every element of `GL_c`, in enumeration order.
pub fn b_tilde_table(speh: &SpehModel) -> Result<Vec<(FqMatrix, C64)>> {
    let group = enumerate_group(speh.model().c(), speh.model().q())?;
    group.into_par_iter().map(|h| Ok((h, b_tilde(speh, &h)?))).collect()
}

/// `Γ = q^{(k−2)c²/2} Σ_h B̃(h) π(h)` as a matrix on the space of `π`.
pub fn gamma_operator(speh: &SpehModel, pi: &Rep) -> Result<CMat> {
    require_gamma_shape(speh, pi)?;
    let model = speh.model();
    let (k, c, q) = (model.k(), model.c(), model.q());
    let scale = (q as f64).powf((k as f64 - 2.0) * (c * c) as f64 / 2.0);
    let mut acc = CMat::zeros(pi.dim(), pi.dim());
    for (h, b) in b_tilde_table(speh)? {
        acc += pi.eval(&h)?.as_ref() * b;
    }
    Ok(acc * C64::new(scale, 0.0))
}

/// The Ginzburg–Kaplan gamma factor of `π × τ` for the `τ` underlying `speh`.
pub fn gk_gamma(speh: &SpehModel, pi: &Rep, tol: f64) -> Result<GammaResult> {
    let gamma_op = gamma_operator(speh, pi)?;
    let d = pi.dim();
    let gamma_tilde = gamma_op.trace() / C64::new(d as f64, 0.0);
    let schur_residual = sup_norm(&(gamma_op - CMat::identity(d, d) * gamma_tilde));
    let field = Fq::new(pi.q())?;
    let sign = pi.central_character(tol)?.eval(field.elem(-1))?;
    let gamma = gamma_tilde * sign.powu(speh.model().k() as u32 - 1);
    Ok(GammaResult { gamma_tilde, gamma, schur_residual })
}

/// Largest `|B̃(g h g⁻¹) − B̃(h)|` over the given pairs.
pub fn class_function_residual(speh: &SpehModel, pairs: &[(FqMatrix, FqMatrix)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (g, h) in pairs {
        let conj = g.mul(h).mul(&g.inv()?);
        worst = worst.max((b_tilde(speh, &conj)? - b_tilde(speh, h)?).norm());
    }
    Ok(worst)
}

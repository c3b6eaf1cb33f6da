//! The functionals `Λ₁`, `Λ₁∨`, `Λ₂`, `Λ₂∨` of the case `k = c`, and the finite identities
//! that tie them to the zeta operators when `π ≅ τ∨`.
//!
//! Arguments of the form `f_{τ∘Speh(τ,c−1)}(x)` and `f_{Speh(τ,c−1)∘τ}(x)` are handled by
//! currying inside the ambient model `τ^{∘c}`: `f_{τ∘S}(x)(g') = f(diag(I_c, g') x)` and
//! `f_{S∘τ}(x)(g') = f(diag(g', I_c) x)`. Each curried functional is returned as a coefficient
//! vector `a` with value `Σ a_i f_i`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::glgroup::{bessel_argument, enumerate_group, gl_order, kappa_matrix, rectangular_matrices, y_group, FqMatrix};
use crate::linalg::{bilinear, CMat, CVec, C64, ZERO};
use crate::repcore::Rep;
use crate::speh::{kc_functional_recursive, plan_coefficients, recursive_plan, EvaluationTerm, InducedModel, SpehModel};

use super::zeta::{dual_zeta_operator, zeta_operator};

fn require_square(model: &InducedModel) -> Result<()> {
    if model.k() != model.c() {
        return Err(Error::Inconsistent(format!("special functionals need k = c, got k={} c={}", model.k(), model.c())));
    }
    if model.c() < 2 {
        return Err(Error::Domain("special functionals need c >= 2".into()));
    }
    Ok(())
}

/// `ℓ_τ(τ(g) v)`.
pub fn tau_whittaker_function(tau: &Rep, v: &[C64], g: &FqMatrix) -> Result<C64> {
    let w = tau.whittaker().ok_or_else(|| Error::Unsupported("τ carries no Whittaker functional".into()))?;
    let m = tau.eval(g)?;
    let moved: Vec<C64> = (0..tau.dim()).map(|i| (0..tau.dim()).map(|j| m[(i, j)] * v[j]).sum()).collect();
    Ok(w.eval(&moved))
}

fn whittaker_row(tau: &Rep) -> Result<Vec<C64>> {
    let w = tau.whittaker().ok_or_else(|| Error::Unsupported("τ carries no Whittaker functional".into()))?;
    Ok(w.coeffs.iter().copied().collect())
}

/// `diag(1, −g⁻¹)` for `g ∈ GL_{c−1}`.
fn one_minus_inverse(g: &FqMatrix) -> Result<FqMatrix> {
    let one = FqMatrix::identity(1, g.q());
    Ok(FqMatrix::block_diag(&[one, g.inv()?.neg()]))
}

/// `diag(g, 1)`.
fn with_one(g: &FqMatrix) -> FqMatrix {
    FqMatrix::block_diag(&[*g, FqMatrix::identity(1, g.q())])
}

/// One summand of the double sums over `(g, y) ∈ GL_{c−1} × 𝒴`: the argument of
/// `W_{f_{Speh(τ,c−1)}}` and the matrix acting on the lone `τ` factor.
struct Sample {
    sub_arg: FqMatrix,
    tau_arg: FqMatrix,
}

/// `(diag(g, I_{(c−1)²}) y κ_{1,c−1}, diag(1, −g⁻¹))` over `GL_{c−1} × 𝒴_{1,c−1}`; the groups are
/// those of the `(c−1, c)` recursion, so every matrix lives in `GL_{c(c−1)}`.
fn forward_samples(c: usize, q: u32) -> Result<Vec<Sample>> {
    let kappa = kappa_matrix(1, c - 1, c - 1, q)?;
    let ys = y_group(1, c - 1, c - 1, q)?;
    let pad = FqMatrix::identity((c - 1) * (c - 1), q);
    let mut out = Vec::new();
    for g in enumerate_group(c - 1, q)? {
        let left = FqMatrix::block_diag(&[g, pad]);
        let tau_arg = one_minus_inverse(&g)?;
        for y in &ys {
            out.push(Sample { sub_arg: left.mul(y).mul(&kappa), tau_arg });
        }
    }
    Ok(out)
}

/// `(diag(I_{(c−1)²}, −g⁻¹) y κ_{c−1,1}, diag(g, 1))` over `GL_{c−1} × 𝒴_{c−1,1}`.
fn backward_samples(c: usize, q: u32) -> Result<Vec<Sample>> {
    let kappa = kappa_matrix(c - 1, 1, c - 1, q)?;
    let ys = y_group(c - 1, 1, c - 1, q)?;
    let pad = FqMatrix::identity((c - 1) * (c - 1), q);
    let mut out = Vec::new();
    for g in enumerate_group(c - 1, q)? {
        let right = FqMatrix::block_diag(&[pad, g.inv()?.neg()]);
        let tau_arg = with_one(&g);
        for y in &ys {
            out.push(Sample { sub_arg: right.mul(y).mul(&kappa), tau_arg });
        }
    }
    Ok(out)
}

fn sample_count(c: usize, q: u32) -> Result<f64> {
    Ok(gl_order(c - 1, q) as f64 * y_group(1, c - 1, c - 1, q)?.len() as f64)
}

/// Where the lone `τ` factor sits in the ambient `τ^{∘c}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    First,
    Last,
}

fn embed(side: Side, sub: &FqMatrix, tau_part: &FqMatrix) -> FqMatrix {
    match side {
        Side::First => FqMatrix::block_diag(&[*tau_part, *sub]),
        Side::Last => FqMatrix::block_diag(&[*sub, *tau_part]),
    }
}

fn join_rows(side: Side, tau_row: Vec<C64>, sub_rows: &[Vec<C64>]) -> Vec<Vec<C64>> {
    match side {
        Side::First => std::iter::once(tau_row).chain(sub_rows.iter().cloned()).collect(),
        Side::Last => sub_rows.iter().cloned().chain(std::iter::once(tau_row)).collect(),
    }
}

/// Coefficient vector of `f ↦ ⟨f_{τ∘S}(x), Λ₁⟩` on the ambient model.
pub fn lambda1_functional(model: &InducedModel, x: &FqMatrix) -> Result<Vec<C64>> {
    require_square(model)?;
    let (c, q) = (model.c(), model.q());
    let ell = whittaker_row(model.tau())?;
    let sub = recursive_plan(model, c - 1, None)?;
    let mut plan = Vec::new();
    for s in forward_samples(c, q)? {
        for t in &sub {
            let g = embed(Side::First, &t.g.mul(&s.sub_arg), &s.tau_arg).mul(x);
            plan.push(EvaluationTerm { g, rows: join_rows(Side::First, ell.clone(), &t.rows), coeff: t.coeff });
        }
    }
    Ok(plan_coefficients(model, &plan))
}

/// Coefficient vector of `f ↦ ⟨f_{S∘τ}(x), Λ₁∨⟩` on the ambient model.
pub fn lambda1_dual_functional(model: &InducedModel, x: &FqMatrix) -> Result<Vec<C64>> {
    require_square(model)?;
    let (c, q) = (model.c(), model.q());
    let ell = whittaker_row(model.tau())?;
    let sub = recursive_plan(model, c - 1, None)?;
    let mut plan = Vec::new();
    for s in backward_samples(c, q)? {
        for t in &sub {
            let g = embed(Side::Last, &t.g.mul(&s.sub_arg), &s.tau_arg).mul(x);
            plan.push(EvaluationTerm { g, rows: join_rows(Side::Last, ell.clone(), &t.rows), coeff: t.coeff });
        }
    }
    Ok(plan_coefficients(model, &plan))
}

/// Coefficient vector of `f ↦ ⟨v ⊗ v∨ ⊗ f_{τ∘S}(x), Λ₂⟩` for `v ∈ τ∨`, `v∨ ∈ τ`.
pub fn lambda2_functional(model: &InducedModel, v: &[C64], v_dual: &[C64], x: &FqMatrix) -> Result<Vec<C64>> {
    special_second(model, Side::First, v, v_dual, x)
}

/// Coefficient vector of `f ↦ ⟨v ⊗ v∨ ⊗ f_{S∘τ}(x), Λ₂∨⟩` for `v ∈ τ∨`, `v∨ ∈ τ`.
pub fn lambda2_dual_functional(model: &InducedModel, v: &[C64], v_dual: &[C64], x: &FqMatrix) -> Result<Vec<C64>> {
    special_second(model, Side::Last, v, v_dual, x)
}

fn special_second(model: &InducedModel, side: Side, v: &[C64], v_dual: &[C64], x: &FqMatrix) -> Result<Vec<C64>> {
    require_square(model)?;
    let (c, q) = (model.c(), model.q());
    let tau = model.tau();
    let sub = recursive_plan(model, c - 1, None)?;
    let samples = match side {
        Side::First => forward_samples(c, q)?,
        Side::Last => backward_samples(c, q)?,
    };
    let inv = 1.0 / sample_count(c, q)?;
    let mut plan = Vec::new();
    let id = FqMatrix::identity(c, q);
    for s in samples {
        let weight = tau_whittaker_function(tau, v_dual, &s.tau_arg)? * inv;
        if weight == ZERO {
            continue;
        }
        for t in &sub {
            let g = embed(side, &t.g.mul(&s.sub_arg), &id).mul(x);
            plan.push(EvaluationTerm { g, rows: join_rows(side, v.to_vec(), &t.rows), coeff: t.coeff * weight });
        }
    }
    Ok(plan_coefficients(model, &plan))
}

/// `Λ₁(v_τ ⊗ f')` for `f'` in the model `τ^{∘(c−1)}` (`sub`), evaluated directly.
pub fn lambda1(sub: &InducedModel, v_tau: &[C64], f_sub: &[C64]) -> Result<C64> {
    let c = sub.c() + 1;
    if sub.k() != c {
        return Err(Error::Inconsistent("Λ₁ needs the (c−1)-fold model of τ on GL_c".into()));
    }
    let a = plan_coefficients(sub, &recursive_plan(sub, c - 1, None)?);
    let samples = forward_samples(c, sub.q())?;
    let terms: Vec<C64> = samples
        .par_iter()
        .map(|s| {
            let w_tau = tau_whittaker_function(sub.tau(), v_tau, &s.tau_arg)?;
            Ok(w_tau * bilinear(&a, &sub.apply_action(&s.sub_arg, f_sub)))
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// `Λ₁∨(f' ⊗ v_τ)` for `f'` in the model `τ^{∘(c−1)}` (`sub`), evaluated directly.
pub fn lambda1_dual(sub: &InducedModel, f_sub: &[C64], v_tau: &[C64]) -> Result<C64> {
    let c = sub.c() + 1;
    if sub.k() != c {
        return Err(Error::Inconsistent("Λ₁∨ needs the (c−1)-fold model of τ on GL_c".into()));
    }
    let a = plan_coefficients(sub, &recursive_plan(sub, c - 1, None)?);
    let samples = backward_samples(c, sub.q())?;
    let terms: Vec<C64> = samples
        .par_iter()
        .map(|s| {
            let w_tau = tau_whittaker_function(sub.tau(), v_tau, &s.tau_arg)?;
            Ok(w_tau * bilinear(&a, &sub.apply_action(&s.sub_arg, f_sub)))
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum())
}

/// `Λ₂(v∨_τ ⊗ v ⊗ v' ⊗ f') = ⟨v∨_τ, v'⟩ · Λ₁(v ⊗ f') / (|GL_{c−1}| |𝒴|)`.
pub fn lambda2(sub: &InducedModel, v_contra: &[C64], v: &[C64], v_prime: &[C64], f_sub: &[C64]) -> Result<C64> {
    let pairing = bilinear(v_contra, v_prime);
    if pairing == ZERO {
        return Ok(ZERO);
    }
    Ok(pairing * lambda1(sub, v, f_sub)? / sample_count(sub.c() + 1, sub.q())?)
}

/// `Λ₂∨(v∨_τ ⊗ v ⊗ f' ⊗ v') = ⟨v∨_τ, v'⟩ · Λ₁∨(f' ⊗ v) / (|GL_{c−1}| |𝒴|)`.
pub fn lambda2_dual(sub: &InducedModel, v_contra: &[C64], v: &[C64], f_sub: &[C64], v_prime: &[C64]) -> Result<C64> {
    let pairing = bilinear(v_contra, v_prime);
    if pairing == ZERO {
        return Ok(ZERO);
    }
    Ok(pairing * lambda1_dual(sub, f_sub, v)? / sample_count(sub.c() + 1, sub.q())?)
}

/// `w u_X` with `w = [[0, I_{(c−1)c}], [I_c, 0]]` and `u_X` the identity plus `X` in rows `0..c`,
/// columns `2c..c²`.
pub fn dual_special_argument(c: usize, x: &[u8], q: u32) -> Result<FqMatrix> {
    let w = bessel_argument(&FqMatrix::identity(c, q), c)?;
    let width = (c - 2) * c;
    let mut u = FqMatrix::identity(c * c, q);
    for i in 0..c {
        for j in 0..width {
            u.set(i, 2 * c + j, x[i * width + j] as i64);
        }
    }
    Ok(w.mul(&u))
}

/// The finite quantities that enter the exceptional (`π ≅ τ∨`) zeta and dual zeta series for
/// one datum `(W_f, v, v∨)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceptionalTerms {
    pub q: u32,
    pub c: usize,
    /// `⟨Z(W_f) v, v∨⟩`.
    pub zeta: C64,
    /// `⟨Z∨(W_f) v, v∨⟩`.
    pub dual_zeta: C64,
    /// `⟨v ⊗ v∨ ⊗ f_{τ∘S}(I), Λ₂⟩`.
    pub lambda2: C64,
    /// `Σ_X ⟨v ⊗ v∨ ⊗ f_{S∘τ}(w u_X), Λ₂∨⟩`.
    pub lambda2_dual_sum: C64,
}

/// Residuals of the two identities relating the zeta operators to `Λ₂`, `Λ₂∨` when `π ≅ τ∨`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedFeResiduals {
    /// `|⟨Z∨v,v∨⟩ − γ̃⟨Zv,v∨⟩ − q^{−c²/2} Λ₂|`.
    pub simple: f64,
    /// Mismatch of the constant coefficient in `T` of the two-sided polynomial identity.
    pub long_constant: f64,
    /// Mismatch of the coefficient of `T`.
    pub long_linear: f64,
}

impl ModifiedFeResiduals {
    pub fn max(&self) -> f64 {
        self.simple.max(self.long_constant).max(self.long_linear)
    }
}

fn qpow(q: u32, e: f64) -> C64 {
    C64::new((q as f64).powf(e), 0.0)
}

fn binom2(c: usize) -> f64 {
    (c * (c - 1) / 2) as f64
}

impl ExceptionalTerms {
    /// `q^{−c²(c−2)/2} Σ_X ⟨…, Λ₂∨⟩`, the bracket multiplying `Y/(1−Y)` in the dual series.
    pub fn lambda2_dual_term(&self) -> C64 {
        let c = self.c as f64;
        self.lambda2_dual_sum * qpow(self.q, -c * c * (c - 2.0) / 2.0)
    }

    /// The same datum rescaled (all four quantities are linear in `f`) so that `|⟨Z v, v∨⟩| = 1`.
    pub fn with_unit_zeta(&self) -> Result<Self> {
        let m = self.zeta.norm();
        if m < 1e-14 {
            return Err(Error::Domain("⟨Z v, v∨⟩ vanishes for this datum".into()));
        }
        let s = C64::new(1.0 / m, 0.0);
        Ok(ExceptionalTerms {
            zeta: self.zeta * s,
            dual_zeta: self.dual_zeta * s,
            lambda2: self.lambda2 * s,
            lambda2_dual_sum: self.lambda2_dual_sum * s,
            ..*self
        })
    }

    /// Evaluates both forms of the modified functional equation with the given `γ̃`; the long
    /// form does not involve `γ̃` and is compared coefficientwise in `T`.
    pub fn residuals(&self, gamma_tilde: C64) -> ModifiedFeResiduals {
        let (q, c) = (self.q, self.c as f64);
        let simple = (self.dual_zeta - gamma_tilde * self.zeta - qpow(q, -c * c / 2.0) * self.lambda2).norm();
        // (1 − T)Z + q^{−C(c,2)} Λ₂ T = (q^{c/2} T − q^{−c/2}) Z∨ + q^{−c·C(c,2)} Σ_X Λ₂∨
        let lhs0 = self.zeta;
        let lhs1 = -self.zeta + qpow(q, -binom2(self.c)) * self.lambda2;
        let rhs0 = -qpow(q, -c / 2.0) * self.dual_zeta + qpow(q, -c * binom2(self.c)) * self.lambda2_dual_sum;
        let rhs1 = qpow(q, c / 2.0) * self.dual_zeta;
        ModifiedFeResiduals { simple, long_constant: (lhs0 - rhs0).norm(), long_linear: (lhs1 - rhs1).norm() }
    }
}

fn require_exceptional(speh: &SpehModel, pi: &Rep) -> Result<()> {
    let model = speh.model();
    require_square(model)?;
    if pi.n() != model.c() || pi.q() != model.q() || pi.dim() != model.tau().dim() {
        return Err(Error::Inconsistent("π must be the contragredient of τ".into()));
    }
    Ok(())
}

/// Computes [`ExceptionalTerms`] for `W = W_f` (the recursive functional of `speh`), `v ∈ π = τ∨`
/// and `v∨ ∈ τ`.
pub fn exceptional_terms(speh: &SpehModel, pi: &Rep, f: &[C64], v: &[C64], v_dual: &[C64]) -> Result<ExceptionalTerms> {
    require_exceptional(speh, pi)?;
    let model = speh.model();
    let (c, q) = (model.c(), model.q());
    let w = |g: &FqMatrix| speh.whittaker_function_recursive(f, g);
    let pair = |m: &CMat| -> C64 {
        let mv = m * CVec::from_column_slice(v);
        bilinear(mv.as_slice(), v_dual)
    };
    let zeta = pair(&zeta_operator(pi, c, w)?);
    let dual_zeta = pair(&dual_zeta_operator(pi, c, w)?);
    let id = FqMatrix::identity(c * c, q);
    let lambda2 = bilinear(&lambda2_functional(model, v, v_dual, &id)?, f);
    let mut lambda2_dual_sum = ZERO;
    for x in rectangular_matrices(c, (c - 2) * c, q) {
        let arg = dual_special_argument(c, &x, q)?;
        lambda2_dual_sum += bilinear(&lambda2_dual_functional(model, v, v_dual, &arg)?, f);
    }
    Ok(ExceptionalTerms { q, c, zeta, dual_zeta, lambda2, lambda2_dual_sum })
}

/// Whittaker vectors `v_{τ∨} ∈ τ∨` and `v_τ ∈ τ` with `⟨v_τ, v_{τ∨}⟩ = 1`.
pub fn paired_whittaker_vectors(tau: &Rep) -> Result<(Vec<C64>, Vec<C64>)> {
    let w = whittaker_row(tau)?;
    let n2: f64 = w.iter().map(|z| z.norm_sqr()).sum();
    let n = n2.sqrt();
    let v_contra: Vec<C64> = w.iter().map(|z| z / n).collect();
    let v_tau: Vec<C64> = w.iter().map(|z| z.conj() / n).collect();
    Ok((v_contra, v_tau))
}

/// `q^{(c−1)·C(c,2)} ⟨v_{τ∨} ⊗ v_τ ⊗ f_{S∘τ}(w), Λ₂∨⟩` for the datum with `W_f = B_{Speh(τ,c)}`
/// relative to the functional built from the split `(c−1, 1)`; the expected value is `1/dim τ`.
pub fn lambda2_dual_normalization(speh: &SpehModel) -> Result<C64> {
    let model = speh.model();
    require_square(model)?;
    let (c, q) = (model.c(), model.q());
    let functional = kc_functional_recursive(model, (c - 1, 1))?;
    let vw = speh.whittaker_vector();
    let scale = bilinear(&functional, vw);
    if scale.norm() < 1e-12 {
        return Err(Error::Internal("recursive functional vanishes on the Whittaker vector".into()));
    }
    let f: Vec<C64> = vw.iter().map(|z| z / scale).collect();
    let (v_contra, v_tau) = paired_whittaker_vectors(model.tau())?;
    let arg = bessel_argument(&FqMatrix::identity(c, q), c)?;
    let value = bilinear(&lambda2_dual_functional(model, &v_contra, &v_tau, &arg)?, &f);
    Ok(value * qpow(q, (c - 1) as f64 * binom2(c)))
}

/// `Z(B)` for the Bessel–Speh function itself, whose only nonzero value on `diag(h, I)` is at
/// `h = I` when `k = c`.
pub fn bessel_zeta(speh: &SpehModel, pi: &Rep) -> Result<CMat> {
    zeta_operator(pi, speh.model().k(), |g| speh.bessel(g))
}

/// `|GL_c|⁻¹ Σ_h ⟨(τ(h) ⊗ id) f(I), Λ₁⟩ ⟨v, τ(h⁻¹) v∨⟩`, which the swap identity reduces to a
/// multiple of `⟨v ⊗ v∨ ⊗ f(I), Λ₂⟩`.
pub fn lambda1_averaged(speh: &SpehModel, f: &[C64], v: &[C64], v_dual: &[C64]) -> Result<C64> {
    let model = speh.model();
    require_square(model)?;
    let (c, q) = (model.c(), model.q());
    let tau = model.tau();
    let group = enumerate_group(c, q)?;
    let terms: Vec<C64> = group
        .par_iter()
        .map(|h| {
            let x = FqMatrix::block_diag(&[*h, FqMatrix::identity(c * (c - 1), q)]);
            let l1 = bilinear(&lambda1_functional(model, &x)?, f);
            let m = tau.eval(&h.inv()?)?;
            let moved: Vec<C64> = (0..tau.dim()).map(|i| (0..tau.dim()).map(|j| m[(i, j)] * v_dual[j]).sum()).collect();
            Ok(l1 * bilinear(v, &moved))
        })
        .collect::<Result<_>>()?;
    let total: C64 = terms.iter().sum();
    Ok(total / gl_order(c, q) as f64)
}

/// The constant relating [`lambda1_averaged`] to `⟨v ⊗ v∨ ⊗ f(I), Λ₂⟩`:
/// `|GL_{c−1}| |𝒴| q^{C(c,2)} (q^c − 1) / |GL_c|`.
pub fn swap_reduction_constant(c: usize, q: u32) -> Result<f64> {
    let qf = q as f64;
    Ok(sample_count(c, q)? * qf.powf(binom2(c)) * (qf.powi(c as i32) - 1.0) / gl_order(c, q) as f64)
}

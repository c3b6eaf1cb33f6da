use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

use super::ratfun::{Poly, RatFun};

/// Level-zero data: the finite shape plus the unit images `ω_Π(ϖ)`, `ω_ρ(ϖ)` and the signs
/// `ω_τ(−1)`, `ω_π(−1)`. All `s`-dependence enters through `X = ω_Π(ϖ) ω_ρ(ϖ) q^{−cs}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelZeroParams {
    pub q: u32,
    pub k: usize,
    pub c: usize,
    pub u_pi: C64,
    pub u_rho: C64,
    pub omega_tau_minus1: i8,
    pub omega_pi_minus1: i8,
}

impl LevelZeroParams {
    pub fn new(q: u32, k: usize, c: usize, u_pi: C64, u_rho: C64, omega_tau_minus1: i8, omega_pi_minus1: i8) -> Result<Self> {
        if (u_pi.norm() - 1.0).abs() > 1e-12 || (u_rho.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("uniformizer images must have modulus 1".into()));
        }
        if omega_tau_minus1.abs() != 1 || omega_pi_minus1.abs() != 1 {
            return Err(Error::Domain("ω(−1) must be ±1".into()));
        }
        if k == 0 || c == 0 {
            return Err(Error::Domain("k and c must be positive".into()));
        }
        Ok(LevelZeroParams { q, k, c, u_pi, u_rho, omega_tau_minus1, omega_pi_minus1 })
    }

    /// Trivial unit images and signs.
    pub fn unramified(q: u32, k: usize, c: usize) -> Result<Self> {
        Self::new(q, k, c, ONE, ONE, 1, 1)
    }

    /// The value of `X` at the complex parameter `s`.
    pub fn x_at(&self, s: C64) -> C64 {
        self.u_pi * self.u_rho * (-(self.c as f64) * s * (self.q as f64).ln()).exp()
    }

    fn qpow(&self, e: f64) -> f64 {
        (self.q as f64).powf(e)
    }

    fn binom2(&self) -> f64 {
        (self.c * (self.c - 1) / 2) as f64
    }

    /// `ω_π(−1)^{k−1}`, the sign relating `γ` to `γ̃` and appearing in the local equation.
    pub fn pi_sign(&self) -> f64 {
        (self.omega_pi_minus1 as f64).powi(self.k as i32 - 1)
    }

    fn check_case(&self, exceptional: bool) -> Result<()> {
        if exceptional && self.k != self.c {
            return Err(Error::Inconsistent(format!("π ≅ τ∨ forces k = c, got k = {}, c = {}", self.k, self.c)));
        }
        if exceptional && self.omega_pi_minus1 != self.omega_tau_minus1 {
            return Err(Error::Inconsistent("π ≅ τ∨ forces ω_π(−1) = ω_τ(−1)".into()));
        }
        Ok(())
    }

    /// `Y = q^{−c}/X` as a rational function of `X`.
    pub fn y(&self) -> RatFun {
        RatFun::new(Poly::constant(C64::new(self.qpow(-(self.c as f64)), 0.0)), Poly::x()).expect("X is nonzero")
    }
}

fn geometric_tail(t: &RatFun) -> RatFun {
    // t/(1−t)
    let one_minus = &RatFun::constant(ONE) - t;
    t.checked_div(&one_minus).expect("1 − t is nonzero")
}

/// The local zeta series as a rational function of `X`: the constant `Z_fin` when `π ≇ τ∨`, and
/// `Z_fin + q^{−c²/2}·q^{c/2}X/(1−X)·Λ₂` when `π ≅ τ∨`.
pub fn local_zeta(p: &LevelZeroParams, exceptional: bool, z_fin: C64, lambda2_term: C64) -> Result<RatFun> {
    p.check_case(exceptional)?;
    let constant = RatFun::constant(z_fin);
    if !exceptional {
        return Ok(constant);
    }
    let c = p.c as f64;
    let tail = &geometric_tail(&RatFun::x()) * (lambda2_term * p.qpow(-c * c / 2.0 + c / 2.0));
    Ok(&constant + &tail)
}

/// The local dual zeta series: the constant `Z∨_fin` when `π ≇ τ∨`, and
/// `Z∨_fin + q^{−C(c,2)}·Y/(1−Y)·term` when `π ≅ τ∨`, where `term` already contains the factor
/// `q^{−c²(c−2)/2}` and the sum over `X`.
pub fn local_dual_zeta(p: &LevelZeroParams, exceptional: bool, dual_fin: C64, lambda2_dual_term: C64) -> Result<RatFun> {
    p.check_case(exceptional)?;
    let constant = RatFun::constant(dual_fin);
    if !exceptional {
        return Ok(constant);
    }
    let tail = &geometric_tail(&p.y()) * (lambda2_dual_term * p.qpow(-p.binom2()));
    Ok(&constant + &tail)
}

/// The local gamma factor. When `π ≇ τ∨` it is the constant `ω_π(−1)^{k−1} γ̃`. When `π ≅ τ∨` it
/// is `ω_π(−1)^{c−1} q^{c/2} (−1 + (1−q^{−c})/(1−Y))`; `γ̃` must then be `−q^{−c/2}`.
pub fn local_gamma(p: &LevelZeroParams, gamma_tilde: C64, exceptional: bool) -> Result<RatFun> {
    p.check_case(exceptional)?;
    if !exceptional {
        return Ok(RatFun::constant(gamma_tilde * p.pi_sign()));
    }
    let c = p.c as f64;
    if (gamma_tilde + p.qpow(-c / 2.0)).norm() > 1e-6 {
        return Err(Error::Inconsistent(format!("γ̃ = {gamma_tilde} but π ≅ τ∨ forces −q^{{−c/2}}")));
    }
    let one = RatFun::constant(ONE);
    let frac = RatFun::constant(C64::new(1.0 - p.qpow(-c), 0.0)).checked_div(&(&one - &p.y()))?;
    Ok(&(&frac - &one) * C64::new(p.pi_sign() * p.qpow(c / 2.0), 0.0))
}

/// The closed form `ω_τ(−1)^{c−1} q^{−c/2} (1−X) / (X(1−Y))` of the exceptional local gamma factor.
pub fn jpss_gamma(p: &LevelZeroParams) -> Result<RatFun> {
    p.check_case(true)?;
    let c = p.c as f64;
    let sign = (p.omega_tau_minus1 as f64).powi(p.c as i32 - 1);
    let numer = Poly::new(vec![ONE, -ONE]).scale(C64::new(sign * p.qpow(-c / 2.0), 0.0));
    let one = RatFun::constant(ONE);
    let denom = &RatFun::x() * &(&one - &p.y());
    RatFun::from_poly(numer).checked_div(&denom)
}

/// Finite inputs for one datum `(W, v, v∨)` of the local functional equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalInputs {
    pub gamma_tilde: C64,
    pub zeta: C64,
    pub dual_zeta: C64,
    /// `⟨…, Λ₂⟩`; ignored unless `π ≅ τ∨`.
    pub lambda2: C64,
    /// `q^{−c²(c−2)/2} Σ_X ⟨…, Λ₂∨⟩`; ignored unless `π ≅ τ∨`.
    pub lambda2_dual_term: C64,
}

impl LocalInputs {
    pub fn generic(gamma_tilde: C64, zeta: C64, dual_zeta: C64) -> Self {
        LocalInputs { gamma_tilde, zeta, dual_zeta, lambda2: ZERO, lambda2_dual_term: ZERO }
    }
}

/// Largest polynomial coefficient of `Z∨(X)·den − ω_π(−1)^{k−1}γ(X)Z(X)·den`, cross-multiplied.
pub fn local_functional_equation_check(p: &LevelZeroParams, exceptional: bool, inputs: &LocalInputs) -> Result<f64> {
    let z = local_zeta(p, exceptional, inputs.zeta, inputs.lambda2)?;
    let dual = local_dual_zeta(p, exceptional, inputs.dual_zeta, inputs.lambda2_dual_term)?;
    let gamma = local_gamma(p, inputs.gamma_tilde, exceptional)?;
    Ok(functional_equation_mismatch(p, &z, &dual, &gamma))
}

/// Cross-multiplied coefficient mismatch of `Z∨ = ω_π(−1)^{k−1} γ Z` for given series.
pub fn functional_equation_mismatch(p: &LevelZeroParams, z: &RatFun, dual: &RatFun, gamma: &RatFun) -> f64 {
    let rhs = &(gamma * z) * C64::new(p.pi_sign(), 0.0);
    dual.mismatch(&rhs)
}

use num_complex::Complex64;

use crate::error::Result;
use crate::glgroup::{enumerate_group, gl_order};
use crate::linalg::{sup_norm, CMat};

use super::decompose::group_average;
use super::rep::Rep;

/// `‖(1/|G|) Σ_g τ(g) ⊗ τ(g⁻¹) − (q^{k(k−1)/2}(q^k − 1)/|G|)·sw‖_∞` where `sw(v ⊗ w) = w ⊗ v`.
pub fn swap_identity_residual(tau: &Rep) -> Result<f64> {
    let (k, q, d) = (tau.n(), tau.q(), tau.dim());
    let elements = enumerate_group(k, q)?;
    let lhs = group_average(&elements, d * d, d * d, |g| {
        Ok(tau.eval(g)?.kronecker(tau.eval(&g.inv()?)?.as_ref()))
    })?;
    let order = gl_order(k, q) as f64;
    let scale = (q as f64).powi((k * (k - 1) / 2) as i32) * ((q as f64).powi(k as i32) - 1.0) / order;
    let mut sw = CMat::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            sw[(b * d + a, a * d + b)] = Complex64::new(scale, 0.0);
        }
    }
    Ok(sup_norm(&(lhs - sw)))
}

use std::sync::Arc;

use anyhow::{bail, Result};
use finspeh::ff::{AdditiveCharacter, Fq, MultiplicativeCharacter};
use finspeh::repcore::{cuspidals, Rep};

/// Seed of the Gelfand–Graev decomposition; fixed so that cuspidal indices do not depend on
/// the run seed.
const DECOMPOSITION_SEED: u64 = 0;

/// Irreducible cuspidals of `GL_n(F_q)` with their ids. For `n = 1` these are the characters,
/// labelled by their exponent against the smallest generator.
pub fn cuspidal_list(n: usize, q: u32, tol: f64) -> Result<Vec<(usize, Arc<Rep>)>> {
    let f = Fq::new(q)?;
    if n == 1 {
        return Ok(MultiplicativeCharacter::all(f)
            .into_iter()
            .map(|chi| (chi.exponent() as usize, Arc::new(Rep::character(1, chi))))
            .collect());
    }
    let reps = cuspidals(n, q, AdditiveCharacter::standard(f), DECOMPOSITION_SEED, tol)?;
    Ok(reps.into_iter().enumerate().collect())
}

pub fn select(list: Vec<(usize, Arc<Rep>)>, id: Option<usize>, what: &str) -> Result<Vec<(usize, Arc<Rep>)>> {
    match id {
        None => Ok(list),
        Some(i) => {
            let ids: Vec<usize> = list.iter().map(|(j, _)| *j).collect();
            match list.into_iter().find(|(j, _)| *j == i) {
                Some(x) => Ok(vec![x]),
                None => bail!(finspeh::error::Error::Domain(format!("no {what} with id {i}; available: {ids:?}"))),
            }
        }
    }
}

pub fn tau(k: usize, q: u32, id: usize, tol: f64) -> Result<Arc<Rep>> {
    Ok(select(cuspidal_list(k, q, tol)?, Some(id), "τ")?.remove(0).1)
}

/// Whether `π ≅ τ∨`, which needs `k = c`.
pub fn is_exceptional(tau: &Arc<Rep>, pi: &Rep, tol: f64) -> Result<bool> {
    if tau.n() != pi.n() || tau.dim() != pi.dim() {
        return Ok(false);
    }
    Ok(Rep::contragredient(tau).is_isomorphic(pi, tol)?)
}

/// `ω(−1)` as ±1.
pub fn sign_at_minus_one(r: &Rep, tol: f64) -> Result<i8> {
    Ok(r.central_character(tol)?.sign() as i8)
}

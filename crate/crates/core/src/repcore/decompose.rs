use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{AdditiveCharacter, Fq, MultiplicativeCharacter};
use crate::glgroup::{enumerate_group, generators, FqMatrix};
use crate::linalg::{hermitian_eigen, random_hermitian, sup_norm, CMat, C64};

use super::rep::{Action, Rep};

const ATTEMPTS: usize = 3;
const CHUNK: usize = 64;

/// `(1/|G|) Σ_g f(g)` over the listed elements, summed in a fixed order so that the
/// result does not depend on the thread count.
pub fn group_average<F>(elements: &[FqMatrix], rows: usize, cols: usize, f: F) -> Result<CMat>
where
    F: Fn(&FqMatrix) -> Result<CMat> + Sync,
{
    let partials: Vec<Result<CMat>> = elements
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = CMat::zeros(rows, cols);
            for g in chunk {
                acc += f(g)?;
            }
            Ok(acc)
        })
        .collect();
    let mut total = CMat::zeros(rows, cols);
    for p in partials {
        total += p?;
    }
    Ok(total / C64::new(elements.len() as f64, 0.0))
}

/// Groups ascending eigenvalues into runs whose consecutive gaps stay below `sep`.
fn cluster(values: &[f64], sep: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(run) if v - values[*run.last().unwrap()] <= sep => run.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Residual of the commutant probe: `‖avg_g ρ(g) K ρ(g)^† − (tr K / d) I‖` for a random
/// Hermitian `K`. Zero exactly when the commutant is the scalars.
pub fn commutant_probe_residual(r: &Rep, elements: &[FqMatrix], rng: &mut ChaCha8Rng) -> Result<f64> {
    let d = r.dim();
    let k = random_hermitian(d, rng);
    let avg = group_average(elements, d, d, |g| Ok(r.action(g)?.sandwich(&k)))?;
    let target = CMat::identity(d, d) * (k.trace() / C64::new(d as f64, 0.0));
    Ok(sup_norm(&(avg - target)))
}

/// `(1/|G|) Σ_g |tr(ρ(g) P)|²` for orthogonal projectors `P` onto invariant subspaces: the norms
/// of the characters of the subrepresentations, equal to 1 exactly for irreducible ones. One pass
/// over the group serves every projector; monomial actions cost `O(dim)` per projector.
pub fn subspace_character_norms(parent: &Rep, elements: &[FqMatrix], projectors: &[CMat]) -> Result<Vec<f64>> {
    let partials: Vec<Result<Vec<f64>>> = elements
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; projectors.len()];
            for g in chunk {
                let action = parent.action(g)?;
                for (a, p) in acc.iter_mut().zip(projectors) {
                    let t: C64 = match &action {
                        Action::Monomial(map) => {
                            map.phase.iter().enumerate().map(|(i, z)| z * p[(map.source[i] as usize, i)]).sum()
                        }
                        Action::Dense(m) => m.as_ref().component_mul(&p.transpose()).sum(),
                    };
                    *a += t.norm_sqr();
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = vec![0.0; projectors.len()];
    for p in partials {
        total.iter_mut().zip(p?).for_each(|(t, x)| *t += x);
    }
    Ok(total.into_iter().map(|t| t / elements.len() as f64).collect())
}

/// Splits a multiplicity-free representation into irreducible constituents, each the
/// restriction to an orthonormal eigenspace of a randomly probed commuting operator.
pub fn decompose_multiplicity_free(parent: &Arc<Rep>, seed: u64, tol: f64) -> Result<Vec<Arc<Rep>>> {
    let elements = enumerate_group(parent.n(), parent.q())?;
    let gens = generators(parent.n(), parent.q());
    let n = parent.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_failure = String::new();
    'attempt: for attempt in 0..ATTEMPTS {
        let h = random_hermitian(n, &mut rng);
        let c = group_average(&elements, n, n, |g| Ok(parent.action(g)?.sandwich(&h)))?;
        let (values, vectors) = hermitian_eigen(&c);
        let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let runs = cluster(&values, 1e-7 * scale);
        let mut bases = Vec::with_capacity(runs.len());
        for run in &runs {
            let basis = CMat::from_fn(n, run.len(), |i, j| vectors[(i, run[j])]);
            for s in &gens {
                let moved = parent.action(s)?.apply(&basis);
                let res = sup_norm(&(&moved - &basis * (basis.adjoint() * &moved)));
                if res > tol {
                    last_failure = format!("attempt {attempt}: eigenspace not invariant (residual {res:e})");
                    continue 'attempt;
                }
            }
            bases.push(basis);
        }
        let projectors: Vec<CMat> = bases.iter().map(|b| b * b.adjoint()).collect();
        let norms = subspace_character_norms(parent, &elements, &projectors)?;
        if let Some((b, norm)) = bases.iter().zip(&norms).find(|(_, norm)| (*norm - 1.0).abs() > tol) {
            last_failure = format!("attempt {attempt}: eigenspace of dim {} has character norm {norm}", b.ncols());
            continue 'attempt;
        }
        let pieces: Vec<Arc<Rep>> = bases.into_iter().map(|b| Arc::new(Rep::subspace(parent, b, true))).collect();
        return Ok(pieces);
    }
    Err(Error::Internal(format!(
        "decomposition failed after {ATTEMPTS} random probes; {last_failure}"
    )))
}

/// Sort key: dimension, central character, then rounded traces on a fixed list of elements.
fn signature(r: &Rep, probes: &[FqMatrix], tol: f64) -> Result<(usize, u32, Vec<(i64, i64)>)> {
    let omega = r.central_character(tol)?.exponent();
    let traces = probes
        .iter()
        .map(|g| {
            let t = r.character_trace(g)?;
            Ok(((t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((r.dim(), omega, traces))
}

fn probe_elements(n: usize, q: u32) -> Vec<FqMatrix> {
    let gens = generators(n, q);
    let mut out = gens.clone();
    for a in &gens {
        for b in &gens {
            out.push(a.mul(b));
        }
    }
    out
}

/// Irreducible constituents of the Gelfand–Graev representation (the generic irreducibles),
/// in a deterministic order.
pub fn generic_irreducibles(n: usize, q: u32, psi: AdditiveCharacter, seed: u64, tol: f64) -> Result<Vec<Arc<Rep>>> {
    let gg = Arc::new(Rep::gelfand_graev(n, q, psi)?);
    let pieces = decompose_multiplicity_free(&gg, seed, tol)?;
    let probes = probe_elements(n, q);
    let mut keyed = pieces
        .into_iter()
        .map(|p| Ok((signature(&p, &probes, tol)?, p)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed.into_iter().map(|(_, p)| p).collect())
}

/// All irreducible cuspidal representations of `GL_n(F_q)` with their ψ-Whittaker data.
/// For `n = 1` these are the characters of `F_q^×`, ordered by exponent.
pub fn cuspidals(n: usize, q: u32, psi: AdditiveCharacter, seed: u64, tol: f64) -> Result<Vec<Arc<Rep>>> {
    let field = Fq::new(q)?;
    if n == 1 {
        return Ok(MultiplicativeCharacter::all(field).into_iter().map(|chi| Arc::new(Rep::character(1, chi))).collect());
    }
    let mut out = Vec::new();
    for r in generic_irreducibles(n, q, psi, seed, tol)? {
        if r.is_cuspidal(tol)? {
            out.push(r);
        }
    }
    Ok(out)
}

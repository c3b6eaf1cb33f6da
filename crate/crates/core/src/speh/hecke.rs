use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::glgroup::{rectangular_matrices, FqMatrix};
use crate::linalg::{sup_norm, CMat, C64, ONE};

use super::model::{trace_of_product, CosetOperator, InducedModel, MAX_DENSE_DIM};

/// A permutation of `{0, ..., c−1}` in one-line notation.
pub type Perm = Vec<usize>;

/// Number of inversions.
pub fn length(w: &[usize]) -> usize {
    (0..w.len()).map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count()).sum()
}

/// `w · s_i` (swap positions `i` and `i+1`).
fn times_simple(w: &[usize], i: usize) -> Perm {
    let mut v = w.to_vec();
    v.swap(i, i + 1);
    v
}

/// Every element of `S_c` with one reduced word `[i_1, ..., i_l]` (so `w = s_{i_1} ⋯ s_{i_l}`),
/// in order of length and then discovery.
pub fn reduced_words(c: usize) -> Vec<(Perm, Vec<usize>)> {
    let id: Perm = (0..c).collect();
    let mut out = vec![(id.clone(), Vec::new())];
    let mut seen: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
    let mut start = 0;
    while start < out.len() {
        let end = out.len();
        for idx in start..end {
            let (w, word) = out[idx].clone();
            for i in 0..c.saturating_sub(1) {
                let v = times_simple(&w, i);
                if length(&v) == word.len() + 1 && !seen.contains_key(&v) {
                    let mut wv = word.clone();
                    wv.push(i);
                    seen.insert(v.clone(), out.len());
                    out.push((v, wv));
                }
            }
        }
        start = end;
    }
    out
}

/// All reduced words of `w`.
pub fn all_reduced_words(w: &[usize]) -> Vec<Vec<usize>> {
    let l = length(w);
    if l == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..w.len() - 1 {
        let v = times_simple(w, i);
        if length(&v) + 1 == l {
            for mut word in all_reduced_words(&v) {
                word.push(i);
                out.push(word);
            }
        }
    }
    out
}

/// The normalized simple Hecke operators `h⁰_{s_i}` on `τ^{∘c}`.
#[derive(Debug)]
pub struct HeckeAlgebra {
    model: Arc<InducedModel>,
    simple: Vec<CosetOperator>,
    dense: Option<Vec<CMat>>,
}

impl HeckeAlgebra {
    /// `h⁰_{s_i} = q^{−k(k−1)/2} ω_τ(−1) h_{s_i}` with
    /// `(h_{s_i} f)(x) = Σ_{X ∈ M_k} s_i · f(s_i u_X x)`, `u_X` the identity plus `X` in block `(i, i+1)`.
    pub fn new(model: Arc<InducedModel>) -> Result<Self> {
        let (k, c, q) = (model.k(), model.c(), model.q());
        let n = k * c;
        let field = crate::ff::Fq::new(q)?;
        let sign = model.omega().eval(field.elem(-1))?;
        let scale = sign * C64::new((q as f64).powf(-((k * (k - 1)) as f64) / 2.0), 0.0);
        let xs = rectangular_matrices(k, k, q);
        let mut simple = Vec::with_capacity(c.saturating_sub(1));
        for i in 0..c.saturating_sub(1) {
            let s = block_transposition(n, k, i, q);
            let us: Vec<FqMatrix> = xs
                .iter()
                .map(|x| {
                    let mut u = FqMatrix::identity(n, q);
                    for a in 0..k {
                        for b in 0..k {
                            u.set(i * k + a, (i + 1) * k + b, x[a * k + b] as i64);
                        }
                    }
                    s.mul(&u)
                })
                .collect();
            let op = model.operator(Some(model.swap_permutation(i)), |r| {
                us.iter().map(|su| (su.mul(r), ONE)).collect()
            });
            simple.push(op.scaled(scale));
        }
        let dense = if model.dim() <= MAX_DENSE_DIM {
            Some(simple.iter().map(|op| op.to_dense()).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        Ok(HeckeAlgebra { model, simple, dense })
    }

    pub fn model(&self) -> &Arc<InducedModel> {
        &self.model
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn is_dense(&self) -> bool {
        self.dense.is_some()
    }

    pub fn simple(&self, i: usize) -> &CosetOperator {
        &self.simple[i]
    }

    pub fn dense_simple(&self, i: usize) -> Option<&CMat> {
        self.dense.as_ref().map(|d| &d[i])
    }

    /// `h⁰_{s_i} · m` for a block of column vectors.
    pub fn apply_simple(&self, i: usize, m: &CMat) -> CMat {
        if let Some(d) = &self.dense {
            return &d[i] * m;
        }
        apply_columns(&self.simple[i], m)
    }

    /// `h⁰_{s_{i_1}} ⋯ h⁰_{s_{i_l}} · m`.
    pub fn apply_word(&self, word: &[usize], m: &CMat) -> CMat {
        let mut cur = m.clone();
        for &i in word.iter().rev() {
            cur = self.apply_simple(i, &cur);
        }
        cur
    }

    /// `tr(h⁰_{s_{i_1}} ⋯ h⁰_{s_{i_l}})`, computed exactly from the sparse operators.
    pub fn trace_word(&self, word: &[usize]) -> C64 {
        if word.is_empty() {
            return C64::new(self.model.dim() as f64, 0.0);
        }
        let ops: Vec<&CosetOperator> = word.iter().map(|&i| &self.simple[i]).collect();
        trace_of_product(&ops)
    }

    /// Relative residuals `(quadratic, braid, commuting)` of the three Hecke relations on the
    /// columns of `m` (all columns of the identity when dense).
    pub fn relation_residuals(&self, m: &CMat) -> (f64, f64, f64) {
        let qk = (self.model.q() as f64).powi(self.model.k() as i32);
        let r = self.rank();
        let rel = |a: &CMat, b: &CMat| sup_norm(&(a - b)) / sup_norm(a).max(sup_norm(b)).max(1.0);
        let mut quad = 0.0f64;
        for i in 0..r {
            let h = self.apply_simple(i, m);
            let hh = self.apply_simple(i, &h);
            let rhs = m * C64::new(qk, 0.0) + &h * C64::new(qk - 1.0, 0.0);
            quad = quad.max(rel(&hh, &rhs));
        }
        let mut braid = 0.0f64;
        for i in 0..r.saturating_sub(1) {
            braid = braid.max(rel(&self.apply_word(&[i, i + 1, i], m), &self.apply_word(&[i + 1, i, i + 1], m)));
        }
        let mut comm = 0.0f64;
        for i in 0..r {
            for j in i + 2..r {
                comm = comm.max(rel(&self.apply_word(&[i, j], m), &self.apply_word(&[j, i], m)));
            }
        }
        (quad, braid, comm)
    }
}

/// Block permutation matrix exchanging `k × k` blocks `i` and `i+1`.
pub fn block_transposition(n: usize, k: usize, i: usize, q: u32) -> FqMatrix {
    let c = n / k;
    let mut perm: Vec<usize> = (0..c).collect();
    perm.swap(i, i + 1);
    block_permutation(k, &perm, q)
}

/// The `kc × kc` matrix of `w ∈ S_c` with each entry replaced by `0_k` or `I_k`
/// (block column `j` carries `I_k` in block row `w(j)`).
pub fn block_permutation(k: usize, w: &[usize], q: u32) -> FqMatrix {
    let perm: Vec<usize> = (0..k * w.len()).map(|j| w[j / k] * k + j % k).collect();
    FqMatrix::permutation(q, &perm)
}

/// Applies a sparse operator to each column.
pub fn apply_columns(op: &CosetOperator, m: &CMat) -> CMat {
    let cols: Vec<Vec<C64>> = (0..m.ncols())
        .into_par_iter()
        .map(|j| op.apply(m.column(j).as_slice()))
        .collect();
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| cols[j][i])
}

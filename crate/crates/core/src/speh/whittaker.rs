use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::FqElem;
use crate::glgroup::{kappa_matrix, y_group, FqMatrix, KcCharacter};
use crate::linalg::{inner, norm, tensor_row, CMat, C64, ONE, ZERO};

use super::hecke::{apply_columns, HeckeAlgebra};
use super::model::{CosetOperator, InducedModel};
use super::projector::{apply_projector, ProjectorForm, ProjectorKind};

const RETRIES: usize = 3;

/// One summand `coeff · (r_1 ⊗ ... ⊗ r_m)(f(g))` of a functional built by the recursion.
#[derive(Debug, Clone)]
pub struct EvaluationTerm {
    pub g: FqMatrix,
    pub rows: Vec<Vec<C64>>,
    pub coeff: C64,
}

/// Evaluation plan of the recursive `(k, c)` functional on `τ^{∘c}`: the top level splits
/// `c = c1 + c2`, lower levels split off one block at a time.
pub fn recursive_plan(model: &InducedModel, c: usize, split: Option<(usize, usize)>) -> Result<Vec<EvaluationTerm>> {
    let k = model.k();
    let q = model.q();
    if c == 1 {
        let w = model
            .tau()
            .whittaker()
            .ok_or_else(|| Error::Internal("cuspidal datum lost its Whittaker functional".into()))?;
        return Ok(vec![EvaluationTerm {
            g: FqMatrix::identity(k, q),
            rows: vec![w.coeffs.iter().copied().collect()],
            coeff: ONE,
        }]);
    }
    let (c1, c2) = split.unwrap_or((1, c - 1));
    if c1 == 0 || c2 == 0 || c1 + c2 != c {
        return Err(Error::Domain(format!("invalid split ({c1}, {c2}) of {c}")));
    }
    let left = recursive_plan(model, c1, None)?;
    let right = recursive_plan(model, c2, None)?;
    let kappa = kappa_matrix(c1, c2, k, q)?;
    let ys = y_group(c1, c2, k, q)?;
    let inv = C64::new(1.0 / ys.len() as f64, 0.0);
    let mut out = Vec::with_capacity(ys.len() * left.len() * right.len());
    for y in &ys {
        let yk = y.mul(&kappa);
        for a in &left {
            for b in &right {
                let g = FqMatrix::block_diag(&[a.g, b.g]).mul(&yk);
                let mut rows = a.rows.clone();
                rows.extend(b.rows.iter().cloned());
                out.push(EvaluationTerm { g, rows, coeff: a.coeff * b.coeff * inv });
            }
        }
    }
    Ok(out)
}

/// Coefficient vector `a` with `λ(f) = Σ a_i f_i` for an evaluation plan on the full model.
pub fn plan_coefficients(model: &InducedModel, plan: &[EvaluationTerm]) -> Vec<C64> {
    let block = model.block();
    let mut coeffs = vec![ZERO; model.dim()];
    for t in plan {
        let (j, levi) = model.locate(&t.g);
        let rows: Vec<Vec<C64>> = t
            .rows
            .iter()
            .zip(&levi[..model.c()])
            .map(|(r, &li)| {
                let m = model.taus().get(li);
                let rv = nalgebra::RowDVector::from_row_slice(r);
                (rv * m).iter().copied().collect()
            })
            .collect();
        let row = tensor_row(&rows);
        for (i, x) in row.iter().enumerate() {
            coeffs[j as usize * block + i] += t.coeff * x;
        }
    }
    coeffs
}

/// Averages over the root subgroups of `U_{(c^k)}` against `ψ_{(k,c)}^{-1}`; their product
/// is the projector onto `ψ_{(k,c)}`-equivariant vectors.
#[derive(Debug)]
pub struct KcProjector {
    chi: KcCharacter,
    roots: Vec<CosetOperator>,
}

impl KcProjector {
    pub fn new(model: &InducedModel) -> Self {
        let (k, c, q) = (model.k(), model.c(), model.q());
        // The block size of U_{(c^k)} is c and there are k blocks.
        let chi = KcCharacter::new(k, c, model.psi());
        let n = model.n();
        let inv_q = 1.0 / q as f64;
        let roots = chi
            .root_positions()
            .into_iter()
            .map(|pos| {
                let pts: Vec<(FqMatrix, C64)> = (0..q)
                    .map(|t| {
                        let x = FqMatrix::elementary(n, q, pos.i, pos.j, t as i64);
                        let val = if pos.on_trace { chi.psi.eval(FqElem(t as u8)).conj() } else { ONE };
                        (x, val * inv_q)
                    })
                    .collect();
                model.operator(None, |r| pts.iter().map(|(x, v)| (r.mul(x), *v)).collect())
            })
            .collect();
        KcProjector { chi, roots }
    }

    pub fn character(&self) -> &KcCharacter {
        &self.chi
    }

    pub fn apply(&self, m: &CMat) -> CMat {
        let mut cur = m.clone();
        for op in self.roots.iter().rev() {
            cur = apply_columns(op, &cur);
        }
        cur
    }
}

/// `τ^{∘c}` with its Hecke operators, the `ψ_{(k,c)}` projector, the unit `(k,c)` Whittaker
/// vector `v_W` of the Speh subspace and the recursive functional `λ`.
#[derive(Debug)]
pub struct SpehModel {
    model: Arc<InducedModel>,
    hecke: HeckeAlgebra,
    kc: KcProjector,
    functional: Vec<C64>,
    vector: Vec<C64>,
}

impl SpehModel {
    pub fn new(tau: Arc<crate::repcore::Rep>, c: usize, seed: u64, tol: f64) -> Result<Self> {
        let model = Arc::new(InducedModel::new(tau, c, tol)?);
        let hecke = HeckeAlgebra::new(model.clone())?;
        let kc = KcProjector::new(&model);
        let functional = plan_coefficients(&model, &recursive_plan(&model, c, None)?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vector = None;
        for _ in 0..RETRIES {
            let f = CMat::from_column_slice(model.dim(), 1, &model.random_vector(&mut rng));
            let v = apply_projector(&hecke, ProjectorKind::Speh, ProjectorForm::ProductLeftToRight, &kc.apply(&f));
            let v: Vec<C64> = v.column(0).iter().copied().collect();
            let nv = norm(&v);
            if nv > 1e-8 * norm(f.as_slice()) {
                vector = Some(v.iter().map(|x| x / nv).collect::<Vec<C64>>());
                break;
            }
        }
        let mut vector = vector
            .ok_or_else(|| Error::Internal("(k,c) Whittaker vector vanished after three random starts".into()))?;
        // Fix the phase so that λ(v_W) is real positive.
        let l: C64 = functional.iter().zip(&vector).map(|(a, b)| a * b).sum();
        if l.norm() > tol {
            let phase = l.conj() / l.norm();
            vector.iter_mut().for_each(|x| *x *= phase);
        }
        Ok(SpehModel { model, hecke, kc, functional, vector })
    }

    pub fn model(&self) -> &Arc<InducedModel> {
        &self.model
    }

    pub fn hecke(&self) -> &HeckeAlgebra {
        &self.hecke
    }

    pub fn kc_projector(&self) -> &KcProjector {
        &self.kc
    }

    /// Coefficients of the recursive functional `λ` (bilinear: `λ(f) = Σ a_i f_i`).
    pub fn functional(&self) -> &[C64] {
        &self.functional
    }

    /// Unit `(k,c)` ψ-Whittaker vector of the Speh subspace.
    pub fn whittaker_vector(&self) -> &[C64] {
        &self.vector
    }

    pub fn lambda(&self, f: &[C64]) -> C64 {
        self.functional.iter().zip(f).map(|(a, b)| a * b).sum()
    }

    pub fn project(&self, kind: ProjectorKind, f: &[C64]) -> Vec<C64> {
        let m = CMat::from_column_slice(f.len(), 1, f);
        apply_projector(&self.hecke, kind, ProjectorForm::ProductLeftToRight, &m).column(0).iter().copied().collect()
    }

    /// `B(g) = ⟨ρ(g) v_W, v_W⟩`.
    pub fn bessel(&self, g: &FqMatrix) -> C64 {
        inner(&self.model.apply_action(g, &self.vector), &self.vector)
    }

    /// `W_f(g) = ⟨ρ(g) f, v_W⟩`.
    pub fn whittaker_function(&self, f: &[C64], g: &FqMatrix) -> C64 {
        inner(&self.model.apply_action(g, f), &self.vector)
    }

    /// `W_f(g)` for the recursive functional, `λ(ρ(g) f)`.
    pub fn whittaker_function_recursive(&self, f: &[C64], g: &FqMatrix) -> C64 {
        self.lambda(&self.model.apply_action(g, f))
    }

    /// Largest `|ρ(x) v_W − ψ_{(k,c)}(x) v_W|` over the root generators `x` of `U_{(c^k)}`.
    pub fn equivariance_residual(&self) -> Result<f64> {
        let chi = self.kc.character();
        let (n, q) = (self.model.n(), self.model.q());
        let mut worst = 0.0f64;
        for pos in chi.root_positions() {
            let x = FqMatrix::elementary(n, q, pos.i, pos.j, 1);
            let moved = self.model.apply_action(&x, &self.vector);
            let s = chi.eval(&x)?;
            for (a, b) in moved.iter().zip(&self.vector) {
                worst = worst.max((a - s * b).norm());
            }
        }
        Ok(worst)
    }

    /// Riesz vector of `λ` restricted to the Speh subspace: `P_Speh(conj a)`.
    pub fn functional_riesz_vector(&self) -> Vec<C64> {
        let conj: Vec<C64> = self.functional.iter().map(|z| z.conj()).collect();
        self.project(ProjectorKind::Speh, &conj)
    }
}

/// The recursive functional for a chosen top-level split, as a coefficient vector.
pub fn kc_functional_recursive(model: &InducedModel, split: (usize, usize)) -> Result<Vec<C64>> {
    Ok(plan_coefficients(model, &recursive_plan(model, model.c(), Some(split))?))
}

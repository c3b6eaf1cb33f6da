use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ff::{AdditiveCharacter, MultiplicativeCharacter};
use crate::glgroup::{enumerate_group, CosetTable, Composition, FqMatrix, MAX_N};
use crate::linalg::{random_cvec, tensor_apply, CMat, C64, ONE, ZERO};
use crate::repcore::Rep;

/// Largest induced model that will be built (dimension of `τ^{∘c}`).
pub const MAX_MODEL_DIM: usize = 200_000;
/// Dense operator matrices are only formed up to this dimension.
pub const MAX_DENSE_DIM: usize = 4_000;

/// `τ(h)` for every `h ∈ GL_k(F_q)`, addressed by a compact index.
#[derive(Debug)]
pub struct TauTable {
    d: usize,
    mats: Vec<CMat>,
    index: FxHashMap<FqMatrix, u32>,
}

impl TauTable {
    fn new(tau: &Rep) -> Result<Self> {
        let group = enumerate_group(tau.n(), tau.q())?;
        let mut mats = Vec::with_capacity(group.len());
        let mut index = FxHashMap::with_capacity_and_hasher(group.len(), Default::default());
        for (i, g) in group.iter().enumerate() {
            mats.push(tau.eval(g)?.as_ref().clone());
            index.insert(*g, i as u32);
        }
        Ok(TauTable { d: tau.dim(), mats, index })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: u32) -> &CMat {
        &self.mats[i as usize]
    }

    pub fn index_of(&self, h: &FqMatrix) -> u32 {
        *self.index.get(h).expect("Levi block is invertible")
    }
}

/// The parabolically induced representation `τ^{∘c}` of `GL_{kc}(F_q)`, stored by values on
/// canonical representatives of `P_{(k^c)} \ GL_{kc}`. Coordinate `a·d^c + t` is component `t`
/// of `f(r_a) ∈ τ^{⊗c}`, first tensor factor most significant.
#[derive(Debug)]
pub struct InducedModel {
    k: usize,
    c: usize,
    q: u32,
    tau: Arc<Rep>,
    psi: AdditiveCharacter,
    omega: MultiplicativeCharacter,
    table: CosetTable,
    taus: Arc<TauTable>,
    block: usize,
}

/// One summand `coeff · perm(τ(L_1) ⊗ ... ⊗ τ(L_c)) f(r_src)` of a row of a [`CosetOperator`].
#[derive(Debug, Clone, Copy)]
struct Term {
    src: u32,
    levi: [u32; MAX_N],
    coeff: C64,
}

/// A linear operator on an [`InducedModel`] whose row block `a` is a short sum of terms
/// reading other coset blocks; covers `ρ(g)`, Hecke operators and root-subgroup averages.
#[derive(Debug, Clone)]
pub struct CosetOperator {
    c: usize,
    d: usize,
    block: usize,
    row_ptr: Vec<usize>,
    terms: Vec<Term>,
    /// Permutation of tensor coordinates applied after each term, if any.
    perm: Option<Arc<Vec<usize>>>,
    /// Per-term scalars when `d = 1`.
    scalars: Option<Vec<C64>>,
    taus: Arc<TauTable>,
}

impl InducedModel {
    pub fn new(tau: Arc<Rep>, c: usize, tol: f64) -> Result<Self> {
        let k = tau.n();
        let q = tau.q();
        if c == 0 {
            return Err(Error::Domain("c must be positive".into()));
        }
        if k * c > MAX_N {
            return Err(Error::Capacity(format!("kc = {} exceeds {MAX_N}", k * c)));
        }
        let psi = tau
            .whittaker()
            .map(|w| w.psi)
            .ok_or_else(|| Error::Domain("inducing representation must carry a Whittaker functional".into()))?;
        let omega = tau.central_character(tol)?;
        let block = tau.dim().pow(c as u32);
        let expected = crate::glgroup::index_of_parabolic(&Composition::uniform(k, c)?, q);
        if expected * block as u128 > MAX_MODEL_DIM as u128 {
            return Err(Error::Capacity(format!(
                "induced model of dimension {} exceeds {MAX_MODEL_DIM}",
                expected * block as u128
            )));
        }
        let table = CosetTable::parabolic(Composition::uniform(k, c)?, q)?;
        let taus = Arc::new(TauTable::new(&tau)?);
        Ok(InducedModel { k, c, q, tau, psi, omega, table, taus, block })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn n(&self) -> usize {
        self.k * self.c
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn tau(&self) -> &Arc<Rep> {
        &self.tau
    }

    pub fn psi(&self) -> AdditiveCharacter {
        self.psi
    }

    /// Central character `ω_τ`.
    pub fn omega(&self) -> MultiplicativeCharacter {
        self.omega
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn taus(&self) -> &Arc<TauTable> {
        &self.taus
    }

    /// `(dim τ)^c`.
    pub fn block(&self) -> usize {
        self.block
    }

    pub fn cosets(&self) -> usize {
        self.table.len()
    }

    pub fn dim(&self) -> usize {
        self.table.len() * self.block
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C64> {
        random_cvec(self.dim(), rng).iter().copied().collect()
    }

    /// Writes `x = p · r_j` and returns `(j, Levi indices of p)`.
    pub fn locate(&self, x: &FqMatrix) -> (u32, [u32; MAX_N]) {
        let dec = self.table.decompose(x);
        let mut levi = [0u32; MAX_N];
        for b in 0..self.c {
            levi[b] = self.taus.index_of(&dec.p.block(b * self.k, b * self.k, self.k));
        }
        (dec.index as u32, levi)
    }

    /// Value `f(x) ∈ τ^{⊗c}` of a model vector at an arbitrary group element.
    pub fn value_at(&self, f: &[C64], x: &FqMatrix) -> Vec<C64> {
        let (j, levi) = self.locate(x);
        let src = &f[j as usize * self.block..(j as usize + 1) * self.block];
        let mats: Vec<&CMat> = levi[..self.c].iter().map(|&i| self.taus.get(i)).collect();
        let mut out = vec![ZERO; self.block];
        tensor_apply(&mats, self.tau.dim(), src, &mut out, &mut Vec::new());
        out
    }

    /// Builds an operator whose row `a` is `Σ coeff · perm(f(x))` over the pairs `(x, coeff)`
    /// produced by `points(r_a)`.
    pub fn operator<F>(&self, perm: Option<Vec<usize>>, points: F) -> CosetOperator
    where
        F: Fn(&FqMatrix) -> Vec<(FqMatrix, C64)> + Sync,
    {
        let rows: Vec<Vec<Term>> = self
            .table
            .reps()
            .par_iter()
            .map(|r| {
                points(r)
                    .into_iter()
                    .map(|(x, coeff)| {
                        let (src, levi) = self.locate(&x);
                        Term { src, levi, coeff }
                    })
                    .collect()
            })
            .collect();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut terms = Vec::with_capacity(rows.iter().map(|r| r.len()).sum());
        for r in rows {
            terms.extend(r);
            row_ptr.push(terms.len());
        }
        CosetOperator::assemble(self.c, self.tau.dim(), self.block, row_ptr, terms, perm.map(Arc::new), self.taus.clone())
    }

    /// `ρ(g)`: `(ρ(g) f)(r_a) = f(r_a g)`.
    pub fn action(&self, g: &FqMatrix) -> CosetOperator {
        let terms: Vec<Term> = self
            .table
            .reps()
            .par_iter()
            .map(|r| {
                let (src, levi) = self.locate(&r.mul(g));
                Term { src, levi, coeff: ONE }
            })
            .collect();
        let row_ptr = (0..=terms.len()).collect();
        CosetOperator::assemble(self.c, self.tau.dim(), self.block, row_ptr, terms, None, self.taus.clone())
    }

    /// Applies `ρ(g)` without storing the operator.
    pub fn apply_action(&self, g: &FqMatrix, f: &[C64]) -> Vec<C64> {
        self.action(g).apply(f)
    }

    /// Permutation of `τ^{⊗c}` coordinates exchanging tensor factors `i` and `i+1`.
    pub fn swap_permutation(&self, i: usize) -> Vec<usize> {
        let d = self.tau.dim();
        let c = self.c;
        (0..self.block)
            .map(|idx| {
                let mut digits: Vec<usize> = (0..c).map(|t| idx / d.pow((c - 1 - t) as u32) % d).collect();
                digits.swap(i, i + 1);
                digits.iter().fold(0, |acc, &x| acc * d + x)
            })
            .collect()
    }

    /// Hermitian inner product of model vectors (coset sum of the `τ^{⊗c}` product).
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        crate::linalg::inner(a, b)
    }
}

impl CosetOperator {
    fn assemble(
        c: usize,
        d: usize,
        block: usize,
        row_ptr: Vec<usize>,
        terms: Vec<Term>,
        perm: Option<Arc<Vec<usize>>>,
        taus: Arc<TauTable>,
    ) -> Self {
        let scalars = (d == 1).then(|| {
            terms
                .iter()
                .map(|t| t.levi[..c].iter().fold(t.coeff, |acc, &i| acc * taus.get(i)[(0, 0)]))
                .collect()
        });
        CosetOperator { c, d, block, row_ptr, terms, perm, scalars, taus }
    }

    pub fn dim(&self) -> usize {
        (self.row_ptr.len() - 1) * self.block
    }

    pub fn nnz_terms(&self) -> usize {
        self.terms.len()
    }

    /// Multiplies every term by `s`.
    pub fn scaled(mut self, s: C64) -> Self {
        for t in self.terms.iter_mut() {
            t.coeff *= s;
        }
        if let Some(sc) = self.scalars.as_mut() {
            for x in sc.iter_mut() {
                *x *= s;
            }
        }
        self
    }

    pub fn apply(&self, f: &[C64]) -> Vec<C64> {
        let block = self.block;
        let mut out = vec![ZERO; f.len()];
        out.par_chunks_mut(block).enumerate().for_each_init(
            || (vec![ZERO; block], Vec::new()),
            |(tmp, scratch), (a, ob)| {
                for ti in self.row_ptr[a]..self.row_ptr[a + 1] {
                    let t = &self.terms[ti];
                    let src = &f[t.src as usize * block..(t.src as usize + 1) * block];
                    if let Some(sc) = &self.scalars {
                        let s = sc[ti];
                        match &self.perm {
                            None => ob.iter_mut().zip(src).for_each(|(o, x)| *o += s * x),
                            Some(p) => {
                                for (idx, x) in src.iter().enumerate() {
                                    ob[p[idx]] += s * x;
                                }
                            }
                        }
                    } else {
                        let mats: Vec<&CMat> = t.levi[..self.c].iter().map(|&i| self.taus.get(i)).collect();
                        tensor_apply(&mats, self.d, src, tmp, scratch);
                        match &self.perm {
                            None => ob.iter_mut().zip(tmp.iter()).for_each(|(o, x)| *o += t.coeff * x),
                            Some(p) => {
                                for (idx, x) in tmp.iter().enumerate() {
                                    ob[p[idx]] += t.coeff * x;
                                }
                            }
                        }
                    }
                }
            },
        );
        out
    }

    /// The `block × block` matrix of one term.
    fn term_matrix(&self, ti: usize) -> CMat {
        let t = &self.terms[ti];
        let mut m = CMat::from_element(1, 1, t.coeff);
        for &i in &t.levi[..self.c] {
            m = m.kronecker(self.taus.get(i));
        }
        match &self.perm {
            None => m,
            Some(p) => {
                let mut out = CMat::zeros(self.block, self.block);
                for r in 0..self.block {
                    out.set_row(p[r], &m.row(r));
                }
                out
            }
        }
    }

    /// Dense matrix; only for small models.
    pub fn to_dense(&self) -> Result<CMat> {
        let n = self.dim();
        if n > MAX_DENSE_DIM {
            return Err(Error::Capacity(format!("dense operator of size {n} exceeds {MAX_DENSE_DIM}")));
        }
        let mut m = CMat::zeros(n, n);
        let b = self.block;
        for a in 0..self.row_ptr.len() - 1 {
            for ti in self.row_ptr[a]..self.row_ptr[a + 1] {
                let tm = self.term_matrix(ti);
                let s = self.terms[ti].src as usize;
                let mut view = m.view_mut((a * b, s * b), (b, b));
                view += tm;
            }
        }
        Ok(m)
    }
}

/// `tr(A_1 A_2 ⋯ A_m)` for coset operators, summing over closed paths of coset blocks.
pub fn trace_of_product(ops: &[&CosetOperator]) -> C64 {
    if ops.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let rows = ops[0].row_ptr.len() - 1;
    let block = ops[0].block;
    (0..rows).into_par_iter().map_init(|| PathSum::new(rows, block), |p, a| p.closed(ops, a)).sum()
}

/// Block row vector supported on few cosets, stored as (coset, block) pairs; `pos` maps a
/// coset to its slot in the vector being built.
struct PathSum {
    block: usize,
    pos: Vec<u32>,
    keys: Vec<usize>,
    vals: Vec<C64>,
    next_keys: Vec<usize>,
    next_vals: Vec<C64>,
}

impl PathSum {
    fn new(rows: usize, block: usize) -> Self {
        PathSum { block, pos: vec![u32::MAX; rows], keys: Vec::new(), vals: Vec::new(), next_keys: Vec::new(), next_vals: Vec::new() }
    }

    /// Trace of block `(a, a)` of the product: `e_a` pushed through every factor.
    fn closed(&mut self, ops: &[&CosetOperator], a: usize) -> C64 {
        let (block, bb) = (self.block, self.block * self.block);
        let PathSum { pos, keys, vals, next_keys, next_vals, .. } = self;
        keys.clear();
        vals.clear();
        keys.push(a);
        vals.extend(CMat::identity(block, block).iter());
        for op in ops {
            next_keys.clear();
            next_vals.clear();
            for (fi, &row) in keys.iter().enumerate() {
                let acc = &vals[fi * bb..(fi + 1) * bb];
                for ti in op.row_ptr[row]..op.row_ptr[row + 1] {
                    let src = op.terms[ti].src as usize;
                    let slot = if pos[src] == u32::MAX {
                        let s = next_keys.len();
                        pos[src] = s as u32;
                        next_keys.push(src);
                        next_vals.resize((s + 1) * bb, ZERO);
                        s
                    } else {
                        pos[src] as usize
                    };
                    let out = &mut next_vals[slot * bb..(slot + 1) * bb];
                    match &op.scalars {
                        // One-dimensional blocks: the permutation is trivial.
                        Some(sc) => out[0] += acc[0] * sc[ti],
                        None => {
                            let prod = CMat::from_column_slice(block, block, acc) * op.term_matrix(ti);
                            out.iter_mut().zip(prod.iter()).for_each(|(o, x)| *o += x);
                        }
                    }
                }
            }
            for &k in next_keys.iter() {
                pos[k] = u32::MAX;
            }
            std::mem::swap(keys, next_keys);
            std::mem::swap(vals, next_vals);
        }
        match keys.iter().position(|&k| k == a) {
            Some(i) => (0..block).map(|j| vals[i * bb + j * block + j]).sum(),
            None => ZERO,
        }
    }
}

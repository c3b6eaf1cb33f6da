use num_complex::Complex64;

use crate::error::Result;
use crate::ff::{AdditiveCharacter, Fq, FqElem};
use crate::glgroup::{gl_order, CosetTable, FqMatrix};
use crate::linalg::CMat;

/// Largest Gelfand–Graev model that will be built.
pub const MAX_GG_DIM: usize = 20_000;

/// The right-regular action on `{f : G → C | f(ug) = ψ(u) f(g)}`, with functions stored
/// by their values on canonical `U \ G` representatives.
///
/// Every `ρ(g)` is monomial: `(ρ(g) f)(r_i) = ψ(u_i) f(r_j)` where `r_i g = u_i r_j`.
#[derive(Debug)]
pub struct GelfandGraev {
    n: usize,
    q: u32,
    psi: AdditiveCharacter,
    table: CosetTable,
}

/// Monomial matrix: row `i` holds `phase` at column `source`.
#[derive(Debug, Clone)]
pub struct MonomialMap {
    pub source: Vec<u32>,
    pub phase: Vec<Complex64>,
}

impl GelfandGraev {
    pub fn new(n: usize, q: u32, psi: AdditiveCharacter) -> Result<Self> {
        let field = Fq::new(q)?;
        let expected = gl_order(n, q) / (q as u128).pow((n * (n - 1) / 2) as u32);
        if expected > MAX_GG_DIM as u128 {
            return Err(crate::error::Error::Capacity(format!(
                "Gelfand-Graev model of GL_{n}(F_{q}) has dimension {expected} > {MAX_GG_DIM}"
            )));
        }
        debug_assert_eq!(psi.field(), field);
        let table = CosetTable::unipotent(n, q)?;
        Ok(GelfandGraev { n, q, psi, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn psi(&self) -> AdditiveCharacter {
        self.psi
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    /// `ψ(u) = ψ(Σ u_{i,i+1})` for upper unitriangular `u`.
    pub fn psi_u(&self, u: &FqMatrix) -> Complex64 {
        let s: u32 = (0..self.n - 1).map(|i| u.get(i, i + 1) as u32).sum();
        self.psi.eval(FqElem((s % self.q) as u8))
    }

    pub fn action(&self, g: &FqMatrix) -> MonomialMap {
        let len = self.dim();
        let mut source = Vec::with_capacity(len);
        let mut phase = Vec::with_capacity(len);
        for r in self.table.reps() {
            let d = self.table.decompose(&r.mul(g));
            source.push(d.index as u32);
            phase.push(self.psi_u(&d.p));
        }
        MonomialMap { source, phase }
    }
}

impl MonomialMap {
    /// `ρ(g) · m` for a matrix `m` with one row per coset.
    pub fn apply_rows(&self, m: &CMat) -> CMat {
        CMat::from_fn(m.nrows(), m.ncols(), |i, c| self.phase[i] * m[(self.source[i] as usize, c)])
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..v.len()).map(|i| self.phase[i] * v[self.source[i] as usize]).collect()
    }

    /// `tr(Q^† ρ(g) Q)` for an isometry `Q`.
    pub fn compressed_trace(&self, q: &CMat) -> Complex64 {
        let mut t = Complex64::new(0.0, 0.0);
        for i in 0..q.nrows() {
            let j = self.source[i] as usize;
            let ph = self.phase[i];
            for c in 0..q.ncols() {
                t += q[(i, c)].conj() * ph * q[(j, c)];
            }
        }
        t
    }
}

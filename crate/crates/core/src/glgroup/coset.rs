use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

use super::group::{generators, index_of_parabolic, Composition};
use super::matrix::{inv_mod, FqMatrix, MAX_N};

/// Largest coset space that will be tabulated.
pub const MAX_COSETS: usize = 200_000;

/// Which subgroup `H` the table describes right cosets `H g` of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosetKind {
    /// Standard parabolic `P` of the composition.
    Parabolic,
    /// Unipotent radical `U` of the parabolic (Levi part trivial).
    Unipotent,
}

/// Result of writing `g = p · r` with `r` a canonical representative.
#[derive(Debug, Clone, Copy)]
pub struct CosetDecomposition {
    pub index: usize,
    pub p: FqMatrix,
}

/// Canonical representatives for `H \ GL_n(F_q)`, `H` a standard parabolic or its unipotent radical.
///
/// A representative is a row-reduced form: going from the last block up, the rows of each
/// block are reduced modulo the span of all lower rows (entries at the lower pivot columns
/// cleared) and then, for parabolics, brought to reduced echelon form within the block.
#[derive(Debug, Clone)]
pub struct CosetTable {
    comp: Composition,
    q: u32,
    kind: CosetKind,
    parts: Vec<usize>,
    offsets: Vec<usize>,
    arith: Arith,
    reps: Vec<FqMatrix>,
    rep_inv: Vec<FqMatrix>,
    lookup: FxHashMap<FqMatrix, u32>,
}

impl CosetTable {
    pub fn parabolic(comp: Composition, q: u32) -> Result<Self> {
        Self::build(comp, q, CosetKind::Parabolic)
    }

    /// `U_n \ GL_n` for the full upper unitriangular group.
    pub fn unipotent(n: usize, q: u32) -> Result<Self> {
        Self::build(Composition::uniform(1, n)?, q, CosetKind::Unipotent)
    }

    fn build(comp: Composition, q: u32, kind: CosetKind) -> Result<Self> {
        let n = comp.n();
        crate::ff::Fq::new(q)?;
        if n > MAX_N {
            return Err(Error::Capacity(format!("n = {n} exceeds {MAX_N}")));
        }
        let expected = match kind {
            CosetKind::Parabolic => index_of_parabolic(&comp, q),
            CosetKind::Unipotent => {
                let levi: u128 = comp.parts().iter().map(|&m| super::group::gl_order(m, q)).product();
                index_of_parabolic(&comp, q) * levi
            }
        };
        if expected > MAX_COSETS as u128 {
            return Err(Error::Capacity(format!("{expected} cosets exceed the limit {MAX_COSETS}")));
        }
        let mut table = CosetTable {
            parts: comp.parts().to_vec(),
            offsets: comp.offsets(),
            arith: Arith::new(q as u8),
            comp,
            q,
            kind,
            reps: Vec::new(),
            rep_inv: Vec::new(),
            lookup: FxHashMap::default(),
        };
        // Breadth-first search of the right action of the generators on cosets.
        let gens = generators(n, q);
        let id = FqMatrix::identity(n, q);
        let mut found = vec![id];
        let mut seen: FxHashMap<FqMatrix, ()> = FxHashMap::default();
        seen.insert(id, ());
        let mut queue = VecDeque::from([id]);
        while let Some(r) = queue.pop_front() {
            for s in &gens {
                let c = table.canonical(&r.mul(s));
                if seen.insert(c, ()).is_none() {
                    found.push(c);
                    queue.push_back(c);
                }
            }
        }
        if found.len() as u128 != expected {
            return Err(Error::Internal(format!(
                "coset enumeration found {} representatives, expected {expected}",
                found.len()
            )));
        }
        // Identity first, the rest in code order.
        found[1..].sort_by_key(|m| m.code());
        table.rep_inv = found.iter().map(|r| r.inv().expect("representatives are invertible")).collect();
        table.lookup = found.iter().enumerate().map(|(i, r)| (*r, i as u32)).collect();
        table.reps = found;
        Ok(table)
    }

    pub fn composition(&self) -> &Composition {
        &self.comp
    }

    pub fn kind(&self) -> CosetKind {
        self.kind
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.comp.n()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[FqMatrix] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> &FqMatrix {
        &self.reps[i]
    }

    /// Index of the coset of the identity (always 0).
    pub fn identity_index(&self) -> usize {
        0
    }

    /// Canonical representative of `H g`.
    pub fn canonical(&self, g: &FqMatrix) -> FqMatrix {
        let n = g.n();
        let ar = &self.arith;
        let scale = self.kind == CosetKind::Parabolic;
        let mut out = FqMatrix::zero(n, self.q);
        // Reduced echelon basis of the span of the rows processed so far.
        let mut basis = [[0u8; MAX_N]; MAX_N];
        let mut pivots = [0usize; MAX_N];
        let mut nb = 0;
        for b in (0..self.parts.len()).rev() {
            let (off, len) = (self.offsets[b], self.parts[b]);
            let mut rows = [[0u8; MAX_N]; MAX_N];
            for (i, r) in rows[..len].iter_mut().enumerate() {
                *r = g.row(off + i);
                ar.reduce(r, &basis[..nb], &pivots[..nb], n);
            }
            if scale {
                ar.rref(&mut rows[..len], n);
            }
            for (i, r) in rows[..len].iter().enumerate() {
                out.set_row(off + i, r);
            }
            for r in &rows[..len] {
                let mut v = *r;
                ar.reduce(&mut v, &basis[..nb], &pivots[..nb], n);
                let piv = v[..n].iter().position(|&x| x != 0).expect("rows of an invertible matrix are independent");
                let inv = ar.inv[v[piv] as usize];
                ar.scale(&mut v, inv, n);
                for br in basis[..nb].iter_mut() {
                    let f = br[piv];
                    if f != 0 {
                        ar.sub_multiple(br, f, &v, n);
                    }
                }
                basis[nb] = v;
                pivots[nb] = piv;
                nb += 1;
            }
        }
        out
    }

    /// Index of the coset containing `g`, if `g` is invertible.
    pub fn index_of(&self, g: &FqMatrix) -> Option<usize> {
        self.lookup.get(&self.canonical(g)).map(|&i| i as usize)
    }

    /// Writes `g = p · r_index` with `p` in the subgroup.
    pub fn decompose(&self, g: &FqMatrix) -> CosetDecomposition {
        let r = self.canonical(g);
        let index = *self.lookup.get(&r).expect("canonical form of an invertible matrix is tabulated") as usize;
        let p = g.mul(&self.rep_inv[index]);
        CosetDecomposition { index, p }
    }

    /// Diagonal blocks of an element of the parabolic.
    pub fn levi_blocks(&self, p: &FqMatrix) -> Vec<FqMatrix> {
        let offsets = self.comp.offsets();
        self.comp.parts().iter().zip(offsets).map(|(&m, o)| p.block(o, o, m)).collect()
    }

    /// Full decomposition `g = diag(levi) · u · r`, returning `(levi blocks, u, index)`.
    pub fn decompose_full(&self, g: &FqMatrix) -> (Vec<FqMatrix>, FqMatrix, usize) {
        let d = self.decompose(g);
        let levi = self.levi_blocks(&d.p);
        let l = FqMatrix::block_diag(&levi);
        let u = l.inv().expect("Levi part is invertible").mul(&d.p);
        (levi, u, d.index)
    }

    /// Whether `p` lies in the subgroup described by this table.
    pub fn contains(&self, p: &FqMatrix) -> bool {
        let n = p.n();
        let comp = &self.comp;
        for i in 0..n {
            for j in 0..n {
                let (bi, bj) = (comp.block_of(i), comp.block_of(j));
                if bi > bj && p.get(i, j) != 0 {
                    return false;
                }
            }
        }
        match self.kind {
            CosetKind::Parabolic => self.levi_blocks(p).iter().all(|b| b.is_invertible()),
            CosetKind::Unipotent => self.levi_blocks(p).iter().all(|b| b.is_identity()),
        }
    }
}

/// Table-driven arithmetic in `F_q` for the row reductions.
#[derive(Debug, Clone)]
struct Arith {
    mul: [[u8; 8]; 8],
    sub: [[u8; 8]; 8],
    inv: [u8; 8],
}

impl Arith {
    fn new(q: u8) -> Self {
        let mut a = Arith { mul: [[0; 8]; 8], sub: [[0; 8]; 8], inv: [0; 8] };
        for x in 0..q {
            for y in 0..q {
                a.mul[x as usize][y as usize] = ((x as u32 * y as u32) % q as u32) as u8;
                a.sub[x as usize][y as usize] = ((x + q - y) % q) as u8;
            }
            if x != 0 {
                a.inv[x as usize] = inv_mod(x, q);
            }
        }
        a
    }

    /// `r −= f·b`.
    #[inline]
    fn sub_multiple(&self, r: &mut [u8; MAX_N], f: u8, b: &[u8; MAX_N], n: usize) {
        let m = &self.mul[f as usize];
        for j in 0..n {
            r[j] = self.sub[r[j] as usize][m[b[j] as usize] as usize];
        }
    }

    #[inline]
    fn scale(&self, r: &mut [u8; MAX_N], f: u8, n: usize) {
        let m = &self.mul[f as usize];
        for x in r[..n].iter_mut() {
            *x = m[*x as usize];
        }
    }

    /// Clears the pivot columns of `basis` from `r`.
    fn reduce(&self, r: &mut [u8; MAX_N], basis: &[[u8; MAX_N]], pivots: &[usize], n: usize) {
        for (b, &piv) in basis.iter().zip(pivots) {
            let f = r[piv];
            if f != 0 {
                self.sub_multiple(r, f, b, n);
            }
        }
    }

    /// Reduced row echelon form of a full-rank set of rows, in place.
    fn rref(&self, rows: &mut [[u8; MAX_N]], n: usize) {
        let mut lead = 0;
        for col in 0..n {
            if lead == rows.len() {
                break;
            }
            let Some(piv) = (lead..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
            rows.swap(lead, piv);
            let inv = self.inv[rows[lead][col] as usize];
            self.scale(&mut rows[lead], inv, n);
            let pr = rows[lead];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != lead && row[col] != 0 {
                    let f = row[col];
                    self.sub_multiple(row, f, &pr, n);
                }
            }
            lead += 1;
        }
    }
}

//! Block matrices with a fixed shape: `κ`, the group `𝒴`, `diag^k`, the arguments of
//! the Bessel–Speh and zeta sums, and the character `ψ_{(k,c)}` of `U_{(c^k)}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ff::{AdditiveCharacter, FqElem};

use super::matrix::{FqMatrix, MAX_N};

/// Interleaving permutation matrix for the split `c = c1 + c2` with `k` blocks.
///
/// Column `b·c + a` has its single 1 in row `b·c1 + a` when `a < c1` and in row
/// `k·c1 + b·c2 + (a − c1)` otherwise.
pub fn kappa_matrix(c1: usize, c2: usize, k: usize, q: u32) -> Result<FqMatrix> {
    if c1 == 0 || c2 == 0 || k == 0 {
        return Err(Error::Domain("kappa needs c1, c2, k >= 1".into()));
    }
    let c = c1 + c2;
    let n = k * c;
    if n > MAX_N {
        return Err(Error::Capacity(format!("kappa of size {n} exceeds {MAX_N}")));
    }
    let perm: Vec<usize> = (0..n)
        .map(|j| {
            let (b, a) = (j / c, j % c);
            if a < c1 {
                b * c1 + a
            } else {
                k * c1 + b * c2 + (a - c1)
            }
        })
        .collect();
    Ok(FqMatrix::permutation(q, &perm))
}

/// All matrices `[[I_{k c1}, 0], [Y, I_{k c2}]]` with `Y` strictly block upper triangular
/// (blocks `y_{ij}` of shape `c2 × c1`, `i < j`).
pub fn y_group(c1: usize, c2: usize, k: usize, q: u32) -> Result<Vec<FqMatrix>> {
    let n = k * (c1 + c2);
    if n > MAX_N || n == 0 {
        return Err(Error::Capacity(format!("Y group of size {n} outside 1..={MAX_N}")));
    }
    let mut positions = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            for a in 0..c2 {
                for b in 0..c1 {
                    positions.push((k * c1 + i * c2 + a, j * c1 + b));
                }
            }
        }
    }
    let count = (q as usize).checked_pow(positions.len() as u32).filter(|&x| x <= 1 << 22);
    let Some(count) = count else {
        return Err(Error::Capacity("Y group too large to enumerate".into()));
    };
    let id = FqMatrix::identity(n, q);
    Ok((0..count)
        .map(|mut code| {
            let mut m = id;
            for &(r, c) in &positions {
                m.set(r, c, (code % q as usize) as i64);
                code /= q as usize;
            }
            m
        })
        .collect())
}

/// `diag(h, ..., h)` with `k` copies.
pub fn diag_k(h: &FqMatrix, k: usize) -> FqMatrix {
    FqMatrix::block_diag(&vec![*h; k])
}

fn require_invertible(h: &FqMatrix) -> Result<()> {
    if h.is_invertible() {
        Ok(())
    } else {
        Err(Error::Domain("block argument h must be invertible".into()))
    }
}

/// `[[0, I_{(k-1)c}], [h, 0]]` for `h ∈ GL_c`.
pub fn bessel_argument(h: &FqMatrix, k: usize) -> Result<FqMatrix> {
    require_invertible(h)?;
    let c = h.n();
    let n = k * c;
    if n > MAX_N {
        return Err(Error::Capacity(format!("size {n} exceeds {MAX_N}")));
    }
    let mut m = FqMatrix::zero(n, h.q());
    for i in 0..(k - 1) * c {
        m.set(i, c + i, 1);
    }
    m.set_block((k - 1) * c, 0, h);
    Ok(m)
}

/// `[[0, I_c, 0], [0, 0, I_{(k-2)c}], [h, 0, X]]` with `X` a `c × (k-2)c` matrix in row-major order.
pub fn dual_zeta_argument(h: &FqMatrix, x: &[u8], k: usize) -> Result<FqMatrix> {
    require_invertible(h)?;
    if k < 2 {
        return Err(Error::Domain("dual zeta argument needs k >= 2".into()));
    }
    let c = h.n();
    let n = k * c;
    let w = (k - 2) * c;
    if x.len() != c * w {
        return Err(Error::Domain(format!("X must have {} entries", c * w)));
    }
    if n > MAX_N {
        return Err(Error::Capacity(format!("size {n} exceeds {MAX_N}")));
    }
    let mut m = FqMatrix::zero(n, h.q());
    for i in 0..(k - 1) * c {
        m.set(i, c + i, 1);
    }
    m.set_block((k - 1) * c, 0, h);
    for i in 0..c {
        for j in 0..w {
            m.set((k - 1) * c + i, 2 * c + j, x[i * w + j] as i64);
        }
    }
    Ok(m)
}

/// All `rows × cols` matrices over `F_q`, each in row-major order.
pub fn rectangular_matrices(rows: usize, cols: usize, q: u32) -> Vec<Vec<u8>> {
    let len = rows * cols;
    let count = (q as usize).pow(len as u32);
    (0..count)
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let v = (code % q as usize) as u8;
                    code /= q as usize;
                    v
                })
                .collect()
        })
        .collect()
}

/// One root subgroup `{I + t E_{ij}}` of `U_{(c^k)}` together with how `ψ_{(k,c)}` sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootPosition {
    pub i: usize,
    pub j: usize,
    /// True when the entry sits on the diagonal of a first-superdiagonal block, so that
    /// `ψ_{(k,c)}(I + t E_{ij}) = ψ(t)`; otherwise the character is trivial on it.
    pub on_trace: bool,
}

/// The character `ψ_{(k,c)}(u) = ψ(Σ_j tr X_j)` of `U_{(c^k)}`.
#[derive(Debug, Clone, Copy)]
pub struct KcCharacter {
    pub k: usize,
    pub c: usize,
    pub psi: AdditiveCharacter,
}

impl KcCharacter {
    pub fn new(k: usize, c: usize, psi: AdditiveCharacter) -> Self {
        KcCharacter { k, c, psi }
    }

    pub fn n(&self) -> usize {
        self.k * self.c
    }

    /// Whether `u` is block upper unitriangular with `c × c` blocks.
    pub fn contains(&self, u: &FqMatrix) -> bool {
        let (n, c) = (self.n(), self.c);
        if u.n() != n {
            return false;
        }
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (bi, bj) = (i / c, j / c);
                let v = u.get(i, j);
                if bi > bj {
                    v == 0
                } else if bi == bj {
                    v == (i == j) as u8
                } else {
                    true
                }
            })
        })
    }

    pub fn eval(&self, u: &FqMatrix) -> Result<Complex64> {
        if !self.contains(u) {
            return Err(Error::Domain("element is not in U_(c^k)".into()));
        }
        let c = self.c;
        let q = u.q();
        let mut s = 0u32;
        for b in 0..self.k - 1 {
            for a in 0..c {
                s += u.get(b * c + a, (b + 1) * c + a) as u32;
            }
        }
        Ok(self.psi.eval(FqElem((s % q) as u8)))
    }

    /// Root positions of `U_{(c^k)}`, row-major.
    pub fn root_positions(&self) -> Vec<RootPosition> {
        let (n, c) = (self.n(), self.c);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i / c < j / c {
                    out.push(RootPosition { i, j, on_trace: j / c == i / c + 1 && i % c == j % c });
                }
            }
        }
        out
    }
}

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ff::{Fq, FqElem};

/// Largest matrix size handled by [`FqMatrix`].
pub const MAX_N: usize = 6;

pub(crate) fn inv_mod(a: u8, q: u8) -> u8 {
    debug_assert!(a % q != 0);
    (1..q).find(|&b| (a as u32 * b as u32) % q as u32 == 1).unwrap()
}

/// Square matrix over a prime field, stored inline (row-major, stride `n`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    n: u8,
    q: u8,
    e: [u8; MAX_N * MAX_N],
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqMatrix(q={}, {:?})", self.q, self.rows())
    }
}

impl FqMatrix {
    pub fn zero(n: usize, q: u32) -> Self {
        assert!(n >= 1 && n <= MAX_N, "matrix size {n} out of range");
        FqMatrix { n: n as u8, q: q as u8, e: [0; MAX_N * MAX_N] }
    }

    pub fn identity(n: usize, q: u32) -> Self {
        let mut m = Self::zero(n, q);
        for i in 0..n {
            m.e[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod `q`.
    pub fn from_rows(q: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_N {
            return Err(Error::Capacity(format!("matrix size {n} outside 1..={MAX_N}")));
        }
        let mut m = Self::zero(n, q);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Domain("matrix rows must have equal length n".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.e[i * n + j] = v.rem_euclid(q as i64) as u8;
            }
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, q: u32, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zero(n, q);
        for i in 0..n {
            for j in 0..n {
                m.e[i * n + j] = f(i, j).rem_euclid(q as i64) as u8;
            }
        }
        m
    }

    /// Scalar matrix `z·I`.
    pub fn scalar(n: usize, q: u32, z: FqElem) -> Self {
        let mut m = Self::zero(n, q);
        for i in 0..n {
            m.e[i * n + i] = z.0;
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q as u32
    }

    pub fn field(&self) -> Fq {
        Fq::new(self.q as u32).expect("matrix built over a valid field")
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.n as usize + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        let n = self.n as usize;
        self.e[i * n + j] = v.rem_euclid(self.q as i64) as u8;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        (0..n).map(|i| self.e[i * n..(i + 1) * n].to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> [u8; MAX_N] {
        let n = self.n();
        let mut r = [0u8; MAX_N];
        r[..n].copy_from_slice(&self.e[i * n..(i + 1) * n]);
        r
    }

    pub fn set_row(&mut self, i: usize, r: &[u8; MAX_N]) {
        let n = self.n();
        self.e[i * n..(i + 1) * n].copy_from_slice(&r[..n]);
    }

    pub fn mul(&self, other: &FqMatrix) -> FqMatrix {
        debug_assert_eq!(self.n, other.n);
        debug_assert_eq!(self.q, other.q);
        let n = self.n();
        let q = self.q as u32;
        let mut out = Self::zero(n, q);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u32;
                for l in 0..n {
                    acc += self.e[i * n + l] as u32 * other.e[l * n + j] as u32;
                }
                out.e[i * n + j] = (acc % q) as u8;
            }
        }
        out
    }

    pub fn add(&self, other: &FqMatrix) -> FqMatrix {
        let n = self.n();
        let q = self.q;
        let mut out = *self;
        for i in 0..n * n {
            out.e[i] = (self.e[i] + other.e[i]) % q;
        }
        out
    }

    pub fn neg(&self) -> FqMatrix {
        let n = self.n();
        let q = self.q;
        let mut out = *self;
        for i in 0..n * n {
            out.e[i] = (q - self.e[i]) % q;
        }
        out
    }

    pub fn transpose(&self) -> FqMatrix {
        let n = self.n();
        Self::from_fn(n, self.q(), |i, j| self.get(j, i) as i64)
    }

    pub fn trace(&self) -> FqElem {
        let n = self.n();
        let s: u32 = (0..n).map(|i| self.get(i, i) as u32).sum();
        FqElem((s % self.q as u32) as u8)
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> FqElem {
        let n = self.n();
        let q = self.q as u32;
        let mut a = *self;
        let mut det = 1u32;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a.get(r, col) != 0) else {
                return FqElem(0);
            };
            if piv != col {
                for j in 0..n {
                    a.e.swap(piv * n + j, col * n + j);
                }
                det = (q - det % q) % q;
            }
            let p = a.get(col, col);
            det = det * p as u32 % q;
            let pinv = inv_mod(p, self.q) as u32;
            for r in col + 1..n {
                let f = a.get(r, col) as u32 * pinv % q;
                if f == 0 {
                    continue;
                }
                for j in col..n {
                    let v = (a.get(r, j) as u32 + q * q - f * a.get(col, j) as u32) % q;
                    a.e[r * n + j] = v as u8;
                }
            }
        }
        FqElem(det as u8)
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inv(&self) -> Result<FqMatrix> {
        let n = self.n();
        let q = self.q as u32;
        let mut a = *self;
        let mut b = Self::identity(n, q);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a.get(r, col) != 0) else {
                return Err(Error::Domain("matrix is singular".into()));
            };
            if piv != col {
                for j in 0..n {
                    a.e.swap(piv * n + j, col * n + j);
                    b.e.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = inv_mod(a.get(col, col), self.q) as u32;
            for j in 0..n {
                a.e[col * n + j] = (a.get(col, j) as u32 * pinv % q) as u8;
                b.e[col * n + j] = (b.get(col, j) as u32 * pinv % q) as u8;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col) as u32;
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    a.e[r * n + j] = ((a.get(r, j) as u32 + q * q - f * a.get(col, j) as u32) % q) as u8;
                    b.e[r * n + j] = ((b.get(r, j) as u32 + q * q - f * b.get(col, j) as u32) % q) as u8;
                }
            }
        }
        Ok(b)
    }

    /// Base-`q` integer code of the entries; injective for fixed `(n, q)`.
    pub fn code(&self) -> u128 {
        let n = self.n();
        let mut c = 0u128;
        for i in (0..n * n).rev() {
            c = c * self.q as u128 + self.e[i] as u128;
        }
        c
    }

    pub fn from_code(n: usize, q: u32, mut code: u128) -> Self {
        let mut m = Self::zero(n, q);
        for i in 0..n * n {
            m.e[i] = (code % q as u128) as u8;
            code /= q as u128;
        }
        m
    }

    /// The `r×r` sub-block starting at `(i0, j0)`.
    pub fn block(&self, i0: usize, j0: usize, r: usize) -> FqMatrix {
        Self::from_fn(r, self.q(), |i, j| self.get(i0 + i, j0 + j) as i64)
    }

    /// Writes `b` into this matrix with its top-left corner at `(i0, j0)`.
    pub fn set_block(&mut self, i0: usize, j0: usize, b: &FqMatrix) {
        let r = b.n();
        for i in 0..r {
            for j in 0..r {
                let v = b.get(i, j);
                let n = self.n();
                self.e[(i0 + i) * n + j0 + j] = v;
            }
        }
    }

    /// Block diagonal matrix with the given square blocks.
    pub fn block_diag(blocks: &[FqMatrix]) -> FqMatrix {
        let n: usize = blocks.iter().map(|b| b.n()).sum();
        let q = blocks[0].q();
        let mut m = Self::zero(n, q);
        let mut off = 0;
        for b in blocks {
            m.set_block(off, off, b);
            off += b.n();
        }
        m
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(q: u32, perm: &[usize]) -> FqMatrix {
        let n = perm.len();
        let mut m = Self::zero(n, q);
        for (j, &i) in perm.iter().enumerate() {
            m.e[i * n + j] = 1;
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n(), self.q())
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, q: u32, rng: &mut R) -> FqMatrix {
        loop {
            let m = Self::from_fn(n, q, |_, _| rng.gen_range(0..q as i64));
            if m.is_invertible() {
                return m;
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, q: u32, rng: &mut R) -> FqMatrix {
        Self::from_fn(n, q, |_, _| rng.gen_range(0..q as i64))
    }

    /// Elementary matrix `I + t·E_{ij}`.
    pub fn elementary(n: usize, q: u32, i: usize, j: usize, t: i64) -> FqMatrix {
        let mut m = Self::identity(n, q);
        let v = (m.get(i, j) as i64 + t).rem_euclid(q as i64);
        m.set(i, j, v);
        m
    }
}

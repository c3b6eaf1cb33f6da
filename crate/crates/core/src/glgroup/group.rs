use crate::error::{Error, Result};
use crate::ff::Fq;

use super::matrix::{inv_mod, FqMatrix, MAX_N};

/// Largest group that [`enumerate_group`] will list.
pub const MAX_ENUMERATED_ORDER: u128 = 1_000_000;

/// Ordered composition `(n_1, ..., n_r)` of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain("composition parts must be positive and nonempty".into()));
        }
        Ok(Composition { parts })
    }

    /// `(m, m, ..., m)` with `r` parts.
    pub fn uniform(m: usize, r: usize) -> Result<Self> {
        Self::new(vec![m; r])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Starting index of each block.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.parts
            .iter()
            .map(|&p| {
                let o = off;
                off += p;
                o
            })
            .collect()
    }

    /// Block containing row/column `i`.
    pub fn block_of(&self, i: usize) -> usize {
        let mut acc = 0;
        for (b, &p) in self.parts.iter().enumerate() {
            acc += p;
            if i < acc {
                return b;
            }
        }
        panic!("index {i} outside composition of {}", self.n())
    }
}

/// `|GL_n(F_q)|`.
pub fn gl_order(n: usize, q: u32) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n as u32).map(|i| qn - (q as u128).pow(i)).product()
}

/// `[GL_n : P]` for the standard parabolic of the composition.
pub fn index_of_parabolic(comp: &Composition, q: u32) -> u128 {
    let n = comp.n();
    let levi: u128 = comp.parts().iter().map(|&m| gl_order(m, q)).product();
    let sq: usize = comp.parts().iter().map(|m| m * m).sum();
    let unip_dim = (n * n - sq) / 2;
    gl_order(n, q) / (levi * (q as u128).pow(unip_dim as u32))
}

/// All of `GL_n(F_q)` in lexicographic order of rows.
pub fn enumerate_group(n: usize, q: u32) -> Result<Vec<FqMatrix>> {
    Fq::new(q)?;
    if n == 0 || n > MAX_N {
        return Err(Error::Capacity(format!("n = {n} outside 1..={MAX_N}")));
    }
    let order = gl_order(n, q);
    if order > MAX_ENUMERATED_ORDER {
        return Err(Error::Capacity(format!(
            "|GL_{n}(F_{q})| = {order} exceeds the enumeration limit {MAX_ENUMERATED_ORDER}"
        )));
    }
    let vectors: Vec<[u8; MAX_N]> = (0..(q as usize).pow(n as u32))
        .map(|mut c| {
            let mut v = [0u8; MAX_N];
            for slot in v[..n].iter_mut().rev() {
                *slot = (c % q as usize) as u8;
                c /= q as usize;
            }
            v
        })
        .collect();
    let mut out = Vec::with_capacity(order as usize);
    let mut rows: Vec<[u8; MAX_N]> = Vec::with_capacity(n);
    extend(n, q as u8, &vectors, &mut rows, &mut Vec::new(), &mut out);
    debug_assert_eq!(out.len() as u128, order);
    Ok(out)
}

// Depth-first choice of rows, each independent of the previous ones. `basis` holds
// an echelon basis (pivot, row) of the span chosen so far.
fn extend(
    n: usize,
    q: u8,
    vectors: &[[u8; MAX_N]],
    rows: &mut Vec<[u8; MAX_N]>,
    basis: &mut Vec<(usize, [u8; MAX_N])>,
    out: &mut Vec<FqMatrix>,
) {
    if rows.len() == n {
        let mut m = FqMatrix::zero(n, q as u32);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        out.push(m);
        return;
    }
    for v in vectors {
        let red = reduce(v, basis, n, q);
        let Some(piv) = red[..n].iter().position(|&x| x != 0) else { continue };
        let inv = inv_mod(red[piv], q) as u32;
        let mut nr = [0u8; MAX_N];
        for j in 0..n {
            nr[j] = (red[j] as u32 * inv % q as u32) as u8;
        }
        rows.push(*v);
        basis.push((piv, nr));
        extend(n, q, vectors, rows, basis, out);
        basis.pop();
        rows.pop();
    }
}

fn reduce(v: &[u8; MAX_N], basis: &[(usize, [u8; MAX_N])], n: usize, q: u8) -> [u8; MAX_N] {
    // Basis rows are processed in insertion order; each is normalized at its pivot and
    // later rows are reduced against earlier ones, so sequential elimination is exact.
    let mut r = *v;
    let q32 = q as u32;
    for (piv, b) in basis {
        let f = r[*piv] as u32;
        if f == 0 {
            continue;
        }
        for j in 0..n {
            r[j] = ((r[j] as u32 + q32 * q32 - f * b[j] as u32) % q32) as u8;
        }
    }
    r
}

/// A generating set of `GL_n(F_q)`: the transvections `I ± E_{i,i+1}`, `I + E_{i+1,i}` and
/// `diag(g, 1, ..., 1)` for a generator `g` of `F_q^×`.
pub fn generators(n: usize, q: u32) -> Vec<FqMatrix> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        gens.push(FqMatrix::elementary(n, q, i, i + 1, 1));
        gens.push(FqMatrix::elementary(n, q, i + 1, i, 1));
    }
    if q > 2 {
        let g = Fq::new(q).expect("valid q").generator();
        let mut d = FqMatrix::identity(n, q);
        d.set(0, 0, g.0 as i64);
        gens.push(d);
    }
    if gens.is_empty() {
        gens.push(FqMatrix::identity(n, q));
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_sizes() {
        assert_eq!(enumerate_group(1, 2).unwrap().len(), 1);
        assert_eq!(enumerate_group(2, 3).unwrap().len(), 48);
        assert_eq!(enumerate_group(2, 2).unwrap().len(), 6);
        assert_eq!(enumerate_group(3, 2).unwrap().len(), 168);
        assert!(matches!(enumerate_group(4, 3), Err(Error::Capacity(_))));
    }

    #[test]
    fn enumeration_is_distinct_and_invertible() {
        let g = enumerate_group(2, 5).unwrap();
        let mut codes: Vec<u128> = g.iter().map(|m| m.code()).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), 480);
        assert!(g.iter().all(|m| m.is_invertible()));
    }

    #[test]
    fn parabolic_indices() {
        assert_eq!(index_of_parabolic(&Composition::new(vec![2, 2]).unwrap(), 2), 35);
        assert_eq!(index_of_parabolic(&Composition::new(vec![1, 1]).unwrap(), 3), 4);
        assert_eq!(index_of_parabolic(&Composition::new(vec![3, 3]).unwrap(), 2), 1395);
        assert_eq!(index_of_parabolic(&Composition::new(vec![2, 2, 2]).unwrap(), 2), 22785);
    }

    #[test]
    fn generators_generate() {
        // Closure of the generating set under multiplication recovers the whole group.
        for (n, q) in [(2, 3), (3, 2), (2, 5)] {
            let gens = generators(n, q);
            let mut seen = std::collections::HashSet::new();
            let id = FqMatrix::identity(n, q);
            let mut frontier = vec![id];
            seen.insert(id);
            while let Some(x) = frontier.pop() {
                for s in &gens {
                    let y = x.mul(s);
                    if seen.insert(y) {
                        frontier.push(y);
                    }
                }
            }
            assert_eq!(seen.len() as u128, gl_order(n, q));
        }
    }
}

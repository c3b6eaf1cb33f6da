use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::glgroup::{dual_zeta_argument, enumerate_group, gl_order, rectangular_matrices, FqMatrix};
use crate::linalg::{CMat, C64, ZERO};
use crate::repcore::Rep;

/// `diag(h, I_{(k−1)c})`.
pub fn zeta_argument(h: &FqMatrix, k: usize) -> FqMatrix {
    let c = h.n();
    let mut blocks = vec![*h];
    if k > 1 {
        blocks.push(FqMatrix::identity((k - 1) * c, h.q()));
    }
    FqMatrix::block_diag(&blocks)
}

fn weighted_sum(pi: &Rep, weights: Vec<(FqMatrix, C64)>, scale: f64) -> Result<CMat> {
    let mut acc = CMat::zeros(pi.dim(), pi.dim());
    for (h, w) in weights {
        if w != ZERO {
            acc += pi.eval(&h)?.as_ref() * w;
        }
    }
    Ok(acc * C64::new(scale, 0.0))
}

/// `Z(W) = |GL_c|⁻¹ Σ_h W(diag(h, I_{(k−1)c})) π(h)` for a `(k,c)` Whittaker function `W`.
pub fn zeta_operator<W>(pi: &Rep, k: usize, w: W) -> Result<CMat>
where
    W: Fn(&FqMatrix) -> C64 + Sync,
{
    let (c, q) = (pi.n(), pi.q());
    let group = enumerate_group(c, q)?;
    let weights: Vec<(FqMatrix, C64)> = group.into_par_iter().map(|h| (h, w(&zeta_argument(&h, k)))).collect();
    weighted_sum(pi, weights, 1.0 / gl_order(c, q) as f64)
}

/// `Z∨(W) = q^{−(k−2)c²/2} |GL_c|⁻¹ Σ_h Σ_X W([[0, I_c, 0], [0, 0, I_{(k−2)c}], [h, 0, X]]) π(h)`,
/// `X` over `c × (k−2)c` matrices.
pub fn dual_zeta_operator<W>(pi: &Rep, k: usize, w: W) -> Result<CMat>
where
    W: Fn(&FqMatrix) -> C64 + Sync,
{
    if k < 2 {
        return Err(Error::Unsupported("the dual zeta operator needs k >= 2".into()));
    }
    let (c, q) = (pi.n(), pi.q());
    let group = enumerate_group(c, q)?;
    let xs = rectangular_matrices(c, (k - 2) * c, q);
    let weights: Vec<(FqMatrix, C64)> = group
        .into_par_iter()
        .map(|h| {
            let mut s = ZERO;
            for x in &xs {
                s += w(&dual_zeta_argument(&h, x, k)?);
            }
            Ok((h, s))
        })
        .collect::<Result<_>>()?;
    let scale = (q as f64).powf(-(((k - 2) * c * c) as f64) / 2.0) / gl_order(c, q) as f64;
    weighted_sum(pi, weights, scale)
}

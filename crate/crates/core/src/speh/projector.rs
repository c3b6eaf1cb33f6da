use crate::linalg::{CMat, C64};

use super::hecke::{length, reduced_words, HeckeAlgebra};

/// `Π_{j=2}^{c} (1 + x + ... + x^{j−1})`.
pub fn poincare_poly(c: usize, x: C64) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for j in 2..=c {
        let mut s = C64::new(0.0, 0.0);
        let mut p = C64::new(1.0, 0.0);
        for _ in 0..j {
            s += p;
            p *= x;
        }
        acc *= s;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    Speh,
    Steinberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorForm {
    /// Weighted sum of `h⁰_w` over `S_c`.
    Sum,
    /// Product over pairs `(i, j)` in lexicographic order, leftmost factor applied last.
    ProductLeftToRight,
    /// The same factors multiplied in the reverse order.
    ProductRightToLeft,
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Pairs `(i, j)`, `1 ≤ i < j ≤ c`, in lexicographic order.
fn lex_pairs(c: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=c {
        for j in i + 1..=c {
            out.push((i, j));
        }
    }
    out
}

/// Applies the Speh or Steinberg projector of `τ^{∘c}` to the columns of `m`.
pub fn apply_projector(hecke: &HeckeAlgebra, kind: ProjectorKind, form: ProjectorForm, m: &CMat) -> CMat {
    let model = hecke.model();
    let c = model.c();
    let x = (model.q() as f64).powi(model.k() as i32);
    match form {
        ProjectorForm::Sum => {
            let (weight, norm): (Box<dyn Fn(usize) -> f64>, C64) = match kind {
                ProjectorKind::Speh => (Box::new(|_| 1.0), poincare_poly(c, real(x))),
                ProjectorKind::Steinberg => (Box::new(move |l| (-1.0 / x).powi(l as i32)), poincare_poly(c, real(1.0 / x))),
            };
            let mut acc = CMat::zeros(m.nrows(), m.ncols());
            for (_, word) in reduced_words(c) {
                acc += hecke.apply_word(&word, m) * real(weight(word.len()));
            }
            acc / norm
        }
        ProjectorForm::ProductLeftToRight | ProjectorForm::ProductRightToLeft => {
            let mut factors: Vec<(usize, f64)> = lex_pairs(c)
                .into_iter()
                .map(|(i, j)| {
                    let gap = (j - i) as i32;
                    let shift = match kind {
                        ProjectorKind::Speh => (x - 1.0) / (x.powi(gap) - 1.0),
                        ProjectorKind::Steinberg => (x - 1.0) / (x.powi(-gap) - 1.0),
                    };
                    (j - i - 1, shift)
                })
                .collect();
            if form == ProjectorForm::ProductRightToLeft {
                factors.reverse();
            }
            let mut cur = m.clone();
            for &(s, shift) in factors.iter().rev() {
                cur = hecke.apply_simple(s, &cur) + &cur * real(shift);
            }
            let pre = match kind {
                ProjectorKind::Speh => real(1.0),
                ProjectorKind::Steinberg => real(if (c * (c - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 }),
            };
            cur * (pre / poincare_poly(c, real(x)))
        }
    }
}

/// `tr P` computed as the weighted sum of exact traces of `h⁰_w`; equals the rank of the
/// idempotent `P`.
pub fn projector_trace(hecke: &HeckeAlgebra, kind: ProjectorKind) -> C64 {
    let model = hecke.model();
    let c = model.c();
    let x = (model.q() as f64).powi(model.k() as i32);
    let mut acc = C64::new(0.0, 0.0);
    for (w, word) in reduced_words(c) {
        let weight = match kind {
            ProjectorKind::Speh => 1.0,
            ProjectorKind::Steinberg => (-1.0 / x).powi(length(&w) as i32),
        };
        acc += hecke.trace_word(&word) * real(weight);
    }
    let norm = match kind {
        ProjectorKind::Speh => poincare_poly(c, real(x)),
        ProjectorKind::Steinberg => poincare_poly(c, real(1.0 / x)),
    };
    acc / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poincare_examples() {
        assert_eq!(poincare_poly(1, real(5.0)), real(1.0));
        assert_eq!(poincare_poly(2, real(2.0)), real(3.0));
        assert_eq!(poincare_poly(3, real(2.0)), real(21.0));
    }
}

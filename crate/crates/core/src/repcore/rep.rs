use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::ff::{AdditiveCharacter, Fq, MultiplicativeCharacter};
use crate::glgroup::{enumerate_group, FqMatrix};
use crate::linalg::{sup_norm, CMat, CVec, ONE, ZERO};

use super::gelfand_graev::{GelfandGraev, MonomialMap};

/// Where the matrices of a [`Rep`] come from.
#[derive(Debug)]
pub enum RepSource {
    /// `χ ∘ det`.
    Character(MultiplicativeCharacter),
    /// The full Gelfand–Graev model.
    GelfandGraev(Arc<GelfandGraev>),
    /// An invariant subspace of `parent`, given by an orthonormal basis (columns).
    Subspace { parent: Arc<Rep>, basis: CMat },
    /// Entrywise complex conjugate of a unitary model.
    Conjugate(Arc<Rep>),
    Tensor(Arc<Rep>, Arc<Rep>),
}

/// A ψ-Whittaker functional `ℓ(x) = Σ coeffs_j x_j`.
#[derive(Debug, Clone)]
pub struct WhittakerFunctional {
    pub psi: AdditiveCharacter,
    pub coeffs: CVec,
}

impl WhittakerFunctional {
    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// The unit vector `v` with `ℓ(x) = ‖ℓ‖·⟨x, v⟩`; `ℓ(v)` is real positive.
    pub fn unit_vector(&self) -> CVec {
        let c = self.coeffs.map(|z| z.conj());
        let n = c.norm();
        c / Complex64::new(n, 0.0)
    }
}

/// The action of one group element: monomial for the Gelfand–Graev model, dense otherwise.
#[derive(Debug, Clone)]
pub enum Action {
    Monomial(MonomialMap),
    Dense(Arc<CMat>),
}

impl Action {
    pub fn apply(&self, m: &CMat) -> CMat {
        match self {
            Action::Monomial(map) => map.apply_rows(m),
            Action::Dense(a) => a.as_ref() * m,
        }
    }

    /// `A H A^†`.
    pub fn sandwich(&self, h: &CMat) -> CMat {
        match self {
            Action::Monomial(map) => {
                let n = h.nrows();
                CMat::from_fn(n, n, |a, b| {
                    map.phase[a] * map.phase[b].conj() * h[(map.source[a] as usize, map.source[b] as usize)]
                })
            }
            Action::Dense(a) => a.as_ref() * h * a.adjoint(),
        }
    }

    pub fn to_dense(&self) -> CMat {
        match self {
            Action::Monomial(map) => {
                let n = map.source.len();
                let mut m = CMat::zeros(n, n);
                for i in 0..n {
                    m[(i, map.source[i] as usize)] = map.phase[i];
                }
                m
            }
            Action::Dense(a) => a.as_ref().clone(),
        }
    }
}

/// A unitary matrix model of a representation of `GL_n(F_q)`.
#[derive(Debug)]
pub struct Rep {
    n: usize,
    q: u32,
    dim: usize,
    source: RepSource,
    whittaker: Option<WhittakerFunctional>,
    irreducible: bool,
    cache: RwLock<FxHashMap<u128, Arc<CMat>>>,
}

impl Rep {
    fn build(n: usize, q: u32, dim: usize, source: RepSource, whittaker: Option<WhittakerFunctional>, irreducible: bool) -> Rep {
        Rep { n, q, dim, source, whittaker, irreducible, cache: RwLock::new(FxHashMap::default()) }
    }

    /// `χ ∘ det` on `GL_n`. For `n = 1` the functional `ℓ(x) = x` is a Whittaker functional.
    pub fn character(n: usize, chi: MultiplicativeCharacter) -> Rep {
        let q = chi.field().q();
        let whittaker = (n == 1).then(|| WhittakerFunctional {
            psi: AdditiveCharacter::standard(chi.field()),
            coeffs: CVec::from_element(1, ONE),
        });
        Rep::build(n, q, 1, RepSource::Character(chi), whittaker, true)
    }

    pub fn trivial(n: usize, q: u32) -> Result<Rep> {
        Ok(Rep::character(n, MultiplicativeCharacter::trivial(Fq::new(q)?)))
    }

    /// The Gelfand–Graev representation; `ℓ(f) = f(e)` is its Whittaker functional.
    pub fn gelfand_graev(n: usize, q: u32, psi: AdditiveCharacter) -> Result<Rep> {
        let gg = Arc::new(GelfandGraev::new(n, q, psi)?);
        let dim = gg.dim();
        let mut coeffs = CVec::zeros(dim);
        coeffs[gg.table().identity_index()] = ONE;
        let whittaker = Some(WhittakerFunctional { psi, coeffs });
        Ok(Rep::build(n, q, dim, RepSource::GelfandGraev(gg), whittaker, false))
    }

    /// Restriction to the span of the orthonormal columns of `basis`, assumed invariant.
    pub fn subspace(parent: &Arc<Rep>, basis: CMat, irreducible: bool) -> Rep {
        let whittaker = parent.whittaker.as_ref().and_then(|w| {
            let coeffs = basis.transpose() * &w.coeffs;
            (coeffs.norm() > 1e-10).then_some(WhittakerFunctional { psi: w.psi, coeffs })
        });
        let dim = basis.ncols();
        Rep::build(parent.n, parent.q, dim, RepSource::Subspace { parent: parent.clone(), basis }, whittaker, irreducible)
    }

    /// The contragredient, realized as the complex-conjugate model.
    pub fn contragredient(r: &Arc<Rep>) -> Rep {
        let whittaker = r.whittaker.as_ref().map(|w| WhittakerFunctional {
            psi: w.psi.inverse(),
            coeffs: w.coeffs.map(|z| z.conj()),
        });
        Rep::build(r.n, r.q, r.dim, RepSource::Conjugate(r.clone()), whittaker, r.irreducible)
    }

    pub fn tensor(a: &Arc<Rep>, b: &Arc<Rep>) -> Result<Rep> {
        if a.n != b.n || a.q != b.q {
            return Err(Error::Domain("tensor factors must live on the same group".into()));
        }
        Ok(Rep::build(a.n, a.q, a.dim * b.dim, RepSource::Tensor(a.clone(), b.clone()), None, false))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> &RepSource {
        &self.source
    }

    pub fn is_known_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn whittaker(&self) -> Option<&WhittakerFunctional> {
        self.whittaker.as_ref()
    }

    fn check_element(&self, g: &FqMatrix) -> Result<()> {
        if g.n() != self.n || g.q() != self.q {
            return Err(Error::Domain(format!(
                "element of GL_{}(F_{}) given to a representation of GL_{}(F_{})",
                g.n(),
                g.q(),
                self.n,
                self.q
            )));
        }
        if !g.is_invertible() {
            return Err(Error::Domain("representation evaluated at a singular matrix".into()));
        }
        Ok(())
    }

    /// `ρ(g)` as a matrix-or-monomial action, without caching the dense form for large models.
    pub fn action(&self, g: &FqMatrix) -> Result<Action> {
        self.check_element(g)?;
        Ok(match &self.source {
            RepSource::GelfandGraev(gg) => Action::Monomial(gg.action(g)),
            _ => Action::Dense(self.eval(g)?),
        })
    }

    /// `ρ(g)`, memoized by the code of `g`.
    pub fn eval(&self, g: &FqMatrix) -> Result<Arc<CMat>> {
        self.check_element(g)?;
        let key = g.code();
        if let Some(m) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(self.compute(g)?);
        let mut w = self.cache.write().expect("cache lock");
        Ok(w.entry(key).or_insert(m).clone())
    }

    fn compute(&self, g: &FqMatrix) -> Result<CMat> {
        Ok(match &self.source {
            RepSource::Character(chi) => CMat::from_element(1, 1, chi.eval(g.det())?),
            RepSource::GelfandGraev(gg) => Action::Monomial(gg.action(g)).to_dense(),
            RepSource::Subspace { parent, basis } => basis.adjoint() * parent.action(g)?.apply(basis),
            RepSource::Conjugate(r) => r.eval(g)?.map(|z| z.conj()),
            RepSource::Tensor(a, b) => a.eval(g)?.kronecker(b.eval(g)?.as_ref()),
        })
    }

    pub fn character_trace(&self, g: &FqMatrix) -> Result<Complex64> {
        Ok(self.eval(g)?.trace())
    }

    /// Central character, checking `ρ(zI) = ω(z) I` for every `z ∈ F_q^×`.
    pub fn central_character(&self, tol: f64) -> Result<MultiplicativeCharacter> {
        let field = Fq::new(self.q)?;
        let gen = field.generator();
        let m = self.eval(&FqMatrix::scalar(self.n, self.q, gen))?;
        let lambda = m[(0, 0)];
        let turns = lambda.arg() / std::f64::consts::TAU * (self.q - 1) as f64;
        let e = turns.round() as i64;
        let omega = MultiplicativeCharacter::new(field, e);
        for z in field.units() {
            let m = self.eval(&FqMatrix::scalar(self.n, self.q, z))?;
            let w = omega.eval(z)?;
            let res = sup_norm(&(m.as_ref() - CMat::identity(self.dim, self.dim) * w));
            if res > tol {
                return Err(Error::NotIrreducible(format!("rho({}I) is not scalar (residual {res:e})", z.0)));
            }
        }
        Ok(omega)
    }

    /// Isomorphism by comparing character traces on every group element.
    pub fn is_isomorphic(&self, other: &Rep, tol: f64) -> Result<bool> {
        if self.n != other.n || self.q != other.q {
            return Ok(false);
        }
        if self.dim != other.dim {
            return Ok(false);
        }
        for g in enumerate_group(self.n, self.q)? {
            if (self.character_trace(&g)? - other.character_trace(&g)?).norm() > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Bessel function `B(g) = ⟨ρ(g)v_ψ, v_ψ⟩` for the unit Whittaker vector `v_ψ`.
    pub fn bessel(&self, g: &FqMatrix) -> Result<Complex64> {
        let w = self
            .whittaker
            .as_ref()
            .ok_or_else(|| Error::Unsupported("representation carries no Whittaker functional".into()))?;
        let v = w.unit_vector();
        let m = self.eval(g)?;
        Ok((m.as_ref() * &v).dotc(&v).conj())
    }

    /// Per-element action matrices of a parabolic-free check: `max ‖ρ(gh) − ρ(g)ρ(h)‖`.
    pub fn homomorphism_residual(&self, pairs: &[(FqMatrix, FqMatrix)]) -> Result<f64> {
        let mut worst = 0.0f64;
        for (g, h) in pairs {
            let lhs = self.eval(&g.mul(h))?;
            let rhs = self.eval(g)?.as_ref() * self.eval(h)?.as_ref();
            worst = worst.max(sup_norm(&(lhs.as_ref() - rhs)));
        }
        Ok(worst)
    }

    /// `Σ_{u∈N} ρ(u) / |N|` for the unipotent radical of the maximal parabolic `(n1, n − n1)`.
    pub fn radical_average(&self, n1: usize) -> Result<CMat> {
        let mut acc = CMat::identity(self.dim, self.dim);
        let qf = self.q as f64;
        for i in 0..n1 {
            for j in n1..self.n {
                let mut avg = CMat::zeros(self.dim, self.dim);
                for t in 0..self.q {
                    avg += self.eval(&FqMatrix::elementary(self.n, self.q, i, j, t as i64))?.as_ref();
                }
                acc = acc * avg / Complex64::new(qf, 0.0);
            }
        }
        Ok(acc)
    }

    /// Cuspidal iff every proper maximal parabolic radical averages to zero.
    pub fn is_cuspidal(&self, tol: f64) -> Result<bool> {
        for n1 in 1..self.n {
            if sup_norm(&self.radical_average(n1)?) > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The generators of `GL_n(F_q)` paired with their images.
    pub fn generator_images(&self) -> Result<Vec<(FqMatrix, Arc<CMat>)>> {
        crate::glgroup::generators(self.n, self.q)
            .into_iter()
            .map(|g| Ok((g, self.eval(&g)?)))
            .collect()
    }
}

/// Bilinear invariant pairing `⟨v, v∨⟩ = Σ v_i v∨_i` between a unitary model and its conjugate.
pub fn dual_pairing(v: &[Complex64], v_dual: &[Complex64]) -> Complex64 {
    v.iter().zip(v_dual).fold(ZERO, |acc, (a, b)| acc + a * b)
}

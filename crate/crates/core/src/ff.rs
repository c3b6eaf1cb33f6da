//! Prime-field arithmetic and the characters of `F_q` and `F_q^×`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest field size accepted by the toolkit.
pub const MAX_Q: u32 = 7;

/// A prime field `F_q`, `q <= 7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    q: u32,
}

impl Fq {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || !(2..q).all(|d| q % d != 0) {
            return Err(Error::Domain(format!("q = {q} is not prime")));
        }
        if q > MAX_Q {
            return Err(Error::Capacity(format!("q = {q} exceeds the supported maximum {MAX_Q}")));
        }
        Ok(Fq { q })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn elem(self, v: i64) -> FqElem {
        FqElem(v.rem_euclid(self.q as i64) as u8)
    }

    pub fn elements(self) -> impl Iterator<Item = FqElem> {
        (0..self.q as u8).map(FqElem)
    }

    pub fn units(self) -> impl Iterator<Item = FqElem> {
        (1..self.q as u8).map(FqElem)
    }

    #[inline]
    pub fn add(self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(((a.0 as u32 + b.0 as u32) % self.q) as u8)
    }

    #[inline]
    pub fn sub(self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(((a.0 as u32 + self.q - b.0 as u32) % self.q) as u8)
    }

    #[inline]
    pub fn neg(self, a: FqElem) -> FqElem {
        FqElem(((self.q - a.0 as u32) % self.q) as u8)
    }

    #[inline]
    pub fn mul(self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(((a.0 as u32 * b.0 as u32) % self.q) as u8)
    }

    pub fn inv(self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::Domain("inverse of zero in F_q".into()));
        }
        // a^(q-2)
        Ok(self.pow(a, self.q - 2))
    }

    pub fn pow(self, a: FqElem, mut e: u32) -> FqElem {
        let mut base = a;
        let mut acc = FqElem(1 % self.q as u8);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest generator of the cyclic group `F_q^×`.
    pub fn generator(self) -> FqElem {
        if self.q == 2 {
            return FqElem(1);
        }
        let order = self.q - 1;
        self.units()
            .find(|&g| (1..order).all(|e| self.pow(g, e).0 != 1))
            .expect("F_q^x is cyclic")
    }

    /// Discrete logarithm to the base [`Fq::generator`].
    pub fn log(self, a: FqElem) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::Domain("logarithm of zero in F_q".into()));
        }
        let g = self.generator();
        let mut acc = FqElem(1);
        for e in 0..self.q - 1 {
            if acc == a {
                return Ok(e);
            }
            acc = self.mul(acc, g);
        }
        unreachable!("generator does not reach {a:?}")
    }
}

/// A residue in `[0, q)`. The field it lives in is carried separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub u8);

impl FqElem {
    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Primitive `n`-th root of unity raised to `e`.
pub fn root_of_unity(n: u32, e: i64) -> Complex64 {
    let e = e.rem_euclid(n as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * e / n as f64)
}

/// Additive character `x ↦ exp(2πi·scale·x/q)`; `scale ≠ 0` keeps it nontrivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdditiveCharacter {
    field: Fq,
    scale: u32,
}

impl AdditiveCharacter {
    pub fn standard(field: Fq) -> Self {
        AdditiveCharacter { field, scale: 1 }
    }

    pub fn with_scale(field: Fq, scale: u32) -> Result<Self> {
        let scale = scale % field.q();
        if scale == 0 {
            return Err(Error::Domain("additive character must be nontrivial".into()));
        }
        Ok(AdditiveCharacter { field, scale })
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    /// `ψ^{-1}`, i.e. `x ↦ ψ(-x)`.
    pub fn inverse(&self) -> Self {
        AdditiveCharacter { field: self.field, scale: self.field.q() - self.scale }
    }

    #[inline]
    pub fn eval(&self, x: FqElem) -> Complex64 {
        let q = self.field.q();
        root_of_unity(q, (x.value() * self.scale % q) as i64)
    }
}

/// Multiplicative character `g^e ↦ exp(2πi·exponent·e/(q-1))` for the fixed generator `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiplicativeCharacter {
    field: Fq,
    exponent: u32,
}

impl MultiplicativeCharacter {
    pub fn new(field: Fq, exponent: i64) -> Self {
        let m = (field.q() - 1) as i64;
        MultiplicativeCharacter { field, exponent: exponent.rem_euclid(m) as u32 }
    }

    pub fn trivial(field: Fq) -> Self {
        Self::new(field, 0)
    }

    /// All `q - 1` characters, ordered by exponent.
    pub fn all(field: Fq) -> Vec<Self> {
        (0..field.q() as i64 - 1).map(|e| Self::new(field, e)).collect()
    }

    pub fn field(&self) -> Fq {
        self.field
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.field, -(self.exponent as i64))
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::new(self.field, self.exponent as i64 * n)
    }

    pub fn eval(&self, x: FqElem) -> Result<Complex64> {
        let e = self.field.log(x)?;
        Ok(root_of_unity(self.field.q() - 1, self.exponent as i64 * e as i64))
    }

    /// `χ(-1)`, always `±1`.
    pub fn sign(&self) -> f64 {
        let minus_one = self.field.elem(-1);
        self.eval(minus_one).expect("-1 is a unit").re.round()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn rejects_composite_and_large() {
        assert!(matches!(Fq::new(4), Err(Error::Domain(_))));
        assert!(matches!(Fq::new(1), Err(Error::Domain(_))));
        assert!(matches!(Fq::new(11), Err(Error::Capacity(_))));
        assert!(Fq::new(7).is_ok());
    }

    #[test]
    fn field_arith_examples() {
        let f3 = Fq::new(3).unwrap();
        assert_eq!(f3.add(FqElem(2), FqElem(2)), FqElem(1));
        assert_eq!(f3.inv(FqElem(2)).unwrap(), FqElem(2));
        let f5 = Fq::new(5).unwrap();
        assert_eq!(f5.mul(FqElem(3), FqElem(4)), FqElem(2));
        assert_eq!(f5.neg(FqElem(0)), FqElem(0));
        assert!(matches!(f5.inv(FqElem(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn psi_examples() {
        let f3 = Fq::new(3).unwrap();
        let psi = AdditiveCharacter::standard(f3);
        assert!(close(psi.eval(FqElem(0)), Complex64::new(1.0, 0.0)));
        assert!(close(psi.eval(FqElem(1)), Complex64::from_polar(1.0, 2.0 * PI / 3.0)));
        let psi2 = AdditiveCharacter::standard(Fq::new(2).unwrap());
        assert!(close(psi2.eval(FqElem(1)), Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn chi_examples() {
        let f3 = Fq::new(3).unwrap();
        assert!(close(MultiplicativeCharacter::trivial(f3).eval(FqElem(2)).unwrap(), 1.0.into()));
        let sgn = MultiplicativeCharacter::new(f3, 1);
        assert!(close(sgn.eval(FqElem(2)).unwrap(), (-1.0).into()));
        assert!(matches!(sgn.eval(FqElem(0)), Err(Error::Domain(_))));

        // q = 5, generator 2, exponent 1: χ(4) = χ(2)^2 = i^2.
        let f5 = Fq::new(5).unwrap();
        assert_eq!(f5.generator(), FqElem(2));
        let chi = MultiplicativeCharacter::new(f5, 1);
        let mut power = FqElem(1);
        let mut expected = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            power = f5.mul(power, FqElem(2));
            expected *= Complex64::i();
        }
        assert_eq!(power, FqElem(4));
        assert!(close(chi.eval(FqElem(4)).unwrap(), expected));
        assert!(close(expected, (-1.0).into()));
    }

    #[test]
    fn orthogonality_sums() {
        for q in [2, 3, 5, 7] {
            let f = Fq::new(q).unwrap();
            let psi = AdditiveCharacter::standard(f);
            let s: Complex64 = f.elements().map(|x| psi.eval(x)).sum();
            assert!(s.norm() < 1e-12);
            for chi in MultiplicativeCharacter::all(f) {
                let s: Complex64 = f.units().map(|x| chi.eval(x).unwrap()).sum();
                let expected = if chi.is_trivial() { (q - 1) as f64 } else { 0.0 };
                assert!((s - expected).norm() < 1e-12, "q={q} chi={chi:?}");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn psi_is_additive(qi in 0usize..4, x in 0u8..7, y in 0u8..7, scale in 1u32..7) {
            let q = [2, 3, 5, 7][qi];
            let f = Fq::new(q).unwrap();
            let (x, y) = (f.elem(x as i64), f.elem(y as i64));
            proptest::prop_assume!(scale % q != 0);
            let psi = AdditiveCharacter::with_scale(f, scale).unwrap();
            let lhs = psi.eval(f.add(x, y));
            proptest::prop_assert!((lhs - psi.eval(x) * psi.eval(y)).norm() < 1e-12);
            proptest::prop_assert!((psi.eval(x).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn chi_is_multiplicative(qi in 0usize..4, x in 1u8..7, y in 1u8..7, e in 0i64..6) {
            let q = [2, 3, 5, 7][qi];
            let f = Fq::new(q).unwrap();
            let (x, y) = (f.elem(x as i64), f.elem(y as i64));
            proptest::prop_assume!(!x.is_zero() && !y.is_zero());
            let chi = MultiplicativeCharacter::new(f, e);
            let lhs = chi.eval(f.mul(x, y)).unwrap();
            proptest::prop_assert!((lhs - chi.eval(x).unwrap() * chi.eval(y).unwrap()).norm() < 1e-12);
        }

        #[test]
        fn field_laws(qi in 0usize..4, a in 0u8..7, b in 0u8..7, c in 0u8..7) {
            let q = [2, 3, 5, 7][qi];
            let f = Fq::new(q).unwrap();
            let (a, b, c) = (f.elem(a as i64), f.elem(b as i64), f.elem(c as i64));
            proptest::prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            proptest::prop_assert_eq!(f.add(a, f.neg(a)), FqElem(0));
            if !a.is_zero() {
                proptest::prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FqElem(1));
            }
        }
    }
}

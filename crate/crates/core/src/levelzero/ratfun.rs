use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};

/// Coefficient tolerance used for trimming, gcd reduction and equality.
pub const COEFF_TOL: f64 = 1e-10;

/// Polynomial in one indeterminate with complex coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() < COEFF_TOL) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Poly::new(vec![ZERO, ONE])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: C64) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(ONE / self.leading())
    }

    /// Euclidean division `self = quot·d + rem`. Remainder coefficients that are small relative to
    /// the dividend are dropped.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or_else(|| Error::Domain("polynomial division by zero".into()))?;
        let scale = self.sup_norm().max(1.0);
        let mut rem = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if ds < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead = d.leading();
        let mut quot = vec![ZERO; ds - dd + 1];
        for i in (0..=ds - dd).rev() {
            let t = rem[i + dd] / lead;
            quot[i] = t;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= t * dc;
            }
            rem[i + dd] = ZERO;
        }
        rem.truncate(dd);
        for c in rem.iter_mut() {
            if c.norm() < COEFF_TOL * scale {
                *c = ZERO;
            }
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor by the Euclidean algorithm with relative trimming.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.monic(), b.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r.monic();
        }
        a
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(ZERO);
        Poly::new((0..n).map(|i| get(self, i) + get(rhs, i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Rational function `numer/denom`, kept reduced with a monic denominator.
#[derive(Debug, Clone)]
pub struct RatFun {
    numer: Poly,
    denom: Poly,
}

impl RatFun {
    pub fn new(numer: Poly, denom: Poly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        Ok(Self::reduced(numer, denom))
    }

    fn reduced(numer: Poly, denom: Poly) -> Self {
        if numer.is_zero() {
            return RatFun { numer, denom: Poly::constant(ONE) };
        }
        let g = Poly::gcd(&numer, &denom);
        let (numer, denom) = if g.degree().unwrap_or(0) > 0 {
            (numer.div_rem(&g).expect("gcd is nonzero").0, denom.div_rem(&g).expect("gcd is nonzero").0)
        } else {
            (numer, denom)
        };
        let lead = denom.leading();
        RatFun { numer: numer.scale(ONE / lead), denom: denom.scale(ONE / lead) }
    }

    pub fn constant(c: C64) -> Self {
        RatFun { numer: Poly::constant(c), denom: Poly::constant(ONE) }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { numer: p, denom: Poly::constant(ONE) }
    }

    /// The indeterminate `X`.
    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn numer(&self) -> &Poly {
        &self.numer
    }

    pub fn denom(&self) -> &Poly {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn checked_div(&self, rhs: &RatFun) -> Result<RatFun> {
        if rhs.is_zero() {
            return Err(Error::Domain("division by the zero rational function".into()));
        }
        RatFun::new(&self.numer * &rhs.denom, &self.denom * &rhs.numer)
    }

    /// Value at `x`; a pole is a domain error.
    pub fn eval(&self, x: C64) -> Result<C64> {
        let d = self.denom.eval(x);
        if d.norm() < COEFF_TOL {
            return Err(Error::Domain(format!("pole at {x}")));
        }
        Ok(self.numer.eval(x) / d)
    }

    /// Largest coefficient of `a·d' − a'·d` for `self = a/d`, `other = a'/d'`.
    pub fn mismatch(&self, other: &RatFun) -> f64 {
        (&(&self.numer * &other.denom) - &(&other.numer * &self.denom)).sup_norm()
    }

    pub fn approx_eq(&self, other: &RatFun, tol: f64) -> bool {
        self.mismatch(other) < tol
    }

    /// First `n` Taylor coefficients at `X = 0`; requires `denom(0) ≠ 0`.
    pub fn series(&self, n: usize) -> Result<Vec<C64>> {
        let d = self.denom.coeffs();
        if d[0].norm() < COEFF_TOL {
            return Err(Error::Domain("pole at X = 0".into()));
        }
        let num = self.numer.coeffs();
        let mut out: Vec<C64> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = num.get(i).copied().unwrap_or(ZERO);
            for j in 1..d.len().min(i + 1) {
                acc -= d[j] * out[i - j];
            }
            out.push(acc / d[0]);
        }
        Ok(out)
    }

    /// Roots of the numerator and denominator for degrees up to 2.
    pub fn zeros_and_poles(&self) -> Result<(Vec<C64>, Vec<C64>)> {
        Ok((roots(&self.numer)?, roots(&self.denom)?))
    }
}

fn roots(p: &Poly) -> Result<Vec<C64>> {
    match p.coeffs() {
        [] | [_] => Ok(Vec::new()),
        [a, b] => Ok(vec![-a / b]),
        [a, b, c] => {
            let disc = (b * b - a * c * 4.0).sqrt();
            Ok(vec![(-b + disc) / (c * 2.0), (-b - disc) / (c * 2.0)])
        }
        _ => Err(Error::Unsupported("roots of polynomials of degree > 2".into())),
    }
}

impl PartialEq for RatFun {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, COEFF_TOL)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        RatFun::reduced(&(&self.numer * &rhs.denom) + &(&rhs.numer * &self.denom), &self.denom * &rhs.denom)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { numer: -&self.numer, denom: self.denom.clone() }
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::reduced(&self.numer * &rhs.numer, &self.denom * &rhs.denom)
    }
}

impl Mul<C64> for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: C64) -> RatFun {
        RatFun::reduced(self.numer.scale(rhs), self.denom.clone())
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let terms: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() >= COEFF_TOL)
        .map(|(i, c)| match i {
            0 => format!("({c})"),
            1 => format!("({c})X"),
            _ => format!("({c})X^{i}"),
        })
        .collect();
    write!(f, "{}", terms.join(" + "))
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        fmt_poly(&self.numer, f)?;
        write!(f, "] / [")?;
        fmt_poly(&self.denom, f)?;
        write!(f, "]")
    }
}

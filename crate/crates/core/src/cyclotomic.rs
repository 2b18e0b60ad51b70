//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are rational polynomials of degree `< φ(N)` reduced modulo the
//! `N`-th cyclotomic polynomial. Used wherever an Euler-number recurrence
//! has to be run without rounding before being embedded into the complex
//! or p-adic scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qcore::{RootOfUnity, Scalar};

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    // x^n - 1
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            poly = divide_monic(&poly, &cyclotomic_polynomial(d));
        }
    }
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[i + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

#[derive(Debug, PartialEq, Eq)]
struct Field {
    order: u64,
    modulus: Vec<i64>,
}

impl Field {
    fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        for i in (deg..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[i], BigRational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, &m) in self.modulus[..deg].iter().enumerate() {
                if m != 0 {
                    raw[i - deg + j] -= &c * BigRational::from(BigInt::from(m));
                }
            }
        }
        raw.resize(deg, BigRational::zero());
        raw
    }
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    field: Arc<Field>,
    coeffs: Vec<BigRational>,
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dd = den.len() - 1;
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead = den[dd].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

impl Cyclotomic {
    fn field(order: u64) -> Result<Arc<Field>> {
        if order == 0 {
            return Err(Error::OutOfRange("cyclotomic field of order 0".into()));
        }
        Ok(Arc::new(Field { order, modulus: cyclotomic_polynomial(order) }))
    }

    fn with_coeffs(&self, coeffs: Vec<BigRational>) -> Self {
        Cyclotomic { field: Arc::clone(&self.field), coeffs: self.field.reduce(coeffs) }
    }

    pub fn from_rational(order: u64, r: BigRational) -> Result<Self> {
        let field = Self::field(order)?;
        let mut coeffs = vec![BigRational::zero(); field.degree()];
        coeffs[0] = r;
        Ok(Cyclotomic { field, coeffs })
    }

    pub fn zero(order: u64) -> Result<Self> {
        Self::from_rational(order, BigRational::zero())
    }

    pub fn one(order: u64) -> Result<Self> {
        Self::from_rational(order, BigRational::one())
    }

    /// `w` viewed in `Q(ζ_N)`; its order must divide `N`.
    pub fn root(order: u64, w: RootOfUnity) -> Result<Self> {
        let w = w.at_order(order)?;
        let field = Self::field(order)?;
        let mut raw = vec![BigRational::zero(); w.index() as usize + 1];
        raw[w.index() as usize] = BigRational::one();
        let coeffs = field.reduce(raw);
        Ok(Cyclotomic { field, coeffs })
    }

    /// Same field, rational value.
    pub fn rational_like(&self, r: BigRational) -> Self {
        let mut coeffs = vec![BigRational::zero(); self.field.degree()];
        coeffs[0] = r;
        Cyclotomic { field: Arc::clone(&self.field), coeffs }
    }

    /// Same field, the root of unity `w`.
    pub fn root_like(&self, w: RootOfUnity) -> Result<Self> {
        let w = w.at_order(self.field.order)?;
        let mut raw = vec![BigRational::zero(); w.index() as usize + 1];
        raw[w.index() as usize] = BigRational::one();
        Ok(self.with_coeffs(raw))
    }

    pub fn field_order(&self) -> u64 {
        self.field.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero in a cyclotomic field"));
        }
        let modulus: Vec<BigRational> =
            self.field.modulus.iter().map(|&c| BigRational::from(BigInt::from(c))).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // extended Euclid: s_i · a ≡ r_i (mod Φ_N)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return Err(Error::DivisionByZero("non-invertible cyclotomic element"));
        }
        let g = r0[0].clone();
        Ok(self.with_coeffs(s0.into_iter().map(|c| c / &g).collect()))
    }

    /// `Σ c_i ζ_N^i` in the scalar ring of `like`.
    pub fn embed<S: Scalar>(&self, like: &S) -> Result<S> {
        let mut acc = like.zero_like();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let root = like.root_of_unity_like(RootOfUnity::new(self.field.order, i as u64)?)?;
            acc = acc + like.from_ratio_like(c)? * root;
        }
        Ok(acc)
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(self.field.order, other.field.order, "mixing different cyclotomic fields");
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic({self})")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z{}^{i}", self.field.order)?,
                _ => write!(f, "{a}*z{}^{i}", self.field.order)?,
            }
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { field: Arc::clone(&self.field), coeffs }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { field: Arc::clone(&self.field), coeffs }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check_field(rhs);
        self.with_coeffs(poly_mul(&self.coeffs, &rhs.coeffs))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// Smallest field order holding every root in `roots`.
pub fn common_order<'a, I: IntoIterator<Item = &'a RootOfUnity>>(roots: I) -> u64 {
    roots.into_iter().fold(1u64, |acc, w| acc.lcm(&w.exact_order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_multiply_correctly() {
        let i = Cyclotomic::root(12, RootOfUnity::new(4, 1).unwrap()).unwrap();
        let minus_one = Cyclotomic::from_rational(12, q(-1, 1)).unwrap();
        assert_eq!(&i * &i, minus_one);
        let z = Cyclotomic::root(12, RootOfUnity::new(12, 1).unwrap()).unwrap();
        let mut acc = Cyclotomic::one(12).unwrap();
        for _ in 0..12 {
            acc = &acc * &z;
        }
        assert_eq!(acc, Cyclotomic::one(12).unwrap());
    }

    #[test]
    fn inverse_round_trip() {
        let z = Cyclotomic::root(5, RootOfUnity::new(5, 2).unwrap()).unwrap();
        let a = &Cyclotomic::from_rational(5, q(3, 7)).unwrap() + &z;
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Cyclotomic::one(5).unwrap());
        assert!(Cyclotomic::zero(5).unwrap().inverse().is_err());
    }

    #[test]
    fn complex_embedding_is_a_homomorphism() {
        let z = Cyclotomic::root(9, RootOfUnity::new(9, 4).unwrap()).unwrap();
        let a = &(&z * &z) + &Cyclotomic::from_rational(9, q(-2, 3)).unwrap();
        let b = a.inverse().unwrap();
        let like = Complex64::new(0.0, 0.0);
        let ea = a.embed(&like).unwrap();
        let eb = b.embed(&like).unwrap();
        assert!((ea * eb - 1.0).norm() < 1e-13);
        let w = RootOfUnity::new(9, 4).unwrap().to_complex();
        assert!((ea - (w * w - 2.0 / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn display_forms() {
        assert_eq!(Cyclotomic::from_rational(3, q(-1, 2)).unwrap().to_string(), "-1/2");
        let z = Cyclotomic::root(4, RootOfUnity::new(4, 1).unwrap()).unwrap();
        assert_eq!((&z + &Cyclotomic::one(4).unwrap()).to_string(), "1 + z4^1");
    }
}

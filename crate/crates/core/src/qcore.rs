//! q-number arithmetic and the scalar abstraction shared by the complex and
//! p-adic halves of the crate.
//!
//! Every higher-level routine is written once against [`Scalar`], which is
//! implemented for exactly two carriers: [`Complex64`] (the disk `|q| < 1`)
//! and [`CycloPadic`](crate::padic::CycloPadic) (the p-adic regime
//! `|1 - q|_p < 1`, with room for a `p^r`-th root of unity). The trait is
//! sealed.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) mod sealed {
    pub trait Sealed {}
}

/// Which of the two parameter regimes a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `q` complex with `0 < |q| < 1`.
    ComplexDisk,
    /// `q` p-adic with `|1 - q|_p < 1`.
    PadicNear1,
}

/// An exponent that a q-parameter can be raised to: `q^x`, `q^h`.
///
/// Integers are admitted everywhere. Rationals are admitted in the p-adic
/// regime when the denominator is prime to `p`. Complex exponents only make
/// sense in the complex regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Int(i64),
    Rational(Ratio<i64>),
    Complex(Complex64),
}

impl Exponent {
    pub fn rational(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero("rational exponent with zero denominator"));
        }
        Ok(Exponent::Rational(Ratio::new(num, den)).normalized())
    }

    fn normalized(self) -> Self {
        match self {
            Exponent::Rational(r) if r.is_integer() => Exponent::Int(r.to_integer()),
            other => other,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Exponent::Int(n) => *n == 0,
            Exponent::Rational(r) => r.is_zero(),
            Exponent::Complex(c) => num_traits::Zero::is_zero(c),
        }
    }

    /// The exponent as an integer, when it is one exactly.
    pub fn as_integer(&self) -> Option<i64> {
        match self.normalized() {
            Exponent::Int(n) => Some(n),
            Exponent::Complex(c) if c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 9.0e15 => Some(c.re as i64),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Exponent::Int(n) => Complex64::new(*n as f64, 0.0),
            Exponent::Rational(r) => Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0),
            Exponent::Complex(c) => *c,
        }
    }

    pub fn add_int(&self, k: i64) -> Self {
        match self {
            Exponent::Int(n) => Exponent::Int(n + k),
            Exponent::Rational(r) => Exponent::Rational(r + k).normalized(),
            Exponent::Complex(c) => Exponent::Complex(c + k as f64),
        }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        match self {
            Exponent::Int(n) => Exponent::Int(n * k),
            Exponent::Rational(r) => Exponent::Rational(r * k).normalized(),
            Exponent::Complex(c) => Exponent::Complex(c * k as f64),
        }
    }

    pub fn div_int(&self, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DivisionByZero("exponent divided by zero"));
        }
        Ok(match self {
            Exponent::Int(n) => Exponent::Rational(Ratio::new(*n, d)).normalized(),
            Exponent::Rational(r) => Exponent::Rational(r / d).normalized(),
            Exponent::Complex(c) => Exponent::Complex(c / d as f64),
        })
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::Int(n)
    }
}

impl From<Ratio<i64>> for Exponent {
    fn from(r: Ratio<i64>) -> Self {
        Exponent::Rational(r).normalized()
    }
}

impl From<Complex64> for Exponent {
    fn from(c: Complex64) -> Self {
        Exponent::Complex(c)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Int(n) => write!(f, "{n}"),
            Exponent::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Complex(c) => write!(f, "{},{}", c.re, c.im),
        }
    }
}

/// The root of unity `exp(2 pi i k / m)`, stored exactly as `(m, k)`.
///
/// The pair is kept as given; equality and hashing go through the reduced
/// fraction `k/m`.
#[derive(Debug, Clone, Copy)]
pub struct RootOfUnity {
    order: u64,
    index: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, index: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange("root of unity order must be positive".into()));
        }
        if index >= order {
            return Err(Error::OutOfRange(format!("root of unity index {index} must be below its order {order}")));
        }
        Ok(RootOfUnity { order, index })
    }

    pub fn one() -> Self {
        RootOfUnity { order: 1, index: 0 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// `(m', k')` with `k'/m' = k/m` in lowest terms; `(1, 0)` for 1.
    pub fn reduced(&self) -> (u64, u64) {
        let g = self.order.gcd(&self.index);
        (self.order / g, self.index / g)
    }

    /// The exact multiplicative order of the value.
    pub fn exact_order(&self) -> u64 {
        self.reduced().0
    }

    pub fn is_one(&self) -> bool {
        self.index == 0
    }

    /// `w^e`, kept at the same stored order.
    pub fn pow(&self, e: i64) -> Self {
        let m = self.order as i128;
        let k = (self.index as i128 * e as i128).rem_euclid(m);
        RootOfUnity { order: self.order, index: k as u64 }
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// Product, expressed at order `lcm(m1, m2)`.
    pub fn mul(&self, other: &RootOfUnity) -> Self {
        let m = self.order.lcm(&other.order);
        let k = (self.index * (m / self.order) + other.index * (m / other.order)) % m;
        RootOfUnity { order: m, index: k }
    }

    /// Re-express at a multiple of the stored order.
    pub fn at_order(&self, m: u64) -> Result<Self> {
        let (m0, k0) = self.reduced();
        if m == 0 || !m.is_multiple_of(m0) {
            return Err(Error::Embedding(format!("{self} does not lie in the group of order {m}")));
        }
        Ok(RootOfUnity { order: m, index: k0 * (m / m0) })
    }

    pub fn to_complex(&self) -> Complex64 {
        let (m, k) = self.reduced();
        match (m, k) {
            (1, _) => Complex64::new(1.0, 0.0),
            (2, _) => Complex64::new(-1.0, 0.0),
            (4, 1) => Complex64::new(0.0, 1.0),
            (4, 3) => Complex64::new(0.0, -1.0),
            _ => {
                let (s, c) = (std::f64::consts::TAU * k as f64 / m as f64).sin_cos();
                Complex64::new(c, s)
            }
        }
    }
}

impl PartialEq for RootOfUnity {
    fn eq(&self, other: &Self) -> bool {
        self.reduced() == other.reduced()
    }
}

impl Eq for RootOfUnity {}

impl Hash for RootOfUnity {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.reduced().hash(state);
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.order, self.index)
    }
}

impl FromStr for RootOfUnity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (m, k) =
            s.split_once(':').ok_or_else(|| Error::Parse(format!("root of unity '{s}' must look like m:k")))?;
        let m = m.trim().parse::<u64>().map_err(|e| Error::Parse(format!("order '{m}': {e}")))?;
        let k = k.trim().parse::<u64>().map_err(|e| Error::Parse(format!("index '{k}': {e}")))?;
        RootOfUnity::new(m, k)
    }
}

/// Field/ring element carrier used by every evaluation routine.
///
/// The `*_like` constructors build constants in the same ring as `self`
/// (same prime, precision and cyclotomic extension in the p-adic case).
pub trait Scalar:
    sealed::Sealed
    + Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Data remembered about `q` so that `q^x` is single-valued.
    type Log: Clone + fmt::Debug + Send + Sync;

    fn regime(&self) -> Regime;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    fn from_ratio_like(&self, r: &BigRational) -> Result<Self>;
    fn root_of_unity_like(&self, w: RootOfUnity) -> Result<Self>;

    fn is_zero(&self) -> bool;
    /// Complex: `|z| < tol`. p-adic: `z` is not a unit.
    fn is_negligible(&self, tol: f64) -> bool;
    fn try_inverse(&self) -> Result<Self>;
    fn try_div(&self, d: &Self) -> Result<Self> {
        Ok(self.clone() * d.try_inverse()?)
    }
    /// p-adic working precision `M` (values known mod `p^M`); `None` for complex.
    fn precision(&self) -> Option<u32> {
        None
    }
    /// Complex: relative difference (with unit floor) at most `tol`.
    /// p-adic: equal at the common precision; `tol` is ignored.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    /// Size of `self - other`: absolute value in the complex case, `p^-v` in
    /// the p-adic case.
    fn distance(&self, other: &Self) -> f64;

    fn log_for_power(&self) -> Result<Self::Log>;
    fn power(&self, log: &Self::Log, e: &Exponent) -> Result<Self>;
    fn scale_log(log: &Self::Log, k: i64) -> Self::Log;

    fn pow_i64(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.try_inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        Ok(acc)
    }

    fn from_biguint_like(&self, n: &BigUint) -> Result<Self> {
        self.from_ratio_like(&BigRational::from(BigInt::from(n.clone())))
    }

    /// `E^{(h,1)}_{n,w,q}(x)` by its closed form in extended precision, for
    /// regimes where the working arithmetic cannot absorb the cancellation.
    #[doc(hidden)]
    fn euler_closed_extended(
        _q: &QParam<Self>,
        _n: u32,
        _x: &Exponent,
        _h: &Exponent,
        _w: RootOfUnity,
    ) -> Option<Result<Self>> {
        None
    }
}

impl sealed::Sealed for Complex64 {}

impl Scalar for Complex64 {
    type Log = Complex64;

    fn regime(&self) -> Regime {
        Regime::ComplexDisk
    }

    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn from_ratio_like(&self, r: &BigRational) -> Result<Self> {
        let v = r.to_f64().ok_or_else(|| Error::OutOfRange(format!("rational {r} does not fit in a double")))?;
        Ok(Complex64::new(v, 0.0))
    }

    fn root_of_unity_like(&self, w: RootOfUnity) -> Result<Self> {
        Ok(w.to_complex())
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() < tol
    }

    fn try_inverse(&self) -> Result<Self> {
        if Scalar::is_zero(self) {
            return Err(Error::DivisionByZero("inverse of complex zero"));
        }
        Ok(self.inv())
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.norm().max(other.norm()).max(1.0);
        (self - other).norm() <= tol * scale
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    fn log_for_power(&self) -> Result<Self::Log> {
        if Scalar::is_zero(self) {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        Ok(self.ln())
    }

    fn power(&self, log: &Self::Log, e: &Exponent) -> Result<Self> {
        match e.as_integer() {
            Some(n) => self.pow_i64(n),
            None => Ok((log * e.to_complex()).exp()),
        }
    }

    fn scale_log(log: &Self::Log, k: i64) -> Self::Log {
        log * k as f64
    }

    fn pow_i64(&self, e: i64) -> Result<Self> {
        if e < 0 && Scalar::is_zero(self) {
            return Err(Error::DivisionByZero("negative power of complex zero"));
        }
        let e32 = i32::try_from(e).map_err(|_| Error::OutOfRange(format!("exponent {e}")))?;
        Ok(self.powi(e32))
    }

    fn euler_closed_extended(
        q: &QParam<Self>,
        n: u32,
        x: &Exponent,
        h: &Exponent,
        w: RootOfUnity,
    ) -> Option<Result<Self>> {
        Some(crate::euler::closed_form_extended(*q.value(), q.log, n, x.to_complex(), h.to_complex(), w))
    }
}

/// The deformation parameter `q`, validated for its regime.
///
/// In the complex regime the principal logarithm of `q` is fixed at
/// construction so that `q^x = exp(x log q)` is single-valued, and `q^k`
/// derived through [`QParam::pow_param`] keeps `k log q` as its logarithm.
#[derive(Debug, Clone)]
pub struct QParam<S: Scalar> {
    value: S,
    log: S::Log,
}

impl<S: Scalar> QParam<S> {
    pub fn new(value: S) -> Result<Self> {
        match value.regime() {
            Regime::ComplexDisk => {
                let probe = value.distance(&value.zero_like());
                if !(probe > 0.0 && probe < 1.0) {
                    return Err(Error::Domain(format!("complex q must satisfy 0 < |q| < 1, got |q| = {probe}")));
                }
            }
            Regime::PadicNear1 => {
                let gap = value.one_like() - value.clone();
                if !gap.is_negligible(0.0) {
                    return Err(Error::Domain("p-adic q must satisfy |1 - q|_p < 1".into()));
                }
            }
        }
        let log = value.log_for_power()?;
        Ok(QParam { value, log })
    }

    pub fn value(&self) -> &S {
        &self.value
    }

    pub fn regime(&self) -> Regime {
        self.value.regime()
    }

    pub fn pow(&self, e: &Exponent) -> Result<S> {
        self.value.power(&self.log, e)
    }

    /// `q^k` as a parameter in its own right, with a compatible logarithm.
    pub fn pow_param(&self, k: i64) -> Result<Self> {
        if k <= 0 {
            return Err(Error::OutOfRange(format!("q^{k}: only positive powers stay in the regime")));
        }
        Ok(QParam { value: self.value.pow_i64(k)?, log: S::scale_log(&self.log, k) })
    }
}

/// `1 + q`.
pub fn two_q<S: Scalar>(q: &S) -> S {
    q.one_like() + q.clone()
}

/// `⌈x⌉_q = 1 + q + ... + q^{x-1}` for an integer `x`, computed with a
/// binary doubling scheme so that no division occurs and `q = 1` is fine.
/// Negative `x` uses `⌈-x⌉_q = -q^{-x} ⌈x⌉_q`.
pub fn q_number_int<S: Scalar>(x: i64, q: &S) -> Result<S> {
    let m = x.unsigned_abs();
    let mut sum = q.zero_like();
    let mut power = q.one_like();
    for bit in (0..u64::BITS - m.leading_zeros()).rev() {
        sum = sum * (q.one_like() + power.clone());
        power = power.clone() * power;
        if (m >> bit) & 1 == 1 {
            sum = sum + power.clone();
            power = power * q.clone();
        }
    }
    if x >= 0 {
        Ok(sum)
    } else {
        Ok(-(q.pow_i64(x)? * sum))
    }
}

/// `⌈x⌉_q = (1 - q^x) / (1 - q)`. Integer `x` takes the division-free path.
pub fn q_number<S: Scalar>(x: &Exponent, q: &QParam<S>) -> Result<S> {
    if let Some(n) = x.as_integer() {
        return q_number_int(n, q.value());
    }
    let one = q.value().one_like();
    let denom = one.clone() - q.value().clone();
    if denom.is_zero() {
        return Err(Error::DivisionByZero("q-number with q = 1 at a non-integer argument"));
    }
    (one - q.pow(x)?).try_div(&denom)
}

/// `⌈x⌉_{-q} = (1 - (-q)^x) / (1 + q)` for integer `x`.
pub fn q_number_neg<S: Scalar>(x: i64, q: &S) -> Result<S> {
    if two_q(q).is_zero() {
        return Err(Error::DivisionByZero("⌈x⌉_{-q} with q = -1"));
    }
    q_number_int(x, &-q.clone())
}

/// Exact binomial coefficient `C(n, j)`.
pub fn binomial(n: u64, j: u64) -> Result<BigUint> {
    if j > n {
        return Err(Error::OutOfRange(format!("binomial({n}, {j}) needs j <= n")));
    }
    let j = j.min(n - j);
    let mut acc = BigUint::one();
    for i in 0..j {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    Ok(acc)
}

/// `log(1 + z)` without cancellation for small `|z|`.
pub(crate) fn ln_1p(z: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * z.re + z.re * z.re + z.im * z.im).ln_1p();
    Complex64::new(re, z.im.atan2(1.0 + z.re))
}

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn exp_m1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q_number_examples() {
        let half = c(0.5, 0.0);
        assert_eq!(q_number_int(0, &half).unwrap(), c(0.0, 0.0));
        assert_eq!(q_number_int(1, &half).unwrap(), c(1.0, 0.0));
        assert_eq!(q_number_int(3, &half).unwrap(), c(1.75, 0.0));
        let q = QParam::new(half).unwrap();
        let v = q_number(&Exponent::Int(3), &q).unwrap();
        assert_eq!(v, c(1.75, 0.0));
    }

    #[test]
    fn q_number_at_one_is_identity() {
        let one = c(1.0, 0.0);
        for x in 0..40 {
            assert_eq!(q_number_int(x, &one).unwrap(), c(x as f64, 0.0));
        }
    }

    #[test]
    fn q_number_non_integer_matches_closed_form() {
        let q = QParam::new(c(0.5, 0.0)).unwrap();
        let x = Exponent::rational(1, 3).unwrap();
        let v = q_number(&x, &q).unwrap();
        let expected = (1.0 - 0.5f64.powf(1.0 / 3.0)) / 0.5;
        assert!((v.re - expected).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn q_number_negative_argument() {
        let q = c(0.3, 0.2);
        let lhs = q_number_int(-4, &q).unwrap();
        let rhs = -(q.powi(-4) * q_number_int(4, &q).unwrap());
        assert!(lhs.approx_eq(&rhs, 1e-14));
    }

    #[test]
    fn q_number_neg_examples() {
        let half = c(0.5, 0.0);
        assert_eq!(q_number_neg(0, &half).unwrap(), c(0.0, 0.0));
        assert_eq!(q_number_neg(2, &half).unwrap(), c(0.5, 0.0));
        assert_eq!(q_number_neg(3, &half).unwrap(), c(0.75, 0.0));
        assert!(matches!(q_number_neg(3, &c(-1.0, 0.0)), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn two_q_examples() {
        assert_eq!(two_q(&c(1.0, 0.0)), c(2.0, 0.0));
        assert_eq!(two_q(&c(0.5, 0.0)), c(1.5, 0.0));
        assert_eq!(two_q(&c(0.0, 0.5)), c(1.0, 0.5));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(binomial(5, 2).unwrap(), BigUint::from(10u32));
        // Pascal-triangle oracle for the large example.
        let mut row = vec![BigUint::one()];
        for _ in 0..30 {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        assert_eq!(row[15], BigUint::from(155_117_520u64));
        assert_eq!(binomial(30, 15).unwrap(), row[15]);
        assert!(matches!(binomial(3, 4), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn q_param_validation() {
        assert!(QParam::new(c(0.5, 0.0)).is_ok());
        assert!(QParam::new(c(0.0, 0.0)).is_err());
        assert!(QParam::new(c(1.0, 0.0)).is_err());
        assert!(QParam::new(c(0.8, 0.7)).is_err());
    }

    #[test]
    fn pow_param_keeps_branch() {
        let q = QParam::new(c(-0.5, 0.1)).unwrap();
        let q3 = q.pow_param(3).unwrap();
        let x = Exponent::rational(2, 3).unwrap();
        // (q^3)^(2/3) must be q^2 exactly on the chosen branch.
        let v = q3.pow(&x).unwrap();
        assert!(v.approx_eq(&q.value().powi(2), 1e-14));
    }

    #[test]
    fn root_of_unity_basics() {
        let w = RootOfUnity::new(4, 1).unwrap();
        assert_eq!(w.to_complex(), c(0.0, 1.0));
        assert_eq!(RootOfUnity::new(8, 2).unwrap(), w);
        assert_eq!(w.pow(3), RootOfUnity::new(4, 3).unwrap());
        assert!(RootOfUnity::new(4, 4).is_err());
        assert!(RootOfUnity::new(0, 0).is_err());
        assert_eq!("6:2".parse::<RootOfUnity>().unwrap(), RootOfUnity::new(3, 1).unwrap());
        let prod = w.mul(&RootOfUnity::new(3, 1).unwrap());
        assert_eq!(prod.order(), 12);
        assert!(prod.to_complex().approx_eq(&(c(0.0, 1.0) * RootOfUnity::new(3, 1).unwrap().to_complex()), 1e-15));
    }

    #[test]
    fn complex_helpers_are_accurate() {
        let z = c(1e-12, -3e-13);
        assert!((ln_1p(z) - z).norm() < 1e-24);
        assert!((exp_m1(z) - z).norm() < 1e-24);
        let z = c(0.3, 0.4);
        assert!((ln_1p(z) - (c(1.0, 0.0) + z).ln()).norm() < 1e-15);
        assert!((exp_m1(z) - (z.exp() - 1.0)).norm() < 1e-15);
    }
}

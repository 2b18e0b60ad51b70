use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Largest modulus `p^M` accepted; keeps every product inside a `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

pub(crate) fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn modulus_for(p: u64, prec: u32) -> Result<u64> {
    if !is_odd_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    if prec == 0 {
        return Err(Error::OutOfRange("p-adic precision must be at least 1".into()));
    }
    let mut m: u64 = 1;
    for _ in 0..prec {
        m = m
            .checked_mul(p)
            .filter(|m| *m <= MAX_MODULUS)
            .ok_or_else(|| Error::OutOfRange(format!("{p}^{prec} exceeds the supported modulus")))?;
    }
    Ok(m)
}

pub(crate) fn pow_u64(p: u64, e: u32) -> u64 {
    (0..e).fold(1u64, |acc, _| acc * p)
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `v_p(a)` for a residue mod `p^prec`, capped at `prec` (zero has valuation
/// at least `prec`).
pub(crate) fn residue_valuation(a: u64, p: u64, prec: u32) -> u32 {
    if a == 0 {
        return prec;
    }
    let mut v = 0;
    let mut a = a;
    while a.is_multiple_of(p) && v < prec {
        a /= p;
        v += 1;
    }
    v
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Reduce an arbitrary-size integer mod `m`.
pub(crate) fn bigint_mod(n: &BigInt, m: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue below modulus fits in u64")
}

/// An element of `Z_p` known modulo `p^M`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    prec: u32,
    residue: u64,
}

impl PadicInt {
    pub fn new(p: u64, prec: u32, value: i64) -> Result<Self> {
        let m = modulus_for(p, prec)?;
        Ok(PadicInt { p, prec, residue: (value as i128).rem_euclid(m as i128) as u64 })
    }

    pub fn zero(p: u64, prec: u32) -> Result<Self> {
        Self::new(p, prec, 0)
    }

    pub fn one(p: u64, prec: u32) -> Result<Self> {
        Self::new(p, prec, 1)
    }

    /// The image of `num/den`; the denominator must be prime to `p`.
    pub fn from_ratio(p: u64, prec: u32, r: &BigRational) -> Result<Self> {
        let m = modulus_for(p, prec)?;
        let den = bigint_mod(r.denom(), m);
        let inv = inv_mod(den, m).ok_or_else(|| Error::NotAUnit(format!("denominator of {r} is divisible by {p}")))?;
        let num = bigint_mod(r.numer(), m);
        Ok(PadicInt { p, prec, residue: mul_mod(num, inv, m) })
    }

    pub(crate) fn from_residue(p: u64, prec: u32, residue: u64) -> Self {
        PadicInt { p, prec, residue }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.prec)
    }

    /// `v_p(self)`, reported as `prec` for zero.
    pub fn valuation(&self) -> u32 {
        residue_valuation(self.residue, self.p, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.p)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = inv_mod(self.residue, self.modulus())
            .ok_or_else(|| Error::NotAUnit(format!("{self} has positive valuation")))?;
        Ok(PadicInt { residue: inv, ..*self })
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        let mut base = self.residue;
        let mut acc = 1 % m;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(acc, base, m);
            }
            base = mul_mod(base, base, m);
            e >>= 1;
        }
        PadicInt { residue: acc, ..*self }
    }

    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e < 0 {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        } else {
            Ok(self.pow(e as u64))
        }
    }

    /// Drop to a lower precision.
    pub fn reduce_to(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        let m = pow_u64(self.p, prec);
        PadicInt { prec, residue: self.residue % m, ..*self }
    }

    /// Smallest non-negative integer congruent to `self`, as a signed value
    /// in `(-p^M/2, p^M/2]` when `symmetric` is set.
    pub fn to_i128(&self, symmetric: bool) -> i128 {
        let m = self.modulus() as i128;
        let r = self.residue as i128;
        if symmetric && r > m / 2 {
            r - m
        } else {
            r
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic values of different primes");
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.p, self.prec)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.prec)
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        self.check_prime(&rhs);
        let (a, b) = (self.reduce_to(rhs.prec), rhs.reduce_to(self.prec));
        PadicInt { residue: add_mod(a.residue, b.residue, a.modulus()), ..a }
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        self.check_prime(&rhs);
        let (a, b) = (self.reduce_to(rhs.prec), rhs.reduce_to(self.prec));
        PadicInt { residue: sub_mod(a.residue, b.residue, a.modulus()), ..a }
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        self.check_prime(&rhs);
        let (a, b) = (self.reduce_to(rhs.prec), rhs.reduce_to(self.prec));
        PadicInt { residue: mul_mod(a.residue, b.residue, a.modulus()), ..a }
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        PadicInt { residue: sub_mod(0, self.residue, self.modulus()), ..self }
    }
}

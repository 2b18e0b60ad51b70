//! Complex arithmetic over MPFR floats, for closed forms whose alternating
//! binomial sums lose about `n log2(1/|1-q|)` bits to cancellation.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

/// Working precision for an `n`-fold difference quotient by `1 - q`: enough
/// to leave at least 80 bits after the cancellation.
pub(crate) fn bits_for(n: u32, q: Complex64) -> u32 {
    let gap = (1.0 - q).norm().max(f64::MIN_POSITIVE);
    let lost = n as f64 * (-gap.log2()).max(0.0) + n as f64 + 8.0;
    (64.0 + 80.0 + lost.ceil()).min(8192.0) as u32
}

#[derive(Debug, Clone)]
pub(crate) struct MpComplex {
    re: Float,
    im: Float,
}

impl MpComplex {
    pub(crate) fn from_c64(prec: u32, z: Complex64) -> Self {
        MpComplex { re: Float::with_val(prec, z.re), im: Float::with_val(prec, z.im) }
    }

    pub(crate) fn from_i64(prec: u32, n: i64) -> Self {
        MpComplex { re: Float::with_val(prec, n), im: Float::with_val(prec, 0) }
    }

    pub(crate) fn from_biguint(prec: u32, n: &BigUint) -> Self {
        let parsed = Float::parse(n.to_str_radix(10)).expect("decimal digits parse");
        MpComplex { re: Float::with_val(prec, parsed), im: Float::with_val(prec, 0) }
    }

    fn prec(&self) -> u32 {
        self.re.prec()
    }

    /// `exp(2πi k/m)`.
    pub(crate) fn root_of_unity(prec: u32, k: u64, m: u64) -> Self {
        let angle = Float::with_val(prec, Constant::Pi) * 2u32 * Float::with_val(prec, k) / Float::with_val(prec, m);
        let (s, c) = angle.sin_cos(Float::new(prec));
        MpComplex { re: c, im: s }
    }

    pub(crate) fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.clone().square() + self.im.clone().square())
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub(crate) fn div(&self, d: &MpComplex) -> Result<MpComplex> {
        if d.is_zero() {
            return Err(Error::DivisionByZero("extended-precision division by zero"));
        }
        let den = d.norm_sqr();
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &d.re) + Float::with_val(p, &self.im * &d.im);
        let im = Float::with_val(p, &self.im * &d.re) - Float::with_val(p, &self.re * &d.im);
        Ok(MpComplex { re: re / &den, im: im / &den })
    }

    /// Logarithm on the branch closest to `hint`.
    pub(crate) fn ln_near(&self, hint: Complex64) -> Result<MpComplex> {
        if self.is_zero() {
            return Err(Error::Domain("logarithm of zero".into()));
        }
        let p = self.prec();
        let re = self.norm_sqr().ln() / 2u32;
        let mut im = Float::with_val(p, self.im.atan2_ref(&self.re));
        let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
        let turns = ((hint.im - im.to_f64()) / std::f64::consts::TAU).round();
        if turns != 0.0 {
            im += two_pi * Float::with_val(p, turns);
        }
        Ok(MpComplex { re, im })
    }

    pub(crate) fn exp(&self) -> MpComplex {
        let p = self.prec();
        let modulus = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        MpComplex { re: Float::with_val(p, &modulus * &c), im: modulus * s }
    }

    pub(crate) fn pow_u32(&self, n: u32) -> MpComplex {
        let mut acc = MpComplex::from_i64(self.prec(), 1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &MpComplex {
    type Output = MpComplex;
    fn add(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub for &MpComplex {
    type Output = MpComplex;
    fn sub(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        MpComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul for &MpComplex {
    type Output = MpComplex;
    fn mul(self, o: &MpComplex) -> MpComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        MpComplex { re, im }
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_inverts_log() {
        let z = MpComplex::from_c64(200, Complex64::new(-0.3, 0.4));
        let back = z.ln_near(Complex64::new(0.0, 2.2)).unwrap().exp();
        assert!((back.to_c64() - Complex64::new(-0.3, 0.4)).norm() < 1e-16);
    }

    #[test]
    fn branch_follows_hint() {
        let z = MpComplex::from_c64(128, Complex64::new(-1.0, 1e-30));
        let l = z.ln_near(Complex64::new(0.0, -std::f64::consts::PI)).unwrap();
        assert!((l.to_c64().im + std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn large_integers_are_exact() {
        let n: BigUint = "123456789012345678901234567890".parse().unwrap();
        let z = MpComplex::from_biguint(200, &n);
        let split = Float::with_val(200, 123_456_789_012_345u64) * Float::with_val(200, 1_000_000_000_000_000u64)
            + Float::with_val(200, 678_901_234_567_890u64);
        assert_eq!(z.re, split);
    }

    #[test]
    fn fourth_root_squares_to_minus_one() {
        let i = MpComplex::root_of_unity(128, 1, 4);
        assert!((i.pow_u32(2).to_c64() + 1.0).norm() < 1e-30);
    }

    #[test]
    fn precision_grows_with_cancellation() {
        assert!(bits_for(8, Complex64::new(0.8, 0.0)) > bits_for(8, Complex64::new(0.3, 0.0)));
        assert!(bits_for(0, Complex64::new(0.5, 0.0)) >= 144);
    }
}

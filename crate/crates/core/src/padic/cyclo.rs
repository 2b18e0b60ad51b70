use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;

use super::int::{add_mod, bigint_mod, inv_mod, modulus_for, mul_mod, pow_u64, residue_valuation, sub_mod, PadicInt};
use crate::error::{Error, Result};
use crate::qcore::{sealed, Exponent, Regime, RootOfUnity, Scalar};

/// An element of `Z_p[ζ]/(p^M)`, where `ζ` is a primitive `p^r`-th root of
/// unity, stored as a polynomial of degree `< φ(p^r)` reduced modulo the
/// cyclotomic polynomial `Φ_{p^r}`. With `r = 0` this is just `Z/p^M`.
///
/// Values carry their own precision; arithmetic between values of different
/// precision happens at the smaller one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloPadic {
    p: u64,
    prec: u32,
    r: u32,
    coeffs: Vec<u64>,
}

/// `φ(p^r)`, with the convention `φ(1) = 1`.
pub fn cyclotomic_degree(p: u64, r: u32) -> usize {
    if r == 0 {
        1
    } else {
        ((p - 1) * pow_u64(p, r - 1)) as usize
    }
}

/// Reduce a polynomial with coefficients mod `m` modulo `Φ_{p^r}`.
fn reduce_poly(p: u64, r: u32, m: u64, mut raw: Vec<u64>) -> Vec<u64> {
    let deg = cyclotomic_degree(p, r);
    if r == 0 {
        let s = raw.iter().fold(0u64, |acc, &c| add_mod(acc, c, m));
        return vec![s];
    }
    let step = pow_u64(p, r - 1) as usize;
    // x^deg = -(1 + x^step + ... + x^{(p-2) step})
    for i in (deg..raw.len()).rev() {
        let c = raw[i];
        if c == 0 {
            continue;
        }
        raw[i] = 0;
        for j in 0..(p as usize - 1) {
            let idx = i - deg + j * step;
            raw[idx] = sub_mod(raw[idx], c, m);
        }
    }
    raw.resize(deg, 0);
    raw
}

impl CycloPadic {
    fn modulus(&self) -> u64 {
        pow_u64(self.p, self.prec)
    }

    pub fn zero(p: u64, prec: u32, r: u32) -> Result<Self> {
        modulus_for(p, prec)?;
        Ok(CycloPadic { p, prec, r, coeffs: vec![0; cyclotomic_degree(p, r)] })
    }

    pub fn one(p: u64, prec: u32, r: u32) -> Result<Self> {
        let mut z = Self::zero(p, prec, r)?;
        z.coeffs[0] = 1;
        Ok(z)
    }

    /// From integer coefficients of a polynomial of any length in `ζ`.
    pub fn from_coeffs(p: u64, prec: u32, r: u32, coeffs: &[i64]) -> Result<Self> {
        let m = modulus_for(p, prec)?;
        let raw = coeffs.iter().map(|&c| (c as i128).rem_euclid(m as i128) as u64).collect::<Vec<_>>();
        let raw = if raw.is_empty() { vec![0] } else { raw };
        Ok(CycloPadic { p, prec, r, coeffs: reduce_poly(p, r, m, raw) })
    }

    /// From residues `c_e` of `Σ c_e ζ^e`, `e` below any bound.
    pub(crate) fn from_power_residues(p: u64, prec: u32, r: u32, residues: Vec<u64>) -> Self {
        let m = pow_u64(p, prec);
        let raw = if residues.is_empty() { vec![0] } else { residues };
        CycloPadic { p, prec, r, coeffs: reduce_poly(p, r, m, raw) }
    }

    pub fn from_padic_int(x: PadicInt, r: u32) -> Self {
        let mut coeffs = vec![0; cyclotomic_degree(x.prime(), r)];
        coeffs[0] = x.residue();
        CycloPadic { p: x.prime(), prec: x.precision(), r, coeffs }
    }

    /// `ζ^e` with `ζ` the distinguished primitive `p^r`-th root of unity.
    pub fn zeta_pow(p: u64, prec: u32, r: u32, e: u64) -> Result<Self> {
        let m = modulus_for(p, prec)?;
        let order = pow_u64(p, r);
        let e = (e % order) as usize;
        let mut raw = vec![0u64; e + 1];
        raw[e] = 1 % m;
        Ok(CycloPadic { p, prec, r, coeffs: reduce_poly(p, r, m, raw) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// The `r` of the ring `Z_p[ζ_{p^r}]`.
    pub fn twist_exponent(&self) -> u32 {
        self.r
    }

    pub fn twist_order(&self) -> u64 {
        pow_u64(self.p, self.r)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        PadicInt::from_residue(self.p, self.prec, self.coeffs[i])
    }

    /// The value as an element of `Z_p` when it has no `ζ` component.
    pub fn as_padic_int(&self) -> Option<PadicInt> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeff(0))
        } else {
            None
        }
    }

    /// Largest `v` with `self ∈ p^v Z_p[ζ]`, capped at the precision.
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().map(|&c| residue_valuation(c, self.p, self.prec)).min().unwrap_or(self.prec)
    }

    /// Units are exactly the elements whose image under `ζ ↦ 1` is prime to
    /// `p`, since `Φ_{p^r} ≡ (x - 1)^{φ(p^r)} mod p`.
    pub fn is_unit(&self) -> bool {
        let s = self.coeffs.iter().fold(0u64, |acc, &c| (acc + c % self.p) % self.p);
        s != 0
    }

    pub fn reduce_to(&self, prec: u32) -> Self {
        let prec = prec.min(self.prec);
        let m = pow_u64(self.p, prec);
        CycloPadic { prec, coeffs: self.coeffs.iter().map(|c| c % m).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: PadicInt) -> Self {
        assert_eq!(c.prime(), self.p, "mixing p-adic values of different primes");
        let prec = self.prec.min(c.precision());
        let m = pow_u64(self.p, prec);
        let c = c.residue() % m;
        CycloPadic { prec, coeffs: self.coeffs.iter().map(|&a| mul_mod(a % m, c, m)).collect(), ..self.clone() }
    }

    /// Inverse of a unit by Newton iteration `y ← y (2 - a y)`, starting from
    /// the inverse of the image under `ζ ↦ 1`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit(format!("{self} is not a unit")));
        }
        let m = self.modulus();
        let at_one = self.coeffs.iter().fold(0u64, |acc, &c| add_mod(acc, c, m));
        let start = inv_mod(at_one, m).expect("unit image is invertible");
        let one = Self::one(self.p, self.prec, self.r)?;
        let mut y = one.scale(PadicInt::from_residue(self.p, self.prec, start));
        for _ in 0..128 {
            let err = one.clone() - self.clone() * y.clone();
            if err.coeffs.iter().all(|&c| c == 0) {
                return Ok(y);
            }
            y = y.clone() * (one.clone() + err);
        }
        Err(Error::NonConvergence { target: self.prec, level: 128 })
    }

    /// Exact division: by a unit, or by a constant `p^k u` when every
    /// coefficient of `self` is divisible by `p^k`. The latter loses `k`
    /// digits of precision.
    pub fn div_exact(&self, d: &CycloPadic) -> Result<Self> {
        if d.is_unit() {
            return Ok(self.clone() * d.inverse()?);
        }
        let c = d.as_padic_int().ok_or_else(|| Error::NotAUnit(format!("cannot divide by the non-unit {d}")))?;
        let prec = self.prec.min(c.precision());
        let k = c.valuation();
        if k >= prec {
            return Err(Error::PrecisionBudget { have: prec, need: k + 1 });
        }
        let pk = pow_u64(self.p, k);
        let new_prec = prec - k;
        let m_new = pow_u64(self.p, new_prec);
        let m_old = pow_u64(self.p, prec);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &a in &self.coeffs {
            let a = a % m_old;
            if residue_valuation(a, self.p, prec) < k {
                return Err(Error::NotAUnit(format!("numerator is not divisible by {}^{k}", self.p)));
            }
            coeffs.push((a / pk) % m_new);
        }
        let unit = PadicInt::from_residue(self.p, new_prec, (c.residue() / pk) % m_new).inverse()?;
        Ok(CycloPadic { prec: new_prec, coeffs, ..self.clone() }.scale(unit))
    }

    fn check_ring(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic values of different primes");
        assert_eq!(self.r, other.r, "mixing different cyclotomic extensions");
    }

    fn align(self, other: Self) -> (Self, Self) {
        self.check_ring(&other);
        let prec = self.prec.min(other.prec);
        (self.reduce_to(prec), other.reduce_to(prec))
    }
}

impl fmt::Debug for CycloPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloPadic({self})")
    }
}

/// `p^M; p^r; c_0,c_1,...` with decimal residues.
impl fmt::Display for CycloPadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}; {}^{}; ", self.p, self.prec, self.p, self.r)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn parse_power(s: &str) -> Result<(u64, u32)> {
    let (b, e) = s.trim().split_once('^').ok_or_else(|| Error::Parse(format!("expected p^k, got '{s}'")))?;
    let b = b.trim().parse::<u64>().map_err(|e| Error::Parse(format!("base '{b}': {e}")))?;
    let e = e.trim().parse::<u32>().map_err(|err| Error::Parse(format!("exponent '{e}': {err}")))?;
    Ok((b, e))
}

impl FromStr for CycloPadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected 'p^M; p^r; coefficients', got '{s}'")));
        }
        let (p, prec) = parse_power(parts[0])?;
        let (p2, r) = parse_power(parts[1])?;
        if p != p2 {
            return Err(Error::Parse(format!("prime mismatch {p} vs {p2}")));
        }
        let m = modulus_for(p, prec)?;
        let coeffs = parts[2]
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|e| Error::Parse(format!("coefficient '{c}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != cyclotomic_degree(p, r) {
            return Err(Error::Parse(format!(
                "expected {} coefficients, got {}",
                cyclotomic_degree(p, r),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= m) {
            return Err(Error::Parse(format!("coefficients must be residues below {p}^{prec}")));
        }
        Ok(CycloPadic { p, prec, r, coeffs })
    }
}

impl Add for CycloPadic {
    type Output = CycloPadic;
    fn add(self, rhs: CycloPadic) -> CycloPadic {
        let (mut a, b) = self.align(rhs);
        let m = a.modulus();
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = add_mod(*x, *y, m);
        }
        a
    }
}

impl Sub for CycloPadic {
    type Output = CycloPadic;
    fn sub(self, rhs: CycloPadic) -> CycloPadic {
        let (mut a, b) = self.align(rhs);
        let m = a.modulus();
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x = sub_mod(*x, *y, m);
        }
        a
    }
}

impl Neg for CycloPadic {
    type Output = CycloPadic;
    fn neg(mut self) -> CycloPadic {
        let m = self.modulus();
        for x in self.coeffs.iter_mut() {
            *x = sub_mod(0, *x, m);
        }
        self
    }
}

impl Mul for CycloPadic {
    type Output = CycloPadic;
    fn mul(self, rhs: CycloPadic) -> CycloPadic {
        let (a, b) = self.align(rhs);
        let m = a.modulus();
        let mut raw = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                raw[i + j] = add_mod(raw[i + j], mul_mod(x, y, m), m);
            }
        }
        CycloPadic { coeffs: reduce_poly(a.p, a.r, m, raw), ..a }
    }
}

impl sealed::Sealed for CycloPadic {}

impl Scalar for CycloPadic {
    type Log = ();

    fn regime(&self) -> Regime {
        Regime::PadicNear1
    }

    fn zero_like(&self) -> Self {
        CycloPadic { coeffs: vec![0; self.coeffs.len()], ..self.clone() }
    }

    fn one_like(&self) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = 1;
        z
    }

    fn from_i64_like(&self, n: i64) -> Self {
        let mut z = self.zero_like();
        z.coeffs[0] = (n as i128).rem_euclid(self.modulus() as i128) as u64;
        z
    }

    fn from_ratio_like(&self, r: &BigRational) -> Result<Self> {
        Ok(CycloPadic::from_padic_int(PadicInt::from_ratio(self.p, self.prec, r)?, self.r))
    }

    /// Orders dividing `p^r` map to powers of `ζ`; orders `2t` with `t | p^r`
    /// use `ζ_{2t} = -ζ_t^{(t+1)/2}`.
    fn root_of_unity_like(&self, w: RootOfUnity) -> Result<Self> {
        let (m, k) = w.reduced();
        let order = self.twist_order();
        if order.is_multiple_of(m) {
            return CycloPadic::zeta_pow(self.p, self.prec, self.r, k * (order / m));
        }
        if m % 2 == 0 && order.is_multiple_of(m / 2) {
            let t = m / 2;
            let base = CycloPadic::zeta_pow(self.p, self.prec, self.r, (order / t) * t.div_ceil(2))?;
            let v = base.pow_i64(k as i64)?;
            return Ok(if k % 2 == 1 { -v } else { v });
        }
        Err(Error::Embedding(format!("order {m} root of unity is not available in Z_{}[ζ_{order}]", self.p)))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        !self.is_unit()
    }

    fn try_inverse(&self) -> Result<Self> {
        self.inverse()
    }

    fn try_div(&self, d: &Self) -> Result<Self> {
        self.div_exact(d)
    }

    fn precision(&self) -> Option<u32> {
        Some(self.prec)
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        if self.p != other.p || self.r != other.r {
            return false;
        }
        let (a, b) = self.clone().align(other.clone());
        a.coeffs == b.coeffs
    }

    fn distance(&self, other: &Self) -> f64 {
        let v = (self.clone() - other.clone()).valuation();
        (self.p as f64).powi(-(v as i32))
    }

    fn log_for_power(&self) -> Result<()> {
        Ok(())
    }

    /// Rational exponents `a/b` (with `p ∤ b`) use an integer representative
    /// `X ≡ a/b mod p^M`; this is exact because `q^{p^M} ≡ 1 mod p^{M+1}`
    /// whenever `q ≡ 1 mod p`.
    fn power(&self, _log: &(), e: &Exponent) -> Result<Self> {
        if let Some(n) = e.as_integer() {
            return self.pow_i64(n);
        }
        let r = match e {
            Exponent::Rational(r) => *r,
            _ => return Err(Error::Domain("complex exponents are not defined p-adically".into())),
        };
        let diff = self.clone() - self.one_like();
        if diff.valuation() == 0 {
            return Err(Error::Domain("rational powers need q ≡ 1 mod p".into()));
        }
        let m = self.modulus();
        let den = bigint_mod(&(*r.denom()).into(), m);
        let inv = inv_mod(den, m)
            .ok_or_else(|| Error::Domain(format!("exponent {r} has denominator divisible by {}", self.p)))?;
        let num = bigint_mod(&(*r.numer()).into(), m);
        let rep = mul_mod(num, inv, m);
        self.pow_i64(rep as i64)
    }

    fn scale_log(_log: &(), _k: i64) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zeta(p: u64, prec: u32, r: u32) -> CycloPadic {
        CycloPadic::zeta_pow(p, prec, r, 1).unwrap()
    }

    #[test]
    fn zeta_has_the_right_order() {
        for (p, r) in [(3, 1), (3, 2), (5, 1), (7, 1)] {
            let z = zeta(p, 10, r);
            let order = pow_u64(p, r) as i64;
            assert_eq!(z.pow_i64(order).unwrap(), CycloPadic::one(p, 10, r).unwrap());
            assert_ne!(z.pow_i64(order / p as i64).unwrap(), CycloPadic::one(p, 10, r).unwrap());
        }
    }

    #[test]
    fn cyclotomic_polynomial_vanishes_at_zeta() {
        // Φ_9(x) = 1 + x^3 + x^6
        let z = zeta(3, 8, 2);
        let phi = CycloPadic::one(3, 8, 2).unwrap() + z.pow_i64(3).unwrap() + z.pow_i64(6).unwrap();
        assert!(Scalar::is_zero(&phi));
    }

    #[test]
    fn one_plus_zeta_is_a_unit() {
        let z = zeta(5, 12, 1);
        let u = CycloPadic::one(5, 12, 1).unwrap() + z;
        let inv = u.inverse().unwrap();
        assert_eq!(u * inv, CycloPadic::one(5, 12, 1).unwrap());
        let non_unit = CycloPadic::one(5, 12, 1).unwrap() - zeta(5, 12, 1);
        assert!(!non_unit.is_unit());
        assert!(non_unit.inverse().is_err());
    }

    #[test]
    fn exact_division_by_p_power_loses_precision() {
        let a = CycloPadic::from_coeffs(3, 10, 1, &[27, 54]).unwrap();
        let d = CycloPadic::from_coeffs(3, 10, 1, &[-9]).unwrap();
        let q = a.div_exact(&d).unwrap();
        assert_eq!(q.precision(), 8);
        assert_eq!(q, CycloPadic::from_coeffs(3, 8, 1, &[-3, -6]).unwrap());
        let bad = CycloPadic::from_coeffs(3, 10, 1, &[1, 0]).unwrap();
        assert!(bad.div_exact(&d).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let a = CycloPadic::from_coeffs(5, 6, 1, &[1, -2, 3, 7]).unwrap();
        let s = a.to_string();
        assert!(s.starts_with("5^6; 5^1; 1,"));
        assert_eq!(s.parse::<CycloPadic>().unwrap(), a);
        assert!("5^6; 5^1; 1,2".parse::<CycloPadic>().is_err());
    }

    #[test]
    fn minus_one_and_order_six_roots() {
        let one = CycloPadic::one(3, 6, 1).unwrap();
        let m1 = one.root_of_unity_like(RootOfUnity::new(2, 1).unwrap()).unwrap();
        assert_eq!(m1, -one.clone());
        let z6 = one.root_of_unity_like(RootOfUnity::new(6, 1).unwrap()).unwrap();
        assert_eq!(z6.pow_i64(2).unwrap(), one.root_of_unity_like(RootOfUnity::new(3, 1).unwrap()).unwrap());
        assert_eq!(z6.pow_i64(3).unwrap(), -one.clone());
        assert!(one.root_of_unity_like(RootOfUnity::new(4, 1).unwrap()).is_err());
    }

    #[test]
    fn rational_power_uses_integer_representative() {
        let q = CycloPadic::from_coeffs(5, 8, 0, &[6]).unwrap();
        let third = q.power(&(), &Exponent::rational(1, 3).unwrap()).unwrap();
        assert_eq!(third.pow_i64(3).unwrap().reduce_to(8), q);
    }
}

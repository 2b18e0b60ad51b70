//! Dirichlet characters of odd modulus with exact root-of-unity values.
//!
//! `(Z/f)^×` is a product of cyclic groups `(Z/p^e)^×`, one per odd prime
//! power dividing `f`. A character is given by an exponent vector: the
//! `i`-th generator goes to `exp(2πi k_i / φ(p_i^{e_i}))`. Values are stored
//! as a full table over residues `0..f`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::qcore::{RootOfUnity, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Component {
    prime_power: u64,
    /// Element of `Z/f` that is a primitive root mod `prime_power` and 1 mod
    /// the other components.
    generator: u64,
    order: u64,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// A primitive root mod `p^e` for odd prime `p`.
fn primitive_root(p: u64, e: u32) -> u64 {
    let phi_p = p - 1;
    let prime_factors: Vec<u64> = factor(phi_p).into_iter().map(|(q, _)| q).collect();
    let mut g = 2;
    loop {
        if prime_factors.iter().all(|&q| pow_mod(g, phi_p / q, p) != 1) {
            break;
        }
        g += 1;
    }
    if e >= 2 && pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    g
}

fn crt_lift(residue: u64, modulus: u64, f: u64) -> u64 {
    // x ≡ residue (mod modulus), x ≡ 1 (mod f / modulus)
    let other = f / modulus;
    if other == 1 {
        return residue % f;
    }
    for x in (residue % modulus..f).step_by(modulus as usize) {
        if x % other == 1 % other {
            return x;
        }
    }
    unreachable!("CRT solution exists for coprime moduli")
}

fn components(f: u64) -> Vec<Component> {
    factor(f)
        .into_iter()
        .map(|(p, e)| {
            let prime_power = p.pow(e);
            let order = prime_power / p * (p - 1);
            Component { prime_power, generator: crt_lift(primitive_root(p, e), prime_power, f), order }
        })
        .collect()
}

fn euler_phi(f: u64) -> u64 {
    factor(f).into_iter().map(|(p, e)| p.pow(e - 1) * (p - 1)).product()
}

/// A Dirichlet character modulo an odd `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    exponents: Vec<u64>,
    /// Common order of all values; every stored root has this order.
    value_order: u64,
    values: Vec<Option<RootOfUnity>>,
}

impl DirichletCharacter {
    /// The character mod 1, equal to 1 everywhere.
    pub fn trivial() -> Self {
        Self::from_exponents(1, &[]).expect("modulus 1 is valid")
    }

    pub fn from_exponents(f: u64, exponents: &[u64]) -> Result<Self> {
        if f == 0 || f.is_multiple_of(2) {
            return Err(Error::Domain(format!("character modulus {f} must be odd and positive")));
        }
        let comps = components(f);
        if comps.len() != exponents.len() {
            return Err(Error::OutOfRange(format!(
                "modulus {f} needs {} exponents, got {}",
                comps.len(),
                exponents.len()
            )));
        }
        for (c, &k) in comps.iter().zip(exponents) {
            if k >= c.order {
                return Err(Error::OutOfRange(format!("exponent {k} must be below the component order {}", c.order)));
            }
        }
        let value_order = comps.iter().fold(1u64, |acc, c| acc.lcm(&c.order));
        // discrete log tables per component
        let logs: Vec<Vec<Option<u64>>> = comps
            .iter()
            .map(|c| {
                let mut table = vec![None; c.prime_power as usize];
                let g = c.generator % c.prime_power;
                let mut x = 1 % c.prime_power;
                for j in 0..c.order {
                    table[x as usize] = Some(j);
                    x = x * g % c.prime_power;
                }
                table
            })
            .collect();
        let values = (0..f)
            .map(|a| {
                if a.gcd(&f) != 1 {
                    return None;
                }
                let mut index = 0u64;
                for ((c, table), &k) in comps.iter().zip(&logs).zip(exponents) {
                    let log = table[(a % c.prime_power) as usize].expect("unit has a discrete log");
                    index = (index + k * log % c.order * (value_order / c.order)) % value_order;
                }
                Some(RootOfUnity::new(value_order, index).expect("index reduced mod order"))
            })
            .collect();
        Ok(DirichletCharacter { modulus: f, exponents: exponents.to_vec(), value_order, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// The lcm of the component orders; all values are powers of
    /// `exp(2πi / value_order)`.
    pub fn value_order(&self) -> u64 {
        self.value_order
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// `χ(n)`, `None` when `gcd(n, f) > 1`.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    /// Whether every value lies in `{0, ±1}`.
    pub fn is_real(&self) -> bool {
        self.values.iter().flatten().all(|w| w.exact_order() <= 2)
    }

    /// `χ(n)` as `-1`, `0` or `1`. Only meaningful for real characters.
    pub fn real_value(&self, n: i64) -> i64 {
        match self.value(n) {
            None => 0,
            Some(w) if w.is_one() => 1,
            Some(w) if w.exact_order() == 2 => -1,
            Some(_) => panic!("real_value called on a non-real character"),
        }
    }

    /// `χ(n)` embedded into the scalar ring of `like`.
    pub fn evaluate<S: Scalar>(&self, n: i64, like: &S) -> Result<S> {
        match self.value(n) {
            None => Ok(like.zero_like()),
            Some(w) => like.root_of_unity_like(w),
        }
    }
}

/// `f;k_1,k_2,...`
impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.modulus)?;
        for (i, k) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for DirichletCharacter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (f, ks) =
            s.split_once(';').ok_or_else(|| Error::Parse(format!("character '{s}' must look like f;k1,k2,...")))?;
        let f = f.trim().parse::<u64>().map_err(|e| Error::Parse(format!("modulus '{f}': {e}")))?;
        let ks = ks
            .split(',')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(|k| k.parse::<u64>().map_err(|e| Error::Parse(format!("exponent '{k}': {e}"))))
            .collect::<Result<Vec<_>>>()?;
        DirichletCharacter::from_exponents(f, &ks)
    }
}

/// All `φ(f)` characters mod `f`, in lexicographic order of their exponent
/// vectors; the trivial character comes first.
pub fn enumerate_characters(f: u64) -> Result<Vec<DirichletCharacter>> {
    if f == 0 || f.is_multiple_of(2) {
        return Err(Error::Domain(format!("character modulus {f} must be odd and positive")));
    }
    let orders: Vec<u64> = components(f).iter().map(|c| c.order).collect();
    let mut out = Vec::with_capacity(euler_phi(f) as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        out.push(DirichletCharacter::from_exponents(f, &exps)?);
        let mut i = orders.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn as_complex(chi: &DirichletCharacter, n: i64) -> Complex64 {
        chi.evaluate(n, &Complex64::new(0.0, 0.0)).unwrap()
    }

    #[test]
    fn modulus_one() {
        let chars = enumerate_characters(1).unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_trivial());
        for n in -3..10 {
            assert_eq!(chars[0].real_value(n), 1);
        }
        assert_eq!(chars[0].to_string(), "1;");
        assert_eq!("1;".parse::<DirichletCharacter>().unwrap(), chars[0]);
    }

    #[test]
    fn modulus_three() {
        let chars = enumerate_characters(3).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        assert_eq!(chars[0].real_value(5), 1);
        let quad = &chars[1];
        assert_eq!(quad.real_value(1), 1);
        assert_eq!(quad.real_value(2), -1);
        assert_eq!(quad.real_value(6), 0);
        assert_eq!(quad.real_value(-1), -1);
        assert_eq!(quad.to_string(), "3;1");
    }

    #[test]
    fn modulus_nine_has_sextic_values() {
        let chars = enumerate_characters(9).unwrap();
        assert_eq!(chars.len(), 6);
        assert_eq!(chars[1].value_order(), 6);
        let orders: Vec<u64> = (0..9).filter_map(|a| chars[1].value(a)).map(|w| w.exact_order()).collect();
        assert!(orders.contains(&6));
    }

    #[test]
    fn even_modulus_is_rejected() {
        assert!(enumerate_characters(4).is_err());
        assert!(DirichletCharacter::from_exponents(3, &[2]).is_err());
        assert!(DirichletCharacter::from_exponents(15, &[1]).is_err());
    }

    #[test]
    fn orthogonality() {
        for f in [1u64, 3, 5, 7, 9, 15, 21, 45] {
            let phi = euler_phi(f) as f64;
            for chi in enumerate_characters(f).unwrap() {
                let s: Complex64 = (0..f as i64).map(|a| as_complex(&chi, a)).sum();
                let expected = if chi.is_trivial() { phi } else { 0.0 };
                assert!((s - expected).norm() < 1e-12, "f = {f}, chi = {chi}");
            }
        }
    }

    #[test]
    fn multiplicativity_exact() {
        for f in (1u64..=45).step_by(2) {
            for chi in enumerate_characters(f).unwrap() {
                assert_eq!(chi.value(1), Some(RootOfUnity::one()));
                for a in 0..f as i64 {
                    for b in 0..f as i64 {
                        let lhs = chi.value(a * b);
                        let rhs = match (chi.value(a), chi.value(b)) {
                            (Some(x), Some(y)) => Some(x.mul(&y)),
                            _ => None,
                        };
                        assert_eq!(lhs, rhs, "chi = {chi}, a = {a}, b = {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for chi in enumerate_characters(45).unwrap() {
            assert_eq!(chi.to_string().parse::<DirichletCharacter>().unwrap(), chi);
        }
    }
}

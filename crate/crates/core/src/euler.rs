//! Twisted Euler numbers and polynomials.
//!
//! * `E_{n,χ,w}`: the classical twisted numbers, through their exact
//!   recurrence in `Q(ζ_N)`.
//! * `E^{(h,1)}_{n,w,q}(x)`: the twisted q-Euler polynomials, by the closed
//!   form `⌈2⌉_q/(1-q)^n Σ_j C(n,j) (-1)^j q^{xj} / (1 + q^{h+j} w)` or by the
//!   series `⌈2⌉_q Σ_{k≥0} (-1)^k w^k q^{hk} ⌈x+k⌉_q^n`.
//! * `E^{(h,1)}_{n,w,χ,q}`: the generalized numbers attached to a character,
//!   as a finite sum of polynomials at base `(q^f, w^f)` or as a series.
//!
//! The closed forms are generic over [`Scalar`], so the same code produces
//! complex values and cyclotomic p-adic values. The alternating sum loses
//! about `n log2(1/|1-q|)` bits, so the complex closed form runs in MPFR at a
//! precision sized to that loss. Exact variants take a rational `q` and
//! return elements of `Q(ζ_N)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::characters::DirichletCharacter;
use crate::config::EvalConfig;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::lfunctions::{weighted_series, Evaluation};
use crate::precise::{bits_for, MpComplex};
use crate::qcore::{binomial, q_number_int, two_q, Exponent, QParam, RootOfUnity, Scalar};

/// Arguments of `E^{(h,1)}_{n,w,q}(x)`.
#[derive(Debug, Clone)]
pub struct EulerParams<S: Scalar> {
    pub n: u32,
    pub x: Exponent,
    pub h: Exponent,
    pub q: QParam<S>,
    pub w: RootOfUnity,
}

fn pole<S: Scalar>(what: String, den: &S) -> Error {
    Error::Pole { what, magnitude: den.distance(&den.zero_like()) }
}

fn check_budget<S: Scalar>(value: &S, cfg: &EvalConfig) -> Result<()> {
    match value.precision() {
        Some(have) if have < cfg.padic_target => Err(Error::PrecisionBudget { have, need: cfg.padic_target }),
        _ => Ok(()),
    }
}

/// `E^{(h,1)}_{n,w,q}(x)` by the closed form.
///
/// Every denominator `1 + q^{h+j} w` is checked first: below `pole_tol` in
/// the complex case, a non-unit in the p-adic case. p-adic results must keep
/// at least `padic_target` digits after the division by `(1-q)^n`.
pub fn twisted_q_euler_poly<S: Scalar>(p: &EulerParams<S>, cfg: &EvalConfig) -> Result<S> {
    let q = p.q.value();
    let one = q.one_like();
    let w = q.root_of_unity_like(p.w)?;
    let mut denominators = Vec::with_capacity(p.n as usize + 1);
    for j in 0..=p.n {
        let den = one.clone() + p.q.pow(&p.h.add_int(j as i64))? * w.clone();
        if den.is_negligible(cfg.pole_tol) {
            return Err(pole(format!("1 + q^(h+{j}) w"), &den));
        }
        denominators.push(den);
    }
    if let Some(value) = S::euler_closed_extended(&p.q, p.n, &p.x, &p.h, p.w) {
        let value = value?;
        check_budget(&value, cfg)?;
        return Ok(value);
    }
    let qx = p.q.pow(&p.x)?;
    let mut qxj = one.clone();
    let mut sum = q.zero_like();
    for (j, den) in denominators.iter().enumerate() {
        let c = q.from_biguint_like(&binomial(p.n as u64, j as u64)?)?;
        let term = (c * qxj.clone()).try_div(den)?;
        sum = if j % 2 == 0 { sum + term } else { sum - term };
        qxj = qxj * qx.clone();
    }
    let value = two_q(q) * sum;
    let value = if p.n == 0 { value } else { value.try_div(&(one - q.clone()).pow_i64(p.n as i64)?)? };
    check_budget(&value, cfg)?;
    Ok(value)
}

/// The closed form for complex `q` in MPFR arithmetic. `log_q` selects the
/// branch of `q^x`; the value of `q` itself is taken as exact.
pub(crate) fn closed_form_extended(
    q: Complex64,
    log_q: Complex64,
    n: u32,
    x: Complex64,
    h: Complex64,
    w: RootOfUnity,
) -> Result<Complex64> {
    let prec = bits_for(n, q);
    let one = MpComplex::from_i64(prec, 1);
    let qm = MpComplex::from_c64(prec, q);
    let lq = qm.ln_near(log_q)?;
    let (m, k) = w.reduced();
    let wm = MpComplex::root_of_unity(prec, k, m);
    let qx = (&lq * &MpComplex::from_c64(prec, x)).exp();
    let mut qh = (&lq * &MpComplex::from_c64(prec, h)).exp();
    let mut qxj = one.clone();
    let mut sum = MpComplex::from_i64(prec, 0);
    for j in 0..=n {
        let c = MpComplex::from_biguint(prec, &binomial(n as u64, j as u64)?);
        let term = (&c * &qxj).div(&(&one + &(&wm * &qh)))?;
        sum = if j % 2 == 0 { &sum + &term } else { &sum - &term };
        qxj = &qxj * &qx;
        qh = &qh * &qm;
    }
    let value = (&(&one + &qm) * &sum).div(&(&one - &qm).pow_u32(n))?;
    Ok(value.to_c64())
}

/// `E^{(h,1)}_{n,w,q}(x)` by the regularized series (complex regime only).
pub fn twisted_q_euler_series(p: &EulerParams<Complex64>, cfg: &EvalConfig) -> Result<Evaluation> {
    let e = Complex64::new(p.n as f64, 0.0);
    weighted_series(&p.q, p.w, p.h.to_complex(), p.x.to_complex(), e, 0, &[Complex64::new(1.0, 0.0)], cfg)
}

/// `E_{n,χ,w}` for `n = 0..=n_max`, from
/// `(1 + w^f) E_n = 2 Σ_{i<f} (-1)^i χ(i) w^i i^n - w^f Σ_{k<n} C(n,k) f^{n-k} E_k`.
///
/// Values lie in `Q(ζ_N)` with `N` the lcm of the orders of `w` and of the
/// character values.
pub fn classical_twisted_euler_table(n_max: u32, chi: &DirichletCharacter, w: RootOfUnity) -> Result<Vec<Cyclotomic>> {
    let f = chi.modulus();
    let order = w.exact_order().lcm(&chi.value_order());
    let one = Cyclotomic::one(order)?;
    let wf = Cyclotomic::root(order, w.pow(f as i64))?;
    let lead = &one + &wf;
    if lead.is_zero() {
        return Err(Error::Pole { what: "1 + w^f".into(), magnitude: 0.0 });
    }
    let lead_inv = lead.inverse()?;
    // 2 (-1)^i χ(i) w^i, paired with i
    let weights: Vec<(u64, Cyclotomic)> = (0..f)
        .filter_map(|i| chi.value(i as i64).map(|c| (i, c)))
        .map(|(i, c)| {
            let sign = if i % 2 == 0 { 2 } else { -2 };
            let root = Cyclotomic::root(order, c.mul(&w.pow(i as i64)))?;
            Ok((i, &one.rational_like(BigRational::from_integer(BigInt::from(sign))) * &root))
        })
        .collect::<Result<_>>()?;
    let fb = BigInt::from(f);
    let mut table: Vec<Cyclotomic> = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let mut rhs = Cyclotomic::zero(order)?;
        for (i, weight) in &weights {
            let ipow = num_traits::pow(BigInt::from(*i), n as usize);
            if !ipow.is_zero() {
                rhs = &rhs + &(weight * &one.rational_like(BigRational::from_integer(ipow)));
            }
        }
        let mut lower = Cyclotomic::zero(order)?;
        for (k, ek) in table.iter().enumerate() {
            let c = BigInt::from(binomial(n as u64, k as u64)?) * num_traits::pow(fb.clone(), n as usize - k);
            lower = &lower + &(ek * &one.rational_like(BigRational::from_integer(c)));
        }
        let en = &(&rhs - &(&wf * &lower)) * &lead_inv;
        table.push(en);
    }
    Ok(table)
}

pub fn classical_twisted_euler(n: u32, chi: &DirichletCharacter, w: RootOfUnity) -> Result<Cyclotomic> {
    Ok(classical_twisted_euler_table(n, chi, w)?.pop().expect("table has n + 1 rows"))
}

/// `E^{(h,1)}_{n,w,χ,q} = ⌈f⌉_q^n (⌈2⌉_q/⌈2⌉_{q^f}) Σ_{a<f} q^{ha} w^a χ(a) (-1)^a E^{(h,1)}_{n,w^f,q^f}(a/f)`.
///
/// For `f = 1` the `a = 0` term carries `⌈0⌉_q^n`, which is 1 when `n = 0`;
/// the series form starting at `k = 1` differs from this sum exactly there.
pub fn generalized_twisted_q_euler<S: Scalar>(
    n: u32,
    chi: &DirichletCharacter,
    h: Exponent,
    q: &QParam<S>,
    w: RootOfUnity,
    cfg: &EvalConfig,
) -> Result<S> {
    let f = chi.modulus() as i64;
    let qv = q.value();
    let qf = q.pow_param(f)?;
    let ratio = two_q(qv).try_div(&two_q(qf.value()))?;
    let bracket = q_number_int(f, qv)?.pow_i64(n as i64)?;
    let wv = qv.root_of_unity_like(w)?;
    let mut sum = qv.zero_like();
    for a in 0..f {
        if chi.value(a).is_none() {
            continue;
        }
        let weight = chi.evaluate(a, qv)? * q.pow(&h.mul_int(a))? * wv.pow_i64(a)?;
        let inner = EulerParams { n, x: Exponent::rational(a, f)?, h, q: qf.clone(), w: w.pow(f) };
        let term = weight * twisted_q_euler_poly(&inner, cfg)?;
        sum = if a % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(bracket * ratio * sum)
}

/// `⌈2⌉_q Σ_{k≥1} χ(k) (-1)^k q^{hk} w^k ⌈k⌉_q^n` by the regularized series.
pub fn generalized_twisted_q_euler_series(
    n: u32,
    chi: &DirichletCharacter,
    h: Complex64,
    q: &QParam<Complex64>,
    w: RootOfUnity,
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let coeffs: Vec<Complex64> =
        (0..chi.modulus() as i64).map(|a| chi.evaluate(a, &Complex64::new(0.0, 0.0))).collect::<Result<_>>()?;
    let e = Complex64::new(n as f64, 0.0);
    weighted_series(q, w, h, Complex64::new(0.0, 0.0), e, 1, &coeffs, cfg)
}

fn exact_q(q: &BigRational) -> Result<()> {
    if q.is_zero() || q.abs() >= BigRational::one() {
        return Err(Error::Domain(format!("exact evaluation needs 0 < |q| < 1, got {q}")));
    }
    Ok(())
}

fn exact_pole_check(den: &Cyclotomic, what: impl FnOnce() -> String, pole_tol: f64) -> Result<()> {
    let magnitude = if den.is_zero() { 0.0 } else { den.embed(&Complex64::new(0.0, 0.0))?.norm() };
    if magnitude < pole_tol {
        return Err(Error::Pole { what: what(), magnitude });
    }
    Ok(())
}

/// `q^e` for an integer `e`.
fn rational_pow(q: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// `E^{(h,1)}_{n,w,q}(x)` by the closed form in exact arithmetic, for
/// rational `q` and integer `x`, `h`.
pub fn twisted_q_euler_exact(
    n: u32,
    x: i64,
    h: i64,
    q: &BigRational,
    w: RootOfUnity,
    pole_tol: f64,
) -> Result<Cyclotomic> {
    exact_q(q)?;
    let order = w.exact_order();
    let one = Cyclotomic::one(order)?;
    let wc = Cyclotomic::root(order, w)?;
    let qx = rational_pow(q, x);
    let mut qxj = BigRational::one();
    let mut sum = Cyclotomic::zero(order)?;
    for j in 0..=n as i64 {
        let den = &one + &(&wc * &one.rational_like(rational_pow(q, h + j)));
        exact_pole_check(&den, || format!("1 + q^(h+{j}) w"), pole_tol)?;
        let c = BigRational::from_integer(BigInt::from(binomial(n as u64, j as u64)?)) * &qxj;
        let term = &one.rational_like(if j % 2 == 0 { c } else { -c }) * &den.inverse()?;
        sum = &sum + &term;
        qxj *= &qx;
    }
    let one_r = BigRational::one();
    let scale = (&one_r + q) / rational_pow(&(&one_r - q), n as i64);
    Ok(&sum * &one.rational_like(scale))
}

/// `E^{(h,1)}_{n,w,χ,q} = ⌈2⌉_q Σ_{k≥1} χ(k) (-1)^k q^{hk} w^k ⌈k⌉_q^n` in exact
/// arithmetic, for rational `q` and integer `h`. Expanding `⌈k⌉_q^n` and
/// summing each geometric series over one period of `χ` gives
/// `⌈2⌉_q/(1-q)^n Σ_j C(n,j) (-1)^j Σ_{a=1}^f χ(a) ρ_j^a / (1 - ρ_j^f)` with
/// `ρ_j = -w q^{h+j}`.
pub fn generalized_twisted_q_euler_exact(
    n: u32,
    chi: &DirichletCharacter,
    h: i64,
    q: &BigRational,
    w: RootOfUnity,
    pole_tol: f64,
) -> Result<Cyclotomic> {
    exact_q(q)?;
    let f = chi.modulus();
    let order = w.exact_order().lcm(&chi.value_order());
    let one = Cyclotomic::one(order)?;
    let wc = Cyclotomic::root(order, w)?;
    let chis: Vec<Cyclotomic> = (1..=f)
        .map(|a| match chi.value(a as i64) {
            Some(c) => Cyclotomic::root(order, c),
            None => Cyclotomic::zero(order),
        })
        .collect::<Result<_>>()?;
    let mut sum = Cyclotomic::zero(order)?;
    for j in 0..=n as i64 {
        let rho = -&(&wc * &one.rational_like(rational_pow(q, h + j)));
        let mut rho_a = one.clone();
        let mut period = Cyclotomic::zero(order)?;
        for c in &chis {
            rho_a = &rho_a * &rho;
            period = &period + &(c * &rho_a);
        }
        // rho_a = ρ^f now
        let den = &one - &rho_a;
        exact_pole_check(&den, || format!("1 - (-w q^(h+{j}))^f"), pole_tol)?;
        let c = BigRational::from_integer(BigInt::from(binomial(n as u64, j as u64)?));
        let c = if j % 2 == 0 { c } else { -c };
        sum = &sum + &(&(&period * &den.inverse()?) * &one.rational_like(c));
    }
    let one_r = BigRational::one();
    let scale = (&one_r + q) / rational_pow(&(&one_r - q), n as i64);
    Ok(&sum * &one.rational_like(scale))
}

/// Which base twist the right-hand side of the distribution identity uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionReading {
    /// `E_{n,w^d,q^d}`, under which the identity holds for every `w`.
    TwistedBase,
    /// `E_{n,1,q^d}`, the untwisted base.
    Literal,
}

/// Both sides of
/// `E_{n,w,q}(x) = (⌈2⌉_q/⌈2⌉_{q^d}) ⌈d⌉_q^n Σ_{a<d} q^{ha} w^a (-1)^a E_{n,w',q^d}((x+a)/d)`
/// with `w' = w^d` or `1` according to `reading`.
pub fn distribution_check<S: Scalar>(
    p: &EulerParams<S>,
    d: u64,
    reading: DistributionReading,
    cfg: &EvalConfig,
) -> Result<(S, S)> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::Domain(format!("distribution modulus d = {d} must be odd")));
    }
    let d = d as i64;
    let lhs = twisted_q_euler_poly(p, cfg)?;
    let q = p.q.value();
    let qd = p.q.pow_param(d)?;
    let base_w = match reading {
        DistributionReading::TwistedBase => p.w.pow(d),
        DistributionReading::Literal => RootOfUnity::one(),
    };
    let ratio = two_q(q).try_div(&two_q(qd.value()))?;
    let bracket = q_number_int(d, q)?.pow_i64(p.n as i64)?;
    let wv = q.root_of_unity_like(p.w)?;
    let mut sum = q.zero_like();
    for a in 0..d {
        let weight = p.q.pow(&p.h.mul_int(a))? * wv.pow_i64(a)?;
        let x = p.x.add_int(a).div_int(d)?;
        let inner = EulerParams { n: p.n, x, h: p.h, q: qd.clone(), w: base_w };
        let term = weight * twisted_q_euler_poly(&inner, cfg)?;
        sum = if a % 2 == 0 { sum + term } else { sum - term };
    }
    Ok((lhs, ratio * bracket * sum))
}

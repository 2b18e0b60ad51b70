//! Twisted q-Euler zeta functions and q-l-functions in the complex regime.
//!
//! All series here have the shape `Σ_{k≥k0} c_{k mod f} ρ^k ⌈x+k⌉_q^e` with
//! `ρ = -w q^h`. They are evaluated by tail regularization: with
//! `L = (1-q)^{-e}` the limit of `⌈x+k⌉_q^e`,
//!
//! ```text
//! Σ c ρ^k ⌈x+k⌉^e = Σ c ρ^k (⌈x+k⌉^e - L) + L Σ c ρ^k
//! ```
//!
//! The first series converges geometrically at rate `|ρ q|` for every
//! exponent `e`, and the second is a finite geometric sum over one period.
//! This gives the analytic continuation in `s = -e` directly, and at
//! `s = -n` reproduces the closed form of the Euler polynomials term by term.

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::euler::{generalized_twisted_q_euler, twisted_q_euler_poly, EulerParams};
use crate::precise::MpComplex;
use crate::qcore::{exp_m1, ln_1p, Exponent, QParam, RootOfUnity};

/// A complex value with the size of its estimated error and the number of
/// series terms used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub error_bound: f64,
    pub terms: usize,
}

/// The series `Σ_{k ≥ start} c_{k mod f} ρ^k ⌈x+k⌉_q^e` (no `⌈2⌉_q` factor).
#[derive(Debug, Clone)]
pub(crate) struct TwistedSeries<'a> {
    pub q: Complex64,
    pub log_q: Complex64,
    pub x: Complex64,
    pub e: Complex64,
    pub rho: Complex64,
    pub start: u64,
    pub coeffs: &'a [Complex64],
}

fn exponent_integer(e: Complex64) -> Option<i64> {
    (e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() < 1e9).then_some(e.re as i64)
}

impl TwistedSeries<'_> {
    /// `⌈x+k⌉^e - L`, computed without cancellation.
    fn bracket_minus_limit(&self, k: u64, limit: Complex64, e_int: Option<i64>) -> Result<(Complex64, f64)> {
        let y = self.x + k as f64;
        if y.norm() == 0.0 {
            let at_zero = match e_int {
                Some(0) => Complex64::new(1.0, 0.0),
                Some(n) if n > 0 => Complex64::new(0.0, 0.0),
                _ => return Err(Error::Domain("⌈0⌉_q raised to a non-positive or non-integer power".into())),
            };
            return Ok((at_zero - limit, f64::INFINITY));
        }
        let u = (y * self.log_q).exp();
        let diff = limit * exp_m1(self.e * ln_1p(-u));
        Ok((diff, self.e.norm() * u.norm()))
    }

    pub(crate) fn evaluate(&self, cfg: &EvalConfig) -> Result<Evaluation> {
        let f = self.coeffs.len() as u64;
        assert!(f > 0, "twisted series with an empty coefficient period");
        let r = self.rho.norm() * self.q.norm();
        if !(r < 1.0) {
            return Err(Error::Domain(format!(
                "series ratio |w q^(h+1)| = {r} is not below 1; Re(h) must be non-negative"
            )));
        }
        let e_int = exponent_integer(self.e);
        let limit = match e_int {
            Some(n) => {
                let n32 = i32::try_from(-n).map_err(|_| Error::OutOfRange(format!("exponent {n}")))?;
                (1.0 - self.q).powi(n32)
            }
            None => (-self.e * ln_1p(-self.q)).exp(),
        };

        // L Σ_{k≥start} c_k ρ^k = L Σ_{one period} c_k ρ^k / (1 - ρ^f)
        let rho_f = self.rho.powu(f as u32);
        let denom = 1.0 - rho_f;
        if denom.norm() < cfg.pole_tol {
            return Err(Error::Pole { what: "1 - (-w q^h)^f".into(), magnitude: denom.norm() });
        }
        let mut rho_k = self.rho.powu(self.start as u32);
        let mut period = Complex64::new(0.0, 0.0);
        for k in self.start..self.start + f {
            period += self.coeffs[(k % f) as usize] * rho_k;
            rho_k *= self.rho;
        }
        let closed = limit * period / denom;

        let cmax = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut comp = Complex64::new(0.0, 0.0);
        let mut magnitude = closed.norm();
        let mut rho_k = self.rho.powu(self.start as u32);
        let mut quiet = 0;
        let mut tail;
        let mut k = self.start;
        loop {
            if (k - self.start) as usize >= cfg.max_terms {
                return Err(Error::TruncationCap(cfg.max_terms));
            }
            let (diff, growth) = self.bracket_minus_limit(k, limit, e_int)?;
            let c = self.coeffs[(k % f) as usize];
            let term = c * rho_k * diff;
            // Neumaier summation
            let t = sum + term;
            if sum.re.abs() >= term.re.abs() {
                comp.re += (sum.re - t.re) + term.re;
            } else {
                comp.re += (term.re - t.re) + sum.re;
            }
            if sum.im.abs() >= term.im.abs() {
                comp.im += (sum.im - t.im) + term.im;
            } else {
                comp.im += (term.im - t.im) + sum.im;
            }
            sum = t;
            magnitude += term.norm();

            let bound = cmax * rho_k.norm() * diff.norm();
            if growth < 0.5 && k >= self.start + 4 {
                tail = 2.0 * bound * r / (1.0 - r);
                let scale = (sum + comp + closed).norm();
                if tail <= cfg.series_tol * scale || tail < f64::MIN_POSITIVE {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
            rho_k *= self.rho;
            k += 1;
        }
        let value = sum + comp + closed;
        let terms = (k - self.start + 1) as usize;
        let rounding = 8.0 * f64::EPSILON * magnitude;
        if rounding <= cfg.series_tol * value.norm() {
            return Ok(Evaluation { value, error_bound: tail + rounding, terms });
        }
        // Cancellation ate the double-precision digits: same terms, more bits.
        let ratio = magnitude / value.norm().max(f64::MIN_POSITIVE);
        let bits = 53 + 64 + ratio.log2().clamp(0.0, 4096.0).ceil() as u32;
        let value = self.sum_extended(bits, terms as u64)?;
        let rounding = 8.0 * magnitude * (-(bits as f64 - 64.0)).exp2();
        Ok(Evaluation { value, error_bound: tail + rounding, terms })
    }

    /// Terms `start..start+count` and the closed period part in MPFR at
    /// `bits` of precision. The principal logarithm of `1 - q` fixes `L`.
    fn sum_extended(&self, bits: u32, count: u64) -> Result<Complex64> {
        let f = self.coeffs.len() as u64;
        let mp = |z: Complex64| MpComplex::from_c64(bits, z);
        let one = MpComplex::from_i64(bits, 1);
        let qm = mp(self.q);
        let lq = qm.ln_near(self.log_q)?;
        let rho = mp(self.rho);
        let e_int = exponent_integer(self.e);
        let one_minus_q = &one - &qm;
        let limit = match e_int {
            Some(n) if n <= 0 => one_minus_q.pow_u32(n.unsigned_abs() as u32),
            Some(n) => one.div(&one_minus_q.pow_u32(n as u32))?,
            None => (&mp(-self.e) * &one_minus_q.ln_near(Complex64::new(0.0, 0.0))?).exp(),
        };
        let power = |base: &MpComplex| -> Result<MpComplex> {
            match e_int {
                Some(n) if n >= 0 => Ok(base.pow_u32(n as u32)),
                Some(n) => one.div(&base.pow_u32(n.unsigned_abs() as u32)),
                None => Ok((&mp(self.e) * &base.ln_near(Complex64::new(0.0, 0.0))?).exp()),
            }
        };
        let mut rho_k = rho.pow_u32(self.start as u32);
        let mut period = MpComplex::from_i64(bits, 0);
        for k in self.start..self.start + f {
            period = &period + &(&mp(self.coeffs[(k % f) as usize]) * &rho_k);
            rho_k = &rho_k * &rho;
        }
        let mut sum = (&limit * &period).div(&(&one - &rho.pow_u32(f as u32)))?;
        let mut rho_k = rho.pow_u32(self.start as u32);
        for k in self.start..self.start + count {
            let y = self.x + k as f64;
            // ⌈y⌉^e - L = L ((1 - q^y)^e - 1)
            let diff = if y.norm() == 0.0 {
                // the f64 pass has already rejected the invalid exponents
                let at_zero = if e_int == Some(0) { one.clone() } else { MpComplex::from_i64(bits, 0) };
                &at_zero - &limit
            } else {
                let y = &mp(self.x) + &MpComplex::from_i64(bits, k as i64);
                let u = (&y * &lq).exp();
                &limit * &(&power(&(&one - &u))? - &one)
            };
            sum = &sum + &(&(&mp(self.coeffs[(k % f) as usize]) * &rho_k) * &diff);
            rho_k = &rho_k * &rho;
        }
        Ok(sum.to_c64())
    }
}

/// Parameters of the zeta and l-functions: `s`, the Hurwitz shift `x`, the
/// weight `h`, the real base `q ∈ (0,1)`, the twist `w` and an optional
/// character.
#[derive(Debug, Clone)]
pub struct ZetaParams {
    pub s: Complex64,
    pub x: Option<f64>,
    pub h: Complex64,
    pub q: f64,
    pub w: RootOfUnity,
    pub chi: Option<DirichletCharacter>,
}

impl ZetaParams {
    pub fn new(s: Complex64, h: Complex64, q: f64, w: RootOfUnity) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!("q must lie in (0, 1), got {q}")));
        }
        if h.re < 0.0 {
            return Err(Error::Domain(format!("Re(h) must be non-negative, got {}", h.re)));
        }
        Ok(ZetaParams { s, x: None, h, q, w, chi: None })
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_chi(mut self, chi: DirichletCharacter) -> Self {
        self.chi = Some(chi);
        self
    }

    pub fn with_s(mut self, s: Complex64) -> Self {
        self.s = s;
        self
    }

    fn hurwitz_x(&self) -> Result<f64> {
        match self.x {
            Some(x) if x > 0.0 => Ok(x),
            Some(x) => Err(Error::Domain(format!("Hurwitz shift must be positive, got {x}"))),
            None => Err(Error::Domain("Hurwitz zeta needs a shift x".into())),
        }
    }

    fn character(&self) -> DirichletCharacter {
        self.chi.clone().unwrap_or_else(DirichletCharacter::trivial)
    }
}

/// `ρ = -w q^h`, after the pole check on `1 + w q^h`.
fn base(log_q: Complex64, w: Complex64, h: Complex64, cfg: &EvalConfig) -> Result<Complex64> {
    let wqh = w * (h * log_q).exp();
    let gap = 1.0 + wqh;
    if gap.norm() < cfg.pole_tol {
        return Err(Error::Pole { what: "1 + w q^h".into(), magnitude: gap.norm() });
    }
    Ok(-wqh)
}

/// `⌈2⌉_q Σ_{k≥start} c_{k mod f} (-1)^k w^k q^{hk} ⌈x+k⌉_q^e` for complex
/// `q` with `0 < |q| < 1`; shared with the Euler series.
pub(crate) fn weighted_series(
    q: &QParam<Complex64>,
    w: RootOfUnity,
    h: Complex64,
    x: Complex64,
    e: Complex64,
    start: u64,
    coeffs: &[Complex64],
    cfg: &EvalConfig,
) -> Result<Evaluation> {
    let qv = *q.value();
    let log_q = qv.ln();
    if exponent_integer(e).is_none() && !(qv.im == 0.0 && qv.re > 0.0) {
        return Err(Error::Domain("non-integer exponents of ⌈x⌉_q need a real positive q".into()));
    }
    if x.im == 0.0 && x.re < 0.0 {
        return Err(Error::Domain(format!("shift x = {} must be non-negative", x.re)));
    }
    let rho = base(log_q, w.to_complex(), h, cfg)?;
    let series = TwistedSeries { q: qv, log_q, x, e, rho, start, coeffs };
    let ev = series.evaluate(cfg)?;
    let two = 1.0 + qv;
    Ok(Evaluation { value: two * ev.value, error_bound: two.norm() * ev.error_bound, terms: ev.terms })
}

fn complex_q(q: f64) -> Result<QParam<Complex64>> {
    QParam::new(Complex64::new(q, 0.0))
}

const ONE: [Complex64; 1] = [Complex64::new(1.0, 0.0)];

/// `ζ(s, x) = ⌈2⌉_q Σ_{k≥0} (-1)^k q^{hk} w^k ⌈x+k⌉_q^{-s}`, continued to all `s`.
pub fn hurwitz_zeta(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let x = params.hurwitz_x()?;
    let q = complex_q(params.q)?;
    weighted_series(&q, params.w, params.h, Complex64::new(x, 0.0), -params.s, 0, &ONE, cfg)
}

/// The defining series of the Hurwitz zeta summed as written, without
/// regularization. Converges only when `Re(h) > 0` and `Re(s)` is such that
/// the terms decay; used to validate the continuation.
pub fn hurwitz_zeta_raw(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let x = params.hurwitz_x()?;
    if params.h.re <= 0.0 {
        return Err(Error::Domain("the unregularized series needs Re(h) > 0".into()));
    }
    let q = params.q;
    let log_q = q.ln();
    let rho = base(Complex64::new(log_q, 0.0), params.w.to_complex(), params.h, cfg)?;
    let r = rho.norm();
    // ⌈y⌉_q increases to 1/(1-q), so the tail of |⌈y⌉^{-s}| = ⌈y⌉^{-Re s} is
    // bounded by its value at the current y or at the limit
    let limit_power = (1.0 - q).powf(params.s.re);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rho_k = Complex64::new(1.0, 0.0);
    let mut k = 0u64;
    let mut quiet = 0;
    let mut tail;
    loop {
        if k as usize >= cfg.max_terms {
            return Err(Error::TruncationCap(cfg.max_terms));
        }
        let y = x + k as f64;
        let bracket = (1.0 - q.powf(y)) / (1.0 - q);
        let term = rho_k * (-params.s * bracket.ln()).exp();
        sum += term;
        tail = bracket.powf(-params.s.re).max(limit_power) * rho_k.norm() * r / (1.0 - r);
        if tail <= cfg.series_tol * sum.norm() {
            quiet += 1;
            if quiet >= 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        rho_k *= rho;
        k += 1;
    }
    let two = 1.0 + q;
    Ok(Evaluation { value: two * sum, error_bound: two * tail, terms: k as usize + 1 })
}

/// `ζ(s) = ⌈2⌉_q Σ_{k≥1} (-1)^k w^k q^{hk} ⌈k⌉_q^{-s}`.
pub fn zeta(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let q = complex_q(params.q)?;
    weighted_series(&q, params.w, params.h, Complex64::new(0.0, 0.0), -params.s, 1, &ONE, cfg)
}

fn character_coeffs(chi: &DirichletCharacter) -> Result<Vec<Complex64>> {
    (0..chi.modulus() as i64).map(|a| chi.evaluate(a, &Complex64::new(0.0, 0.0))).collect()
}

/// `l(s, χ) = ⌈2⌉_q Σ_{k≥1} χ(k) (-1)^k q^{hk} w^k ⌈k⌉_q^{-s}` summed directly
/// with periodic coefficients.
pub fn l_function_direct(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let chi = params.character();
    let q = complex_q(params.q)?;
    let coeffs = character_coeffs(&chi)?;
    weighted_series(&q, params.w, params.h, Complex64::new(0.0, 0.0), -params.s, 1, &coeffs, cfg)
}

/// `l(s, χ)` through Hurwitz zeta functions at base `(q^f, w^f)`:
/// `⌈f⌉_q^{-s} (⌈2⌉_q/⌈2⌉_{q^f}) Σ_{a=1}^f χ(a) (-1)^a q^{ha} w^a ζ_{q^f,w^f}(s, a/f)`.
pub fn l_function_decomposed(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let chi = params.character();
    let f = chi.modulus();
    let q = params.q;
    let qf = q.powi(f as i32);
    let log_q = q.ln();
    let w = params.w.to_complex();
    let wf = params.w.pow(f as i64);
    let bracket_f = (1.0 - qf) / (1.0 - q);
    let prefactor = (-params.s * bracket_f.ln()).exp() * (1.0 + q) / (1.0 + qf);
    let inner = ZetaParams { q: qf, w: wf, chi: None, ..params.clone() };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut terms = 0;
    for a in 1..=f {
        let c = chi.evaluate(a as i64, &Complex64::new(0.0, 0.0))?;
        if c.norm() == 0.0 {
            continue;
        }
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        let weight = c * sign * (params.h * log_q * a as f64).exp() * w.powu(a as u32);
        let ev = hurwitz_zeta(&inner.clone().with_x(a as f64 / f as f64), cfg)?;
        sum += weight * ev.value;
        bound += weight.norm() * ev.error_bound;
        terms += ev.terms;
    }
    Ok(Evaluation { value: prefactor * sum, error_bound: prefactor.norm() * bound, terms })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LPath {
    Direct,
    Decomposed,
}

/// Both evaluations of `l(s, χ)`; the direct value is returned after the two
/// paths are checked to agree within `10·tol` (relative, unit floor).
pub fn l_function(params: &ZetaParams, cfg: &EvalConfig) -> Result<Evaluation> {
    let direct = l_function_direct(params, cfg)?;
    let decomposed = l_function_decomposed(params, cfg)?;
    let diff = (direct.value - decomposed.value).norm();
    let allowed = 10.0 * cfg.tol * direct.value.norm().max(1.0);
    if diff > allowed {
        return Err(Error::CrossCheck { diff, allowed });
    }
    Ok(Evaluation { error_bound: direct.error_bound.max(diff), ..direct })
}

/// One row of an interpolation table: `ζ(-n)` next to `E_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationRow {
    pub n: u32,
    pub zeta: Complex64,
    pub euler: Complex64,
    pub diff: f64,
}

/// Largest degree accepted by [`interpolate_at_negatives`]. Both sides fall
/// back to extended precision as `(1-q)^{-n}` grows, so the cap bounds cost.
pub const INTERPOLATION_MAX_N: u32 = 20;

/// `ζ(-n, x)` (or the l-function when `chi` is set and `x` absent) against
/// the Euler numbers for `n = 0..=n_max`. `h` must be real.
///
/// The plain zeta function starts at `k = 1`, so its row compares against
/// `E_n(0)` less the `k = 0` summand, which is `⌈2⌉_q` at `n = 0` and zero
/// otherwise.
pub fn interpolate_at_negatives(n_max: u32, params: &ZetaParams, cfg: &EvalConfig) -> Result<Vec<InterpolationRow>> {
    if n_max > INTERPOLATION_MAX_N {
        return Err(Error::OutOfRange(format!("n_max = {n_max} exceeds {INTERPOLATION_MAX_N}")));
    }
    let q = complex_q(params.q)?;
    let h = Exponent::Complex(params.h);
    (0..=n_max)
        .map(|n| {
            let at = params.clone().with_s(Complex64::new(-(n as f64), 0.0));
            let (zeta_value, euler_value) = match (params.x, &params.chi) {
                (Some(x), _) => {
                    let e =
                        EulerParams { n, x: Exponent::Complex(Complex64::new(x, 0.0)), h, q: q.clone(), w: params.w };
                    (hurwitz_zeta(&at, cfg)?.value, twisted_q_euler_poly(&e, cfg)?)
                }
                (None, Some(chi)) => {
                    (l_function_direct(&at, cfg)?.value, generalized_twisted_q_euler(n, chi, h, &q, params.w, cfg)?)
                }
                (None, None) => {
                    let e = EulerParams { n, x: Exponent::Int(0), h, q: q.clone(), w: params.w };
                    let mut euler = twisted_q_euler_poly(&e, cfg)?;
                    if n == 0 {
                        euler -= 1.0 + params.q;
                    }
                    (zeta(&at, cfg)?.value, euler)
                }
            };
            Ok(InterpolationRow { n, zeta: zeta_value, euler: euler_value, diff: (zeta_value - euler_value).norm() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate_characters;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn w(m: u64, k: u64) -> RootOfUnity {
        RootOfUnity::new(m, k).unwrap()
    }

    #[test]
    fn hurwitz_at_zero_is_geometric() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(0.0, 0.0), c(1.0, 0.0), 0.5, w(3, 1)).unwrap().with_x(0.4);
        let got = hurwitz_zeta(&p, &cfg).unwrap().value;
        let wq = w(3, 1).to_complex() * 0.5;
        assert!((got - 1.5 / (1.0 + wq)).norm() < 1e-14);
    }

    #[test]
    fn zeta_at_zero_is_geometric_from_one() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(0.0, 0.0), c(1.0, 0.0), 0.5, w(1, 0)).unwrap();
        let got = zeta(&p, &cfg).unwrap().value;
        assert!((got - 1.5 * (-0.5) / 1.5).norm() < 1e-14);
    }

    #[test]
    fn zeta_minus_one_direct_sum() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(-1.0, 0.0), c(1.0, 0.0), 0.5, w(2, 1)).unwrap();
        let got = zeta(&p, &cfg).unwrap().value;
        // oracle: ⌈2⌉ Σ_{k=1}^{200} q^k ⌈k⌉
        let mut oracle = 0.0;
        for k in 1..=200 {
            oracle += 0.5f64.powi(k) * (1.0 - 0.5f64.powi(k)) / 0.5;
        }
        oracle *= 1.5;
        assert!((got - oracle).norm() < 1e-12, "{got} vs {oracle}");
    }

    #[test]
    fn near_classical_eta() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(2.0, 0.0), c(0.0, 0.0), 0.999, w(1, 0)).unwrap().with_x(1.0);
        let got = hurwitz_zeta(&p, &cfg).unwrap().value;
        let target = std::f64::consts::PI.powi(2) / 6.0;
        assert!((got.re - target).abs() < 2e-2, "{got}");
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn regularized_matches_raw() {
        let cfg = EvalConfig::default();
        for s in [c(-1.5, 0.0), c(-2.5, 1.0), c(-3.0, -0.5)] {
            let p = ZetaParams::new(s, c(1.0, 0.0), 0.6, w(4, 1)).unwrap().with_x(0.7);
            let a = hurwitz_zeta(&p, &cfg).unwrap().value;
            let b = hurwitz_zeta_raw(&p, &cfg).unwrap().value;
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1.0), "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn pole_is_reported() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(1.0, 0.0), c(0.0, 0.0), 0.5, w(2, 1)).unwrap().with_x(0.5);
        assert!(matches!(hurwitz_zeta(&p, &cfg), Err(Error::Pole { .. })));
        assert!(matches!(zeta(&p, &cfg), Err(Error::Pole { .. })));
    }

    #[test]
    fn negative_h_is_rejected() {
        assert!(matches!(ZetaParams::new(c(1.0, 0.0), c(-0.5, 0.0), 0.5, w(1, 0)), Err(Error::Domain(_))));
        assert!(ZetaParams::new(c(1.0, 0.0), c(1.0, 0.0), 1.0, w(1, 0)).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let cfg = EvalConfig::default();
        let s = c(0.7, 1.3);
        let a = ZetaParams::new(s, c(1.0, 0.0), 0.4, w(5, 2)).unwrap().with_x(0.25);
        let b = ZetaParams::new(s.conj(), c(1.0, 0.0), 0.4, w(5, 3)).unwrap().with_x(0.25);
        let za = hurwitz_zeta(&a, &cfg).unwrap().value;
        let zb = hurwitz_zeta(&b, &cfg).unwrap().value;
        assert!((za - zb.conj()).norm() < 1e-10);
    }

    #[test]
    fn trivial_character_collapses_to_zeta() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(2.0, 1.0), c(1.0, 0.0), 0.5, w(4, 1)).unwrap();
        let z = zeta(&p, &cfg).unwrap().value;
        let l = l_function(&p, &cfg).unwrap().value;
        assert!((z - l).norm() < 1e-12);
    }

    #[test]
    fn l_function_paths_agree() {
        let cfg = EvalConfig::default();
        for chi in enumerate_characters(5).unwrap() {
            let p = ZetaParams::new(c(2.0, 1.0), c(1.0, 0.0), 0.5, w(3, 1)).unwrap().with_chi(chi);
            let a = l_function_direct(&p, &cfg).unwrap().value;
            let b = l_function_decomposed(&p, &cfg).unwrap().value;
            assert!((a - b).norm() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn interpolation_rows() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(0.0, 0.0), c(2.0, 0.0), 0.5, w(4, 1)).unwrap().with_x(1.0 / 3.0);
        let rows = interpolate_at_negatives(8, &p, &cfg).unwrap();
        assert_eq!(rows.len(), 9);
        for row in rows {
            assert!(row.diff <= 1e-9 * row.euler.norm().max(1.0), "{row:?}");
        }
        assert!(interpolate_at_negatives(21, &p, &cfg).is_err());
    }

    #[test]
    fn plain_interpolation_accounts_for_the_missing_first_term() {
        let cfg = EvalConfig::default();
        let p = ZetaParams::new(c(0.0, 0.0), c(1.0, 0.0), 0.8, w(1, 0)).unwrap();
        for row in interpolate_at_negatives(8, &p, &cfg).unwrap() {
            assert!(row.diff <= 1e-9 * row.euler.norm().max(1.0), "{row:?}");
        }
    }
}

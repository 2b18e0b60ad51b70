//! Fermionic p-adic integrals as finite-level Riemann sums.
//!
//! At level `N` over the domain `X_d = lim Z/d p^N`, the measure `μ_{-q}`
//! gives the coset `a + d p^N Z_p` the mass `(-q)^a / ⌈d p^N⌉_{-q}`; `μ_{-1}`
//! is the case `q = 1` where the normaliser is 1 because `d p^N` is odd.
//! Level sums are prefix sums of one sequence, so convergence checks reuse
//! all work done at lower levels.

use num_integer::Integer;

use super::cyclo::CycloPadic;
use super::int::{add_mod, modulus_for, mul_mod, pow_u64, PadicInt};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::qcore::RootOfUnity;

pub const DEFAULT_LEVEL_CAP: u32 = 12;
/// Hard bound on `d p^N`, the number of summands at one level.
pub const MAX_SUMMANDS: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    MuMinus1,
    MuMinusQ(PadicInt),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermionicMeasure {
    kind: MeasureKind,
    stride: u64,
    p: u64,
    prec: u32,
}

impl FermionicMeasure {
    /// `μ_{-1}` on `X_d`; `d = 1` is `Z_p`.
    pub fn minus_one(p: u64, prec: u32, stride: u64) -> Result<Self> {
        modulus_for(p, prec)?;
        Self::check_stride(p, stride)?;
        Ok(FermionicMeasure { kind: MeasureKind::MuMinus1, stride, p, prec })
    }

    /// `μ_{-q}` on `X_d`, for `|1 - q|_p < 1`.
    pub fn minus_q(q: PadicInt, stride: u64) -> Result<Self> {
        let p = q.prime();
        Self::check_stride(p, stride)?;
        let one = PadicInt::one(p, q.precision())?;
        if (one - q).is_unit() {
            return Err(Error::Domain("μ_{-q} needs |1 - q|_p < 1".into()));
        }
        Ok(FermionicMeasure { kind: MeasureKind::MuMinusQ(q), stride, p, prec: q.precision() })
    }

    fn check_stride(p: u64, stride: u64) -> Result<()> {
        if stride == 0 || stride.is_multiple_of(2) {
            return Err(Error::Domain(format!("domain stride {stride} must be odd and positive")));
        }
        if stride.gcd(&p) != 1 {
            return Err(Error::Domain(format!("domain stride {stride} must be prime to p = {p}")));
        }
        Ok(())
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `d p^N`, the number of summands at level `N`.
    pub fn points(&self, level: u32) -> Result<u64> {
        let mut n = self.stride;
        for _ in 0..level {
            n = n
                .checked_mul(self.p)
                .filter(|n| *n <= MAX_SUMMANDS)
                .ok_or_else(|| Error::OutOfRange(format!("level {level} needs more than {MAX_SUMMANDS} summands")))?;
        }
        Ok(n)
    }

    fn step(&self) -> PadicInt {
        match self.kind {
            MeasureKind::MuMinus1 => PadicInt::from_residue(self.p, self.prec, pow_u64(self.p, self.prec) - 1),
            MeasureKind::MuMinusQ(q) => -q,
        }
    }

    /// `⌈D⌉_{-q} = (1 + q^D)/(1 + q)` for odd `D`; 1 for `μ_{-1}`.
    fn normalizer(&self, points: u64) -> Result<PadicInt> {
        match self.kind {
            MeasureKind::MuMinus1 => PadicInt::one(self.p, self.prec),
            MeasureKind::MuMinusQ(q) => {
                let one = PadicInt::one(self.p, self.prec)?;
                let value = (one + q.pow(points)) * (one + q).inverse()?;
                if !value.is_unit() {
                    return Err(Error::NotAUnit("level normaliser ⌈d p^N⌉_{-q}".into()));
                }
                Ok(value)
            }
        }
    }
}

/// One summand `coeff · ζ^twist` of a level sum, `ζ` the distinguished
/// primitive `p^r`-th root of unity of the output ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistedTerm {
    pub coeff: PadicInt,
    pub twist: u64,
}

impl TwistedTerm {
    pub fn plain(coeff: PadicInt) -> Self {
        TwistedTerm { coeff, twist: 0 }
    }
}

/// Running `Σ_{x < end} f(x) (-q)^x`, bucketed by the twist exponent.
struct PrefixSum {
    measure: FermionicMeasure,
    r: u32,
    order: u64,
    modulus: u64,
    buckets: Vec<u64>,
    weight: PadicInt,
    step: PadicInt,
    next: u64,
}

impl PrefixSum {
    fn new(measure: FermionicMeasure, r: u32) -> Result<Self> {
        let modulus = modulus_for(measure.p, measure.prec)?;
        let order = pow_u64(measure.p, r);
        Ok(PrefixSum {
            measure,
            r,
            order,
            modulus,
            buckets: vec![0; order as usize],
            weight: PadicInt::one(measure.p, measure.prec)?,
            step: measure.step(),
            next: 0,
        })
    }

    fn extend<F: FnMut(u64) -> TwistedTerm>(&mut self, end: u64, f: &mut F) {
        while self.next < end {
            let term = f(self.next);
            let c = term.coeff.residue() % self.modulus;
            let slot = (term.twist % self.order) as usize;
            self.buckets[slot] =
                add_mod(self.buckets[slot], mul_mod(c, self.weight.residue(), self.modulus), self.modulus);
            self.weight = self.weight * self.step;
            self.next += 1;
        }
    }

    fn value(&self) -> Result<CycloPadic> {
        let raw = CycloPadic::from_power_residues(self.measure.p, self.measure.prec, self.r, self.buckets.clone());
        let norm = self.measure.normalizer(self.next)?;
        Ok(raw.scale(norm.inverse()?))
    }
}

/// The level-`N` Riemann sum `(1/⌈d p^N⌉_{-q}) Σ_{x < d p^N} f(x) (-q)^x`,
/// valued in `Z_p[ζ_{p^r}]`. `f` is called once per point, in increasing
/// order starting from 0.
pub fn level_sum<F: FnMut(u64) -> TwistedTerm>(
    mut f: F,
    measure: &FermionicMeasure,
    r: u32,
    level: u32,
) -> Result<CycloPadic> {
    let points = measure.points(level)?;
    let mut prefix = PrefixSum::new(*measure, r)?;
    prefix.extend(points, &mut f);
    prefix.value()
}

/// Outcome of a stabilised integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Integral {
    pub value: CycloPadic,
    /// The level whose sum agreed with the previous level.
    pub level: u32,
}

/// Level sums for `N = 1, 2, ...` until two consecutive levels agree to
/// valuation `target`. `f` is called once per point, in increasing order.
pub fn fermionic_integral<F: FnMut(u64) -> TwistedTerm>(
    mut f: F,
    measure: &FermionicMeasure,
    r: u32,
    target: u32,
    level_cap: u32,
) -> Result<Integral> {
    if target > measure.prec {
        return Err(Error::OutOfRange(format!(
            "target valuation {target} exceeds the working precision {}",
            measure.prec
        )));
    }
    let mut prefix = PrefixSum::new(*measure, r)?;
    let mut previous: Option<CycloPadic> = None;
    for level in 1..=level_cap {
        let points = match measure.points(level) {
            Ok(n) => n,
            Err(_) => return Err(Error::NonConvergence { target, level: level - 1 }),
        };
        prefix.extend(points, &mut f);
        let current = prefix.value()?;
        if let Some(prev) = previous {
            if (current.clone() - prev).valuation() >= target {
                return Ok(Integral { value: current, level });
            }
        }
        previous = Some(current);
    }
    Err(Error::NonConvergence { target, level: level_cap })
}

fn require_minus_one(measure: &FermionicMeasure) -> Result<()> {
    match measure.kind {
        MeasureKind::MuMinus1 => Ok(()),
        MeasureKind::MuMinusQ(_) => Err(Error::Domain("the shift identity is stated for μ_{-1}".into())),
    }
}

fn plain_sum<F: Fn(u64) -> PadicInt>(f: F, measure: &FermionicMeasure, level: u32) -> Result<PadicInt> {
    let s = level_sum(|x| TwistedTerm::plain(f(x)), measure, 0, level)?;
    Ok(s.coeff(0))
}

/// `S_N(f_n) - [(-1)^n S_N(f) + 2 Σ_{l<n} (-1)^{n-1-l} f(l)]` under `μ_{-1}`,
/// where `f_n(x) = f(x + n)`. In the limit this vanishes; at finite level it
/// equals [`shift_boundary`] exactly.
pub fn shift_defect<F: Fn(u64) -> PadicInt>(f: F, measure: &FermionicMeasure, n: u64, level: u32) -> Result<PadicInt> {
    require_minus_one(measure)?;
    if n == 0 {
        return Err(Error::OutOfRange("shift must be at least 1".into()));
    }
    let shifted = plain_sum(|x| f(x + n), measure, level)?;
    let base = plain_sum(&f, measure, level)?;
    let mut rhs = if n.is_multiple_of(2) { base } else { -base };
    for l in 0..n {
        let term = f(l) + f(l);
        rhs = if (n - 1 - l).is_multiple_of(2) { rhs + term } else { rhs - term };
    }
    Ok(shifted - rhs)
}

/// The finite-level boundary `Σ_{i<n} (-1)^{n-1-i} [f(D + i) - f(i)]` with
/// `D = d p^N`.
pub fn shift_boundary<F: Fn(u64) -> PadicInt>(
    f: F,
    measure: &FermionicMeasure,
    n: u64,
    level: u32,
) -> Result<PadicInt> {
    require_minus_one(measure)?;
    let d = measure.points(level)?;
    let mut acc = PadicInt::zero(measure.p, measure.prec)?;
    for i in 0..n {
        let term = f(d + i) - f(i);
        acc = if (n - 1 - i).is_multiple_of(2) { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Shared settings for the moment integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadicSettings {
    pub prime: u64,
    pub precision: u32,
    /// Output ring is `Z_p[ζ_{p^r}]`.
    pub twist_exponent: u32,
    pub target_valuation: u32,
    pub level_cap: u32,
}

impl PadicSettings {
    pub fn new(prime: u64, precision: u32, twist_exponent: u32, target_valuation: u32) -> Self {
        PadicSettings { prime, precision, twist_exponent, target_valuation, level_cap: DEFAULT_LEVEL_CAP }
    }

    /// Exponent `e` with `w = ζ^e` in the output ring.
    fn twist_index(&self, w: RootOfUnity) -> Result<u64> {
        let order = pow_u64(self.prime, self.twist_exponent);
        let (m, k) = w.reduced();
        if !order.is_multiple_of(m) {
            return Err(Error::Embedding(format!(
                "twist {w} has order {m}, which does not divide {}^{}",
                self.prime, self.twist_exponent
            )));
        }
        Ok(k * (order / m))
    }
}

/// `∫_X x^n w^x χ(x) dμ_{-1}(x)` over `X = X_f`, `f` the modulus of `χ`.
/// Only characters with values in `{0, ±1}` are supported here.
pub fn twisted_moment(n: u32, w: RootOfUnity, chi: &DirichletCharacter, settings: &PadicSettings) -> Result<Integral> {
    if !chi.is_real() {
        return Err(Error::UnsupportedCharacter(format!(
            "{chi} takes values outside {{0, ±1}}; p-adic moments support real characters only"
        )));
    }
    let p = settings.prime;
    let prec = settings.precision;
    let measure = FermionicMeasure::minus_one(p, prec, chi.modulus())?;
    let e_w = settings.twist_index(w)?;
    let modulus = modulus_for(p, prec)?;
    let signs: Vec<i64> = (0..chi.modulus()).map(|a| chi.real_value(a as i64)).collect();
    let f = chi.modulus();
    let order = pow_u64(p, settings.twist_exponent);
    let integrand = |x: u64| {
        let sign = signs[(x % f) as usize];
        let base = PadicInt::from_residue(p, prec, x % modulus).pow(n as u64);
        let coeff = match sign {
            1 => base,
            -1 => -base,
            _ => PadicInt::from_residue(p, prec, 0),
        };
        TwistedTerm { coeff, twist: (e_w * (x % order)) % order }
    };
    fermionic_integral(integrand, &measure, settings.twist_exponent, settings.target_valuation, settings.level_cap)
}

/// `∫_{Z_p} q^{(h-1)y} w^y ⌈x + y⌉_q^n dμ_{-q}(y)`.
pub fn twisted_q_moment(
    n: u32,
    x: u64,
    h: i64,
    q: PadicInt,
    w: RootOfUnity,
    settings: &PadicSettings,
) -> Result<Integral> {
    if q.prime() != settings.prime || q.precision() != settings.precision {
        return Err(Error::Domain("q must live in the configured Z/p^M".into()));
    }
    let measure = FermionicMeasure::minus_q(q, 1)?;
    let e_w = settings.twist_index(w)?;
    let order = pow_u64(settings.prime, settings.twist_exponent);
    let h_factor = q.pow_i64(h - 1)?;
    let mut h_power = PadicInt::one(settings.prime, settings.precision)?;
    // ⌈x⌉_q and q^x, advanced one step per point
    let mut q_power = q.pow(x);
    let mut bracket = PadicInt::zero(settings.prime, settings.precision)?;
    let mut qi = PadicInt::one(settings.prime, settings.precision)?;
    for _ in 0..x {
        bracket = bracket + qi;
        qi = qi * q;
    }
    let integrand = move |y: u64| {
        let term = TwistedTerm { coeff: h_power * bracket.pow(n as u64), twist: (e_w * (y % order)) % order };
        h_power = h_power * h_factor;
        bracket = bracket + q_power;
        q_power = q_power * q;
        term
    };
    fermionic_integral(integrand, &measure, settings.twist_exponent, settings.target_valuation, settings.level_cap)
}

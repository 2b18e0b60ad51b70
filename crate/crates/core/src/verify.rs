//! Built-in self-checks run by `qeuler verify`.
//!
//! Each check evaluates one identity over a grid and reports the largest
//! deviation seen. Complex deviations are relative with a unit floor;
//! p-adic checks are exact and report 0 or 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::characters::{enumerate_characters, DirichletCharacter};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::euler::{
    classical_twisted_euler_table, distribution_check, generalized_twisted_q_euler, generalized_twisted_q_euler_series,
    twisted_q_euler_exact, twisted_q_euler_poly, twisted_q_euler_series, DistributionReading, EulerParams,
};
use crate::lfunctions::{
    hurwitz_zeta, hurwitz_zeta_raw, interpolate_at_negatives, l_function_decomposed, l_function_direct, zeta,
    ZetaParams,
};
use crate::padic::{
    level_sum, shift_boundary, shift_defect, twisted_moment, twisted_q_moment, CycloPadic, FermionicMeasure, PadicInt,
    PadicSettings, TwistedTerm,
};
use crate::qcore::{q_number, q_number_int, Exponent, QParam, RootOfUnity, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Qcore,
    Characters,
    Padic,
    Euler,
    Lfunctions,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qcore" => Ok(Suite::Qcore),
            "characters" => Ok(Suite::Characters),
            "padic" => Ok(Suite::Padic),
            "euler" => Ok(Suite::Euler),
            "lfunctions" => Ok(Suite::Lfunctions),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Grid::Small),
            "full" => Ok(Grid::Full),
            other => Err(Error::Parse(format!("unknown grid '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub max_error: f64,
    pub threshold: f64,
    pub cases: usize,
    pub detail: String,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}/{}: max error {:.3e} (threshold {:.1e}) over {} cases",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.max_error,
            self.threshold,
            self.cases
        )?;
        if !self.detail.is_empty() {
            write!(f, "; {}", self.detail)?;
        }
        Ok(())
    }
}

/// Running maximum of an error measure.
struct Tracker {
    suite: &'static str,
    name: &'static str,
    threshold: f64,
    max_error: f64,
    cases: usize,
    failure: Option<String>,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, threshold: f64) -> Self {
        Tracker { suite, name, threshold, max_error: 0.0, cases: 0, failure: None }
    }

    fn record(&mut self, err: f64, context: impl FnOnce() -> String) {
        self.cases += 1;
        let err = if err.is_nan() { f64::INFINITY } else { err };
        if err > self.max_error {
            self.max_error = err;
        }
        if err > self.threshold && self.failure.is_none() {
            self.failure = Some(context());
        }
    }

    fn close(&mut self, c: Complex64, reference: Complex64, context: impl FnOnce() -> String) {
        self.record(rel(c, reference), context);
    }

    fn exact(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { 1.0 }, context);
    }

    fn error(&mut self, e: Error, context: impl FnOnce() -> String) {
        self.cases += 1;
        self.max_error = f64::INFINITY;
        if self.failure.is_none() {
            self.failure = Some(format!("{}: {e}", context()));
        }
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            suite: self.suite,
            name: self.name,
            passed: self.failure.is_none() && self.cases > 0,
            max_error: self.max_error,
            threshold: self.threshold,
            cases: self.cases,
            detail: self.failure.unwrap_or_default(),
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn roots(max_order: u64) -> Vec<RootOfUnity> {
    let mut out = Vec::new();
    for m in 1..=max_order {
        for k in 0..m {
            let w = RootOfUnity::new(m, k).expect("index below order");
            if w.exact_order() == m {
                out.push(w);
            }
        }
    }
    out
}

fn qcore_checks(grid: Grid) -> Vec<CheckReport> {
    let xs: i64 = if grid == Grid::Small { 12 } else { 40 };
    let qs = [c(0.5), Complex64::new(0.3, 0.4), c(-0.7)];

    let mut sum = Tracker::new("qcore", "q_number equals the geometric sum", 1e-13);
    let mut cocycle = Tracker::new("qcore", "cocycle identity", 1e-13);
    for q in qs {
        for x in 0..xs {
            let direct: Complex64 = (0..x).map(|i| q.powi(i as i32)).sum();
            match q_number_int(x, &q) {
                Ok(v) => sum.close(v, direct, || format!("q = {q}, x = {x}")),
                Err(e) => sum.error(e, || format!("q = {q}, x = {x}")),
            }
            for y in 0..xs / 2 {
                let lhs = q_number_int(x + y, &q).unwrap_or(c(f64::NAN));
                let rhs = q_number_int(x, &q).unwrap_or(c(f64::NAN))
                    + q.powi(x as i32) * q_number_int(y, &q).unwrap_or(c(f64::NAN));
                cocycle.close(lhs, rhs, || format!("q = {q}, x = {x}, y = {y}"));
            }
        }
    }
    // p-adic: exact
    for (p, r) in [(3u64, 1u32), (5, 0)] {
        let q = CycloPadic::from_coeffs(p, 8, r, &[1 + p as i64, 2]).expect("valid ring");
        for x in 0..xs {
            let mut direct = q.zero_like();
            let mut power = q.one_like();
            for _ in 0..x {
                direct = direct + power.clone();
                power = power * q.clone();
            }
            let ok = q_number_int(x, &q).map(|v| v == direct).unwrap_or(false);
            sum.exact(ok, || format!("p-adic q, p = {p}, x = {x}"));
        }
    }

    let mut limit = Tracker::new("qcore", "q -> 1 bound |⌈x⌉ - x| <= eps x^2", 1.0);
    let eps = 1e-8;
    let qp = QParam::new(c(1.0 - eps)).expect("valid q");
    for x in 1..=100i64 {
        let v = q_number(&Exponent::Int(x), &qp).unwrap_or(c(f64::NAN));
        limit.record((v.re - x as f64).abs() / (eps * (x * x) as f64), || format!("x = {x}"));
    }

    let mut embed = Tracker::new("qcore", "roots of unity embed with w^m = 1", 1e-12);
    for w in roots(12) {
        let z = w.to_complex();
        embed.close(z.powu(w.order() as u32), c(1.0), || format!("w = {w}"));
        let inv = RootOfUnity::new(w.order(), (w.order() - w.index()) % w.order()).expect("valid");
        embed.close(z * inv.to_complex(), c(1.0), || format!("w = {w}"));
    }
    vec![sum.finish(), cocycle.finish(), limit.finish(), embed.finish()]
}

fn characters_checks(grid: Grid) -> Vec<CheckReport> {
    let fmax = if grid == Grid::Small { 21 } else { 45 };
    let mut orth = Tracker::new("characters", "orthogonality", 1e-12);
    let mut mult = Tracker::new("characters", "complete multiplicativity", 0.0);
    for f in (1..=fmax).step_by(2) {
        let chars = match enumerate_characters(f) {
            Ok(cs) => cs,
            Err(e) => {
                orth.error(e, || format!("f = {f}"));
                continue;
            }
        };
        let phi = (1..=f).filter(|a| num_integer::Integer::gcd(a, &f) == 1).count() as f64;
        for chi in &chars {
            let s: Complex64 = (0..f as i64).map(|a| chi.value(a).map_or(c(0.0), |w| w.to_complex())).sum();
            let expected = if chi.is_trivial() { phi } else { 0.0 };
            orth.record((s - expected).norm(), || format!("chi = {chi}"));
            for a in 0..f as i64 {
                for b in 0..f as i64 {
                    let lhs = chi.value(a * b);
                    let rhs = match (chi.value(a), chi.value(b)) {
                        (Some(x), Some(y)) => Some(x.mul(&y)),
                        _ => None,
                    };
                    mult.exact(lhs == rhs, || format!("chi = {chi}, a = {a}, b = {b}"));
                }
            }
        }
    }
    vec![orth.finish(), mult.finish()]
}

fn classical_euler_rationals(n_max: u32) -> Vec<BigRational> {
    classical_twisted_euler_table(n_max, &DirichletCharacter::trivial(), RootOfUnity::one())
        .expect("trivial twist is regular")
        .into_iter()
        .map(|e| e.as_rational().expect("untwisted values are rational"))
        .collect()
}

fn padic_checks(grid: Grid, cfg: &EvalConfig) -> Vec<CheckReport> {
    let levels: u32 = if grid == Grid::Small { 3 } else { 5 };
    let mut shift = Tracker::new("padic", "finite-level shift identity", 0.0);
    for p in [3u64, 5, 7] {
        for d in [1u64, 11] {
            let measure = FermionicMeasure::minus_one(p, 10, d).expect("valid measure");
            let poly = |x: u64| {
                let x = PadicInt::new(p, 10, x as i64).expect("valid");
                x * x * x + PadicInt::new(p, 10, 7).expect("valid") * x + PadicInt::new(p, 10, -3).expect("valid")
            };
            for level in 1..=levels {
                for n in 1..=3u64 {
                    let ok = match (shift_defect(poly, &measure, n, level), shift_boundary(poly, &measure, n, level)) {
                        (Ok(a), Ok(b)) => a == b,
                        _ => false,
                    };
                    shift.exact(ok, || format!("p = {p}, d = {d}, N = {level}, n = {n}"));
                }
                let s1 = level_sum(|x| TwistedTerm::plain(poly(x + 1)), &measure, 0, level).map(|v| v.coeff(0));
                let s0 = level_sum(|x| TwistedTerm::plain(poly(x)), &measure, 0, level).map(|v| v.coeff(0));
                let big_d = measure.points(level).unwrap_or(0);
                let ok = matches!((s1, s0), (Ok(a), Ok(b)) if a + b == poly(0) + poly(big_d));
                shift.exact(ok, || format!("p = {p}, d = {d}, N = {level}, n = 1 boundary form"));
            }
        }
    }

    let n_max: u32 = if grid == Grid::Small { 4 } else { 6 };
    let euler = classical_euler_rationals(n_max);
    let mut moments = Tracker::new("padic", "moments of μ_-1 equal Euler numbers", 0.0);
    for p in [3u64, 5] {
        let settings = PadicSettings::new(p, 8, 0, 6);
        for n in 0..=n_max {
            let ok = match twisted_moment(n, RootOfUnity::one(), &DirichletCharacter::trivial(), &settings) {
                Ok(int) => PadicInt::from_ratio(p, 6, &euler[n as usize])
                    .map(|e| int.value.coeff(0).reduce_to(6) == e)
                    .unwrap_or(false),
                Err(_) => false,
            };
            moments.exact(ok, || format!("p = {p}, n = {n}"));
        }
    }

    let mut closed = Tracker::new("padic", "q-moments equal the closed form", 0.0);
    let target = cfg.padic_target.min(6);
    for p in [3u64, 5] {
        let prec = target + n_max;
        let settings = PadicSettings { level_cap: cfg.padic_level_cap, ..PadicSettings::new(p, prec, 1, target) };
        let q_int = PadicInt::new(p, prec, 1 + p as i64).expect("valid");
        let q = QParam::new(CycloPadic::from_padic_int(q_int, 1)).expect("q = 1 + p is near 1");
        let ecfg = EvalConfig { padic_target: target, ..cfg.clone() };
        for w in [RootOfUnity::one(), RootOfUnity::new(p, 1).expect("valid")] {
            for (n, h, x) in [(1u32, 1i64, 0u64), (2, 2, 1), (n_max.min(3), 1, 2)] {
                let moment = twisted_q_moment(n, x, h, q_int, w, &settings);
                let form = twisted_q_euler_poly(
                    &EulerParams { n, x: Exponent::Int(x as i64), h: Exponent::Int(h), q: q.clone(), w },
                    &ecfg,
                );
                let ok = match (moment, form) {
                    (Ok(m), Ok(f)) => (m.value - f).valuation() >= target,
                    _ => false,
                };
                closed.exact(ok, || format!("p = {p}, w = {w}, n = {n}, h = {h}, x = {x}"));
            }
        }
    }
    vec![shift.finish(), moments.finish(), closed.finish()]
}

fn euler_grid(grid: Grid) -> (Vec<u32>, Vec<i64>, Vec<f64>, Vec<RootOfUnity>, Vec<Exponent>) {
    let xs = vec![
        Exponent::Int(0),
        Exponent::Rational(num_rational::Ratio::new(1, 3)),
        Exponent::Rational(num_rational::Ratio::new(1, 2)),
    ];
    match grid {
        Grid::Small => (vec![0, 1, 3, 5], vec![0, 1, 2], vec![0.5], roots(4), xs),
        Grid::Full => ((0..=8).collect(), vec![0, 1, 2, 3], vec![0.3, 0.5, 0.8], roots(4), xs),
    }
}

fn euler_checks(grid: Grid, cfg: &EvalConfig) -> Vec<CheckReport> {
    let (ns, hs, qs, ws, xs) = euler_grid(grid);
    let mut equiv = Tracker::new("euler", "closed form equals series", 1e-10);
    let mut dist = Tracker::new("euler", "distribution identity (base twist w^d)", 1e-10);
    let mut skipped = 0;
    for &q in &qs {
        let qp = QParam::new(c(q)).expect("valid q");
        for &h in &hs {
            for &w in &ws {
                for &x in &xs {
                    for &n in &ns {
                        let p = EulerParams { n, x, h: Exponent::Int(h), q: qp.clone(), w };
                        let ctx = || format!("n = {n}, x = {x}, h = {h}, q = {q}, w = {w}");
                        match (twisted_q_euler_poly(&p, cfg), twisted_q_euler_series(&p, cfg)) {
                            (Ok(a), Ok(b)) => equiv.close(a, b.value, ctx),
                            (Err(Error::Pole { .. }), Err(Error::Pole { .. })) => {
                                skipped += 1;
                                continue;
                            }
                            (Err(e), _) | (_, Err(e)) => {
                                equiv.error(e, ctx);
                                continue;
                            }
                        }
                        for d in [1u64, 3, 5] {
                            match distribution_check(&p, d, DistributionReading::TwistedBase, cfg) {
                                Ok((l, r)) => dist.close(l, r, || format!("d = {d}, {}", ctx())),
                                Err(e) => dist.error(e, || format!("d = {d}, {}", ctx())),
                            }
                        }
                    }
                }
            }
        }
    }
    let mut equiv = equiv.finish();
    if skipped > 0 {
        equiv.detail =
            format!("{skipped} pole points skipped{}{}", if equiv.detail.is_empty() { "" } else { "; " }, equiv.detail);
    }

    let mut limit = Tracker::new("euler", "q -> 1 limit of E_n(0)", 1e-4);
    let euler = classical_euler_rationals(6);
    let q = BigRational::new(BigInt::from(999_999), BigInt::from(1_000_000));
    for n in 0..=6u32 {
        match twisted_q_euler_exact(n, 0, 1, &q, RootOfUnity::one(), cfg.pole_tol) {
            Ok(v) => {
                let v = v.as_rational().map(|r| num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN));
                let e = num_traits::ToPrimitive::to_f64(&euler[n as usize]).unwrap_or(f64::NAN);
                limit.record((v.unwrap_or(f64::NAN) - e).abs(), || format!("n = {n}"));
            }
            Err(err) => limit.error(err, || format!("n = {n}")),
        }
    }

    let mut general = Tracker::new("euler", "generalized finite sum equals series", 1e-10);
    let qp = QParam::new(c(0.5)).expect("valid q");
    let fs: &[u64] = if grid == Grid::Small { &[3] } else { &[3, 5, 7] };
    for &f in fs {
        for chi in enumerate_characters(f).unwrap_or_default() {
            for w in roots(4) {
                for n in 0..=5 {
                    let ctx = || format!("chi = {chi}, w = {w}, n = {n}");
                    match (
                        generalized_twisted_q_euler(n, &chi, Exponent::Int(1), &qp, w, cfg),
                        generalized_twisted_q_euler_series(n, &chi, c(1.0), &qp, w, cfg),
                    ) {
                        (Ok(a), Ok(b)) => general.close(a, b.value, ctx),
                        (Err(e), _) | (_, Err(e)) => general.error(e, ctx),
                    }
                }
            }
        }
    }
    vec![equiv, dist.finish(), limit.finish(), general.finish()]
}

fn lfunction_checks(grid: Grid, cfg: &EvalConfig) -> Vec<CheckReport> {
    let mut interp = Tracker::new("lfunctions", "zeta(-n, x) equals E_n(x)", 1e-9);
    for h in [1.0, 2.0] {
        for w in roots(4) {
            for x in [1.0 / 3.0, 1.0] {
                let p = match ZetaParams::new(c(0.0), c(h), 0.5, w) {
                    Ok(p) => p.with_x(x),
                    Err(e) => {
                        interp.error(e, || format!("h = {h}, w = {w}"));
                        continue;
                    }
                };
                match interpolate_at_negatives(8, &p, cfg) {
                    Ok(rows) => {
                        for row in rows {
                            interp.close(row.zeta, row.euler, || format!("n = {}, h = {h}, w = {w}, x = {x}", row.n));
                        }
                    }
                    Err(e) => interp.error(e, || format!("h = {h}, w = {w}, x = {x}")),
                }
            }
        }
    }

    let mut dual = Tracker::new("lfunctions", "direct and decomposed l agree", 1e-9);
    let fs: &[u64] = if grid == Grid::Small { &[3] } else { &[3, 5] };
    let ss = [Complex64::new(2.0, 1.0), Complex64::new(-1.5, 0.5), Complex64::new(0.5, -3.0)];
    for &f in fs {
        for chi in enumerate_characters(f).unwrap_or_default() {
            for s in ss {
                let p = ZetaParams::new(s, c(1.0), 0.5, RootOfUnity::new(4, 1).expect("valid"))
                    .expect("valid params")
                    .with_chi(chi.clone());
                let ctx = || format!("chi = {chi}, s = {s}");
                match (l_function_direct(&p, cfg), l_function_decomposed(&p, cfg)) {
                    (Ok(a), Ok(b)) => dual.close(a.value, b.value, ctx),
                    (Err(e), _) | (_, Err(e)) => dual.error(e, ctx),
                }
            }
        }
    }

    let mut raw = Tracker::new("lfunctions", "regularized equals raw series", 1e-10);
    let count = if grid == Grid::Small { 6 } else { 30 };
    for i in 0..count {
        let s = Complex64::new(-1.2 - 0.1 * i as f64, 0.3 * (i % 5) as f64 - 0.6);
        let p = ZetaParams::new(s, c(1.0), 0.6, RootOfUnity::new(3, 1).expect("valid")).expect("valid").with_x(0.75);
        match (hurwitz_zeta(&p, cfg), hurwitz_zeta_raw(&p, cfg)) {
            (Ok(a), Ok(b)) => raw.close(a.value, b.value, || format!("s = {s}")),
            (Err(e), _) | (_, Err(e)) => raw.error(e, || format!("s = {s}")),
        }
    }

    let mut conj = Tracker::new("lfunctions", "conjugation symmetry", 1e-10);
    for w in roots(5) {
        let s = Complex64::new(0.4, 2.1);
        let wbar = RootOfUnity::new(w.order(), (w.order() - w.index()) % w.order()).expect("valid");
        let a = ZetaParams::new(s, c(1.0), 0.45, w).expect("valid").with_x(0.3);
        let b = ZetaParams::new(s.conj(), c(1.0), 0.45, wbar).expect("valid").with_x(0.3);
        match (hurwitz_zeta(&a, cfg), hurwitz_zeta(&b, cfg)) {
            (Ok(za), Ok(zb)) => conj.close(za.value, zb.value.conj(), || format!("w = {w}")),
            (Err(e), _) | (_, Err(e)) => conj.error(e, || format!("w = {w}")),
        }
    }

    let mut poles = Tracker::new("lfunctions", "poles are reported, not evaluated", 0.0);
    for h in [0.0, 1e-10] {
        let p = ZetaParams::new(c(1.5), c(h), 0.5, RootOfUnity::new(2, 1).expect("valid")).expect("valid");
        poles.exact(matches!(zeta(&p, cfg), Err(Error::Pole { .. })), || format!("zeta, h = {h}"));
        let p = p.with_x(0.5);
        poles.exact(matches!(hurwitz_zeta(&p, cfg), Err(Error::Pole { .. })), || format!("hurwitz, h = {h}"));
    }
    vec![interp.finish(), dual.finish(), raw.finish(), conj.finish(), poles.finish()]
}

/// Run `suite` on `grid`.
pub fn run(suite: Suite, grid: Grid, cfg: &EvalConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Qcore | Suite::All) {
        out.extend(qcore_checks(grid));
    }
    if matches!(suite, Suite::Characters | Suite::All) {
        out.extend(characters_checks(grid));
    }
    if matches!(suite, Suite::Padic | Suite::All) {
        out.extend(padic_checks(grid, cfg));
    }
    if matches!(suite, Suite::Euler | Suite::All) {
        out.extend(euler_checks(grid, cfg));
    }
    if matches!(suite, Suite::Lfunctions | Suite::All) {
        out.extend(lfunction_checks(grid, cfg));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let cfg = EvalConfig::default();
        for suite in [Suite::Qcore, Suite::Characters, Suite::Padic, Suite::Euler, Suite::Lfunctions] {
            for report in run(suite, Grid::Small, &cfg) {
                assert!(report.passed, "{report}");
            }
        }
    }
}

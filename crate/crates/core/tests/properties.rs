//! Property tests for the algebraic invariants of each module.

use num_complex::Complex64;
use proptest::prelude::*;

use qeuler::characters::{enumerate_characters, DirichletCharacter};
use qeuler::euler::{twisted_q_euler_poly, twisted_q_euler_series, EulerParams};
use qeuler::lfunctions::{hurwitz_zeta, l_function_direct, zeta, ZetaParams};
use qeuler::padic::{
    level_sum, twisted_moment, twisted_q_moment, CycloPadic, FermionicMeasure, PadicInt, PadicSettings, TwistedTerm,
};
use qeuler::qcore::{q_number_int, two_q};
use qeuler::{EvalConfig, Exponent, QParam, RootOfUnity, Scalar};

fn complex_q() -> impl Strategy<Value = Complex64> {
    (0.05f64..0.95, -3.1f64..3.1).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn padic_q() -> impl Strategy<Value = (u64, CycloPadic)> {
    (prop::sample::select(vec![3u64, 5, 7]), 0i64..200, 0u32..=1).prop_map(|(p, k, r)| {
        let q = PadicInt::new(p, 10, 1 + p as i64 * k).unwrap();
        (p, CycloPadic::from_padic_int(q, r))
    })
}

fn explicit_sum<S: Scalar>(x: i64, q: &S) -> S {
    let mut acc = q.zero_like();
    let mut power = q.one_like();
    for _ in 0..x {
        acc = acc + power.clone();
        power = power * q.clone();
    }
    acc
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Odd moduli up to 45; characters are only defined for odd conductors.
fn odd_modulus() -> impl Strategy<Value = u64> {
    (0u64..=22).prop_map(|k| 2 * k + 1)
}

fn root() -> impl Strategy<Value = RootOfUnity> {
    (1u64..=12).prop_flat_map(|m| (Just(m), 0..m)).prop_map(|(m, k)| RootOfUnity::new(m, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_number_is_the_geometric_sum(q in complex_q(), x in 0i64..80) {
        let got = q_number_int(x, &q).unwrap();
        prop_assert!(rel(got, explicit_sum(x, &q)) <= 1e-13 || (got - explicit_sum(x, &q)).norm() <= 1e-13);
    }

    #[test]
    fn q_number_is_the_geometric_sum_padically((_, q) in padic_q(), x in 0i64..80) {
        prop_assert_eq!(q_number_int(x, &q).unwrap(), explicit_sum(x, &q));
    }

    #[test]
    fn cocycle_identity(q in complex_q(), x in 0i64..50, y in 0i64..50) {
        let lhs = q_number_int(x + y, &q).unwrap();
        let rhs = q_number_int(x, &q).unwrap() + q.pow_i64(x).unwrap() * q_number_int(y, &q).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm().max(1.0));
    }

    #[test]
    fn cocycle_identity_padically((_, q) in padic_q(), x in 0i64..50, y in 0i64..50) {
        let lhs = q_number_int(x + y, &q).unwrap();
        let rhs = q_number_int(x, &q).unwrap() + q.pow_i64(x).unwrap() * q_number_int(y, &q).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_numbers_tend_to_integers(x in 0i64..=100) {
        let eps = 1e-8;
        let q = Complex64::new(1.0 - eps, 0.0);
        let got = q_number_int(x, &q).unwrap();
        prop_assert!((got.re - x as f64).abs() <= eps * (x * x) as f64);
    }

    #[test]
    fn roots_of_unity_embed(w in root()) {
        let z = w.to_complex();
        let m = w.order();
        prop_assert!((z.powu(m as u32) - 1.0).norm() < 1e-12);
        let other = RootOfUnity::new(m, (m - w.index()) % m).unwrap().to_complex();
        prop_assert!((z * other - 1.0).norm() < 1e-12);
    }

    #[test]
    fn roots_of_unity_embed_padically(p in prop::sample::select(vec![3u64, 5, 7]), r in 1u32..=2, k in 0u64..49) {
        let m = p.pow(r);
        let like = CycloPadic::one(p, 8, r).unwrap();
        let w = RootOfUnity::new(m, k % m).unwrap();
        let z = like.root_of_unity_like(w).unwrap();
        prop_assert_eq!(z.pow_i64(m as i64).unwrap(), like.clone());
        let inv = like.root_of_unity_like(RootOfUnity::new(m, (m - k % m) % m).unwrap()).unwrap();
        prop_assert_eq!(z * inv, like);
    }

    #[test]
    fn characters_are_completely_multiplicative(f in odd_modulus(), pick in 0usize..1000) {
        let chars = enumerate_characters(f).unwrap();
        let chi = &chars[pick % chars.len()];
        for a in 0..f as i64 {
            for b in 0..f as i64 {
                let lhs = chi.value(a * b);
                let rhs = match (chi.value(a), chi.value(b)) {
                    (Some(x), Some(y)) => Some(x.mul(&y)),
                    _ => None,
                };
                prop_assert_eq!(lhs, rhs, "chi = {}, a = {}, b = {}", chi, a, b);
            }
        }
    }

    #[test]
    fn character_sums_vanish_unless_trivial(f in odd_modulus(), pick in 0usize..1000) {
        let chars = enumerate_characters(f).unwrap();
        let chi = &chars[pick % chars.len()];
        let one = Complex64::new(1.0, 0.0);
        let sum: Complex64 = (0..f as i64).map(|a| chi.evaluate(a, &one).unwrap()).sum();
        let units = (0..f).filter(|&a| num_integer::gcd(a, f) == 1).count() as f64;
        let expected = if chi.is_trivial() { units } else { 0.0 };
        prop_assert!((sum - expected).norm() < 1e-12, "{} sums to {}", chi, sum);
    }

    #[test]
    fn character_text_round_trips(f in odd_modulus(), pick in 0usize..1000) {
        let chars = enumerate_characters(f).unwrap();
        let chi = &chars[pick % chars.len()];
        let back: DirichletCharacter = chi.to_string().parse().unwrap();
        prop_assert_eq!(&back, chi);
    }

    #[test]
    fn cyclo_padic_ring_laws(
        p in prop::sample::select(vec![3u64, 5]),
        r in 0u32..=2,
        a in prop::collection::vec(-1000i64..1000, 1..20),
        b in prop::collection::vec(-1000i64..1000, 1..20),
        c in prop::collection::vec(-1000i64..1000, 1..20),
    ) {
        let prec = 8;
        let a = CycloPadic::from_coeffs(p, prec, r, &a).unwrap();
        let b = CycloPadic::from_coeffs(p, prec, r, &b).unwrap();
        let c = CycloPadic::from_coeffs(p, prec, r, &c).unwrap();
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        let order = p.pow(r);
        prop_assert_eq!(a.clone() * CycloPadic::zeta_pow(p, prec, r, order).unwrap(), a.clone());
        // Φ_{p^r}(ζ) = Σ_{i<p} ζ^{i p^{r-1}}
        if r > 0 {
            let step = p.pow(r - 1);
            let phi = (0..p).fold(CycloPadic::zero(p, prec, r).unwrap(), |acc, i| {
                acc + CycloPadic::zeta_pow(p, prec, r, i * step).unwrap()
            });
            prop_assert!(phi.is_zero());
        }
    }

    #[test]
    fn shift_identity_is_exact(
        p in prop::sample::select(vec![3u64, 5, 7]),
        level in 1u32..=4,
        coeffs in prop::collection::vec(-50i64..50, 1..=8),
    ) {
        let prec = 12;
        let measure = FermionicMeasure::minus_one(p, prec, 1).unwrap();
        let f = |x: u64| {
            let xp = PadicInt::new(p, prec, x as i64).unwrap();
            coeffs.iter().rev().fold(PadicInt::zero(p, prec).unwrap(), |acc, &c| acc * xp + PadicInt::new(p, prec, c).unwrap())
        };
        let s1 = level_sum(|x| TwistedTerm::plain(f(x + 1)), &measure, 0, level).unwrap().coeff(0);
        let s0 = level_sum(|x| TwistedTerm::plain(f(x)), &measure, 0, level).unwrap().coeff(0);
        let d = measure.points(level).unwrap();
        prop_assert_eq!(s1 + s0, f(0) + f(d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn consecutive_levels_agree_mod_p_to_the_level(
        p in prop::sample::select(vec![3u64, 5, 7]),
        level in 1u32..=7,
        coeffs in prop::collection::vec(-50i64..50, 1..=11),
    ) {
        let prec = 16;
        let measure = FermionicMeasure::minus_one(p, prec, 1).unwrap();
        let f = |x: u64| {
            let xp = PadicInt::new(p, prec, x as i64).unwrap();
            TwistedTerm::plain(
                coeffs.iter().rev().fold(PadicInt::zero(p, prec).unwrap(), |acc, &c| acc * xp + PadicInt::new(p, prec, c).unwrap()),
            )
        };
        let lower = level_sum(f, &measure, 0, level).unwrap();
        let upper = level_sum(f, &measure, 0, level + 1).unwrap();
        prop_assert!((upper - lower).valuation() >= level);
    }

    #[test]
    fn q_moment_at_q_one_is_the_plain_moment(p in prop::sample::select(vec![3u64, 5]), n in 0u32..=5) {
        let settings = PadicSettings::new(p, 10, 0, 6);
        let q = PadicInt::one(p, 10).unwrap();
        let plain = twisted_moment(n, RootOfUnity::one(), &DirichletCharacter::trivial(), &settings).unwrap();
        let deformed = twisted_q_moment(n, 0, 1, q, RootOfUnity::one(), &settings).unwrap();
        prop_assert!((plain.value - deformed.value).valuation() >= 6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_equals_series(
        n in 0u32..=8,
        q in 0.05f64..0.9,
        h in 0.0f64..3.0,
        x in 0.0f64..1.0,
        w in (1u64..=6).prop_flat_map(|m| (Just(m), 0..m)),
    ) {
        let cfg = EvalConfig::default();
        let w = RootOfUnity::new(w.0, w.1).unwrap();
        let qp = QParam::new(Complex64::new(q, 0.0)).unwrap();
        // stay clear of the poles 1 + w q^h = 0
        prop_assume!((1.0 + w.to_complex() * q.powf(h)).norm() > 1e-3);
        let p = EulerParams { n, x: Exponent::Complex(Complex64::new(x, 0.0)), h: Exponent::Complex(Complex64::new(h, 0.0)), q: qp, w };
        let closed = twisted_q_euler_poly(&p, &cfg).unwrap();
        let series = twisted_q_euler_series(&p, &cfg).unwrap();
        prop_assert!(rel(closed, series.value) <= 1e-10, "{} vs {}", closed, series.value);
    }

    #[test]
    fn hurwitz_zeta_interpolates(n in 0u32..=6, q in 0.1f64..0.9, h in 1i64..=3, x in 0.05f64..1.0, w in root()) {
        let cfg = EvalConfig::default();
        let params = ZetaParams::new(Complex64::new(-(n as f64), 0.0), Complex64::new(h as f64, 0.0), q, w).unwrap().with_x(x);
        let z = hurwitz_zeta(&params, &cfg).unwrap().value;
        let p = EulerParams {
            n,
            x: Exponent::Complex(Complex64::new(x, 0.0)),
            h: Exponent::Int(h),
            q: QParam::new(Complex64::new(q, 0.0)).unwrap(),
            w,
        };
        let e = twisted_q_euler_poly(&p, &cfg).unwrap();
        prop_assert!((z - e).norm() <= 1e-9 * e.norm().max(1.0));
    }

    #[test]
    fn conjugation_symmetry(sr in -3.0f64..3.0, si in -5.0f64..5.0, q in 0.1f64..0.9, h in 0.5f64..3.0, x in 0.1f64..1.0, w in root()) {
        let cfg = EvalConfig::default();
        let s = Complex64::new(sr, si);
        let mirror = RootOfUnity::new(w.order(), (w.order() - w.index()) % w.order()).unwrap();
        let a = hurwitz_zeta(&ZetaParams::new(s.conj(), Complex64::new(h, 0.0), q, w).unwrap().with_x(x), &cfg).unwrap().value;
        let b = hurwitz_zeta(&ZetaParams::new(s, Complex64::new(h, 0.0), q, mirror).unwrap().with_x(x), &cfg).unwrap().value;
        prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn trivial_l_function_is_zeta(sr in -3.0f64..3.0, si in -5.0f64..5.0, q in 0.1f64..0.9, h in 0.5f64..3.0, w in root()) {
        let cfg = EvalConfig::default();
        let params = ZetaParams::new(Complex64::new(sr, si), Complex64::new(h, 0.0), q, w).unwrap();
        let z = zeta(&params, &cfg).unwrap().value;
        let l = l_function_direct(&params.clone().with_chi(DirichletCharacter::trivial()), &cfg).unwrap().value;
        prop_assert!((z - l).norm() <= 1e-12 * z.norm().max(1.0));
    }

    #[test]
    fn two_q_is_one_plus_q(q in complex_q()) {
        prop_assert_eq!(two_q(&q), Complex64::new(1.0, 0.0) + q);
    }
}

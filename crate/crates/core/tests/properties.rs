use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use tribadic::classifier::formula::{adversarial_points, crt_witness, spec_p3};
use tribadic::classifier::{classify_prime, classify_prime_with, ClassifyOptions, Verdict};
use tribadic::factor::primes_up_to;
use tribadic::interpolation::Interpolant;
use tribadic::rational::Rational;
use tribadic::tribonacci::{trib, trib_mod, trib_val, trib_val_fast};
use tribadic::{val_big, PrimeContext, Zp};

const K: u32 = 16;

fn small_primes() -> Vec<u64> {
    primes_up_to(120).into_iter().filter(|&p| p >= 5 && p != 11).collect()
}

fn prime() -> impl Strategy<Value = u64> {
    proptest::sample::select(small_primes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valuation_routes_agree(n in -300i64..3000, p in prime()) {
        prop_assert_eq!(trib_val(n as i128, p), trib_val_fast(n as i128, p));
        prop_assert_eq!(trib_val(n as i128, p), val_big(&trib(n), p).unwrap());
    }

    #[test]
    fn interpolant_matches_recurrence(p in prime(), ell in 0i64..50, m in 0i64..6) {
        let ctx = PrimeContext::new(p, K).unwrap();
        let n = ctx.period() as i64;
        let zp = ctx.zp().clone();
        let f = tribadic::interpolation::eval_f(&ctx, ell, &zp.from_int(m as i128)).unwrap();
        let modulus = BigUint::from(p).pow(K);
        let direct = trib_mod((ell + m * n) as i128, &modulus);
        prop_assert_eq!(f, zp.from_biguint(direct));
    }

    #[test]
    fn interpolant_is_lipschitz(p in prime(), ell in 0i64..40, a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let ctx = PrimeContext::new(p, K).unwrap();
        let zp = ctx.zp().clone();
        let (za, zb) = (zp.from_int(a as i128), zp.from_int(b as i128));
        let fa = tribadic::interpolation::eval_f(&ctx, ell, &za).unwrap();
        let fb = tribadic::interpolation::eval_f(&ctx, ell, &zb).unwrap();
        prop_assert!((&fa - &fb).val() >= (&za - &zb).val());
    }

    #[test]
    fn series_agrees_with_exponential_sum(p in prime(), seed in 0u64..1_000_000) {
        let interp = Interpolant::new(p, K, 1).unwrap();
        let n = interp.period();
        let ell = (0..n as i64).find(|&l| trib_val_fast(l as i128, p).finite() != Some(0)).unwrap();
        let s = interp.series(ell).unwrap();
        let z = s.zp().from_int(seed as i128);
        let g = s.eval(&z).mul_p_pow(s.e);
        let f = interp.eval_f(ell, &z).unwrap();
        prop_assert!(g.eq_mod(&f, K));
    }

    #[test]
    fn crt_witness_is_sound(i in 0u64..13, j in 0u32..6, a in -20i64..20) {
        let a = Rational::integer(a);
        let ok = a.residue_mod(13) == Some(i);
        match crt_witness(i as i128, 13, a, 3, j) {
            Ok(n) => {
                prop_assert!(n > 0);
                prop_assert_eq!(n.rem_euclid(13), i as i128);
                let d = a.numerator_of_difference(n);
                prop_assert!(val_big(&d, 3).unwrap().finite().map_or(true, |v| v >= j));
            }
            Err(_) => prop_assert!(!ok),
        }
    }

    #[test]
    fn classification_is_deterministic(p in prime()) {
        prop_assert_eq!(classify_prime(p, K).unwrap(), classify_prime(p, K).unwrap());
    }
}

#[test]
fn witnesses_are_consistent_with_hensel_zeros() {
    for p in small_primes() {
        let rec = classify_prime_with(p, &ClassifyOptions::verdicts_only(K)).unwrap();
        if let Verdict::Fails { ell, u } = rec.verdict_ml {
            let zero = Interpolant::new(p, K, 1).unwrap().series(ell as i64).unwrap().hensel_zero().unwrap();
            assert!(zero.unique, "p = {p}");
            assert_eq!(zero.u, u, "p = {p}");
            let mut lifted = i128::from(zero.ell);
            lifted += rec.n_period.unwrap() as i128 * i128::try_from(zero.b.to_signed() % BigInt::from(p)).unwrap();
            assert_eq!(lifted.rem_euclid(p as i128) as u64, u, "p = {p}");
        }
    }
}

#[test]
fn verdicts_ignore_precision() {
    for p in small_primes() {
        let lo = classify_prime_with(p, &ClassifyOptions::verdicts_only(8)).unwrap();
        let hi = classify_prime_with(p, &ClassifyOptions::verdicts_only(32)).unwrap();
        assert_eq!(lo.verdict_ml, hi.verdict_ml);
        assert_eq!(lo.verdict_rat, hi.verdict_rat);
    }
}

#[test]
fn adversarial_points_stay_in_their_class() {
    let spec = spec_p3();
    for n in adversarial_points(&spec, 8).unwrap() {
        assert!(spec.predict(n).unwrap().is_some());
        assert_eq!(spec.predict(n).unwrap().map(|k| k as u32), trib_val_fast(n, 3).finite(), "n = {n}");
    }
}

#[test]
fn records_round_trip_through_json() {
    for p in [5, 47, 83, 103, 269] {
        let rec = classify_prime(p, K).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<tribadic::classifier::ClassificationRecord>(&text).unwrap(), rec);
    }
}

#[test]
fn zp_rejects_ramified_primes() {
    assert!(Zp::new(2, 8).is_err());
    assert!(Zp::new(11, 8).is_err());
}

mod common;

use common::{fac, gcd};
use markoff_core::arith::{
    factorize, next_prime, parse_primorial_expr, primorial, render_primorial, tau_phi,
    FactorCache, FactorPolicy, Factorization,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn totient_sieve(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for p in 2..=limit {
        if phi[p] == p as u64 {
            for m in (p..=limit).step_by(p) {
                phi[m] -= phi[m] / p as u64;
            }
        }
    }
    phi
}

#[test]
fn tau_phi_match_counting_up_to_1e5() {
    let limit = 100_000;
    let phi = totient_sieve(limit);
    let divs = common::divisor_table(limit);
    for n in 1..=limit as u64 {
        let (t, p) = tau_phi(&fac(n));
        assert_eq!(t, BigUint::from(divs[n as usize].len()), "tau({n})");
        assert_eq!(p, BigUint::from(phi[n as usize]), "phi({n})");
    }
    // the sieve itself against literal coprime counting
    for n in 1..=2_000u64 {
        let count = (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64;
        assert_eq!(phi[n as usize], count);
    }
}

#[test]
fn factorization_of_products_of_known_primes() {
    let p = next_prime(&BigUint::from(10u32).pow(12));
    let q = next_prime(&BigUint::from(10u32).pow(9));
    let n = &p * &p * &q * 6u32;
    let f = factorize(&n, &FactorPolicy::default()).unwrap();
    assert_eq!(f.value(), &n);
    assert_eq!(f.exponent_of(&p), 2);
    assert_eq!(f.exponent_of(&q), 1);
}

#[test]
fn cache_entries_resolve_hard_cofactors() {
    let p = next_prime(&BigUint::from(10u32).pow(30));
    let q = next_prime(&p);
    let n = &p * &q;
    let mut tight = FactorPolicy::default();
    tight.pollard_rho_budget = 10;
    assert!(factorize(&n, &tight).is_err());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("factors.txt");
    std::fs::write(&path, format!("# hard semiprime\n{n}={p},{q}^1\n")).unwrap();
    let policy = tight.with_cache_file(&path).unwrap();
    let f = factorize(&(&n * 12u32), &policy).unwrap();
    assert_eq!(f.value(), &(&n * 12u32));
    assert_eq!(FactorCache::load(&path).unwrap().len(), 1);
}

fn primorial_product() -> impl Strategy<Value = Vec<(u64, u32)>> {
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 101, 863];
    prop::collection::vec((prop::sample::select(primes.to_vec()), 1u32..4), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn render_then_parse_is_identity(parts in primorial_product(), three in 0u32..5, two in 0u32..9) {
        let mut n = BigUint::from(3u32).pow(three) * BigUint::from(2u32).pow(two);
        for (p, e) in &parts {
            n *= primorial(*p).pow(*e);
        }
        let f = factorize(&n, &FactorPolicy::default()).unwrap();
        let text = render_primorial(&f);
        prop_assert_eq!(parse_primorial_expr(&text).unwrap(), n);
    }

    #[test]
    fn factorize_recovers_value(n in 1u64..u64::MAX) {
        let f = factorize(&BigUint::from(n), &FactorPolicy::default()).unwrap();
        prop_assert_eq!(f.value(), &BigUint::from(n));
        let again = factorize(f.value(), &FactorPolicy::default()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn factorization_products(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let prod = fac(a).mul(&fac(b));
        prop_assert_eq!(prod.value(), &(BigUint::from(a) * b));
        prop_assert_eq!(prod.div(&fac(b)), Some(fac(a)));
        prop_assert_eq!(Factorization::from_u64_pairs(&[]).unwrap(), Factorization::one());
    }
}

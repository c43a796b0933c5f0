//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library except to build inputs.
#![allow(dead_code)]

use markoff_core::arith::{factorize_u64, Factorization};
use std::sync::OnceLock;

use num_bigint::BigUint;

pub fn fac(n: u64) -> Factorization {
    Factorization::from_u64_pairs(&factorize_u64(n)).unwrap()
}

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divisors of every `n <= limit`, index by `n`.
pub fn divisor_table(limit: usize) -> Vec<Vec<u32>> {
    let mut t = vec![Vec::new(); limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            t[m].push(d as u32);
        }
    }
    t
}

/// `d <= x` dividing `n` with no proper multiple `d' | n`, `d' <= x`.
pub fn maximal_brute(divs: &[u64], x: u64) -> Vec<u64> {
    let below: Vec<u64> = divs.iter().copied().filter(|&d| d <= x).collect();
    below
        .iter()
        .copied()
        .filter(|&d| !below.iter().any(|&e| e != d && e % d == 0))
        .collect()
}

pub fn big_omega(mut n: u64) -> u32 {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        p += 1;
    }
    k + u32::from(n > 1)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

struct Sieve {
    primes: Vec<u64>,
    /// Smallest prime factor and its index in `primes`.
    spf: Vec<(u32, u32)>,
}

pub const SIEVE_LIMIT: usize = 2_000_000;

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let mut spf = vec![(0u32, 0u32); SIEVE_LIMIT + 1];
        let mut primes = Vec::new();
        for i in 2..=SIEVE_LIMIT {
            if spf[i].0 == 0 {
                let idx = primes.len() as u32;
                primes.push(i as u64);
                for m in (i..=SIEVE_LIMIT).step_by(i) {
                    if spf[m].0 == 0 {
                        spf[m] = (i as u32, idx);
                    }
                }
            }
        }
        Sieve { primes, spf }
    })
}

/// Primes below `2 * 10^6`.
pub fn prime_list() -> &'static [u64] {
    &sieve().primes
}

/// Exponents over 2, 3, 5, ... up to the largest prime factor of `n`.
pub fn exponent_vector(n: u64) -> (Vec<u64>, Vec<u32>) {
    let s = sieve();
    let mut exps: Vec<u32> = Vec::new();
    let mut rest = n as usize;
    while rest > 1 {
        let (p, idx) = s.spf[rest];
        if exps.len() <= idx as usize {
            exps.resize(idx as usize + 1, 0);
        }
        exps[idx as usize] += 1;
        rest /= p as usize;
    }
    (s.primes[..exps.len()].to_vec(), exps)
}

/// Reducedness straight from the definition, with the log comparison
/// `floor((a_i + 1)/(a_j + 2)) < log p_j / log p_i` done as `p_i^q < p_j`.
pub fn reduced_brute(n: u64) -> bool {
    let (mut primes, mut exps) = exponent_vector(n);
    // append the first prime with exponent zero past the support
    primes.push(prime_list()[primes.len()]);
    exps.push(0);
    let a1 = exps[0];
    for j in 1..primes.len() {
        if exps[j] == 0 && (1u128 << a1) >= 8 * (primes[j] as u128).pow(2) {
            return false;
        }
    }
    // a_i = 0 gives floor(1/(a_j + 2)) = 0, which always passes
    for i in (1..primes.len()).filter(|&i| exps[i] > 0) {
        for j in 1..primes.len() {
            let q = (exps[i] + 1) / (exps[j] + 2);
            if (primes[i] as u128).pow(q) >= primes[j] as u128 {
                return false;
            }
        }
    }
    true
}

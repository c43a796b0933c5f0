//! Miller-Rabin primality.
//!
//! Below 2^64 the first twelve prime bases form a deterministic witness set.
//! Above that, 64 rounds are run with bases drawn from a ChaCha stream seeded
//! by the candidate itself, so the answer is reproducible and the error
//! probability is below 4^-64 = 2^-128.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::sieve::small_primes;

const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of random rounds used above 2^64.
pub const PROBABLE_ROUNDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Certainty {
    Proven,
    Probable,
}

impl Certainty {
    pub fn as_str(self) -> &'static str {
        match self {
            Certainty::Proven => "proven",
            Certainty::Probable => "probable",
        }
    }
}

/// Outcome of a primality query together with how it was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primality {
    pub is_prime: bool,
    pub certainty: Certainty,
}

pub fn is_prime(n: &BigUint) -> bool {
    primality(n).is_prime
}

pub fn primality(n: &BigUint) -> Primality {
    primality_with_rounds(n, PROBABLE_ROUNDS)
}

/// `primality` with a chosen number of Miller-Rabin rounds above `2^64`
/// (base 2 first, then seeded random bases).
pub fn primality_with_rounds(n: &BigUint, rounds: usize) -> Primality {
    if let Some(small) = n.to_u64() {
        return Primality {
            is_prime: is_prime_u64(small),
            certainty: Certainty::Proven,
        };
    }
    let proven_composite = Primality {
        is_prime: false,
        certainty: Certainty::Proven,
    };
    for &p in &small_primes()[..256] {
        if (n % p).is_zero() {
            return proven_composite;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    if !strong_probable_prime(n, &n_minus_one, &d, s, &BigUint::from(2u32)) {
        return proven_composite;
    }
    let mut rng = ChaCha20Rng::from_seed(seed_from(n));
    let two = BigUint::from(2u32);
    for _ in 1..rounds {
        let base = rng.gen_biguint_range(&two, &n_minus_one);
        if !strong_probable_prime(n, &n_minus_one, &d, s, &base) {
            return proven_composite;
        }
    }
    Primality {
        is_prime: true,
        certainty: Certainty::Probable,
    }
}

fn seed_from(n: &BigUint) -> [u8; 32] {
    let mut seed = [0u8; 32];
    for (i, b) in n.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= b.rotate_left((i / 32) as u32 % 8);
    }
    seed
}

fn strong_probable_prime(
    n: &BigUint,
    n_minus_one: &BigUint,
    d: &BigUint,
    s: u64,
    base: &BigUint,
) -> bool {
    let mut x = base.modpow(d, n);
    if x.is_one() || &x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &DETERMINISTIC_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut c = n + 1u32;
    if c <= BigUint::from(2u32) {
        return BigUint::from(2u32);
    }
    if c.is_even() {
        c += 1u32;
    }
    while !is_prime(&c) {
        c += 2u32;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve::primes_up_to;

    #[test]
    fn agrees_with_sieve() {
        let ps = primes_up_to(100_000);
        let mut it = ps.iter().peekable();
        for n in 0..=100_000u64 {
            let expect = it.peek().is_some_and(|&&p| p == n);
            if expect {
                it.next();
            }
            assert_eq!(is_prime_u64(n), expect, "{n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1_373_653, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn large_inputs() {
        let p: BigUint = "1000000000000000124399".parse().unwrap();
        let r = primality(&p);
        assert!(r.is_prime);
        assert_eq!(r.certainty, Certainty::Probable);
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        let composite = &m127 * BigUint::from(18_446_744_073_709_551_557u64);
        assert!(!is_prime(&composite));
        assert!(!is_prime(&((BigUint::one() << 128u32) + 1u32)));
    }

    #[test]
    fn next_prime_steps() {
        assert_eq!(next_prime(&BigUint::from(0u32)), BigUint::from(2u32));
        assert_eq!(next_prime(&BigUint::from(2u32)), BigUint::from(3u32));
        assert_eq!(next_prime(&BigUint::from(100_000_000u32)), BigUint::from(100_000_007u32));
    }
}

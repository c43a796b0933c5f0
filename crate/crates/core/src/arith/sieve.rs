//! Prime sieves and primorials.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::BigNat;

/// All primes `<= limit`, by an odd-only sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    // index i stands for 2i + 1
    let half = (limit - 1) / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= limit {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = Vec::with_capacity(half / 4 + 1);
    out.push(2);
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, c)| !**c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    out
}

/// Primes below 2^20, computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1 << 20))
}

/// The first `count` primes, growing the sieve as needed.
pub fn first_primes(count: usize) -> Vec<u64> {
    let small = small_primes();
    if count <= small.len() {
        return small[..count].to_vec();
    }
    let mut limit = (1u64 << 21).max((count as f64 * ((count as f64).ln() + 2.0)) as u64);
    loop {
        let ps = primes_up_to(limit);
        if ps.len() >= count {
            return ps[..count].to_vec();
        }
        limit *= 2;
    }
}

/// `n#`, the product of all primes `<= n`. `0# = 1# = 1`.
pub fn primorial(n: u64) -> BigNat {
    let ps = if n < (1 << 20) {
        let small = small_primes();
        let end = small.partition_point(|&p| p <= n);
        small[..end].to_vec()
    } else {
        primes_up_to(n)
    };
    product_tree(&ps)
}

fn product_tree(xs: &[u64]) -> BigNat {
    match xs.len() {
        0 => BigUint::from(1u32),
        1..=16 => xs.iter().fold(BigUint::from(1u32), |acc, &x| acc * x),
        n => product_tree(&xs[..n / 2]) * product_tree(&xs[n / 2..]),
    }
}

/// Smallest-prime-factor table for `0..=limit`, used to factor every `p +- 1`
/// of an exhaustive prime sweep without trial division.
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize + 1;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u32 {
        (self.spf.len() - 1) as u32
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.spf[n as usize] == n
    }

    /// Prime-power factorization as ascending `(p, e)` pairs. `n` must be in range.
    pub fn factor(&self, mut n: u32) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }
}

//! Share of primes near `10^n` that the maximal-divisor test certifies.

use markoff_core::arith::{factorize, next_prime, FactorPolicy};
use markoff_core::connectivity::{test_prime, Mode, Outcome, TestOptions, Verdict};
use markoff_core::Error;
use num_bigint::{BigUint, RandBigInt};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identifies the sampling recipe in reports.
pub const RNG_ALGORITHM: &str = "chacha20 (rand_chacha 0.3, seed_from_u64) + gen_biguint_range";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    /// The first `m` primes after `10^n`.
    Consecutive,
    /// `m` uniform integers in `(10^n, 10^(n+1))`, each advanced to the next
    /// prime.
    Random,
}

impl SampleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleMode::Consecutive => "consecutive",
            SampleMode::Random => "random",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableRequest {
    pub n: u32,
    pub m: usize,
    pub mode: SampleMode,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub n: u32,
    /// Primes that got a verdict; excludes the unfactorable ones.
    pub tested: usize,
    pub connected_count: usize,
    pub percentage: f64,
    pub excluded_unfactorable: usize,
}

/// What happened to one sampled prime.
#[derive(Debug)]
pub enum SampleResult {
    Tested(Box<Verdict>),
    Excluded(Error),
}

/// The sampled primes, in sampling order.
pub fn sample_primes(req: &TableRequest) -> Vec<BigUint> {
    let lo = BigUint::from(10u32).pow(req.n);
    match req.mode {
        SampleMode::Consecutive => {
            let mut out = Vec::with_capacity(req.m);
            let mut p = lo;
            for _ in 0..req.m {
                p = next_prime(&p);
                out.push(p.clone());
            }
            out
        }
        SampleMode::Random => {
            let hi = &lo * 10u32;
            let mut rng = ChaCha20Rng::seed_from_u64(req.seed);
            (0..req.m)
                .map(|_| next_prime(&rng.gen_biguint_range(&(&lo + 1u32), &hi)))
                .collect()
        }
    }
}

/// Factors `p - 1`, `p + 1` and runs the test in mode `Md`. Factoring and cap
/// failures come back as exclusions.
pub fn test_one(p: &BigUint, policy: &FactorPolicy) -> SampleResult {
    let run = || -> markoff_core::Result<Verdict> {
        let fm = factorize(&(p - 1u32), policy)?;
        let fp = factorize(&(p + 1u32), policy)?;
        test_prime(p, &fm, &fp, &TestOptions::mode(Mode::Md))
    };
    match run() {
        Ok(v) => SampleResult::Tested(Box::new(v)),
        Err(e) => SampleResult::Excluded(e),
    }
}

/// Runs the request, handing each prime's result to `each` in sampling order.
pub fn run_table_with(
    req: &TableRequest,
    policy: &FactorPolicy,
    mut each: impl FnMut(usize, &BigUint, &SampleResult),
) -> TableRow {
    let mut tested = 0;
    let mut connected = 0;
    let mut excluded = 0;
    for (i, p) in sample_primes(req).iter().enumerate() {
        let r = test_one(p, policy);
        match &r {
            SampleResult::Tested(v) => {
                tested += 1;
                if v.outcome == Outcome::Connected {
                    connected += 1;
                }
            }
            SampleResult::Excluded(_) => excluded += 1,
        }
        each(i, p, &r);
    }
    TableRow {
        n: req.n,
        tested,
        connected_count: connected,
        percentage: if tested == 0 {
            0.0
        } else {
            100.0 * connected as f64 / tested as f64
        },
        excluded_unfactorable: excluded,
    }
}

pub fn run_table(req: &TableRequest, policy: &FactorPolicy) -> TableRow {
    run_table_with(req, policy, |_, _, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consecutive_primes_follow_the_power() {
        let req = TableRequest {
            n: 2,
            m: 3,
            mode: SampleMode::Consecutive,
            seed: 0,
        };
        let ps: Vec<u32> = sample_primes(&req)
            .iter()
            .map(|p| p.try_into().unwrap())
            .collect();
        assert_eq!(ps, vec![101, 103, 107]);
    }

    #[test]
    fn random_mode_is_seeded() {
        let req = TableRequest {
            n: 9,
            m: 5,
            mode: SampleMode::Random,
            seed: 7,
        };
        let a = sample_primes(&req);
        assert_eq!(a, sample_primes(&req));
        let lo = BigUint::from(10u32).pow(9);
        assert!(a.iter().all(|p| p > &lo));
        let other = sample_primes(&TableRequest { seed: 8, ..req });
        assert_ne!(a, other);
    }
}

//! Reduced numbers: the integers `2^{a_1} 3^{a_2} 5^{a_3} ...` whose odd
//! exponents satisfy `p_i^floor((a_i+1)/(a_j+2)) < p_j` for every pair of odd
//! indices, and whose power of two satisfies `2^{a_1} < 8 p_j^2` at the first
//! odd prime `p_j` with zero exponent.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::{small_primes, Factorization};

/// A reduced integer with its exponents over consecutive primes `2, 3, 5, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedNumber {
    pub factorization: Factorization,
    /// `exponents[0]` is the power of two; the rest follow the odd primes with
    /// no gaps and end at the last nonzero exponent.
    pub exponents: Vec<u32>,
}

impl ReducedNumber {
    pub fn value(&self) -> &BigUint {
        self.factorization.value()
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        ReducedNumber {
            factorization: Factorization::from_exponents(&exponents),
            exponents,
        }
    }

    pub fn two_exponent(&self) -> u32 {
        self.exponents[0]
    }

    pub fn odd_exponents(&self) -> &[u32] {
        &self.exponents[1..]
    }

    pub fn big_omega(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }
}

/// `base^exp < bound` without overflow.
pub(crate) fn pow_less_than(base: u64, exp: u32, bound: u64) -> bool {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(v) if v < bound => v,
            _ => return false,
        };
    }
    acc < bound
}

/// Pair condition between odd primes `p_i` (exponent `a_i`) and `p_j` (exponent `a_j`).
pub(crate) fn pair_ok(p_i: u64, a_i: u32, p_j: u64, a_j: u32) -> bool {
    pow_less_than(p_i, (a_i + 1) / (a_j + 2), p_j)
}

/// Two-exponent condition against the first odd prime with zero exponent.
pub(crate) fn two_ok(a1: u32, first_zero: u64) -> bool {
    // 2^{a1} < 8 p^2
    let bound = 8u128 * first_zero as u128 * first_zero as u128;
    a1 < 128 && (1u128 << a1) < bound
}

/// Odd exponents of `f` over consecutive odd primes `3, 5, 7, ...`, or `None`
/// when some odd prime is skipped or too large to index.
pub(crate) fn odd_exponent_vector(f: &Factorization) -> Option<(u32, Vec<u32>)> {
    let (two, odd) = f.split_two();
    let primes = small_primes();
    let mut exps = Vec::with_capacity(odd.omega());
    for (idx, (p, e)) in odd.factors().iter().enumerate() {
        let expected = *primes.get(idx + 1)?;
        if p.to_u64() != Some(expected) {
            return None;
        }
        exps.push(*e);
    }
    Some((two, exps))
}

/// Whether `f` is reduced. Exact integer comparisons throughout.
pub fn is_reduced(f: &Factorization) -> bool {
    let Some((two, odd)) = odd_exponent_vector(f) else {
        return false;
    };
    reduced_exponents_ok(two, &odd)
}

pub(crate) fn reduced_exponents_ok(two: u32, odd: &[u32]) -> bool {
    let primes = small_primes();
    let k = odd.len();
    if k + 2 > primes.len() {
        return false;
    }
    // odd prime t is primes[t + 1]; index k is the first zero exponent
    let exp_at = |t: usize| if t < k { odd[t] } else { 0 };
    for i in 0..k {
        for j in 0..=k {
            if i != j && !pair_ok(primes[i + 1], odd[i], primes[j + 1], exp_at(j)) {
                return false;
            }
        }
    }
    debug_assert!(
        !odd.windows(2).any(|w| w[1] > w[0]),
        "odd exponents of a reduced number are non-increasing"
    );
    two_ok(two, primes[k + 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Factorization {
        Factorization::from_u64_pairs(&crate::arith::factorize_u64(v)).unwrap()
    }

    #[test]
    fn known_membership() {
        assert!(is_reduced(&n(45)));
        assert!(!is_reduced(&n(27)));
        assert!(is_reduced(&n(1)));
        let odd: Vec<u64> = (1..100).step_by(2).filter(|&v| is_reduced(&n(v))).collect();
        assert_eq!(odd, vec![1, 3, 9, 15, 45]);
        // skipping 3
        assert!(!is_reduced(&n(5)));
        // 2^6 < 72 but 2^7 is not
        assert!(is_reduced(&n(64)));
        assert!(!is_reduced(&n(128)));
    }

    #[test]
    fn power_helper() {
        assert!(pow_less_than(3, 2, 10));
        assert!(!pow_less_than(3, 2, 9));
        assert!(!pow_less_than(u64::MAX, 2, u64::MAX));
        assert!(pow_less_than(5, 0, 2));
    }
}

//! Divisor lattice of a factored integer.
//!
//! `M_x(n)` denotes the divisors of `n` that are maximal among those `<= x`
//! under divisibility. With `lambda(m)` the least prime factor of `m`
//! (`lambda(1) = 1`), `d` is in `M_x(n)` iff `d <= x` and either `d = n` or
//! `d * lambda(n/d) > x`.

mod growth;
mod lattice;
mod omega;
mod profile;
mod split;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub use lattice::{DivValue, Lattice};
pub use omega::{
    chain_bound, count_omega_k, max_omega_below, min_omega_above, mul_geometric,
    mul_geometric_f64, omega_polynomial,
};
pub use growth::{
    below_growth, entropy, maximal_growth, median, root_floor, GrowthSample,
};
pub use profile::DivisorProfile;
pub use split::split_count_up_to;

use crate::arith::Factorization;
use crate::error::{Error, Result};

/// Default cap on `tau(n)` for operations that materialize every divisor.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// A divisor of a parent factorization, stored by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorHandle {
    pub exponents: Vec<u32>,
    pub value: BigUint,
}

impl DivisorHandle {
    pub fn from_exponents(parent: &Factorization, exponents: Vec<u32>) -> Self {
        let value = parent
            .factors()
            .iter()
            .zip(&exponents)
            .fold(BigUint::from(1u32), |acc, ((p, _), e)| acc * p.pow(*e));
        DivisorHandle { exponents, value }
    }

    pub fn big_omega(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// Least prime of `parent / self`, or 1 when the cofactor is 1.
    pub fn cofactor_least_prime(&self, parent: &Factorization) -> BigUint {
        parent
            .factors()
            .iter()
            .zip(&self.exponents)
            .find(|((_, a), e)| *e < a)
            .map_or_else(|| BigUint::from(1u32), |((p, _), _)| p.clone())
    }

    pub fn divides(&self, other: &DivisorHandle) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }
}

/// `M_x(n)` with its threshold.
#[derive(Clone, Debug)]
pub struct MaximalDivisorSet {
    pub threshold: BigUint,
    pub members: Vec<DivisorHandle>,
    pub parent: Factorization,
}

impl MaximalDivisorSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn values(&self) -> Vec<BigUint> {
        self.members.iter().map(|m| m.value.clone()).collect()
    }

    /// Checks the defining inequalities and pairwise incomparability.
    pub fn is_antichain(&self) -> bool {
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if a.divides(b) || b.divides(a) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn tau(f: &Factorization) -> BigUint {
    f.exponents()
        .iter()
        .fold(BigUint::from(1u32), |acc, &e| acc * (e + 1))
}

/// `|{d | n : d <= x}|`.
pub fn count_divisors_up_to(f: &Factorization, x: &BigUint) -> BigUint {
    if x.is_zero() {
        return BigUint::zero();
    }
    if x >= f.value() {
        return tau(f);
    }
    if let Some(l) = Lattice::<u128>::new(f) {
        let x = x.to_u128().expect("x < n fits");
        return BigUint::from(l.count_up_to(&x));
    }
    let l = Lattice::<BigUint>::new(f).expect("BigUint carrier");
    BigUint::from(l.count_up_to(x))
}

/// `M_x(n)`, found by a pruned walk over divisors `<= x`.
pub fn maximal_divisors(f: &Factorization, x: &BigUint) -> MaximalDivisorSet {
    let members: Vec<(Vec<u32>, BigUint)> = match (Lattice::<u128>::new(f), x.to_u128()) {
        (Some(l), Some(xs)) => l
            .maximal_members(&xs)
            .into_iter()
            .map(|(e, v)| (e, BigUint::from(v)))
            .collect(),
        _ => Lattice::<BigUint>::new(f)
            .expect("BigUint carrier")
            .maximal_members(x),
    };
    let mut members: Vec<DivisorHandle> = members
        .into_iter()
        .map(|(exponents, value)| DivisorHandle { exponents, value })
        .collect();
    members.sort_by(|a, b| a.value.cmp(&b.value));
    MaximalDivisorSet {
        threshold: x.clone(),
        members,
        parent: f.clone(),
    }
}

fn check_cap(f: &Factorization, cap: u64) -> Result<()> {
    let t = tau(f);
    if t > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "tau(n)",
            size: t,
            cap,
        });
    }
    Ok(())
}

/// `|M_d(n)|` for every divisor `d` of `n`, ascending in `d`.
pub fn maximal_divisor_profile(f: &Factorization) -> Result<Vec<(BigUint, u64)>> {
    maximal_divisor_profile_with_cap(f, DEFAULT_ENUMERATION_CAP)
}

pub fn maximal_divisor_profile_with_cap(
    f: &Factorization,
    cap: u64,
) -> Result<Vec<(BigUint, u64)>> {
    check_cap(f, cap)?;
    if let Some(l) = Lattice::<u128>::new(f) {
        return Ok(DivisorProfile::build(&l)
            .entries()
            .into_iter()
            .map(|(d, c)| (BigUint::from(d), c))
            .collect());
    }
    let l = Lattice::<BigUint>::new(f).expect("BigUint carrier");
    Ok(DivisorProfile::build(&l).entries())
}

/// Profile object for repeated threshold queries, in the chosen carrier.
pub fn profile_in<T: DivValue>(f: &Factorization, cap: u64) -> Result<Option<DivisorProfile<T>>> {
    check_cap(f, cap)?;
    Ok(Lattice::<T>::new(f).map(|l| DivisorProfile::build(&l)))
}

/// Every divisor as a handle. Subject to the enumeration cap.
pub fn all_divisors(f: &Factorization, cap: u64) -> Result<Vec<DivisorHandle>> {
    check_cap(f, cap)?;
    let mut out = vec![DivisorHandle {
        exponents: Vec::new(),
        value: BigUint::from(1u32),
    }];
    for (p, a) in f.factors() {
        let mut next = Vec::with_capacity(out.len() * (*a as usize + 1));
        for d in &out {
            let mut v = d.value.clone();
            for e in 0..=*a {
                let mut ex = d.exponents.clone();
                ex.push(e);
                next.push(DivisorHandle {
                    exponents: ex,
                    value: v.clone(),
                });
                v *= p;
            }
        }
        out = next;
    }
    out.sort_by(|a, b| a.value.cmp(&b.value));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(pairs: &[(u64, u32)]) -> Factorization {
        Factorization::from_u64_pairs(pairs).unwrap()
    }

    fn b(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn counting() {
        let twelve = f(&[(2, 2), (3, 1)]);
        assert_eq!(count_divisors_up_to(&twelve, &b(6)), b(5));
        assert_eq!(count_divisors_up_to(&twelve, &b(12)), b(6));
        assert_eq!(count_divisors_up_to(&twelve, &b(1)), b(1));
        assert_eq!(count_divisors_up_to(&twelve, &b(0)), b(0));
    }

    #[test]
    fn maximal_sets() {
        let twelve = f(&[(2, 2), (3, 1)]);
        assert_eq!(maximal_divisors(&twelve, &b(10)).values(), vec![b(4), b(6)]);
        assert_eq!(maximal_divisors(&twelve, &b(12)).values(), vec![b(12)]);
        assert_eq!(maximal_divisors(&twelve, &b(100)).values(), vec![b(12)]);
        assert_eq!(maximal_divisors(&f(&[(101, 1)]), &b(1)).values(), vec![b(1)]);
        assert!(maximal_divisors(&twelve, &b(10)).is_antichain());
    }

    #[test]
    fn profile_of_twelve() {
        let twelve = f(&[(2, 2), (3, 1)]);
        let p = maximal_divisor_profile(&twelve).unwrap();
        let as_map: std::collections::BTreeMap<_, _> = p.into_iter().collect();
        assert_eq!(as_map[&b(6)], 2);
        assert_eq!(as_map[&b(12)], 1);
        assert_eq!(as_map[&b(1)], 1);
    }

    #[test]
    fn cap_enforced() {
        let big = f(&[(2, 10), (3, 10), (5, 10)]);
        assert!(matches!(
            maximal_divisor_profile_with_cap(&big, 1000),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn big_carrier_agrees() {
        // value above 2^128 forces the BigUint path
        let huge = Factorization::new(vec![
            (b(2), 2),
            (b(3), 1),
            ("170141183460469231731687303715884105727".parse().unwrap(), 1),
        ])
        .unwrap();
        let x: BigUint = "1000000000000000000000000000000000000000".parse().unwrap();
        let m = maximal_divisors(&huge, &x);
        assert!(m.is_antichain());
        assert!(m.members.iter().all(|d| d.value <= x));
        let prof = maximal_divisor_profile(&huge).unwrap();
        assert_eq!(prof.len(), 12);
        assert_eq!(count_divisors_up_to(&huge, &x), b(10));
        assert_eq!(m.len(), 3);
    }
}

//! Replacing an arbitrary `n` by a reduced `m` with `n <= m <= 4n - 6` and
//! `|M_x(n)| <= |M_x(m)|` for every `x`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;

use super::reduced::{is_reduced, ReducedNumber};
use super::reducing::{
    compose_reducing, make_exponent_shift, product_reducing, ReducingFunctionSpec,
};
use crate::arith::{small_primes, Factorization};
use crate::error::{Error, Result};

/// One exponent shift `p^a q^b -> p^{a-c} q^{b+1}` applied to the odd part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftMove {
    pub p: BigUint,
    pub q: BigUint,
    pub a: u32,
    pub b: u32,
}

fn to_factorization(map: &BTreeMap<BigUint, u32>) -> Factorization {
    Factorization::new(
        map.iter()
            .filter(|(_, e)| **e > 0)
            .map(|(p, e)| (p.clone(), *e))
            .collect(),
    )
    .expect("primes carried over from a valid factorization")
}

/// Smallest odd prime not present in `map`.
fn first_gap(map: &BTreeMap<BigUint, u32>) -> BigUint {
    for &p in &small_primes()[1..] {
        let p = BigUint::from(p);
        if !map.contains_key(&p) {
            return p;
        }
    }
    unreachable!("odd part has fewer distinct primes than the table")
}

fn find_move(map: &BTreeMap<BigUint, u32>) -> Option<ShiftMove> {
    let mut targets: Vec<(BigUint, u32)> = map.iter().map(|(p, e)| (p.clone(), *e)).collect();
    targets.push((first_gap(map), 0));
    targets.sort();
    for (q, b) in &targets {
        // largest source prime first so stray large primes come down quickly
        for (p, a) in map.iter().rev() {
            if p == q || *a == 0 {
                continue;
            }
            let c = (a + 1) / (b + 2);
            if c > 0 && q < &p.pow(c) {
                return Some(ShiftMove {
                    p: p.clone(),
                    q: q.clone(),
                    a: *a,
                    b: *b,
                });
            }
        }
    }
    None
}

/// Applies exponent shifts to the odd part of `odd` until none applies.
/// Returns the moves in order and the resulting odd number.
pub fn normalize_odd_part(odd: &Factorization) -> (Vec<ShiftMove>, Factorization) {
    let mut map: BTreeMap<BigUint, u32> = odd.factors().iter().cloned().collect();
    let mut moves = Vec::new();
    while let Some(mv) = find_move(&map) {
        let c = (mv.a + 1) / (mv.b + 2);
        *map.get_mut(&mv.p).expect("source present") -= c;
        *map.entry(mv.q.clone()).or_insert(0) += 1;
        map.retain(|_, e| *e > 0);
        moves.push(mv);
    }
    (moves, to_factorization(&map))
}

/// The composite reducing map `D(odd) -> D(normalized)` realised by `moves`.
pub fn odd_part_reduction(odd: &Factorization) -> Result<(Factorization, ReducingFunctionSpec)> {
    let (moves, _) = normalize_odd_part(odd);
    let mut current = odd.clone();
    let mut spec = ReducingFunctionSpec::identity(odd);
    for mv in moves {
        let shift = make_exponent_shift(&mv.p, &mv.q, mv.a, mv.b)?;
        let rest = current.div(&shift.domain).ok_or_else(|| {
            Error::PreconditionViolated("move does not match the current odd part".into())
        })?;
        let step = product_reducing(&shift, &ReducingFunctionSpec::identity(&rest))?;
        current = step.codomain.clone();
        spec = compose_reducing(&spec, &step)?;
    }
    Ok((current, spec))
}

/// Steps of the construction, kept for inspection and testing.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Odd part after all exponent shifts.
    pub odd: Factorization,
    /// Smallest `a` with `2^a * odd >= n`.
    pub two_power: u32,
    /// Primes absorbed beyond the largest prime of `2^a * odd`.
    pub absorbed: Vec<BigUint>,
    pub result: ReducedNumber,
}

/// Builds the reduced `m` for `n >= 2`.
pub fn reduce_to_reduced(f: &Factorization) -> Result<ReducedNumber> {
    Ok(reduction_steps(f)?.result)
}

pub fn reduction_steps(f: &Factorization) -> Result<Reduction> {
    let n = f.value();
    if n < &BigUint::from(2u32) {
        return Err(Error::PreconditionViolated("need n >= 2".into()));
    }
    let (_, odd) = f.split_two();
    let (_, m_odd) = normalize_odd_part(&odd);
    let mo = m_odd.value();
    let mut a = 0u32;
    while (mo << a) < *n {
        a += 1;
    }
    let base = mo << a;

    // p_{k+1}, the prime after the largest prime of 2^a * m'
    let primes = small_primes();
    // absorb p_{k+1} ... p_l while p_{k+1}...p_{l-1} p_l^2 < 2^{a-2}
    let mut absorbed = Vec::new();
    let mut prefix = BigUint::one();
    let mut idx = m_odd.omega() + 1;
    loop {
        let p = BigUint::from(primes[idx]);
        // prefix * p^2 < 2^{a-2}, scaled by 4
        if a < 2 || (&prefix * &p * &p) << 2u32 >= BigUint::one() << a {
            break;
        }
        prefix *= &p;
        absorbed.push(p);
        idx += 1;
    }
    let core = mo * &prefix;
    let mut a1 = 0u32;
    while (&core << a1) < base {
        a1 += 1;
    }
    let mut exps = vec![a1];
    let mut odd_exps: Vec<u32> = m_odd.exponents();
    odd_exps.extend(absorbed.iter().map(|_| 1));
    exps.extend(odd_exps);
    let result = ReducedNumber::from_exponents(exps);
    let m = result.value();
    if m < n || m + 6u32 > n * 4u32 {
        return Err(Error::PreconditionViolated(format!(
            "construction left the window: n = {n}, m = {m}"
        )));
    }
    debug_assert!(is_reduced(&result.factorization), "{}", result.factorization);
    Ok(Reduction {
        odd: m_odd,
        two_power: a,
        absorbed,
        result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize_u64;
    use crate::reduction::reducing::verify_reducing;

    fn f(v: u64) -> Factorization {
        Factorization::from_u64_pairs(&factorize_u64(v)).unwrap()
    }

    #[test]
    fn lands_in_window_and_is_reduced() {
        for v in 2..20_000u64 {
            let m = reduce_to_reduced(&f(v)).unwrap();
            let mv: u64 = m.value().try_into().unwrap();
            assert!(v <= mv && mv + 6 <= 4 * v, "{v} -> {mv}");
            assert!(is_reduced(&m.factorization), "{v} -> {mv}");
        }
    }

    #[test]
    fn odd_part_maps_verify() {
        for v in (3..3_000u64).step_by(2) {
            let (target, spec) = odd_part_reduction(&f(v)).unwrap();
            assert_eq!(target, normalize_odd_part(&f(v)).1);
            assert_eq!(verify_reducing(&spec).unwrap(), Ok(()), "{v}");
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(normalize_odd_part(&f(27)).1.value(), &BigUint::from(15u32));
        assert_eq!(reduce_to_reduced(&f(2)).unwrap().value(), &BigUint::from(2u32));
        assert!(reduce_to_reduced(&Factorization::one()).is_err());
    }
}

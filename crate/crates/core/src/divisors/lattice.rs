use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::arith::Factorization;

/// Integer carrier for divisor values. `u128` covers every `p +- 1` the tests
/// reach; `BigUint` covers the rest.
pub trait DivValue: Clone + Ord + Debug + Send + Sync + 'static {
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn to_big(&self) -> BigUint;
    fn from_big(b: &BigUint) -> Option<Self>;
}

impl DivValue for u128 {
    fn one() -> Self {
        1
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn from_big(b: &BigUint) -> Option<Self> {
        b.to_u128()
    }
}

impl DivValue for BigUint {
    fn one() -> Self {
        <BigUint as One>::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn from_big(b: &BigUint) -> Option<Self> {
        Some(b.clone())
    }
}

/// Prime powers of a factorization in a chosen carrier.
#[derive(Clone, Debug)]
pub struct Lattice<T> {
    pub primes: Vec<T>,
    pub exponents: Vec<u32>,
    pub n: T,
}

impl<T: DivValue> Lattice<T> {
    pub fn new(f: &Factorization) -> Option<Self> {
        let primes = f
            .factors()
            .iter()
            .map(|(p, _)| T::from_big(p))
            .collect::<Option<Vec<_>>>()?;
        let n = T::from_big(f.value())?;
        Some(Lattice {
            primes,
            exponents: f.exponents(),
            n,
        })
    }

    pub fn tau(&self) -> BigUint {
        self.exponents
            .iter()
            .fold(BigUint::from(1u32), |acc, &e| acc * (e + 1))
    }

    /// Every divisor `d` paired with `d * lambda(n/d)`, the smallest multiple of
    /// `d` among the divisors of `n` (`None` for `d = n`).
    pub fn divisors_with_exits(&self) -> Vec<(T, Option<T>)> {
        let mut out: Vec<(T, Option<T>)> = vec![(T::one(), None)];
        // descending primes so that the last deficient prime seen is the least
        for i in (0..self.primes.len()).rev() {
            let p = &self.primes[i];
            let a = self.exponents[i];
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for (v, lam) in &out {
                let mut pw = v.clone();
                for e in 0..=a {
                    let l = if e < a { Some(p.clone()) } else { lam.clone() };
                    next.push((pw.clone(), l));
                    if e < a {
                        pw = pw.mul(p);
                    }
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(d, lam)| {
                let exit = lam.map(|l| d.mul(&l));
                (d, exit)
            })
            .collect()
    }

    /// Number of divisors `<= x`.
    pub fn count_up_to(&self, x: &T) -> u64 {
        fn walk<T: DivValue>(l: &Lattice<T>, i: usize, v: T, x: &T) -> u64 {
            if i == l.primes.len() {
                return 1;
            }
            let mut total = 0;
            let mut cur = v;
            for e in 0..=l.exponents[i] {
                total += walk(l, i + 1, cur.clone(), x);
                if e == l.exponents[i] {
                    break;
                }
                cur = cur.mul(&l.primes[i]);
                if &cur > x {
                    break;
                }
            }
            total
        }
        if x < &T::one() {
            return 0;
        }
        // largest primes first prunes earlier
        let mut rev = self.clone();
        rev.primes.reverse();
        rev.exponents.reverse();
        walk(&rev, 0, T::one(), x)
    }

    /// Divisors `d <= x` with `d * lambda(n/d) > x`, as exponent vectors and values.
    pub fn maximal_members(&self, x: &T) -> Vec<(Vec<u32>, T)> {
        let k = self.primes.len();
        let mut out = Vec::new();
        let mut exps = vec![0u32; k];
        fn walk<T: DivValue>(
            l: &Lattice<T>,
            i: usize,
            v: T,
            x: &T,
            exps: &mut Vec<u32>,
            out: &mut Vec<(Vec<u32>, T)>,
        ) {
            if i == l.primes.len() {
                let lam = (0..l.primes.len()).find(|&j| exps[j] < l.exponents[j]);
                let maximal = match lam {
                    None => true,
                    Some(j) => &v.mul(&l.primes[j]) > x,
                };
                if maximal {
                    out.push((exps.clone(), v));
                }
                return;
            }
            let mut cur = v;
            for e in 0..=l.exponents[i] {
                exps[i] = e;
                walk(l, i + 1, cur.clone(), x, exps, out);
                if e == l.exponents[i] {
                    break;
                }
                cur = cur.mul(&l.primes[i]);
                if &cur > x {
                    break;
                }
            }
            exps[i] = 0;
        }
        if x < &T::one() {
            return out;
        }
        walk(self, 0, T::one(), x, &mut exps, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exits_of_twelve() {
        let f = Factorization::from_u64_pairs(&[(2, 2), (3, 1)]).unwrap();
        let l = Lattice::<u128>::new(&f).unwrap();
        let mut got = l.divisors_with_exits();
        got.sort();
        assert_eq!(
            got,
            vec![
                (1, Some(2)),
                (2, Some(4)),
                (3, Some(6)),
                (4, Some(12)),
                (6, Some(12)),
                (12, None)
            ]
        );
        assert_eq!(l.count_up_to(&6), 5);
        assert_eq!(l.count_up_to(&0), 0);
    }
}

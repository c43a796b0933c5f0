use num_bigint::BigUint;

use super::reduced::{pair_ok, two_ok, ReducedNumber};
use crate::arith::small_primes;

/// One admissible odd part together with the range of powers of two that
/// complete it to a reduced number `<= limit`.
pub struct OddPart<'a> {
    /// Exponents of `3, 5, 7, ...`, non-increasing, no zeros.
    pub exponents: &'a [u32],
    pub value: &'a BigUint,
    /// The first odd prime with exponent zero.
    pub first_zero_prime: u64,
    /// Every `a_1` in `0..=max_two_exponent` yields a reduced number `<= limit`.
    pub max_two_exponent: u32,
}

/// Receives the depth-first walk over odd parts. `push`/`pop` bracket each
/// descent into a new odd prime power, which lets visitors keep per-path state.
pub trait OddPartVisitor {
    fn push(&mut self, _prime: u64, _exponent: u32) {}
    fn pop(&mut self) {}
    fn visit(&mut self, part: &OddPart<'_>);
}

/// Walks every reduced number `<= limit`, grouped by odd part.
///
/// Exponents are explored prime by prime in non-increasing order. A branch is
/// cut once its existing exponents cannot be completed by any first-zero prime
/// the remaining budget could reach.
pub fn walk_reduced<V: OddPartVisitor>(limit: &BigUint, visitor: &mut V) {
    if limit < &BigUint::from(1u32) {
        return;
    }
    let mut w = Walker {
        primes: small_primes(),
        limit,
        exps: Vec::new(),
    };
    w.node(&BigUint::from(1u32), visitor);
}

struct Walker<'a> {
    primes: &'a [u64],
    limit: &'a BigUint,
    exps: Vec<u32>,
}

impl Walker<'_> {
    fn odd_prime(&self, t: usize) -> u64 {
        self.primes[t + 1]
    }

    fn completes_at(&self, first_zero: u64) -> bool {
        self.exps
            .iter()
            .enumerate()
            .all(|(i, &a)| pair_ok(self.odd_prime(i), a, first_zero, 0))
    }

    fn max_two(&self, prod: &BigUint, first_zero: u64) -> Option<u32> {
        if prod > self.limit {
            return None;
        }
        let mut a = (self.limit.bits() - prod.bits()) as u32;
        if (prod << a) > *self.limit {
            a -= 1;
        }
        while !two_ok(a, first_zero) {
            a -= 1;
        }
        Some(a)
    }

    fn node<V: OddPartVisitor>(&mut self, prod: &BigUint, visitor: &mut V) {
        let k = self.exps.len();
        let first_zero = self.odd_prime(k);
        if self.completes_at(first_zero) {
            if let Some(a) = self.max_two(prod, first_zero) {
                visitor.visit(&OddPart {
                    exponents: &self.exps,
                    value: prod,
                    first_zero_prime: first_zero,
                    max_two_exponent: a,
                });
            }
        }
        // furthest first-zero prime any descendant can have
        let mut reach = k;
        let mut v = prod.clone();
        loop {
            v *= self.odd_prime(reach);
            if &v > self.limit {
                break;
            }
            reach += 1;
        }
        if reach == k || !self.completes_at(self.odd_prime(reach)) {
            return;
        }
        let p = first_zero;
        let cap = self.exps.last().copied().unwrap_or(u32::MAX);
        let mut child = prod * p;
        let mut e = 1;
        while e <= cap && &child <= self.limit {
            let ok = self
                .exps
                .iter()
                .enumerate()
                .all(|(i, &a)| pair_ok(self.odd_prime(i), a, p, e));
            if ok {
                self.exps.push(e);
                visitor.push(p, e);
                self.node(&child, visitor);
                visitor.pop();
                self.exps.pop();
            }
            e += 1;
            child *= p;
        }
    }
}

struct Counter(u64, u64);

impl OddPartVisitor for Counter {
    fn visit(&mut self, part: &OddPart<'_>) {
        self.0 += part.max_two_exponent as u64 + 1;
        self.1 += 1;
    }
}

/// Number of reduced integers `<= limit`.
pub fn count_reduced(limit: &BigUint) -> u64 {
    count_reduced_with_odd_parts(limit).0
}

/// `(reduced numbers, distinct odd parts)` up to `limit`.
pub fn count_reduced_with_odd_parts(limit: &BigUint) -> (u64, u64) {
    let mut c = Counter(0, 0);
    walk_reduced(limit, &mut c);
    (c.0, c.1)
}

/// Calls `f` on every reduced number `<= limit`, in walk order.
pub fn for_each_reduced(limit: &BigUint, mut f: impl FnMut(ReducedNumber)) {
    struct Emit<F>(F);
    impl<F: FnMut(ReducedNumber)> OddPartVisitor for Emit<F> {
        fn visit(&mut self, part: &OddPart<'_>) {
            for a in 0..=part.max_two_exponent {
                let mut exps = Vec::with_capacity(part.exponents.len() + 1);
                exps.push(a);
                exps.extend_from_slice(part.exponents);
                (self.0)(ReducedNumber::from_exponents(exps));
            }
        }
    }
    walk_reduced(limit, &mut Emit(&mut f));
}

/// Calls `f` on every reduced `n` with `lo <= n <= hi`, in walk order.
pub fn for_each_reduced_between(lo: &BigUint, hi: &BigUint, mut f: impl FnMut(ReducedNumber)) {
    struct Emit<'a, F> {
        lo: &'a BigUint,
        f: F,
    }
    impl<F: FnMut(ReducedNumber)> OddPartVisitor for Emit<'_, F> {
        fn visit(&mut self, part: &OddPart<'_>) {
            let mut a = 0;
            while a <= part.max_two_exponent && (part.value << a) < *self.lo {
                a += 1;
            }
            for a in a..=part.max_two_exponent {
                let mut exps = Vec::with_capacity(part.exponents.len() + 1);
                exps.push(a);
                exps.extend_from_slice(part.exponents);
                (self.f)(ReducedNumber::from_exponents(exps));
            }
        }
    }
    walk_reduced(hi, &mut Emit { lo, f: &mut f });
}

/// Every reduced number `<= limit`, ascending. Materializes the whole set.
pub fn enumerate_reduced(limit: &BigUint) -> Vec<ReducedNumber> {
    let mut out = Vec::new();
    for_each_reduced(limit, |r| out.push(r));
    out.sort_by(|a, b| a.value().cmp(b.value()));
    out
}

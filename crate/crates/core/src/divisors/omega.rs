//! Counting divisors by their number of prime factors.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::Factorization;

/// Coefficients of `prod_i (1 + z + ... + z^{a_i})`, i.e. `C_0(n), ..., C_Omega(n)`.
pub fn omega_polynomial(f: &Factorization) -> Vec<BigUint> {
    let mut poly = vec![BigUint::from(1u32)];
    for (_, a) in f.factors() {
        poly = mul_geometric(&poly, *a);
    }
    poly
}

/// `poly * (1 + z + ... + z^a)` by a sliding window sum.
pub fn mul_geometric(poly: &[BigUint], a: u32) -> Vec<BigUint> {
    let a = a as usize;
    let len = poly.len() + a;
    let mut out = Vec::with_capacity(len);
    let mut window = BigUint::zero();
    for k in 0..len {
        if k < poly.len() {
            window += &poly[k];
        }
        if k > a {
            window -= &poly[k - a - 1];
        }
        out.push(window.clone());
    }
    out
}

/// Same product over `f64`, for callers that only need magnitudes. Each
/// window is summed directly: a sliding difference would cancel badly in the
/// small tail coefficients.
pub fn mul_geometric_f64(poly: &[f64], a: u32, out: &mut Vec<f64>) {
    let a = a as usize;
    let len = poly.len() + a;
    out.clear();
    out.reserve(len);
    for k in 0..len {
        let lo = k.saturating_sub(a);
        let hi = k.min(poly.len() - 1);
        out.push(poly[lo..=hi].iter().sum());
    }
}

/// `C_k(n)`; zero outside `0..=Omega(n)`.
pub fn count_omega_k(f: &Factorization, k: i64) -> BigUint {
    if k < 0 || k as u64 > f.big_omega() {
        return BigUint::zero();
    }
    omega_polynomial(f).swap_remove(k as usize)
}

/// Largest `Omega(d)` over divisors `d < x` (or `d <= x` when not strict).
///
/// The smallest divisor with `j` prime factors is the product of the `j`
/// smallest primes of the multiset, so a greedy scan is exact.
pub fn max_omega_below(f: &Factorization, x: &BigUint, strict: bool) -> u64 {
    let fits = |v: &BigUint| if strict { v < x } else { v <= x };
    let mut prod = BigUint::from(1u32);
    if !fits(&prod) {
        return 0;
    }
    let mut j = 0;
    for (p, a) in f.factors() {
        for _ in 0..*a {
            let next = &prod * p;
            if !fits(&next) {
                return j;
            }
            prod = next;
            j += 1;
        }
    }
    j
}

/// Smallest `Omega(d)` over divisors `d > x`, or `None` when `n <= x`.
/// Greedy from the largest primes down.
pub fn min_omega_above(f: &Factorization, x: &BigUint) -> Option<u64> {
    let mut prod = BigUint::from(1u32);
    if &prod > x {
        return Some(0);
    }
    let mut j = 0;
    for (p, a) in f.factors().iter().rev() {
        for _ in 0..*a {
            prod *= p;
            j += 1;
            if &prod > x {
                return Some(j);
            }
        }
    }
    None
}

/// Upper bound on `|M_x(n)|` from the symmetric chain decomposition: `C_k(n)`
/// at the `k` closest to `Omega(n)/2` inside the range of `Omega` that any
/// maximal divisor can have.
///
/// A maximal `d` satisfies `d <= x < d * lambda(n/d)`, so `Omega(d)` lies
/// between `min_omega_above(x) - 1` and `max_omega_below(x)`. Since `C_k` is
/// unimodal this wider window still yields a valid bound.
pub fn chain_bound(f: &Factorization, x: &BigUint) -> BigUint {
    let omega = f.big_omega();
    let hi = max_omega_below(f, x, false);
    let lo = match min_omega_above(f, x) {
        Some(m) => m.saturating_sub(1),
        None => omega,
    };
    let lo = lo.min(hi);
    let k = (omega / 2).clamp(lo, hi);
    let mut poly = omega_polynomial(f);
    // the nearer of floor and ceil of Omega/2 carry the same coefficient
    poly.swap_remove(k as usize)
}

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::cache::FactorCache;
use super::primality::{is_prime_u64, mul_mod, primality, Certainty};
use super::sieve::small_primes;
use crate::error::{Error, Result};

/// A positive integer as ascending prime powers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
    value: BigUint,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            factors: Vec::new(),
            value: BigUint::one(),
        }
    }

    /// Builds a factorization after checking ordering, exponents and primality.
    pub fn new(factors: Vec<(BigUint, u32)>) -> Result<Self> {
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(Error::InvalidFactorization(format!(
                    "primes not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(Error::InvalidFactorization(format!("zero exponent on {p}")));
            }
            if !primality(p).is_prime {
                return Err(Error::InvalidFactorization(format!("{p} is not prime")));
            }
        }
        Ok(Self::from_verified(factors))
    }

    /// Skips the primality check. Callers guarantee sorted primes and positive exponents.
    pub(crate) fn from_verified(factors: Vec<(BigUint, u32)>) -> Self {
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factorization { factors, value }
    }

    /// Convenience constructor for small primes.
    pub fn from_u64_pairs(pairs: &[(u64, u32)]) -> Result<Self> {
        let mut v: Vec<(BigUint, u32)> = pairs
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|&(p, e)| (BigUint::from(p), e))
            .collect();
        v.sort();
        Self::new(v)
    }

    /// Factorization over the first primes with the given exponent vector
    /// `2^{e0} 3^{e1} 5^{e2} ...`. Zero exponents are skipped.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        let primes = super::sieve::first_primes(exponents.len());
        let v = exponents
            .iter()
            .zip(primes)
            .filter(|(e, _)| **e > 0)
            .map(|(&e, p)| (BigUint::from(p), e))
            .collect();
        Self::from_verified(v)
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct primes.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// Prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.factors.iter().map(|(_, e)| *e as u64).sum()
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, e)| *e).collect()
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn least_prime(&self) -> Option<&BigUint> {
        self.factors.first().map(|(p, _)| p)
    }

    pub fn largest_prime(&self) -> Option<&BigUint> {
        self.factors.last().map(|(p, _)| p)
    }

    /// Primes as `u64` when every one fits.
    pub fn small_primes(&self) -> Option<Vec<(u64, u32)>> {
        self.factors
            .iter()
            .map(|(p, e)| p.to_u64().map(|p| (p, *e)))
            .collect()
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut out: Vec<(BigUint, u32)> = Vec::with_capacity(self.omega() + other.omega());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.factors, &other.factors);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Factorization {
            factors: out,
            value: &self.value * &other.value,
        }
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Factorization) -> Option<Factorization> {
        let mut out = Vec::with_capacity(self.omega());
        let mut j = 0;
        for (p, e) in &self.factors {
            let mut e = *e;
            if j < other.factors.len() && &other.factors[j].0 == p {
                e = e.checked_sub(other.factors[j].1)?;
                j += 1;
            }
            if e > 0 {
                out.push((p.clone(), e));
            }
        }
        if j != other.factors.len() {
            return None;
        }
        Some(Factorization {
            factors: out,
            value: &self.value / &other.value,
        })
    }

    /// Splits off the power of two: `(a, odd part)`.
    pub fn split_two(&self) -> (u32, Factorization) {
        match self.factors.first() {
            Some((p, e)) if *p == BigUint::from(2u32) => (
                *e,
                Factorization::from_verified(self.factors[1..].to_vec()),
            ),
            _ => (0, self.clone()),
        }
    }
}

impl fmt::Debug for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Factorization({self})")
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `(tau, phi)` from a factorization.
pub fn tau_phi(f: &Factorization) -> (BigUint, BigUint) {
    let mut tau = BigUint::one();
    let mut phi = BigUint::one();
    for (p, e) in f.factors() {
        tau *= *e + 1;
        phi *= p.pow(e - 1) * (p - 1u32);
    }
    (tau, phi)
}

/// How hard `factorize` tries before giving up.
#[derive(Clone, Debug)]
pub struct FactorPolicy {
    pub trial_division_bound: u64,
    /// Pollard-Brent iterations per composite cofactor.
    pub pollard_rho_budget: u64,
    pub allow_probable_primes: bool,
    pub cache_path: Option<PathBuf>,
    cache: Option<Arc<FactorCache>>,
}

impl Default for FactorPolicy {
    fn default() -> Self {
        FactorPolicy {
            trial_division_bound: 1 << 16,
            pollard_rho_budget: 1 << 24,
            allow_probable_primes: true,
            cache_path: None,
            cache: None,
        }
    }
}

impl FactorPolicy {
    /// Attaches a cache file, loading and verifying it now.
    pub fn with_cache_file(mut self, path: impl Into<PathBuf>) -> Result<Self> {
        let path = path.into();
        let cache = FactorCache::load(&path)?;
        self.cache_path = Some(path);
        self.cache = Some(Arc::new(cache));
        Ok(self)
    }

    pub fn with_cache(mut self, cache: Arc<FactorCache>) -> Self {
        self.cache_path = cache.path().map(|p| p.to_path_buf());
        self.cache = Some(cache);
        self
    }

    pub fn cache(&self) -> Option<&FactorCache> {
        self.cache.as_deref()
    }
}

/// Complete factorization of `n`, or an error. Never partial.
pub fn factorize(n: &BigUint, policy: &FactorPolicy) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if policy.trial_division_bound < 2 {
        return Err(Error::PreconditionViolated(
            "trial division bound must be at least 2".into(),
        ));
    }
    if let Some(hit) = policy.cache().and_then(|c| c.get(n)) {
        return Ok(hit.clone());
    }
    let mut found: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();

    for &p in small_primes() {
        if p > policy.trial_division_bound {
            break;
        }
        if let Some(r) = rest.to_u64() {
            if p.saturating_mul(p) > r {
                break;
            }
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            found.push((BigUint::from(p), e));
        }
    }

    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(hit) = policy.cache().and_then(|c| c.get(&m)) {
            found.extend(hit.factors().iter().cloned());
            continue;
        }
        let pr = primality(&m);
        if pr.is_prime {
            if pr.certainty == Certainty::Probable && !policy.allow_probable_primes {
                return Err(Error::BudgetExceeded { cofactor: m });
            }
            found.push((m, 1));
            continue;
        }
        let split = match m.to_u64() {
            Some(small) => pollard_brent_u64(small, policy.pollard_rho_budget).map(BigUint::from),
            None => pollard_brent_big(&m, policy.pollard_rho_budget),
        };
        match split {
            Some(d) => {
                let other = &m / &d;
                stack.push(d);
                stack.push(other);
            }
            None => return Err(Error::BudgetExceeded { cofactor: m }),
        }
    }

    found.sort();
    let mut merged: Vec<(BigUint, u32)> = Vec::with_capacity(found.len());
    for (p, e) in found {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    let f = Factorization::from_verified(merged);
    debug_assert_eq!(f.value(), n);
    Ok(f)
}

/// Factors a `u64` completely. Deterministic and always succeeds.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut rest = n;
    for &p in &small_primes()[..1024] {
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push((m, 1));
            continue;
        }
        let d = pollard_brent_u64(m, u64::MAX).expect("unbounded rho splits every composite");
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
    for (p, e) in out {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    merged
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of composite `n`, within `budget` iterations summed over
/// all polynomial constants tried.
fn pollard_brent_u64(n: u64, budget: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1..u64::MAX {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let m = 128u64;
        let mut g = 1;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            ys = y;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            spent += r;
            r *= 2;
            if g != 1 || spent > budget {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

fn pollard_brent_big(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x;
        let mut ys;
        let m = 128u64;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            ys = y.clone();
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            spent += r;
            r *= 2;
            if !g.is_one() || spent > budget {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && &g != n {
            return Some(g);
        }
        if spent > budget {
            return None;
        }
    }
    None
}

//! Failure certificates that need only one of `p - 1`, `p + 1` factored.
//!
//! `M_d >= |M_d(p + side)|`, and the first interval widens on both ends as
//! the count grows. So a divisor `d` of `p + side` with
//! `2 sqrt(2p)/m < d < 81 m^3/4` for any `m <= |M_d(p + side)|` shows the
//! full test is inconclusive.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::endgame::side_value;
use crate::arith::{ln_big, primality_with_rounds, Factorization};
use crate::divisors::{profile_in, tau};
use crate::error::{Error, Result};
use crate::reduction::{for_each_reduced, ReducedNumber};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSideWitness {
    pub d: BigUint,
    pub side: i8,
    /// A lower bound on `|M_d(p + side)|`; exact when `exact` is set.
    pub count: BigUint,
    pub exact: bool,
}

impl OneSideWitness {
    /// Rechecks `8p < d^2 m^2` and `4d < 81 m^3`.
    pub fn holds(&self, p: &BigUint) -> bool {
        let dm = &self.d * &self.count;
        p * 8u32 < &dm * &dm && &self.d * 4u32 < self.count.pow(3) * 81u32
    }
}

/// Above this `tau` the histogram route is used.
pub const EXACT_ROUTE_CAP: u64 = 1 << 12;

/// Looks for a single-side witness. Exact enumeration when `tau(p + side)` is
/// small, otherwise a certified lower bound from a log-bucket histogram.
pub fn certify_failure_one_side(
    p: &BigUint,
    side: i8,
    f: &Factorization,
) -> Result<Option<OneSideWitness>> {
    check_side(p, side, f)?;
    if tau(f) <= BigUint::from(EXACT_ROUTE_CAP) {
        exact_route(p, side, f)
    } else {
        histogram_route(p, side, f)
    }
}

fn check_side(p: &BigUint, side: i8, f: &Factorization) -> Result<()> {
    let n = side_value(p, side)?;
    if f.value() != &n {
        return Err(Error::PreconditionViolated(format!(
            "factorization {f} does not match p{}1",
            if side > 0 { "+" } else { "-" }
        )));
    }
    Ok(())
}

/// Exact route: the witness with the largest `|M_d|`, smallest `d` on ties.
pub fn certify_one_side_exact(
    p: &BigUint,
    side: i8,
    f: &Factorization,
) -> Result<Option<OneSideWitness>> {
    check_side(p, side, f)?;
    exact_route(p, side, f)
}

fn exact_route(p: &BigUint, side: i8, f: &Factorization) -> Result<Option<OneSideWitness>> {
    let prof = profile_in::<BigUint>(f, EXACT_ROUTE_CAP)?.expect("BigUint carrier");
    let mut best: Option<OneSideWitness> = None;
    for (d, m) in prof.entries() {
        let w = OneSideWitness {
            d,
            side,
            count: BigUint::from(m),
            exact: true,
        };
        if w.holds(p) && best.as_ref().is_none_or(|b| w.count > b.count) {
            best = Some(w);
        }
    }
    Ok(best)
}

/// Histogram route, usable at any size. Every divisor in `(x/2, x]` is
/// maximal for `x`, so counting those gives a lower bound on `|M_x(n)|`.
///
/// Logs are floored to integer units of `1/scale` nats. For a divisor `e`
/// the bucket index `A(e)` satisfies `scale ln e - Omega(e)(1 + eps) < A(e)
/// <= scale ln e`, and buckets are only counted when that slack cannot push
/// `e` out of `(x/2, x]`.
pub fn certify_one_side_histogram(
    p: &BigUint,
    side: i8,
    f: &Factorization,
) -> Result<Option<OneSideWitness>> {
    check_side(p, side, f)?;
    histogram_route(p, side, f)
}

struct Histogram {
    scale: f64,
    /// Upper bound on `scale ln e - A(e)` for every divisor `e`.
    slack: f64,
    /// `prefix[h]` counts divisors with bucket index `<= h`.
    prefix: Vec<u128>,
    /// `reach[i]` marks buckets hit by divisors of the first `i` prime powers.
    reach: Vec<Vec<u64>>,
    units: Vec<usize>,
}

impl Histogram {
    fn build(f: &Factorization, cap_ln: f64) -> Self {
        let omega = f.big_omega() as f64;
        let scale = (8.0 * omega / std::f64::consts::LN_2).max(1024.0);
        let slack = omega * (1.0 + 1e-6) + 1e-3;
        let cap = (scale * cap_ln).ceil() as usize + 1;
        let words = cap / 64 + 1;
        let mut hist = vec![0u128; cap];
        hist[0] = 1;
        let mut next = vec![0u128; cap];
        let mut first = vec![0u64; words];
        first[0] = 1;
        let mut reach = vec![first];
        let mut units = Vec::new();
        for (q, a) in f.factors() {
            let u = ((scale * ln_big(q)) - 1e-6).floor().max(1.0) as usize;
            units.push(u);
            let span = (*a as usize + 1) * u;
            let mut bits = vec![0u64; words];
            // next[h] = sum_{i<=a} hist[h - i u], by a running window
            for h in 0..cap {
                let mut v = hist[h];
                if h >= u {
                    v += next[h - u];
                }
                if h >= span {
                    v -= hist[h - span];
                }
                next[h] = v;
                if v > 0 {
                    bits[h / 64] |= 1 << (h % 64);
                }
            }
            std::mem::swap(&mut hist, &mut next);
            reach.push(bits);
        }
        let mut prefix = hist;
        for h in 1..prefix.len() {
            prefix[h] += prefix[h - 1];
        }
        Histogram {
            scale,
            slack,
            prefix,
            reach,
            units,
        }
    }

    /// Certified count of divisors in `(x/2, x]` given bounds on `scale ln x`.
    fn count_between(&self, scaled_ln_x_lo: f64, scaled_ln_x_hi: f64) -> u128 {
        let top = scaled_ln_x_lo - self.slack;
        let bottom = scaled_ln_x_hi - self.scale * std::f64::consts::LN_2 + 1e-3;
        if top < 0.0 || top <= bottom {
            return 0;
        }
        let last = self.prefix.len() - 1;
        let hi = (top.floor() as usize).min(last);
        let below = if bottom < 0.0 {
            0
        } else {
            self.prefix[(bottom.floor() as usize).min(last)]
        };
        self.prefix[hi] - below
    }

    fn reachable(&self, layer: usize, h: usize) -> bool {
        self.reach[layer][h / 64] >> (h % 64) & 1 == 1
    }

    /// Exponents of a divisor whose bucket index is exactly `h`.
    fn divisor_at(&self, f: &Factorization, mut h: usize) -> Vec<u32> {
        let mut exps = vec![0u32; self.units.len()];
        for i in (0..self.units.len()).rev() {
            let u = self.units[i];
            let a = f.factors()[i].1;
            let e = (0..=a)
                .find(|&e| {
                    let step = e as usize * u;
                    step <= h && self.reachable(i, h - step)
                })
                .expect("bucket reachable at this layer");
            exps[i] = e;
            h -= e as usize * u;
        }
        exps
    }
}

fn histogram_route(p: &BigUint, side: i8, f: &Factorization) -> Result<Option<OneSideWitness>> {
    let t = tau(f);
    if t.bits() > 127 {
        return Err(Error::CapExceeded {
            what: "tau(p+-1) for 128-bit histogram counts",
            size: t,
            cap: u64::MAX,
        });
    }
    let ln_n = ln_big(f.value());
    let ln_tau = ln_big(&tau(f));
    let ln_p = ln_big(p);
    // a witness needs 4d < 81 tau^3, so larger buckets never matter
    let cap_ln = ln_n.min((81.0f64 / 4.0).ln() + 3.0 * ln_tau) + 1.0;
    let hist = Histogram::build(f, cap_ln);
    let s = hist.scale;
    let last = hist.reach.len() - 1;

    // rank candidate buckets by worst-case slack in both inequalities; a
    // bucket below sqrt(8p)/tau can never satisfy the first
    let h_min = (s * (0.5 * (8f64.ln() + ln_p) - ln_tau)).max(0.0) as usize;
    let mut ranked: Vec<(f64, usize)> = Vec::new();
    for h in h_min..hist.prefix.len() {
        if !hist.reachable(last, h) {
            continue;
        }
        let ln_d_lo = h as f64 / s;
        let ln_d_hi = (h as f64 + hist.slack) / s;
        let m = hist.count_between(h as f64, h as f64 + hist.slack);
        if m == 0 {
            continue;
        }
        let ln_m = (m as f64).ln();
        let a = 2.0 * (ln_d_lo + ln_m) - (8f64.ln() + ln_p);
        let b = 81f64.ln() + 3.0 * ln_m - (4f64.ln() + ln_d_hi);
        let margin = a.min(b);
        if margin > 0.0 {
            ranked.push((margin, h));
        }
    }
    // the best bucket almost always verifies; sort only if it does not
    if let Some(&best) = ranked.iter().max_by(|x, y| x.0.total_cmp(&y.0)) {
        if let Some(w) = verify_bucket(&hist, p, side, f, best.1) {
            return Ok(Some(w));
        }
    }
    ranked.sort_by(|x, y| y.0.total_cmp(&x.0));
    for &(_, h) in ranked.iter().take(16) {
        if let Some(w) = verify_bucket(&hist, p, side, f, h) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn verify_bucket(
    hist: &Histogram,
    p: &BigUint,
    side: i8,
    f: &Factorization,
    h: usize,
) -> Option<OneSideWitness> {
    let exps = hist.divisor_at(f, h);
    let d = f
        .factors()
        .iter()
        .zip(&exps)
        .fold(BigUint::from(1u32), |acc, ((q, _), e)| acc * q.pow(*e));
    let ln_d = ln_big(&d);
    let s = hist.scale;
    let m = hist.count_between(s * ln_d - 1e-6, s * ln_d + 1e-6);
    let w = OneSideWitness {
        d,
        side,
        count: BigUint::from(m),
        exact: false,
    };
    (m > 0 && w.holds(p)).then_some(w)
}

/// A prime next to a reduced number: `p + side` is reduced for each listed side.
#[derive(Clone, Debug)]
pub struct AdjacentPrime {
    pub p: BigUint,
    pub sides: Vec<(i8, ReducedNumber)>,
}

/// Primes `p < limit` with `p - 1` or `p + 1` reduced, ascending. Primality
/// uses `rounds` Miller-Rabin rounds above `2^64`.
pub fn reduced_adjacent_primes(limit: &BigUint, rounds: usize) -> Vec<AdjacentPrime> {
    let mut found: BTreeMap<BigUint, Vec<(i8, ReducedNumber)>> = BTreeMap::new();
    for_each_reduced(limit, |r| {
        let n = r.value();
        if n > &BigUint::from(3u32) {
            let below = n - 1u32;
            if primality_with_rounds(&below, rounds).is_prime {
                found.entry(below).or_default().push((1, r.clone()));
            }
        }
        let above = n + 1u32;
        if &above < limit && primality_with_rounds(&above, rounds).is_prime {
            found.entry(above).or_default().push((-1, r));
        }
    });
    found
        .into_iter()
        .map(|(p, mut sides)| {
            sides.sort_by_key(|(s, _)| *s);
            AdjacentPrime { p, sides }
        })
        .collect()
}

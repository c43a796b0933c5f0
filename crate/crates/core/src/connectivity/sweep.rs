//! Interval sweep over reduced numbers certifying every prime in `(a, b]`.
//!
//! For a reduced `n`, let `k = floor(Omega(n)/2)`. While `n + 2 < 8 (3 C_k(n))^8`
//! the first interval of the maximal-divisor test may still be nonempty, so
//! `k` is lowered to `j = max{Omega(d) : d | n, d < 162 C_k(n)^3}`. If `j >= k`
//! no progress is possible and every prime below `n + 1` stays uncertified.

use num_bigint::BigUint;
use num_traits::One;

use crate::arith::{ln_big, Factorization};
use crate::divisors::{max_omega_below, mul_geometric_f64, omega_polynomial};
use crate::reduction::{for_each_reduced, walk_reduced, OddPart, OddPartVisitor};

/// Result of a sweep: all primes `a < p <= b` are certified.
#[derive(Clone, Debug)]
pub struct SweepState {
    pub a: BigUint,
    pub b: BigUint,
    pub stats: SweepStats,
}

#[derive(Clone, Debug, Default)]
pub struct SweepStats {
    /// Reduced `n` in the swept window.
    pub examined: u64,
    /// Those for which the loop ended with `j >= k`.
    pub failing: u64,
    /// Decisions too close to call in `f64`, redone exactly.
    pub exact_fallbacks: u64,
    /// Exponents `[a_1, a_2, ...]` of the largest failing `n`.
    pub largest_failing: Option<Vec<u32>>,
}

/// Whether the loop for `n` ends with `j >= k`. Exact big-integer arithmetic.
pub fn reduced_number_fails(f: &Factorization) -> bool {
    let n = f.value();
    let poly = omega_polynomial(f);
    let mut k = f.big_omega() / 2;
    loop {
        let c = &poly[k as usize];
        let bound = (c * 3u32).pow(8) * 8u32;
        if n + 2u32 >= bound {
            return false;
        }
        let x = c.pow(3) * 162u32;
        let j = max_omega_below(f, &x, true);
        if j >= k {
            return true;
        }
        k = j;
    }
}

/// Reference sweep that decides every reduced `n` exactly. Materializes each
/// number, so it is only practical for moderate `b`.
pub fn algorithm1_sweep_exact(a: &BigUint, b: &BigUint) -> SweepState {
    let hi = upper_limit(b);
    let mut stats = SweepStats::default();
    let mut best: Option<(BigUint, Vec<u32>)> = None;
    for_each_reduced(&hi, |r| {
        if r.value() < a {
            return;
        }
        stats.examined += 1;
        if reduced_number_fails(&r.factorization) {
            stats.failing += 1;
            if best.as_ref().is_none_or(|(v, _)| r.value() > v) {
                best = Some((r.value().clone(), r.exponents.clone()));
            }
        }
    });
    finish(a, b, stats, best)
}

/// Sweep with `f64` log-domain decisions and an exact fallback near every
/// boundary. Agrees with [`algorithm1_sweep_exact`].
pub fn algorithm1_sweep(a: &BigUint, b: &BigUint) -> SweepState {
    let hi = upper_limit(b);
    let mut v = FastVisitor {
        lower: a.clone(),
        lower_ln: ln_big(a),
        polys: vec![vec![1.0]],
        logs: vec![0.0],
        marks: Vec::new(),
        ln_m: vec![0.0],
        stats: SweepStats::default(),
        best: None,
        scratch: Vec::new(),
    };
    walk_reduced(&hi, &mut v);
    let best = v.best.map(|(_, exps)| {
        let n = Factorization::from_exponents(&exps).value().clone();
        (n, exps)
    });
    finish(a, b, v.stats, best)
}

fn upper_limit(b: &BigUint) -> BigUint {
    let four_b = b * 4u32;
    if four_b < BigUint::from(2u32) {
        return BigUint::from(0u32);
    }
    four_b - 2u32
}

fn finish(
    a: &BigUint,
    b: &BigUint,
    mut stats: SweepStats,
    best: Option<(BigUint, Vec<u32>)>,
) -> SweepState {
    let mut out = a.clone();
    if let Some((n, exps)) = best {
        let next = n + BigUint::one();
        if next > out {
            out = next;
        }
        stats.largest_failing = Some(exps);
    }
    SweepState {
        a: out,
        b: b.clone(),
        stats,
    }
}

const LN2: f64 = std::f64::consts::LN_2;
/// Log-domain decisions closer than this are redone exactly.
const MARGIN: f64 = 1e-8;
/// Below this `ln n` everything is decided exactly; it is cheap and avoids
/// the `n + 2` versus `n` approximation.
const SMALL_LN: f64 = 100.0;

struct FastVisitor {
    lower: BigUint,
    lower_ln: f64,
    /// Omega polynomial of the current odd part, one entry per depth.
    polys: Vec<Vec<f64>>,
    /// `logs[t]` is the log of the product of the `t` smallest odd primes of
    /// the current odd part, with multiplicity.
    logs: Vec<f64>,
    marks: Vec<usize>,
    ln_m: Vec<f64>,
    stats: SweepStats,
    best: Option<(f64, Vec<u32>)>,
    scratch: Vec<f64>,
}

enum Call {
    Fails,
    Passes,
    Unsure,
}

impl FastVisitor {
    fn decide(&self, a1: u32, ln_n: f64) -> Call {
        if ln_n < SMALL_LN {
            return Call::Unsure;
        }
        let poly = self.polys.last().expect("root poly");
        let om = poly.len() - 1;
        let two_log = a1 as f64 * LN2;
        let mut k = (a1 as usize + om) / 2;
        loop {
            // C_k(2^{a1} m) = sum of P[k - a1 ..= k]
            let lo = k.saturating_sub(a1 as usize);
            let hi = k.min(om);
            let c: f64 = if lo > hi { 0.0 } else { poly[lo..=hi].iter().sum() };
            let l = c.ln();
            let rhs = 8f64.ln() + 8.0 * (3f64.ln() + l);
            if (ln_n - rhs).abs() < MARGIN {
                return Call::Unsure;
            }
            if ln_n > rhs {
                return Call::Passes;
            }
            let ln_x = 162f64.ln() + 3.0 * l;
            let j = if two_log < ln_x {
                let target = ln_x - two_log;
                // count of t >= 1 with logs[t] < target
                let s = self.logs.partition_point(|&v| v < target) - 1;
                let near = |t: usize| self.logs.get(t).is_some_and(|&v| (v - target).abs() < MARGIN);
                if near(s) || near(s + 1) || (two_log - ln_x).abs() < MARGIN {
                    return Call::Unsure;
                }
                a1 as usize + s
            } else {
                let t = (ln_x / LN2).ceil() as usize - 1;
                if (t as f64 * LN2 - ln_x).abs() < MARGIN
                    || ((t + 1) as f64 * LN2 - ln_x).abs() < MARGIN
                {
                    return Call::Unsure;
                }
                t.min(a1 as usize)
            };
            if j >= k {
                return Call::Fails;
            }
            k = j;
        }
    }

    fn record_failure(&mut self, exps: Vec<u32>, ln_n: f64) {
        self.stats.failing += 1;
        let better = match &self.best {
            None => true,
            Some((b, _)) if ln_n > b + MARGIN => true,
            Some((b, _)) if ln_n < b - MARGIN => false,
            Some((_, old)) => {
                Factorization::from_exponents(&exps).value()
                    > Factorization::from_exponents(old).value()
            }
        };
        if better {
            self.best = Some((ln_n, exps));
        }
    }
}

impl OddPartVisitor for FastVisitor {
    fn push(&mut self, prime: u64, exponent: u32) {
        let top = self.polys.last().expect("root poly");
        mul_geometric_f64(top, exponent, &mut self.scratch);
        let next = std::mem::take(&mut self.scratch);
        self.polys.push(next);
        self.marks.push(self.logs.len());
        let lp = (prime as f64).ln();
        let mut acc = *self.logs.last().expect("root log");
        for _ in 0..exponent {
            acc += lp;
            self.logs.push(acc);
        }
        let m = self.ln_m.last().expect("root") + exponent as f64 * lp;
        self.ln_m.push(m);
    }

    fn pop(&mut self) {
        if let Some(v) = self.polys.pop() {
            self.scratch = v;
        }
        let mark = self.marks.pop().expect("balanced push/pop");
        self.logs.truncate(mark);
        self.ln_m.pop();
    }

    fn visit(&mut self, part: &OddPart<'_>) {
        let ln_m = *self.ln_m.last().expect("root");
        for a1 in 0..=part.max_two_exponent {
            let ln_n = a1 as f64 * LN2 + ln_m;
            let exps = || {
                let mut e = Vec::with_capacity(part.exponents.len() + 1);
                e.push(a1);
                e.extend_from_slice(part.exponents);
                e
            };
            if ln_n < self.lower_ln + MARGIN {
                let n = part.value << a1;
                if n < self.lower {
                    continue;
                }
            }
            self.stats.examined += 1;
            let fails = match self.decide(a1, ln_n) {
                Call::Fails => true,
                Call::Passes => false,
                Call::Unsure => {
                    if ln_n >= SMALL_LN {
                        self.stats.exact_fallbacks += 1;
                    }
                    reduced_number_fails(&Factorization::from_exponents(&exps()))
                }
            };
            if fails {
                self.record_failure(exps(), ln_n);
            }
        }
    }
}

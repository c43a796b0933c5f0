//! Per-prime connectivity test by counting divisors of `p - 1` and `p + 1`.
//!
//! With `X_d` either `T_d` (all divisors `<= d`) or `M_d` (maximal divisors
//! w.r.t. `d`), summed over both sides, the graph is connected unless some
//! divisor `d` of `p - 1` or `p + 1` satisfies
//!
//! 1. `2 sqrt(2p) / X_d < d < 81 X_d^3 / 4`, or
//! 2. `p / (6 X_d) < d < E(p +- 1)`, the end-game bound of its side.
//!
//! All comparisons are exact: the first interval is squared to
//! `8p < d^2 X_d^2` and `4d < 81 X_d^3`.

use num_bigint::BigUint;

use super::endgame::{endgame_bound, EndGameBound};
use super::nicolas::second_interval_vacuous;
use crate::arith::Factorization;
use crate::divisors::{profile_in, DivValue, DivisorProfile, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Td,
    Md,
}

/// How the two sides' counts are combined. `Sum` adds them;
/// `Union` counts the shared divisors 1 and 2 once.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Combine {
    #[default]
    Sum,
    Union,
}

#[derive(Clone, Copy, Debug)]
pub struct TestOptions {
    pub mode: Mode,
    pub combine: Combine,
    /// Largest `tau(p - 1) * tau(p + 1)` accepted.
    pub enumeration_cap: u64,
}

impl Default for TestOptions {
    fn default() -> Self {
        TestOptions {
            mode: Mode::Md,
            combine: Combine::Sum,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl TestOptions {
    pub fn mode(mode: Mode) -> Self {
        TestOptions {
            mode,
            ..TestOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Connected,
    Inconclusive,
}

/// A divisor inside one of the two intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub d: BigUint,
    /// `-1` for `p - 1`, `+1` for `p + 1`. Divisors of both report the side
    /// whose check failed first.
    pub side: i8,
    /// 1 or 2.
    pub interval: u8,
    /// `T_d` or `M_d`.
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub p: BigUint,
    pub mode: Mode,
    pub combine: Combine,
    pub outcome: Outcome,
    /// One entry per failing divisor, ascending in `d`.
    pub witnesses: Vec<Witness>,
    pub max_count: u64,
    pub second_interval_skipped: bool,
    pub endgame: [EndGameBound; 2],
}

impl Verdict {
    pub fn failing_count(&self) -> usize {
        self.witnesses.len()
    }

    /// A failing divisor attaining the largest count, smallest such `d`.
    pub fn max_witness(&self) -> Option<&Witness> {
        self.witnesses
            .iter()
            .filter(|w| w.count == self.max_count)
            .min_by(|a, b| a.d.cmp(&b.d))
    }

    /// Rechecks a witness's inequalities from scratch.
    pub fn witness_holds(&self, w: &Witness) -> bool {
        let x = BigUint::from(w.count);
        match w.interval {
            1 => first_interval(&self.p, &w.d, &x),
            2 => {
                let e = if w.side < 0 { &self.endgame[0] } else { &self.endgame[1] };
                second_lower(&self.p, &w.d, &x) && e.admits(&w.d)
            }
            _ => false,
        }
    }
}

fn first_interval(p: &BigUint, d: &BigUint, x: &BigUint) -> bool {
    let dx = d * x;
    let eight_p: BigUint = p * 8u32;
    eight_p < &dx * &dx && d * 4u32 < x.pow(3) * 81u32
}

fn second_lower(p: &BigUint, d: &BigUint, x: &BigUint) -> bool {
    p < &(d * x * 6u32)
}

/// Runs the test for an odd prime `p` given both factorizations.
pub fn test_prime(
    p: &BigUint,
    f_minus: &Factorization,
    f_plus: &Factorization,
    opts: &TestOptions,
) -> Result<Verdict> {
    if p < &BigUint::from(3u32) || !p.bit(0) {
        return Err(Error::Domain(format!("need an odd prime, got {p}")));
    }
    let lo = endgame_bound(p, -1, f_minus)?;
    let hi = endgame_bound(p, 1, f_plus)?;
    let tau_product = lo.tau() * hi.tau();
    if tau_product > BigUint::from(opts.enumeration_cap) {
        return Err(Error::CapExceeded {
            what: "tau(p-1)*tau(p+1)",
            size: tau_product,
            cap: opts.enumeration_cap,
        });
    }
    let cap = opts.enumeration_cap;
    if let (Some(m), Some(pl)) = (profile_in::<u128>(f_minus, cap)?, profile_in::<u128>(f_plus, cap)?)
    {
        return Ok(run(p, f_minus, f_plus, &m, &pl, [lo, hi], opts));
    }
    let m = profile_in::<BigUint>(f_minus, cap)?.expect("BigUint carrier");
    let pl = profile_in::<BigUint>(f_plus, cap)?.expect("BigUint carrier");
    Ok(run(p, f_minus, f_plus, &m, &pl, [lo, hi], opts))
}

fn run<T: DivValue>(
    p: &BigUint,
    f_minus: &Factorization,
    f_plus: &Factorization,
    minus: &DivisorProfile<T>,
    plus: &DivisorProfile<T>,
    endgame: [EndGameBound; 2],
    opts: &TestOptions,
) -> Verdict {
    let skip_second = second_interval_vacuous(p);
    let count = |d: &T| -> u64 {
        let (a, b) = match opts.mode {
            Mode::Md => (minus.count_at(d), plus.count_at(d)),
            Mode::Td => (
                minus.divisors().partition_point(|v| v <= d) as u64,
                plus.divisors().partition_point(|v| v <= d) as u64,
            ),
        };
        a + b
    };

    // every divisor once, tagged with the sides it divides
    let mut all: Vec<(T, bool, bool)> = Vec::with_capacity(minus.divisors().len() + plus.divisors().len());
    let (mut i, mut j) = (0, 0);
    let (dm, dp) = (minus.divisors(), plus.divisors());
    while i < dm.len() || j < dp.len() {
        match (dm.get(i), dp.get(j)) {
            (Some(a), Some(b)) if a == b => {
                all.push((a.clone(), true, true));
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                all.push((a.clone(), true, false));
                i += 1;
            }
            (Some(a), None) => {
                all.push((a.clone(), true, false));
                i += 1;
            }
            (_, Some(b)) => {
                all.push((b.clone(), false, true));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }

    let mut witnesses = Vec::new();
    let mut max_count = 0;
    for (d, in_minus, in_plus) in &all {
        let mut x = count(d);
        let db = d.to_big();
        if opts.combine == Combine::Union && *in_minus && *in_plus {
            x -= shared_members(&db, f_minus, f_plus, opts.mode);
        }
        let xb = BigUint::from(x);
        let side_first = if *in_minus { -1 } else { 1 };
        let mut hit = None;
        if first_interval(p, &db, &xb) {
            hit = Some((side_first, 1));
        } else if !skip_second && second_lower(p, &db, &xb) {
            if *in_minus && endgame[0].admits(&db) {
                hit = Some((-1, 2));
            } else if *in_plus && endgame[1].admits(&db) {
                hit = Some((1, 2));
            }
        }
        if let Some((side, interval)) = hit {
            max_count = max_count.max(x);
            witnesses.push(Witness {
                d: db,
                side,
                interval,
                count: x,
            });
        }
    }
    Verdict {
        p: p.clone(),
        mode: opts.mode,
        combine: opts.combine,
        outcome: if witnesses.is_empty() {
            Outcome::Connected
        } else {
            Outcome::Inconclusive
        },
        witnesses,
        max_count,
        second_interval_skipped: skip_second,
        endgame,
    }
}

/// How many of the common values `1, 2` are counted on both sides at `d`.
fn shared_members(d: &BigUint, f_minus: &Factorization, f_plus: &Factorization, mode: Mode) -> u64 {
    let mut shared = 0;
    for v in [1u32, 2] {
        let v = BigUint::from(v);
        if &v > d {
            continue;
        }
        let counted = |f: &Factorization| -> bool {
            match mode {
                Mode::Td => f.value() % &v == BigUint::from(0u32),
                Mode::Md => is_maximal_member(f, &v, d),
            }
        };
        if counted(f_minus) && counted(f_plus) {
            shared += 1;
        }
    }
    shared
}

fn is_maximal_member(f: &Factorization, v: &BigUint, x: &BigUint) -> bool {
    let n = f.value();
    if n % v != BigUint::from(0u32) || v > x {
        return false;
    }
    if v == n {
        return true;
    }
    let rest = n / v;
    let lambda = f
        .factors()
        .iter()
        .map(|(q, _)| q)
        .find(|q| (&rest % *q) == BigUint::from(0u32))
        .expect("rest > 1 has a prime factor of n");
    v * lambda > *x
}

//! Explicit divisor-count bound and the two analytic inequalities that make
//! the interval tests vacuous for very large primes.

use num_bigint::BigUint;

use crate::arith::ln_big;
use crate::error::{Error, Result};

/// Relative upward nudge on returned logarithms.
const UPWARD: f64 = 1e-12;

/// `ln` of the bound `exp(ln 2 ln n / ln ln n + 1.342 ln n / (ln ln n)^2)` on
/// `tau(n)`, rounded up. The bound itself overflows `f64` long before the
/// inputs of interest, so only its logarithm is returned.
pub fn nicolas_tau_bound(n: &BigUint) -> Result<f64> {
    if n < &BigUint::from(16u32) {
        return Err(Error::Domain("need n >= 16 so that ln ln n > 1".into()));
    }
    Ok(nicolas_ln_bound(ln_big(n)))
}

/// The same bound given `ln n` directly.
pub fn nicolas_ln_bound(ln_n: f64) -> f64 {
    let ll = ln_n.ln();
    let v = std::f64::consts::LN_2 * ln_n / ll + 1.342 * ln_n / (ll * ll);
    v * (1.0 + UPWARD)
}

/// Outcome of one analytic inequality: both sides in log form.
#[derive(Clone, Copy, Debug)]
pub struct AnalyticCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl AnalyticCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// `2 ln(81 sqrt 2) <= ln p (1 - 8 ln 2/ln ln p - 10.736/(ln ln p)^2)`, which
/// with `T_d < 2 B(p)` makes `81 T_d^3 / 4 <= 2 sqrt(2p) / T_d`.
pub fn first_interval_closed_form(ln_p: f64) -> AnalyticCheck {
    let ll = ln_p.ln();
    let lhs = 2.0 * (81.0 * 2f64.sqrt()).ln();
    let rhs = ln_p * (1.0 - 8.0 * std::f64::consts::LN_2 / ll - 10.736 / (ll * ll));
    AnalyticCheck { lhs, rhs }
}

/// The first-interval inequality evaluated directly from the divisor bound:
/// `ln 81 + 4 ln T <= ln 8 + ln(2)/2 + ln(p)/2` with `ln T = ln 2 + ln B(p)`.
pub fn first_interval_direct(ln_p: f64) -> AnalyticCheck {
    let ln_t = std::f64::consts::LN_2 + nicolas_ln_bound(ln_p);
    AnalyticCheck {
        lhs: 81f64.ln() + 4.0 * ln_t,
        rhs: 8f64.ln() + 0.5 * 2f64.ln() + 0.5 * ln_p,
    }
}

/// `8 sqrt(p) (p+-1) tau / phi <= p / (6 T_d)` using `tau(p+-1) <= B(p+1)`,
/// `T_d < 2 B(p)` and `phi(p+-1) > p / (2 ln ln p)`.
pub fn second_interval_direct(ln_p: f64) -> AnalyticCheck {
    let ll = ln_p.ln();
    // p + 1 <= p (1 + 1e-9) for every p this is applied to
    let ln_tau = nicolas_ln_bound(ln_p + 1e-9);
    let ln_t = std::f64::consts::LN_2 + nicolas_ln_bound(ln_p);
    // 8 sqrt(p) * (p+1) * 2 ln ln p / p * tau * 6 T <= p
    let lhs = 96f64.ln() + 0.5 * ln_p + 1e-9 + (ll).ln() + ln_tau + ln_t;
    AnalyticCheck { lhs, rhs: ln_p }
}

/// Whether the second interval is provably empty at `p`, so the per-divisor
/// check can be skipped. Only claimed above `10^141`.
pub fn second_interval_vacuous(p: &BigUint) -> bool {
    let ln_p = ln_big(p);
    ln_p > 141.0 * std::f64::consts::LN_10 && second_interval_direct(ln_p).holds()
}

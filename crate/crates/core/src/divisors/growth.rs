//! Normalized growth of `|M_{n^a}(n)|` and of `#{d | n : d <= n^a}`.
//!
//! Both logs are compared against `H(a) ln n / ln ln n` with
//! `H(a) = -a ln a - (1 - a) ln(1 - a)`.

use num_bigint::BigUint;

use super::{chain_bound, count_divisors_up_to, maximal_divisors, split_count_up_to, tau};
use crate::arith::{ln_big, Factorization};

/// `-a ln a - (1 - a) ln(1 - a)`.
pub fn entropy(alpha: f64) -> f64 {
    let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    h(alpha) + h(1.0 - alpha)
}

/// `floor(n^(num/den))`.
pub fn root_floor(n: &BigUint, num: u32, den: u32) -> BigUint {
    n.pow(num).nth_root(den)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSample {
    pub alpha: f64,
    pub ln_n: f64,
    /// Log of the count, or of the surrogate when `exact` is false.
    pub ln_count: f64,
    pub exact: bool,
    pub ratio: f64,
}

impl GrowthSample {
    fn new(alpha: f64, ln_n: f64, ln_count: f64, exact: bool) -> Self {
        let scale = entropy(alpha) * ln_n / ln_n.ln();
        GrowthSample {
            alpha,
            ln_n,
            ln_count,
            exact,
            ratio: ln_count / scale,
        }
    }

    /// `|ratio - 1| ln ln n`, the constant this sample forces on a
    /// `1 +- c / ln ln n` envelope.
    pub fn implied_constant(&self) -> f64 {
        (self.ratio - 1.0).abs() * self.ln_n.ln()
    }
}

/// `|M_x(n)|` at `x = floor(n^(num/den))`, counted exactly when
/// `tau(n) <= exact_cap` and replaced by the chain bound otherwise.
pub fn maximal_growth(f: &Factorization, num: u32, den: u32, exact_cap: u64) -> GrowthSample {
    let n = f.value();
    let x = root_floor(n, num, den);
    let (count, exact) = if tau(f) <= BigUint::from(exact_cap) {
        (BigUint::from(maximal_divisors(f, &x).len()), true)
    } else {
        (chain_bound(f, &x), false)
    };
    GrowthSample::new(num as f64 / den as f64, ln_big(n), ln_big(&count), exact)
}

/// `#{d | n : d <= n^(num/den)}`, exact. `None` when neither the lattice walk
/// nor the split count fits under `cap` divisors.
pub fn below_growth(f: &Factorization, num: u32, den: u32, cap: u64) -> Option<GrowthSample> {
    let n = f.value();
    let x = root_floor(n, num, den);
    let count = if tau(f) <= BigUint::from(cap) {
        count_divisors_up_to(f, &x)
    } else {
        split_count_up_to(f, &x, cap)?
    };
    Some(GrowthSample::new(
        num as f64 / den as f64,
        ln_big(n),
        ln_big(&count),
        true,
    ))
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    })
}

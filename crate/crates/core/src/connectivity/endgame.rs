//! Order threshold above which a triple is known to lie in the giant component.

use num_bigint::BigUint;

use crate::arith::{ln_big, tau_phi, Factorization};
use crate::error::{Error, Result};

/// `8 sqrt(p) (p + side) tau(p + side) / phi(p + side)` for one side.
///
/// `value` is an `f64` nudged upward for display. Membership tests use
/// [`EndGameBound::admits`], which is exact.
#[derive(Clone, Debug)]
pub struct EndGameBound {
    pub p: BigUint,
    pub side: i8,
    pub value: f64,
    n: BigUint,
    tau: BigUint,
    phi: BigUint,
    /// `64 p n^2 tau^2`, the square of the numerator.
    rhs_sq: BigUint,
}

impl EndGameBound {
    /// Whether `d` is strictly below the bound, decided by squaring.
    pub fn admits(&self, d: &BigUint) -> bool {
        let lhs = d * &self.phi;
        &lhs * &lhs < self.rhs_sq
    }

    pub fn tau(&self) -> &BigUint {
        &self.tau
    }

    pub fn phi(&self) -> &BigUint {
        &self.phi
    }

    pub fn modulus(&self) -> &BigUint {
        &self.n
    }
}

/// Relative upward nudge applied to the floating value.
const UPWARD: f64 = 1e-12;

pub fn endgame_bound(p: &BigUint, side: i8, f: &Factorization) -> Result<EndGameBound> {
    let n = side_value(p, side)?;
    if f.value() != &n {
        return Err(Error::PreconditionViolated(format!(
            "factorization {f} is not p{}1",
            if side > 0 { "+" } else { "-" }
        )));
    }
    let (tau, phi) = tau_phi(f);
    let ln = 8f64.ln() + 0.5 * ln_big(p) + ln_big(&n) + ln_big(&tau) - ln_big(&phi);
    let value = ln.exp() * (1.0 + UPWARD);
    let rhs_sq = BigUint::from(64u32) * p * &n * &n * &tau * &tau;
    Ok(EndGameBound {
        p: p.clone(),
        side,
        value,
        n,
        tau,
        phi,
        rhs_sq,
    })
}

pub(crate) fn side_value(p: &BigUint, side: i8) -> Result<BigUint> {
    match side {
        1 => Ok(p + 1u32),
        -1 if p >= &BigUint::from(2u32) => Ok(p - 1u32),
        _ => Err(Error::Domain(format!("side must be +1 or -1, got {side}"))),
    }
}

//! Connectivity certification for Markoff graphs modulo primes, built on a
//! maximal-divisor criterion, together with the divisor-lattice, reduced-number
//! and brute-force machinery it depends on.

pub mod arith;
pub mod connectivity;
pub mod divisors;
pub mod error;
pub mod markoff;
pub mod reduction;

pub use error::{Error, Result};

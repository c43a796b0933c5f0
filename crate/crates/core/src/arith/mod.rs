//! Integer services: primality, factoring, primorials and the expression syntax.

pub mod cache;
pub mod expr;
pub mod factor;
pub mod primality;
pub mod sieve;

pub use num_bigint::BigUint as BigNat;

pub use cache::FactorCache;
pub use expr::{abbreviate_decimal, parse_primorial_expr, render_primorial};
pub use factor::{factorize, factorize_u64, tau_phi, FactorPolicy, Factorization};
pub use primality::{
    is_prime, is_prime_u64, next_prime, primality, primality_with_rounds, Certainty, Primality,
    PROBABLE_ROUNDS,
};
pub use sieve::{first_primes, primes_up_to, primorial, small_primes, SpfSieve};

/// Integer square root, floor.
pub fn isqrt(n: &BigNat) -> BigNat {
    n.sqrt()
}

/// Natural log of a big integer, accurate to about 1e-15 relative.
pub fn ln_big(n: &BigNat) -> f64 {
    use num_traits::ToPrimitive;
    let shift = n.bits().saturating_sub(64);
    let top = (n >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

//! Certifying connectivity of Markoff graphs modulo primes.

mod endgame;
mod nicolas;
mod one_side;
mod sweep;
mod verdict;

pub use endgame::{endgame_bound, EndGameBound};
pub use nicolas::{
    first_interval_closed_form, first_interval_direct, nicolas_ln_bound, nicolas_tau_bound,
    second_interval_direct, second_interval_vacuous, AnalyticCheck,
};
pub use one_side::{
    certify_failure_one_side, certify_one_side_exact, certify_one_side_histogram,
    reduced_adjacent_primes, AdjacentPrime, OneSideWitness, EXACT_ROUTE_CAP,
};
pub use sweep::{
    algorithm1_sweep, algorithm1_sweep_exact, reduced_number_fails, SweepState, SweepStats,
};
pub use verdict::{test_prime, Combine, Mode, Outcome, TestOptions, Verdict, Witness};

//! Reduced numbers and the reducing maps that carry an arbitrary `n` to one.

mod construct;
mod enumerate;
mod reduced;
mod reducing;

pub use construct::{
    normalize_odd_part, odd_part_reduction, reduce_to_reduced, reduction_steps, Reduction,
    ShiftMove,
};
pub use enumerate::{
    count_reduced, count_reduced_with_odd_parts, enumerate_reduced, for_each_reduced, for_each_reduced_between,
    walk_reduced, OddPart, OddPartVisitor,
};
pub use reduced::{is_reduced, ReducedNumber};
pub use reducing::{
    compose_reducing, make_exponent_shift, make_two_adic, product_reducing, verify_reducing,
    Clause, ReducingFunctionSpec, Violation, VERIFY_CAP,
};

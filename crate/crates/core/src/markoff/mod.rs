//! Markoff mod-`p` graphs: solutions of `x^2 + y^2 + z^2 = xyz` over `F_p`
//! joined by the Vieta involutions, built by exhaustive scan for small `p`.

mod field;
mod graph;
mod orbit;

pub use field::{Field, Fp2};
pub use graph::{
    apply_involution, build_graph, build_graph_with_cap, parameterization_round_trip,
    MarkoffGraph, MarkoffTriple, RoundTrip, DEFAULT_GRAPH_CAP,
};
pub use orbit::{
    corvaja_bound, corvaja_class_count, count_from_orders, fibonacci_orbit,
    fibonacci_orbit_check, field_from, orbit_orders, orbit_orders_with, orbit_seed, trace_order_table, triple_order, triple_order_in,
    CorvajaCount, FibonacciOrbit, TripleOrder,
};

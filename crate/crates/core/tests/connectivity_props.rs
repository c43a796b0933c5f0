mod common;

use std::collections::BTreeSet;

use common::fac;
use markoff_core::arith::{primes_up_to, Factorization};
use markoff_core::connectivity::{
    algorithm1_sweep, algorithm1_sweep_exact, certify_failure_one_side, certify_one_side_exact,
    certify_one_side_histogram, reduced_adjacent_primes, test_prime, EXACT_ROUTE_CAP, Mode, Outcome, TestOptions,
    Verdict,
};
use markoff_core::markoff::build_graph;
use num_bigint::BigUint;

fn run(p: u64, mode: Mode) -> (Verdict, Factorization, Factorization) {
    let (fm, fp) = (fac(p - 1), fac(p + 1));
    let v = test_prime(&BigUint::from(p), &fm, &fp, &TestOptions::mode(mode)).unwrap();
    (v, fm, fp)
}

#[test]
fn md_dominates_td_and_witnesses_recheck() {
    for p in primes_up_to(200_000).into_iter().skip(1) {
        let (md, _, _) = run(p, Mode::Md);
        let (td, _, _) = run(p, Mode::Td);
        if td.outcome == Outcome::Connected {
            assert_eq!(md.outcome, Outcome::Connected, "p = {p}");
        }
        let md_d: BTreeSet<&BigUint> = md.witnesses.iter().map(|w| &w.d).collect();
        let td_d: BTreeSet<&BigUint> = td.witnesses.iter().map(|w| &w.d).collect();
        assert!(md_d.is_subset(&td_d), "p = {p}");
        for v in [&md, &td] {
            assert_eq!(v.outcome == Outcome::Connected, v.witnesses.is_empty());
            for w in &v.witnesses {
                assert!(v.witness_holds(w), "p = {p}, {w:?}");
            }
        }
    }
}

#[test]
fn connected_verdicts_are_sound_up_to_5000() {
    let mut checked = 0;
    for p in primes_up_to(5000).into_iter().skip(1) {
        if run(p, Mode::Md).0.outcome == Outcome::Connected {
            assert!(build_graph(p).unwrap().is_connected(), "p = {p}");
            checked += 1;
        }
    }
    // no prime this small is certified, so the check is vacuous but runs
    assert_eq!(checked, 0);
}

#[test]
fn one_side_witness_implies_inconclusive() {
    let mut witnessed = 0;
    for p in primes_up_to(10_000_000).into_iter().skip(1) {
        let (v, fm, fp) = run(p, Mode::Md);
        let pb = BigUint::from(p);
        for (side, f) in [(-1i8, &fm), (1, &fp)] {
            if let Some(w) = certify_failure_one_side(&pb, side, f).unwrap() {
                assert!(w.holds(&pb));
                assert_eq!(v.outcome, Outcome::Inconclusive, "p = {p}");
                witnessed += 1;
            }
        }
    }
    assert!(witnessed > 0);
}

#[test]
fn exact_and_histogram_routes_agree() {
    let limit = BigUint::from(10u32).pow(30);
    let mut both = 0;
    for ap in reduced_adjacent_primes(&limit, 32) {
        for (side, r) in &ap.sides {
            let f = &r.factorization;
            if markoff_core::divisors::tau(f) > BigUint::from(EXACT_ROUTE_CAP) {
                continue;
            }
            let exact = certify_one_side_exact(&ap.p, *side, f).unwrap();
            let hist = certify_one_side_histogram(&ap.p, *side, f).unwrap();
            if let Some(h) = &hist {
                assert!(h.holds(&ap.p));
                // the histogram count is a lower bound, so exact must also succeed
                let e = exact.as_ref().expect("histogram witness without exact one");
                assert!(h.count <= e.count || !h.exact);
                both += 1;
            }
            if let Some(e) = &exact {
                assert!(e.exact && e.holds(&ap.p));
            }
        }
    }
    assert!(both > 0);
}

#[test]
fn fast_and_exact_sweeps_agree() {
    let two = BigUint::from(2u32);
    let b = BigUint::from(10u32).pow(45);
    let fast = algorithm1_sweep(&two, &b);
    let exact = algorithm1_sweep_exact(&two, &b);
    assert_eq!(fast.a, exact.a);
    assert_eq!(fast.stats.examined, exact.stats.examined);
    assert_eq!(fast.stats.failing, exact.stats.failing);
    assert_eq!(fast.stats.largest_failing, exact.stats.largest_failing);
}

//! Hand-built instances with known answers.
//!
//! All use two prizes `lo`, `hi` with utilities -1 and 1, so every utility
//! vector in `[-1, 1]^S` is realizable.

use std::collections::BTreeMap;

use num_traits::One;

use crate::model::{BeliefCollection, BeliefSet, Instance, PrizeSet, Prior, StateSpace, UtilityFunction};
use crate::rational::{int, ratio};

/// A two-state belief set whose vertices have the given first coordinates.
pub fn set_of(name: &str, firsts: &[(i64, i64)]) -> BeliefSet {
    let vertices = firsts
        .iter()
        .map(|&(n, d)| {
            let p = ratio(n, d);
            Prior::new(vec![p.clone(), crate::rational::Rational::one() - p]).expect("first coordinate in [0, 1]")
        })
        .collect();
    BeliefSet::new(name, vertices).expect("distinct vertices")
}

/// A point interval gives a singleton.
pub fn interval_set(name: &str, lo: (i64, i64), hi: (i64, i64)) -> BeliefSet {
    if ratio(lo.0, lo.1) == ratio(hi.0, hi.1) {
        set_of(name, &[lo])
    } else {
        set_of(name, &[lo, hi])
    }
}

/// Endpoints of a first-coordinate interval, each as `(numerator, denominator)`.
pub type Interval = ((i64, i64), (i64, i64));

/// Two-state sets `P1, P2, ...` given by intervals of the first coordinate.
pub fn interval_collection(intervals: &[Interval]) -> BeliefCollection {
    let sets = intervals
        .iter()
        .enumerate()
        .map(|(i, &(lo, hi))| interval_set(&format!("P{}", i + 1), lo, hi))
        .collect();
    BeliefCollection::new(sets).expect("valid collection")
}

/// States `s1..sn`, prizes `lo`/`hi` at -1/1, no named acts.
pub fn instance_for(collection: BeliefCollection) -> Instance {
    let states = StateSpace::new((1..=collection.dim()).map(|i| format!("s{i}")).collect()).expect("nonempty");
    let prizes = PrizeSet::new(vec!["lo".into(), "hi".into()]).expect("two prizes");
    let utility = UtilityFunction::new(vec![int(-1), int(1)]).expect("nonconstant");
    Instance::new(states, prizes, utility, collection, BTreeMap::new()).expect("consistent")
}

/// First coordinates in [1/5, 2/5] and [3/5, 4/5]: complete, not CBT.
pub fn disjoint_pair() -> Instance {
    instance_for(interval_collection(&[((1, 5), (2, 5)), ((3, 5), (4, 5))]))
}

/// [1/5, 2/5] and [2/5, 3/5]: meet in one prior, complete and CBT.
pub fn touching_intervals() -> Instance {
    instance_for(interval_collection(&[((1, 5), (2, 5)), ((2, 5), (3, 5))]))
}

/// [1/5, 1/2] and [2/5, 7/10]: both straddle 9/20, incomplete.
pub fn cutting_intervals() -> Instance {
    instance_for(interval_collection(&[((1, 5), (1, 2)), ((2, 5), (7, 10))]))
}

/// Named builtins, in a fixed order.
pub fn all() -> Vec<(&'static str, Instance)> {
    vec![
        ("disjoint-pair", disjoint_pair()),
        ("touching-intervals", touching_intervals()),
        ("cutting-intervals", cutting_intervals()),
    ]
}

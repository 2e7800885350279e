//! Proptest generators shared by the unit tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use crate::graph_core::{Edge, Graph};
use crate::labels::{Monomial, Symbol};

pub fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (
        prop::sample::select(vec![1i64, 1, 1, -1, 2, 3]),
        prop::collection::btree_map(prop::sample::select(vec!["a", "b", "c", "d", "e"]), -2i64..=2, 0..3),
    )
        .prop_map(|(c, exps)| {
            let exps = exps.into_iter().filter(|(_, e)| *e != 0).map(|(s, e)| (Symbol::new(s), e)).collect();
            Monomial::new(BigRational::from_integer(BigInt::from(c)), exps).unwrap()
        })
}

/// Random graph on at most `max_v` vertices with at most `max_e` edges;
/// isolated vertices are compacted away.
pub fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
    (1..=max_v)
        .prop_flat_map(move |n| prop::collection::vec((0..n, 0..n, arb_monomial()), 1..=max_e))
        .prop_map(|raw| {
            let mut used: Vec<usize> = raw.iter().flat_map(|(s, d, _)| [*s, *d]).collect();
            used.sort_unstable();
            used.dedup();
            let idx = |v: usize| used.binary_search(&v).unwrap();
            let edges = raw.into_iter().map(|(s, d, l)| Edge::new(idx(s), idx(d), l)).collect();
            Graph::new(used.len(), edges).unwrap()
        })
}

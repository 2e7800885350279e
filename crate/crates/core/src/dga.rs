//! The differential on graph sums, the admissibility test, the handle split
//! of the differential and the "all terms disconnected" predicate.
//!
//! Sign convention: ∂G = Σ_e (−1)^{ω(e)} ∂_e G with ω 1-based.  Overall this
//! is the negative of the (−1)^{ω(e)−1} reading; it is the convention under
//! which the necklace boundary formula and the bar-complex closure hold
//! verbatim with the μ signs used in [`crate::bar`].

use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::Serialize;

use crate::canonical::{vertex_rescale, GraphSum};
use crate::graph_core::{Edge, Graph, Loop};
use crate::labels::Monomial;
use crate::{Budget, Error};

/// Sign of the contraction of the edge at 0-based position `i`.
pub fn edge_sign(i: usize) -> i64 {
    if (i + 1).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// ∂_e: rescale the source of `e` by its label, contract, split into blocks.
/// Returns the coefficient (the edge's sign attribute) and the graph, or
/// `None` for a self-loop.
pub fn contract_edge(g: &Graph, e: usize) -> Option<(i64, Graph)> {
    let edge = &g.edges()[e];
    if edge.is_loop() {
        return None;
    }
    let (s, t) = (edge.src, edge.dst);
    let r = g.edges()[e].label.clone();
    let h = vertex_rescale(g, s, &r);
    let relabel = |v: usize| {
        let v = if v == s { t } else { v };
        if v > s {
            v - 1
        } else {
            v
        }
    };
    let edges: Vec<Edge> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != e)
        .map(|(_, x)| Edge { src: relabel(x.src), dst: relabel(x.dst), ..x.clone() })
        .collect();
    // a lone edge contracts to a bare vertex, i.e. the unit
    let keep: Vec<usize> = (0..edges.len()).collect();
    let merged = Graph::from_parts_unchecked(g.num_vertices() - 1, edges).edge_subgraph(&keep);
    Some((edge.sign as i64, merged.split_blocks()))
}

pub fn differential_graph(g: &Graph, budget: &Budget) -> Result<GraphSum, Error> {
    let mut out = GraphSum::zero();
    for i in 0..g.num_edges() {
        if let Some((c, h)) = contract_edge(g, i) {
            out.add_graph(&BigRational::from_integer((edge_sign(i) * c).into()), &h, budget)?;
        }
    }
    Ok(out)
}

pub fn differential_with(s: &GraphSum, budget: &Budget) -> Result<GraphSum, Error> {
    let mut out = GraphSum::zero();
    for (_, c, g) in s.iter() {
        out = out.add(&differential_graph(g, budget)?.scale(c));
    }
    Ok(out)
}

pub fn differential(s: &GraphSum) -> Result<GraphSum, Error> {
    differential_with(s, &Budget::default())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AdmissibilityFailure {
    NotStronglyConnected(Vec<usize>),
    UnitLoop(Loop),
    /// Strict mode: a nonzero integer combination of fundamental loops with
    /// trivial loop coefficient.
    UnitClass(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub failures: Vec<AdmissibilityFailure>,
}

pub fn is_admissible(g: &Graph, budget: &Budget) -> Result<AdmissibilityReport, Error> {
    let mut failures = Vec::new();
    let comps = g.components();
    for (c, ok) in comps.iter().zip(g.strongly_connected_components_flags()) {
        if !ok {
            failures.push(AdmissibilityFailure::NotStronglyConnected(c.clone()));
        }
    }
    for l in g.simple_cycles(budget.cycles)? {
        if g.loop_coefficient(&l).is_one() {
            failures.push(AdmissibilityFailure::UnitLoop(l));
        }
    }
    Ok(AdmissibilityReport { admissible: failures.is_empty(), failures })
}

/// Also searches the fundamental-loop lattice, exponents in `[-bound, bound]`,
/// for a nonzero class whose loop coefficient is 1.
pub fn is_admissible_strict(g: &Graph, budget: &Budget, bound: i64) -> Result<AdmissibilityReport, Error> {
    let mut rep = is_admissible(g, budget)?;
    let (_, _, chis) = g.loop_data();
    let k = chis.len();
    let mut v = vec![-bound; k];
    if k > 0 && bound > 0 {
        'outer: loop {
            if v.iter().any(|&x| x != 0) {
                let m = v.iter().zip(&chis).fold(Monomial::one(), |acc, (&e, c)| acc.mul(&c.pow(e)));
                // report each class once, with its first nonzero entry positive
                if m.is_one() && v.iter().find(|&&x| x != 0).copied().unwrap_or(0) > 0 {
                    rep.failures.push(AdmissibilityFailure::UnitClass(v.clone()));
                }
            }
            for x in v.iter_mut().take(k) {
                if *x < bound {
                    *x += 1;
                    continue 'outer;
                }
                *x = -bound;
            }
            break;
        }
    }
    rep.admissible = rep.failures.is_empty();
    Ok(rep)
}

/// (handle part, interior part) of ∂g.
pub fn differential_handle_split(g: &Graph, budget: &Budget) -> Result<(GraphSum, GraphSum), Error> {
    let hd = g.handle_decomposition();
    let handle_edges: BTreeSet<usize> = hd.handles.iter().flat_map(|h| h.edge_path.iter().copied()).collect();
    let mut hp = GraphSum::zero();
    let mut ip = GraphSum::zero();
    for i in 0..g.num_edges() {
        if let Some((c, h)) = contract_edge(g, i) {
            let q = BigRational::from_integer((edge_sign(i) * c).into());
            if handle_edges.contains(&i) {
                hp.add_graph(&q, &h, budget)?;
            } else {
                ip.add_graph(&q, &h, budget)?;
            }
        }
    }
    Ok((hp, ip))
}

/// True iff every term is disconnected; otherwise also the connected survivors.
pub fn is_dot_zero(s: &GraphSum) -> (bool, GraphSum) {
    let survivors = s.connected_part();
    (survivors.is_empty(), survivors)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::canonical::{canonical_form, Canonical};
    use crate::graph_core::tests::five_edge;

    fn g(n: usize, t: &[(usize, usize, &str)]) -> Graph {
        Graph::from_triples(n, t).unwrap()
    }

    #[test]
    fn self_loop_and_unit_edge() {
        let g0 = g(1, &[(0, 0, "a")]);
        assert_eq!(contract_edge(&g0, 0), None);
        assert!(differential(&GraphSum::from_graph(&g0).unwrap()).unwrap().is_empty());
        // label 1: plain contraction
        let two = g(2, &[(0, 1, "1"), (1, 0, "b")]);
        let (_, c) = contract_edge(&two, 0).unwrap();
        assert_eq!(c, g(1, &[(0, 0, "b")]));
    }

    #[test]
    fn source_and_target_contraction_agree() {
        let gr = five_edge();
        for i in 0..gr.num_edges() {
            let e = &gr.edges()[i];
            let (_, via_source) = contract_edge(&gr, i).unwrap();
            // rescale the target by 1/r instead, then contract plainly
            let h = vertex_rescale(&gr, e.dst, &e.label.inv());
            let mut edges = h.edges().to_vec();
            edges[i].label = Monomial::one();
            let (_, via_target) = contract_edge(&h.with_edges(edges), i).unwrap();
            assert_eq!(canonical_form(&via_source).unwrap(), canonical_form(&via_target).unwrap());
        }
    }

    #[test]
    fn five_term_example_and_square() {
        let s = GraphSum::from_graph(&five_edge()).unwrap();
        let d = differential(&s).unwrap();
        assert_eq!(d.len(), 5);
        assert!(differential(&d).unwrap().is_empty());
        for (_, _, rep) in d.iter() {
            assert_eq!(rep.weight(), five_edge().weight());
            assert_eq!(rep.degree(), five_edge().degree() + 1);
        }
    }

    #[test]
    fn admissibility() {
        let g0 = g(1, &[(0, 0, "a")]);
        assert!(is_admissible(&g0, &Budget::default()).unwrap().admissible);
        let unit = g(2, &[(0, 1, "a"), (1, 0, "1/a"), (0, 1, "b")]);
        let r = is_admissible(&unit, &Budget::default()).unwrap();
        assert!(matches!(r.failures[..], [AdmissibilityFailure::UnitLoop(_)]));
        let sink = g(2, &[(0, 1, "a"), (0, 1, "b")]);
        let r = is_admissible(&sink, &Budget::default()).unwrap();
        assert!(matches!(r.failures[0], AdmissibilityFailure::NotStronglyConnected(_)));
        // a^2 / a^2 on the cycle lattice: every simple cycle is fine but
        // two loops combine to 1
        let lat = g(1, &[(0, 0, "a^2"), (0, 0, "a^-2")]);
        assert!(!is_admissible_strict(&lat, &Budget::default(), 1).unwrap().admissible);
        let lat = g(1, &[(0, 0, "a^2"), (0, 0, "a^-3")]);
        assert!(is_admissible(&lat, &Budget::default()).unwrap().admissible);
        assert!(!is_admissible_strict(&lat, &Budget::default(), 3).unwrap().admissible);
        assert!(is_admissible_strict(&lat, &Budget::default(), 2).unwrap().admissible);
    }

    /// The five-edge example with its edge `0 -> 1` replaced by a directed
    /// path of `len` edges (a handle of length `len`).
    pub fn handle_graph(len: usize) -> Graph {
        let n = len + 2;
        let mut t: Vec<(usize, usize, String)> = vec![(2, 0, "r1".into()), (0, 2, "r2".into())];
        let mut prev = 0;
        for k in 0..len {
            let next = if k + 1 == len { 1 } else { k + 3 };
            t.push((prev, next, format!("h{k}")));
            prev = next;
        }
        t.push((1, 2, "r4".into()));
        t.push((1, 0, "r5".into()));
        let t: Vec<(usize, usize, &str)> = t.iter().map(|(a, b, c)| (*a, *b, c.as_str())).collect();
        Graph::from_triples(n, &t).unwrap()
    }

    #[test]
    fn even_handles_vanish_odd_leave_one() {
        for len in 2..=5 {
            let gr = handle_graph(len);
            assert_eq!(gr.handle_decomposition().handles.len(), 1);
            let (hp, ip) = differential_handle_split(&gr, &Budget::default()).unwrap();
            assert_eq!(hp.add(&ip), differential(&GraphSum::from_graph(&gr).unwrap()).unwrap());
            if len % 2 == 0 {
                assert!(hp.is_empty());
            } else {
                assert_eq!(hp.len(), 1);
                let first = gr.handle_decomposition().handles[0].edge_path[0];
                let (c, h) = contract_edge(&gr, first).unwrap();
                let Canonical::Term { key, coeff, .. } = canonical_form(&h).unwrap() else { panic!() };
                assert_eq!(hp.coeff(&key), coeff * BigRational::from_integer((edge_sign(first) * c).into()));
            }
        }
    }

    #[test]
    fn dot_zero() {
        assert!(is_dot_zero(&GraphSum::zero()).0);
        let d = differential(&GraphSum::from_graph(&five_edge()).unwrap()).unwrap();
        let (ok, surv) = is_dot_zero(&d);
        assert!(!ok);
        assert_eq!(surv.len(), d.iter().filter(|(_, _, g)| g.h0() == 1).count());
    }
}

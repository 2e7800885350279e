//! Simplex-augmented graphs, the face differential, necklace families and
//! the circular bar construction.
//!
//! An augmented graph is a graph whose labels are monomials in the free
//! generators and the coordinates t₁..t_m of the ordered simplex
//! 0 ≤ t₁ ≤ … ≤ t_m ≤ 1; the endpoints t₀ ≡ 0 and t_{m+1} ≡ 1 never appear.
//! Faces act on labels by substitution:
//!
//! δ₀: t₁ ↦ 0,  δᵢ: tᵢ ↦ t_{i+1} (0 < i < m),  δ_m: t_m ↦ 1,
//!
//! after which the surviving coordinates are renumbered 1..m−1.  A face on
//! which some label becomes 0 or ∞ is the trivial graph and is dropped.
//! Triviality is decided on the gauge-fixed representative, where every
//! non-forest label is a fundamental loop coefficient, so it does not depend
//! on the chosen rescaling.
//!
//! The algebraic differential is the graph differential itself: contraction
//! with vertex rescaling by monomial labels is exactly the label rule for
//! augmented graphs, and it keeps the simplex dimension.

mod circular;
mod necklace;
mod xi;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::canonical::{gauge_fix, CanonicalKey, GraphSum};
use crate::dga::{differential_with, is_admissible};
use crate::graph_core::{Graph, Loop};
use crate::labels::{ExtLabel, Monomial, Symbol, SymbolKind};
use crate::{Budget, Error};

pub use circular::*;
pub use necklace::*;
pub use xi::*;

/// A graph together with the dimension of its supporting simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugGraph {
    #[serde(flatten)]
    pub graph: Graph,
    #[serde(rename = "simplexDim")]
    pub simplex_dim: usize,
}

impl<'de> Deserialize<'de> for AugGraph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(flatten)]
            graph: Graph,
            #[serde(rename = "simplexDim", default)]
            simplex_dim: usize,
        }
        let raw = Raw::deserialize(de)?;
        AugGraph::new(raw.graph, raw.simplex_dim).map_err(serde::de::Error::custom)
    }
}

impl AugGraph {
    /// Checks that only t₁..t_m occur.
    pub fn new(graph: Graph, simplex_dim: usize) -> Result<AugGraph, Error> {
        for e in graph.edges() {
            for s in e.label.symbols() {
                if let Some(i) = s.simplex_index() {
                    if i == 0 || i > simplex_dim {
                        return Err(Error::Parse(format!(
                            "coordinate {s} outside t1..t{simplex_dim} of the simplex"
                        )));
                    }
                }
            }
        }
        Ok(AugGraph { graph, simplex_dim })
    }

    /// The constant augmentation of an ordinary graph.
    pub fn constant(graph: Graph) -> AugGraph {
        AugGraph { graph, simplex_dim: 0 }
    }

    pub fn weight(&self) -> usize {
        self.graph.h1()
    }

    /// ⋆_t = algebraic degree − simplex dimension.
    pub fn twisted_degree(&self) -> i64 {
        self.graph.degree() - self.simplex_dim as i64
    }
}

/// Substitution rule of the face δᵢ of an m-simplex, renumbering included.
pub fn face_rule(m: usize, i: usize) -> BTreeMap<Symbol, ExtLabel> {
    assert!(i <= m, "face {i} of a {m}-simplex");
    let mut rule = BTreeMap::new();
    if i == m {
        rule.insert(Symbol::t(m), ExtLabel::Regular(Monomial::one()));
        return rule;
    }
    if i == 0 {
        rule.insert(Symbol::t(1), ExtLabel::Zero);
    }
    // t_{i+1} collapses onto t_i; everything above shifts down by one
    for k in (i + 1).max(2)..=m {
        rule.insert(Symbol::t(k), ExtLabel::Regular(Monomial::sym_pow(Symbol::t(k - 1), 1)));
    }
    rule
}

/// Applies a face to every label; `None` when some label degenerates.
pub fn apply_face(g: &Graph, m: usize, i: usize) -> Result<Option<Graph>, Error> {
    let rule = face_rule(m, i);
    let mut edges = Vec::with_capacity(g.num_edges());
    for e in g.edges() {
        match e.label.substitute(&rule)? {
            ExtLabel::Regular(l) => edges.push(crate::graph_core::Edge { label: l, ..e.clone() }),
            ExtLabel::Zero | ExtLabel::Infinity => return Ok(None),
        }
    }
    Ok(Some(g.with_edges(edges)))
}

/// δ(G, σ_m) = Σᵢ (−1)ⁱ (G, δᵢσ_m) as a signed list, plus the number of
/// trivial faces dropped.
pub fn aug_delta_graph(a: &AugGraph) -> Result<(Vec<(i64, AugGraph)>, usize), Error> {
    let m = a.simplex_dim;
    if m == 0 {
        return Ok((Vec::new(), 0));
    }
    let g = gauge_fix(&a.graph);
    let mut out = Vec::new();
    let mut trivial = 0;
    for i in 0..=m {
        match apply_face(&g, m, i)? {
            Some(h) => out.push((if i % 2 == 0 { 1 } else { -1 }, AugGraph { graph: h, simplex_dim: m - 1 })),
            None => trivial += 1,
        }
    }
    Ok((out, trivial))
}

/// Linear combination of canonical augmented graphs, graded by simplex
/// dimension.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AugSum {
    parts: BTreeMap<usize, GraphSum>,
}

impl AugSum {
    pub fn zero() -> Self {
        AugSum::default()
    }

    pub fn from_sum(m: usize, s: GraphSum) -> Self {
        let mut a = AugSum::zero();
        a.add_part(m, &s);
        a
    }

    pub fn from_aug(a: &AugGraph, budget: &Budget) -> Result<Self, Error> {
        Ok(AugSum::from_sum(a.simplex_dim, GraphSum::from_graph_with(&a.graph, budget)?))
    }

    fn add_part(&mut self, m: usize, s: &GraphSum) {
        let e = self.parts.entry(m).or_default();
        *e = e.add(s);
        if e.is_zero() {
            self.parts.remove(&m);
        }
    }

    pub fn add(&self, other: &AugSum) -> AugSum {
        let mut s = self.clone();
        for (m, p) in &other.parts {
            s.add_part(*m, p);
        }
        s
    }

    pub fn sub(&self, other: &AugSum) -> AugSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &BigRational) -> AugSum {
        let mut s = AugSum::zero();
        for (m, p) in &self.parts {
            s.add_part(*m, &p.scale(q));
        }
        s
    }

    pub fn neg(&self) -> AugSum {
        self.scale(&-BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(GraphSum::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// The part supported on m-simplices.
    pub fn part(&self, m: usize) -> GraphSum {
        self.parts.get(&m).cloned().unwrap_or_default()
    }

    /// (simplex dimension, key, coefficient, representative).
    pub fn iter(&self) -> impl Iterator<Item = (usize, &CanonicalKey, &BigRational, &Graph)> {
        self.parts.iter().flat_map(|(m, p)| p.iter().map(move |(k, c, g)| (*m, k, c, g)))
    }

    /// Right module action: (G, σ)·H = (G·H, σ).
    pub fn times(&self, h: &GraphSum) -> Result<AugSum, Error> {
        let mut s = AugSum::zero();
        for (m, p) in &self.parts {
            s.add_part(*m, &p.product(h)?);
        }
        Ok(s)
    }

    /// Substitutes a face into every term, reporting dropped trivial terms.
    pub fn face(&self, i: usize, budget: &Budget) -> Result<(AugSum, usize), Error> {
        let mut out = AugSum::zero();
        let mut trivial = 0;
        for (m, _, c, g) in self.iter() {
            if i > m || m == 0 {
                continue;
            }
            match apply_face(&gauge_fix(g), m, i)? {
                Some(h) => out.add_part(m - 1, &GraphSum::from_graph_with(&h, budget)?.scale(c)),
                None => trivial += 1,
            }
        }
        Ok((out, trivial))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.parts
                .iter()
                .flat_map(|(m, p)| {
                    p.to_json().as_array().cloned().unwrap_or_default().into_iter().map(move |mut v| {
                        v["simplexDim"] = serde_json::json!(m);
                        v
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for AugSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, k, c, _) in self.iter() {
            if !first {
                f.write_str("\n")?;
            }
            first = false;
            write!(f, "{c} * (m={m}) [{k}]")?;
        }
        Ok(())
    }
}

/// δ on a sum; also returns the number of trivial faces dropped.
pub fn aug_delta(s: &AugSum, budget: &Budget) -> Result<(AugSum, usize), Error> {
    let mut out = AugSum::zero();
    let mut trivial = 0;
    for (m, _, c, g) in s.iter() {
        let (faces, t) = aug_delta_graph(&AugGraph { graph: g.clone(), simplex_dim: m })?;
        trivial += t;
        for (sign, h) in faces {
            let q = c * BigRational::from_integer(sign.into());
            out.add_part(h.simplex_dim, &GraphSum::from_graph_with(&h.graph, budget)?.scale(&q));
        }
    }
    Ok((out, trivial))
}

/// The algebraic differential, Σ_e (−1)^{ω(e)} (∂_eG, ∂_eσ).
pub fn aug_partial(s: &AugSum, budget: &Budget) -> Result<AugSum, Error> {
    let mut out = AugSum::zero();
    for (m, p) in &s.parts {
        out.add_part(*m, &differential_with(p, budget)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AugViolation {
    /// The underlying graph is not strongly connected.
    NotStronglyConnected(Vec<usize>),
    /// Condition 1: a loop coefficient is identically 1 on the face reached
    /// by the listed face maps (empty: the open simplex).
    UnitLoop { faces: Vec<usize>, lp: Loop },
    /// Condition 2: on {t₁ = … = t_k = 0} some label vanishes and none has
    /// a pole.
    ZeroWithoutPole { k: usize, edges: Vec<usize> },
    /// Condition 3: every codimension-one face has a label at ∞.
    NoFiniteFace,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AugValidation {
    pub valid: bool,
    pub violations: Vec<AugViolation>,
}

/// The three admissibility conditions for a monomial augmentation.
///
/// For monomials "χ ≡ 1 almost everywhere" is χ = 1 as a monomial, and zeros
/// or poles inside the simplex can only sit on the loci t₁ = … = t_k = 0
/// because all coordinates are positive elsewhere.
pub fn aug_validate(a: &AugGraph, budget: &Budget) -> Result<AugValidation, Error> {
    let g = &a.graph;
    let m = a.simplex_dim;
    let mut violations = Vec::new();
    let base = is_admissible(g, budget)?;
    for f in base.failures {
        if let crate::dga::AdmissibilityFailure::NotStronglyConnected(c) = f {
            violations.push(AugViolation::NotStronglyConnected(c));
        }
    }
    let cycles = g.simple_cycles(budget.cycles)?;
    // condition 1 on the simplex and on every iterated face
    let mut stack: Vec<(Vec<usize>, Graph, usize)> = vec![(Vec::new(), g.clone(), m)];
    let mut seen = std::collections::BTreeSet::new();
    while let Some((path, h, dim)) = stack.pop() {
        for l in &cycles {
            if h.loop_coefficient(l).is_one() && seen.insert(l.clone()) {
                violations.push(AugViolation::UnitLoop { faces: path.clone(), lp: l.clone() });
            }
        }
        if dim == 0 {
            continue;
        }
        for i in 0..=dim {
            if let Some(f) = apply_face(&h, dim, i)? {
                let mut p = path.clone();
                p.push(i);
                stack.push((p, f, dim - 1));
            }
        }
    }
    // condition 2
    for k in 1..=m {
        let rule: BTreeMap<Symbol, ExtLabel> = (1..=k).map(|i| (Symbol::t(i), ExtLabel::Zero)).collect();
        let mut zeros = Vec::new();
        let mut pole = false;
        for (i, e) in g.edges().iter().enumerate() {
            match e.label.substitute(&rule) {
                Ok(ExtLabel::Zero) => zeros.push(i),
                Ok(ExtLabel::Infinity) => pole = true,
                // 0/0: the limit depends on the direction; not a zero
                Ok(ExtLabel::Regular(_)) | Err(Error::IndeterminateForm(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if !zeros.is_empty() && !pole {
            violations.push(AugViolation::ZeroWithoutPole { k, edges: zeros });
        }
    }
    // condition 3
    if m > 0 {
        let mut finite = false;
        for i in 0..=m {
            let rule = face_rule(m, i);
            let mut ok = true;
            for e in g.edges() {
                if matches!(e.label.substitute(&rule)?, ExtLabel::Infinity) {
                    ok = false;
                }
            }
            finite |= ok;
        }
        if !finite {
            violations.push(AugViolation::NoFiniteFace);
        }
    }
    Ok(AugValidation { valid: violations.is_empty(), violations })
}

/// True if a label mentions a simplex coordinate.
pub fn is_augmented(g: &Graph) -> bool {
    g.edges().iter().any(|e| e.label.symbols().any(|s| s.kind() == SymbolKind::Simplex))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    #[test]
    fn faces_of_a_two_simplex() {
        let g = Graph::from_triples(1, &[(0, 0, "a*t2/t1")]).unwrap();
        assert_eq!(apply_face(&g, 2, 0).unwrap(), None);
        let f1 = apply_face(&g, 2, 1).unwrap().unwrap();
        assert_eq!(f1.edges()[0].label, t("a"));
        let f2 = apply_face(&g, 2, 2).unwrap().unwrap();
        assert_eq!(f2.edges()[0].label, t("a/t1"));
        let (terms, trivial) = aug_delta_graph(&AugGraph::new(g, 2).unwrap()).unwrap();
        assert_eq!(trivial, 1);
        assert_eq!(terms.iter().map(|(s, a)| (*s, a.simplex_dim)).collect::<Vec<_>>(), vec![(-1, 1), (1, 1)]);
    }

    #[test]
    fn coordinates_outside_the_simplex_are_rejected() {
        let g = Graph::from_triples(1, &[(0, 0, "a*t3")]).unwrap();
        assert!(AugGraph::new(g.clone(), 2).is_err());
        assert!(AugGraph::new(g, 3).is_ok());
    }

    #[test]
    fn differentials_square_to_zero_on_the_necklace_family() {
        let b = budget();
        for n in 0..=3 {
            let (a0, a) = generic_args(n);
            let fam = make_xi_family(&a0, &a).unwrap();
            for x in fam.lambda.iter().chain(&fam.chi).chain([&fam.xi_top]) {
                let (d1, _) = aug_delta(x, &b).unwrap();
                assert!(aug_delta(&d1, &b).unwrap().0.is_zero(), "n = {n}");
                assert!(aug_partial(&aug_partial(x, &b).unwrap(), &b).unwrap().is_zero(), "n = {n}");
            }
        }
    }

    #[test]
    fn twisted_degree_goes_up_by_one() {
        let b = budget();
        let (a0, a) = generic_args(2);
        for x in make_xi_family(&a0, &a).unwrap().lambda {
            for (m, _, _, g) in x.iter() {
                assert_eq!(g.degree() - m as i64, 0);
            }
            for y in [aug_delta(&x, &b).unwrap().0, aug_partial(&x, &b).unwrap()] {
                for (m, _, _, g) in y.iter() {
                    assert_eq!(g.degree() - m as i64, 1);
                }
            }
        }
    }

    #[test]
    fn partial_and_delta_commute() {
        // faces are substitutions and contraction only multiplies labels,
        // so ∂δ = δ∂ on the nose
        let b = budget();
        let (a0, a) = generic_args(2);
        let x = xi_top(&a0, &a).unwrap();
        let lhs = aug_partial(&aug_delta(&x, &b).unwrap().0, &b).unwrap();
        let rhs = aug_delta(&aug_partial(&x, &b).unwrap(), &b).unwrap().0;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_inclusion_commutes_with_the_differentials() {
        let b = budget();
        let (a0, a) = generic_args(2);
        let eps = make_eps(&a0, &a).unwrap();
        let inc = AugSum::from_sum(0, eps.clone());
        assert_eq!(aug_partial(&inc, &b).unwrap(), AugSum::from_sum(0, crate::dga::differential(&eps).unwrap()));
        assert!(aug_delta(&inc, &b).unwrap().0.is_zero());
        let g = make_necklace(Side::L, &a0, &a);
        assert!(!is_augmented(&g));
        assert_eq!(AugGraph::constant(g).twisted_degree(), make_necklace(Side::L, &a0, &a).degree());
    }

    #[test]
    fn validation() {
        let b = budget();
        let sigma = make_necklace(Side::L, &t("a0/t2"), &[t("a1*t2/t1")]);
        assert!(is_augmented(&sigma));
        assert!(aug_validate(&AugGraph::new(sigma, 2).unwrap(), &b).unwrap().valid);
        let constant = AugGraph::constant(make_necklace(Side::L, &t("a0"), &[t("a1")]));
        assert!(aug_validate(&constant, &b).unwrap().valid);
        let zero = AugGraph::new(Graph::from_triples(1, &[(0, 0, "a*t1")]).unwrap(), 1).unwrap();
        let r = aug_validate(&zero, &b).unwrap();
        assert_eq!(r.violations, vec![AugViolation::ZeroWithoutPole { k: 1, edges: vec![0] }]);
        // t1/t2 becomes 1 on the face t2 = t1 (and on its own faces)
        let unit = AugGraph::new(Graph::from_triples(1, &[(0, 0, "t1/t2")]).unwrap(), 2).unwrap();
        let r = aug_validate(&unit, &b).unwrap();
        assert!(r.violations.iter().any(|v| matches!(v, AugViolation::UnitLoop { faces, .. } if !faces.is_empty())));
        assert!(aug_validate(&AugGraph::new(Graph::from_triples(1, &[(0, 0, "a*t1/t2")]).unwrap(), 2).unwrap(), &b)
            .unwrap()
            .violations
            .iter()
            .all(|v| !matches!(v, AugViolation::UnitLoop { .. })));
    }

    #[test]
    fn xi_top_summand_count() {
        let (a0, a) = generic_args(2);
        let fam = make_xi_family(&a0, &a).unwrap();
        // λ: 1 + 2 + 4, χ: 1 + 2
        assert_eq!(fam.summands, 10);
        assert!(fam.chi[0].is_zero());
        let (a0, _) = generic_args(0);
        let fam = make_xi_family(&a0, &[]).unwrap();
        assert_eq!(fam.xi_top, fam.lambda[0]);
        let (d, _) = aug_delta(&fam.lambda[0], &budget()).unwrap();
        assert_eq!(d, AugSum::from_sum(0, make_eps(&a0, &[]).unwrap()).neg());
    }

    #[test]
    fn json_round_trip() {
        let g = make_necklace(Side::R, &t("a0/t2"), &[t("a1*t2/t1")]);
        let a = AugGraph::new(g, 2).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.contains("\"simplexDim\":2"));
        let back: AugGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
        let bad = text.replace("\"simplexDim\":2", "\"simplexDim\":1");
        assert!(serde_json::from_str::<AugGraph>(&bad).is_err());
    }
}

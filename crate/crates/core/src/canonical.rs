//! Canonical forms modulo edge reordering (with sign), vertex rescaling and
//! orientation reversal, and the graded-commutative algebra of graph sums.
//!
//! A graph is first normalized: sign attributes are folded into the
//! coefficient and articulation vertices are split, so the graph becomes the
//! product of its blocks.  Each block is canonicalized by brute force over
//! vertex bijections and both orientations; for every candidate the labels
//! are gauge-fixed on a BFS tree, enumerating every choice among parallel
//! tree edges.  Blocks are then sorted; the sign of the resulting edge
//! permutation is the coefficient.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::graph_core::{Edge, Graph};
use crate::labels::{Monomial, Symbol};
use crate::{Budget, Error};

/// Canonical encoding of a class; serializes as hex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn unit() -> Self {
        CanonicalKey(String::new())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn hex(&self) -> String {
        hex::encode(self.0.as_bytes())
    }

    pub fn from_hex(h: &str) -> Result<Self, Error> {
        let bytes = hex::decode(h).map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map(CanonicalKey).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.hex())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Canonical {
    Zero,
    Term { key: CanonicalKey, coeff: BigRational, rep: Graph },
}

pub fn vertex_rescale(g: &Graph, v: usize, alpha: &Monomial) -> Graph {
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            let label = if e.is_loop() {
                e.label.clone()
            } else if e.dst == v {
                e.label.mul(alpha)
            } else if e.src == v {
                e.label.div(alpha)
            } else {
                e.label.clone()
            };
            Edge { label, ..e.clone() }
        })
        .collect();
    g.with_edges(edges)
}

/// Rescale so that every edge of the canonical spanning forest carries 1.
pub fn gauge_fix(g: &Graph) -> Graph {
    let parent = g.spanning_forest();
    let mut alpha: Vec<Option<Monomial>> = vec![None; g.num_vertices()];
    fn pot(v: usize, g: &Graph, parent: &[Option<(usize, usize)>], alpha: &mut Vec<Option<Monomial>>) -> Monomial {
        if let Some(a) = &alpha[v] {
            return a.clone();
        }
        let a = match parent[v] {
            None => Monomial::one(),
            Some((p, e)) => {
                let ap = pot(p, g, parent, alpha);
                let ed = &g.edges()[e];
                if ed.src == p {
                    ap.div(&ed.label)
                } else {
                    ap.mul(&ed.label)
                }
            }
        };
        alpha[v] = Some(a.clone());
        a
    }
    let pots: Vec<Monomial> = (0..g.num_vertices()).map(|v| pot(v, g, &parent, &mut alpha)).collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| Edge { label: e.label.mul(&pots[e.dst]).div(&pots[e.src]), ..e.clone() })
        .collect();
    g.with_edges(edges)
}

// ---------------------------------------------------------------------------
// compact labels used inside the orbit search

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Lab {
    exps: Vec<(u32, i64)>,
    coeff: BigRational,
}

impl Lab {
    fn one() -> Lab {
        Lab { exps: Vec::new(), coeff: BigRational::one() }
    }

    fn combine(&self, other: &Lab, sign: i64) -> Lab {
        let mut exps = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            match (a, b) {
                (Some(&(sa, ea)), Some(&(sb, eb))) if sa == sb => {
                    let e = ea + sign * eb;
                    if e != 0 {
                        exps.push((sa, e));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(sa, ea)), Some(&(sb, _))) if sa < sb => {
                    exps.push((sa, ea));
                    i += 1;
                }
                (Some(&(sa, ea)), None) => {
                    exps.push((sa, ea));
                    i += 1;
                }
                (_, Some(&(sb, eb))) => {
                    exps.push((sb, sign * eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let coeff = if sign > 0 { &self.coeff * &other.coeff } else { &self.coeff / &other.coeff };
        Lab { exps, coeff }
    }

    fn mul(&self, o: &Lab) -> Lab {
        self.combine(o, 1)
    }

    fn div(&self, o: &Lab) -> Lab {
        self.combine(o, -1)
    }
}

impl Ord for Lab {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps).then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for Lab {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type Code = Vec<(usize, usize, u8, Lab)>;

struct BlockCanon {
    code: Code,
    /// local edge indices in canonical order
    order: Vec<usize>,
    /// canonical endpoints per local edge, as (src, dst)
    ends: Vec<(usize, usize)>,
    labels: Vec<Lab>,
}

fn parity(seq: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Vertex invariants stable under rescaling, refined once by neighbors.
fn vertex_classes(n: usize, ends: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut base = vec![[0usize; 4]; n];
    for &(s, d) in ends {
        if s == d {
            base[s][1] += 1;
        } else {
            base[s][0] += 1;
            base[d][0] += 1;
            base[s][3] += 1;
            base[d][2] += 1;
        }
    }
    let mut nbr: Vec<Vec<[usize; 4]>> = vec![Vec::new(); n];
    for &(s, d) in ends {
        if s != d {
            nbr[s].push(base[d]);
            nbr[d].push(base[s]);
        }
    }
    for v in &mut nbr {
        v.sort_unstable();
    }
    let inv: Vec<([usize; 4], Vec<[usize; 4]>)> = (0..n).map(|v| (base[v], nbr[v].clone())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    order.chunk_by(|&a, &b| inv[a] == inv[b]).map(|c| c.to_vec()).collect()
}

struct Search<'a> {
    n: usize,
    edges: &'a [(usize, usize, Lab)],
    best: Option<BlockCanon>,
    best_parity: BTreeSet<bool>,
    twin: bool,
}

impl Search<'_> {
    /// `perm[v]` is the new index of v; `rev` reverses every edge.
    fn visit(&mut self, perm: &[usize], rev: bool) {
        let (n, m, edges) = (self.n, self.edges.len(), self.edges);
        let ends: Vec<(usize, usize)> = edges
            .iter()
            .map(|(s, d, _)| if rev { (perm[*d], perm[*s]) } else { (perm[*s], perm[*d]) })
            .collect();
        // BFS parents in the relabeled graph (vertex choices only)
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, d) in &ends {
            if s != d {
                adj[*s].push(*d);
                adj[*d].push(*s);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut bfs = vec![0usize];
        seen[0] = true;
        let mut qi = 0;
        while qi < bfs.len() {
            let u = bfs[qi];
            qi += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    bfs.push(w);
                }
            }
        }
        // parallel choices for each tree edge, in BFS order
        let choices: Vec<Vec<usize>> = bfs[1..]
            .iter()
            .map(|&v| {
                (0..m)
                    .filter(|&i| {
                        let (s, d) = ends[i];
                        (s == v && d == parent[v]) || (d == v && s == parent[v])
                    })
                    .collect()
            })
            .collect();
        let picks: Box<dyn Iterator<Item = Vec<usize>>> = if choices.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(choices.into_iter().multi_cartesian_product())
        };
        for pick in picks {
            let mut alpha = vec![Lab::one(); n];
            for (k, &v) in bfs[1..].iter().enumerate() {
                let e = pick[k];
                let p = parent[v];
                alpha[v] = if ends[e].0 == p { alpha[p].div(&edges[e].2) } else { alpha[p].mul(&edges[e].2) };
            }
            let labels: Vec<Lab> = (0..m).map(|i| edges[i].2.mul(&alpha[ends[i].1]).div(&alpha[ends[i].0])).collect();
            let mut order: Vec<usize> = (0..m).collect();
            let key = |i: usize| {
                let (s, d) = ends[i];
                (s.min(d), s.max(d), (s > d) as u8)
            };
            order.sort_by(|&a, &b| key(a).cmp(&key(b)).then_with(|| labels[a].cmp(&labels[b])));
            let code: Code = order
                .iter()
                .map(|&i| {
                    let (a, b, c) = key(i);
                    (a, b, c, labels[i].clone())
                })
                .collect();
            if code.windows(2).any(|w| w[0] == w[1]) {
                // two indistinguishable edges: swapping them is odd
                self.twin = true;
                return;
            }
            let par = parity(&order);
            let cmp = self.best.as_ref().map(|b| code.cmp(&b.code)).unwrap_or(Ordering::Less);
            match cmp {
                Ordering::Less => {
                    self.best = Some(BlockCanon { code, order, ends: ends.clone(), labels });
                    self.best_parity = BTreeSet::from([par]);
                }
                Ordering::Equal => {
                    self.best_parity.insert(par);
                }
                Ordering::Greater => {}
            }
        }
    }
}

/// Enumerates bijections sending class k onto its block of new indices.
fn for_each_class_perm(classes: &[Vec<usize>], n: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(classes: &[Vec<usize>], k: usize, offset: usize, perm: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == classes.len() {
            return f(perm);
        }
        let c = &classes[k];
        for p in (0..c.len()).permutations(c.len()) {
            for (i, &v) in c.iter().enumerate() {
                perm[v] = offset + p[i];
            }
            if !rec(classes, k + 1, offset + c.len(), perm, f) {
                return false;
            }
        }
        true
    }
    let mut perm = vec![0; n];
    rec(classes, 0, 0, &mut perm, f);
}

/// Canonicalize one connected block; `None` if it has an odd automorphism.
///
/// Only bijections that list vertices by increasing invariant class are
/// tried; this set is preserved by every equivalence, so the minimum is still
/// a class invariant and every automorphism is seen.
fn canon_block(n: usize, edges: &[(usize, usize, Lab)], budget: &Budget) -> Result<Option<BlockCanon>, Error> {
    if n > budget.vertices {
        return Err(Error::VertexBudgetExceeded(n, budget.vertices));
    }
    let mut search = Search { n, edges, best: None, best_parity: BTreeSet::new(), twin: false };
    for rev in [false, true] {
        let ends: Vec<(usize, usize)> =
            edges.iter().map(|(s, d, _)| if rev { (*d, *s) } else { (*s, *d) }).collect();
        let classes = vertex_classes(n, &ends);
        for_each_class_perm(&classes, n, &mut |perm| {
            search.visit(perm, rev);
            !search.twin
        });
        if search.twin {
            return Ok(None);
        }
    }
    if search.best_parity.len() > 1 {
        return Ok(None);
    }
    Ok(search.best)
}

fn code_string(n: usize, code: &Code, syms: &[Symbol]) -> String {
    let mut s = format!("{n}:");
    for (k, (a, b, c, l)) in code.iter().enumerate() {
        if k > 0 {
            s.push(';');
        }
        s.push_str(&format!("{a},{b},{c},{}", to_mono(l, syms)));
    }
    s
}

fn to_mono(l: &Lab, syms: &[Symbol]) -> Monomial {
    let exps = l.exps.iter().map(|&(i, e)| (syms[i as usize].clone(), e)).collect();
    Monomial::new(l.coeff.clone(), exps).expect("nonzero")
}

/// Canonical form of `coeff * g`.
pub fn canonical_form_with(coeff: &BigRational, g: &Graph, budget: &Budget) -> Result<Canonical, Error> {
    if coeff.is_zero() {
        return Ok(Canonical::Zero);
    }
    let mut c = coeff.clone();
    let flips = g.edges().iter().filter(|e| e.sign < 0).count();
    if flips % 2 == 1 {
        c = -c;
    }
    let g = g.split_blocks();
    // local symbol numbering, monotone in symbol order
    let syms: Vec<Symbol> = g
        .edges()
        .iter()
        .flat_map(|e| e.label.symbols().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sym_id: BTreeMap<&Symbol, u32> = syms.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
    let lab = |m: &Monomial| Lab {
        exps: m.exps().iter().map(|(s, e)| (sym_id[s], *e)).collect(),
        coeff: m.coeff().clone(),
    };
    let comps = g.components();
    let mut comp_of = vec![0usize; g.num_vertices()];
    let mut local = vec![0usize; g.num_vertices()];
    for (ci, c) in comps.iter().enumerate() {
        for (k, &v) in c.iter().enumerate() {
            comp_of[v] = ci;
            local[v] = k;
        }
    }
    let mut comp_edges: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    for (i, e) in g.edges().iter().enumerate() {
        comp_edges[comp_of[e.src]].push(i);
    }
    let mut blocks = Vec::with_capacity(comps.len());
    for (ci, es) in comp_edges.iter().enumerate() {
        let local_edges: Vec<(usize, usize, Lab)> = es
            .iter()
            .map(|&i| {
                let e = &g.edges()[i];
                (local[e.src], local[e.dst], lab(&e.label))
            })
            .collect();
        match canon_block(comps[ci].len(), &local_edges, budget)? {
            None => return Ok(Canonical::Zero),
            Some(b) => blocks.push((comps[ci].len(), es.clone(), b)),
        }
    }
    blocks.sort_by(|x, y| (x.0, &x.2.code).cmp(&(y.0, &y.2.code)));
    for w in blocks.windows(2) {
        if w[0].0 == w[1].0 && w[0].2.code == w[1].2.code && w[0].1.len() % 2 == 1 {
            return Ok(Canonical::Zero);
        }
    }
    let mut global_order = Vec::with_capacity(g.num_edges());
    let mut rep_edges = Vec::with_capacity(g.num_edges());
    let mut key_parts = Vec::with_capacity(blocks.len());
    let mut offset = 0;
    for (n, es, b) in &blocks {
        for &li in &b.order {
            global_order.push(es[li]);
            let (s, d) = b.ends[li];
            rep_edges.push(Edge::new(s + offset, d + offset, to_mono(&b.labels[li], &syms)));
        }
        key_parts.push(code_string(*n, &b.code, &syms));
        offset += n;
    }
    if parity(&global_order) {
        c = -c;
    }
    let rep = Graph::from_parts(offset, rep_edges);
    Ok(Canonical::Term { key: CanonicalKey(key_parts.join("|")), coeff: c, rep })
}

pub fn canonical_form(g: &Graph) -> Result<Canonical, Error> {
    canonical_form_with(&BigRational::one(), g, &Budget::default())
}

// ---------------------------------------------------------------------------

/// A Q-linear combination of canonical classes.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphSum {
    terms: BTreeMap<CanonicalKey, (BigRational, Graph)>,
}

impl GraphSum {
    pub fn zero() -> Self {
        GraphSum::default()
    }

    /// The unit: the empty graph with coefficient 1.
    pub fn unit() -> Self {
        let mut s = GraphSum::zero();
        s.terms.insert(CanonicalKey::unit(), (BigRational::one(), Graph::empty()));
        s
    }

    pub fn from_graph(g: &Graph) -> Result<Self, Error> {
        GraphSum::from_graph_with(g, &Budget::default())
    }

    pub fn from_graph_with(g: &Graph, budget: &Budget) -> Result<Self, Error> {
        let mut s = GraphSum::zero();
        s.add_graph(&BigRational::one(), g, budget)?;
        Ok(s)
    }

    /// Sum of ±graphs, e.g. an example sum.
    pub fn from_terms(terms: &[(i64, Graph)]) -> Result<Self, Error> {
        let mut s = GraphSum::zero();
        for (c, g) in terms {
            s.add_graph(&BigRational::from_integer((*c).into()), g, &Budget::default())?;
        }
        Ok(s)
    }

    pub fn add_graph(&mut self, coeff: &BigRational, g: &Graph, budget: &Budget) -> Result<(), Error> {
        if let Canonical::Term { key, coeff, rep } = canonical_form_with(coeff, g, budget)? {
            self.add_canonical(key, coeff, rep);
        }
        Ok(())
    }

    /// Adds a term already in canonical form.
    pub fn add_canonical(&mut self, key: CanonicalKey, coeff: BigRational, rep: Graph) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert((coeff, rep));
                }
            }
            Entry::Occupied(mut o) => {
                o.get_mut().0 += coeff;
                if o.get().0.is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &GraphSum) -> GraphSum {
        let mut s = self.clone();
        for (k, (c, g)) in &other.terms {
            s.add_canonical(k.clone(), c.clone(), g.clone());
        }
        s
    }

    pub fn sub(&self, other: &GraphSum) -> GraphSum {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, q: &BigRational) -> GraphSum {
        if q.is_zero() {
            return GraphSum::zero();
        }
        GraphSum { terms: self.terms.iter().map(|(k, (c, g))| (k.clone(), (c * q, g.clone()))).collect() }
    }

    pub fn neg(&self) -> GraphSum {
        self.scale(&-BigRational::one())
    }

    pub fn product(&self, other: &GraphSum) -> Result<GraphSum, Error> {
        let mut s = GraphSum::zero();
        for (c1, g1) in self.terms.values() {
            for (c2, g2) in other.terms.values() {
                s.add_graph(&(c1 * c2), &g1.disjoint_union(g2), &Budget::default())?;
            }
        }
        Ok(s)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CanonicalKey, &BigRational, &Graph)> {
        self.terms.iter().map(|(k, (c, g))| (k, c, g))
    }

    pub fn coeff(&self, key: &CanonicalKey) -> BigRational {
        self.terms.get(key).map(|t| t.0.clone()).unwrap_or_else(BigRational::zero)
    }

    /// Terms whose representative is connected (h0 = 1) or empty.
    pub fn connected_part(&self) -> GraphSum {
        GraphSum {
            terms: self.terms.iter().filter(|(_, (_, g))| g.h0() <= 1).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// (weight, degree) of every term.
    pub fn bigradings(&self) -> BTreeSet<(usize, i64)> {
        self.terms.values().map(|(_, g)| (g.weight(), g.degree())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, (c, g))| {
                    serde_json::json!({
                        "key": k.hex(),
                        "coeff": c.to_string(),
                        "weight": g.weight(),
                        "degree": g.degree(),
                        "representative": g,
                    })
                })
                .collect(),
        )
    }
}

impl fmt::Display for GraphSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, (c, _))) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{c} * [{k}]")?;
        }
        Ok(())
    }
}

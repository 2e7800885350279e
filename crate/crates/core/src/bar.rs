//! The bar complex on graph sums: tensor words of canonical graphs, the
//! induced differential ∂ and the multiplication differential μ, complete
//! decomposability, closed lifts and coboundary witnesses.
//!
//! Gradings: deg_B(G) = deg(G) − 1.  On a word [G₁|…|Gₙ]
//!
//! ∂ = Σ_j (−1)^{Σ_{k<j} deg_B G_k} [G₁|…|∂G_j|…|Gₙ]
//! μ = Σ_j (−1)^{Σ_{i≤j} deg_B G_i} [G₁|…|G_j·G_{j+1}|…|Gₙ]
//!
//! so that μ[G₁|G₂] = [G₁G₂] for degree-one graphs and (∂ + μ)² = 0.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canonical::{canonical_form_with, Canonical, CanonicalKey, GraphSum};
use crate::dga::{differential_with, is_dot_zero};
use crate::graph_core::Graph;
use crate::linalg::solve_columns;
use crate::{Budget, Error};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BarWord(pub Vec<CanonicalKey>);

impl BarWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A Q-linear combination of tensor words, with representatives for every
/// factor key.
#[derive(Clone, Debug, Default)]
pub struct BarElement {
    terms: BTreeMap<BarWord, BigRational>,
    reps: BTreeMap<CanonicalKey, Graph>,
}

impl PartialEq for BarElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl BarElement {
    pub fn zero() -> Self {
        BarElement::default()
    }

    /// The one-letter element Σ c [G] of a graph sum.
    pub fn from_sum(s: &GraphSum) -> Self {
        BarElement::tensor(std::slice::from_ref(s))
    }

    /// Multilinear expansion of s₁ ⊗ … ⊗ sₖ; unit factors are degenerate and
    /// dropped.
    pub fn tensor(sums: &[GraphSum]) -> Self {
        let mut out = BarElement::zero();
        let mut partial: Vec<(Vec<CanonicalKey>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        for s in sums {
            let mut next = Vec::new();
            for (w, c) in &partial {
                for (k, q, g) in s.iter() {
                    if g.is_empty() {
                        continue;
                    }
                    out.reps.entry(k.clone()).or_insert_with(|| g.clone());
                    let mut w2 = w.clone();
                    w2.push(k.clone());
                    next.push((w2, c * q));
                }
            }
            partial = next;
        }
        for (w, c) in partial {
            out.add_term(BarWord(w), c);
        }
        out
    }

    fn add_term(&mut self, w: BarWord, c: BigRational) {
        if c.is_zero() || w.is_empty() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn merge_reps(&mut self, other: &BarElement) {
        for (k, g) in &other.reps {
            self.reps.entry(k.clone()).or_insert_with(|| g.clone());
        }
    }

    pub fn add(&self, other: &BarElement) -> BarElement {
        let mut s = self.clone();
        s.merge_reps(other);
        for (w, c) in &other.terms {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn scale(&self, q: &BigRational) -> BarElement {
        let mut s = BarElement { terms: BTreeMap::new(), reps: self.reps.clone() };
        for (w, c) in &self.terms {
            s.add_term(w.clone(), c * q);
        }
        s
    }

    pub fn sub(&self, other: &BarElement) -> BarElement {
        self.add(&other.scale(&-BigRational::one()))
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

    pub fn iter(&self) -> impl Iterator<Item = (&BarWord, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &BarWord) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn rep(&self, k: &CanonicalKey) -> Option<&Graph> {
        self.reps.get(k)
    }

    /// Total degree Σ deg_B over the factors of a word.
    pub fn word_degree(&self, w: &BarWord) -> i64 {
        w.0.iter().map(|k| self.reps[k].degree() - 1).sum()
    }

    /// Words of tensor length `k`.
    pub fn layer(&self, k: usize) -> BarElement {
        let mut s = BarElement { terms: BTreeMap::new(), reps: self.reps.clone() };
        for (w, c) in &self.terms {
            if w.len() == k {
                s.add_term(w.clone(), c.clone());
            }
        }
        s
    }

    pub fn max_length(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Shuffle product with Koszul signs in the deg_B grading.
    pub fn shuffle(&self, other: &BarElement) -> BarElement {
        let mut out = BarElement::zero();
        out.merge_reps(self);
        out.merge_reps(other);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let du: Vec<i64> = u.0.iter().map(|k| out.reps[k].degree() - 1).collect();
                let dv: Vec<i64> = v.0.iter().map(|k| out.reps[k].degree() - 1).collect();
                shuffle_words(&u.0, &du, &v.0, &dv, &mut Vec::new(), 1, &mut |w, s| {
                    out.add_term(BarWord(w.to_vec()), cu * cv * BigRational::from_integer(s.into()));
                });
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({
                        "word": w.0.iter().map(|k| k.hex()).collect::<Vec<_>>(),
                        "coeff": c.to_string(),
                    })
                })
                .collect(),
        )
    }
}

fn shuffle_words(
    u: &[CanonicalKey],
    du: &[i64],
    v: &[CanonicalKey],
    dv: &[i64],
    acc: &mut Vec<CanonicalKey>,
    sign: i64,
    f: &mut dyn FnMut(&[CanonicalKey], i64),
) {
    if u.is_empty() && v.is_empty() {
        f(acc, sign);
        return;
    }
    if let Some((x, rest)) = u.split_first() {
        acc.push(x.clone());
        shuffle_words(rest, &du[1..], v, dv, acc, sign, f);
        acc.pop();
    }
    if let Some((y, rest)) = v.split_first() {
        // y jumps over every remaining letter of u
        let passed: i64 = du.iter().sum();
        let s = if (passed * dv[0]).rem_euclid(2) == 1 { -sign } else { sign };
        acc.push(y.clone());
        shuffle_words(u, du, rest, &dv[1..], acc, s, f);
        acc.pop();
    }
}

impl fmt::Display for BarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let ks: Vec<&str> = w.0.iter().map(|k| k.as_str()).collect();
            write!(f, "{c} * [{}]", ks.join(" | "))?;
        }
        Ok(())
    }
}

/// Memoized ∂ and products of canonical factors.
pub struct BarCtx {
    pub budget: Budget,
    diff: HashMap<CanonicalKey, GraphSum>,
    prod: HashMap<(CanonicalKey, CanonicalKey), GraphSum>,
}

impl BarCtx {
    pub fn new(budget: Budget) -> Self {
        BarCtx { budget, diff: HashMap::new(), prod: HashMap::new() }
    }

    fn diff_of(&mut self, k: &CanonicalKey, g: &Graph) -> Result<GraphSum, Error> {
        if let Some(d) = self.diff.get(k) {
            return Ok(d.clone());
        }
        let d = differential_with(&GraphSum::from_graph_with(g, &self.budget)?, &self.budget)?;
        self.diff.insert(k.clone(), d.clone());
        Ok(d)
    }

    fn product_of(&mut self, a: (&CanonicalKey, &Graph), b: (&CanonicalKey, &Graph)) -> Result<GraphSum, Error> {
        let key = (a.0.clone(), b.0.clone());
        if let Some(p) = self.prod.get(&key) {
            return Ok(p.clone());
        }
        let mut p = GraphSum::zero();
        p.add_graph(&BigRational::one(), &a.1.disjoint_union(b.1), &self.budget)?;
        self.prod.insert(key, p.clone());
        Ok(p)
    }

    pub fn partial(&mut self, x: &BarElement) -> Result<BarElement, Error> {
        let mut out = BarElement { terms: BTreeMap::new(), reps: x.reps.clone() };
        for (w, c) in &x.terms {
            let mut before = 0i64;
            for j in 0..w.len() {
                let g = x.reps[&w.0[j]].clone();
                let d = self.diff_of(&w.0[j], &g)?;
                let sign = if before.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                for (k, q, h) in d.iter() {
                    out.reps.entry(k.clone()).or_insert_with(|| h.clone());
                    let mut w2 = w.0.clone();
                    w2[j] = k.clone();
                    out.add_term(BarWord(w2), &sign * q);
                }
                before += g.degree() - 1;
            }
        }
        Ok(out)
    }

    pub fn mu(&mut self, x: &BarElement) -> Result<BarElement, Error> {
        let mut out = BarElement { terms: BTreeMap::new(), reps: x.reps.clone() };
        for (w, c) in &x.terms {
            let mut upto = 0i64;
            for j in 0..w.len().saturating_sub(1) {
                let (ka, kb) = (&w.0[j], &w.0[j + 1]);
                let (ga, gb) = (x.reps[ka].clone(), x.reps[kb].clone());
                upto += ga.degree() - 1;
                let p = self.product_of((ka, &ga), (kb, &gb))?;
                let sign = if upto.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                for (k, q, h) in p.iter() {
                    out.reps.entry(k.clone()).or_insert_with(|| h.clone());
                    let mut w2 = w.0[..j].to_vec();
                    w2.push(k.clone());
                    w2.extend_from_slice(&w.0[j + 2..]);
                    out.add_term(BarWord(w2), &sign * q);
                }
            }
        }
        Ok(out)
    }

    pub fn total(&mut self, x: &BarElement) -> Result<BarElement, Error> {
        Ok(self.partial(x)?.add(&self.mu(x)?))
    }
}

pub fn bar_partial(x: &BarElement) -> Result<BarElement, Error> {
    BarCtx::new(Budget::default()).partial(x)
}

pub fn bar_mu(x: &BarElement) -> Result<BarElement, Error> {
    BarCtx::new(Budget::default()).mu(x)
}

pub fn bar_total(x: &BarElement) -> Result<BarElement, Error> {
    BarCtx::new(Budget::default()).total(x)
}

/// Ordered splittings of a disconnected canonical graph into two nonempty
/// sub-products, each canonicalized (odd-automorphism pieces skipped).
fn splits(g: &Graph, budget: &Budget) -> Result<Vec<[(CanonicalKey, Graph); 2]>, Error> {
    let comps = g.components();
    let k = comps.len();
    if k < 2 {
        return Ok(Vec::new());
    }
    let mut comp_of = vec![0; g.num_vertices()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << k) - 1 {
        let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, e) in g.edges().iter().enumerate() {
            sides[((mask >> comp_of[e.src]) & 1) as usize].push(i);
        }
        let mut pair = Vec::with_capacity(2);
        for side in [&sides[1], &sides[0]] {
            match canonical_form_with(&BigRational::one(), &g.edge_subgraph(side), budget)? {
                Canonical::Zero => break,
                Canonical::Term { key, rep, .. } => pair.push((key, rep)),
            }
        }
        if pair.len() == 2 {
            let b = pair.pop().unwrap();
            let a = pair.pop().unwrap();
            out.push([a, b]);
        }
    }
    Ok(out)
}

/// Verdict of the complete-decomposability check.
#[derive(Clone, Debug)]
pub enum Decomposability {
    /// A closed bar element extending `[ε]`, split by tensor length.
    Yes { lift: BarElement, layers: Vec<BarElement> },
    No { reason: String, survivors: GraphSum },
}

impl Decomposability {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decomposability::Yes { .. })
    }
}

/// Searches for x with (∂ + μ)([ε] + x) = 0, x supported on words obtained
/// by splitting the disconnected factors that ∂ produces.  `Ok(None)` if no
/// such x exists among those words.
fn solve_lift(eps: &GraphSum, max_depth: usize, ctx: &mut BarCtx) -> Result<Option<BarElement>, Error> {
    let base = BarElement::from_sum(eps);
    let d0 = ctx.partial(&base)?;
    let mut candidates: Vec<BarElement> = Vec::new();
    let mut seen: BTreeSet<BarWord> = BTreeSet::new();
    let mut frontier: Vec<(BarWord, BTreeMap<CanonicalKey, Graph>)> =
        d0.terms.keys().map(|w| (w.clone(), d0.reps.clone())).collect();
    let mut columns: Vec<BTreeMap<BarWord, BigRational>> = Vec::new();
    while let Some((w, reps)) = frontier.pop() {
        for j in 0..w.len() {
            let g = &reps[&w.0[j]];
            if g.h0() < 2 {
                continue;
            }
            for [(ka, ga), (kb, gb)] in splits(g, &ctx.budget)? {
                let mut w2 = w.0[..j].to_vec();
                w2.push(ka.clone());
                w2.push(kb.clone());
                w2.extend_from_slice(&w.0[j + 1..]);
                let w2 = BarWord(w2);
                if seen.contains(&w2) {
                    continue;
                }
                if w2.len() > max_depth {
                    return Err(Error::DepthExceeded(max_depth));
                }
                seen.insert(w2.clone());
                let mut r = reps.clone();
                r.insert(ka, ga);
                r.insert(kb, gb);
                let mut cand = BarElement { terms: BTreeMap::new(), reps: r };
                cand.add_term(w2.clone(), BigRational::one());
                let image = ctx.total(&cand)?;
                for (iw, _) in image.iter() {
                    if !seen.contains(iw) {
                        frontier.push((iw.clone(), image.reps.clone()));
                    }
                }
                columns.push(image.terms.clone());
                candidates.push(cand);
            }
        }
    }
    let target: BTreeMap<BarWord, BigRational> = d0.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect();
    let Some(x) = solve_columns(&columns, &target) else { return Ok(None) };
    let mut lift = base;
    for (c, w) in x.iter().zip(&candidates) {
        if !c.is_zero() {
            lift = lift.add(&w.scale(c));
        }
    }
    Ok(Some(lift))
}

pub fn check_completely_decomposable_with(
    eps: &GraphSum,
    max_depth: usize,
    budget: &Budget,
) -> Result<Decomposability, Error> {
    let mut ctx = BarCtx::new(*budget);
    let d = differential_with(eps, budget)?;
    let (ok, survivors) = is_dot_zero(&d);
    if !ok {
        return Ok(Decomposability::No { reason: "boundary has connected terms".into(), survivors });
    }
    match solve_lift(eps, max_depth, &mut ctx)? {
        None => Ok(Decomposability::No { reason: "no tensor lift closes".into(), survivors: GraphSum::zero() }),
        Some(lift) => {
            debug_assert!(ctx.total(&lift)?.is_zero());
            let layers = (1..=lift.max_length()).map(|k| lift.layer(k)).collect();
            Ok(Decomposability::Yes { lift, layers })
        }
    }
}

pub fn check_completely_decomposable(eps: &GraphSum, max_depth: usize) -> Result<Decomposability, Error> {
    check_completely_decomposable_with(eps, max_depth, &Budget::default())
}

/// A closed bar element whose one-letter part is `[ε]`.
pub fn lift_to_bar_closure(eps: &GraphSum, max_depth: usize, budget: &Budget) -> Result<BarElement, Error> {
    let mut ctx = BarCtx::new(*budget);
    match solve_lift(eps, max_depth, &mut ctx)? {
        Some(l) => Ok(l),
        None => {
            let residue = ctx.partial(&BarElement::from_sum(eps))?;
            Err(Error::LiftObstructed(residue.len()))
        }
    }
}

/// Coefficients x with ∂(Σ xᵢ cᵢ) ≐ ε (connected parts agree).
pub fn coboundary_witness_search(
    eps: &GraphSum,
    candidates: &[GraphSum],
    budget: &Budget,
) -> Result<Option<Vec<BigRational>>, Error> {
    let target: BTreeMap<CanonicalKey, BigRational> =
        eps.connected_part().iter().map(|(k, c, _)| (k.clone(), c.clone())).collect();
    let mut cols = Vec::with_capacity(candidates.len());
    for c in candidates {
        let d = differential_with(c, budget)?.connected_part();
        cols.push(d.iter().map(|(k, q, _)| (k.clone(), q.clone())).collect::<BTreeMap<_, _>>());
    }
    Ok(solve_columns(&cols, &target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::tests::five_edge;
    use crate::strategies::arb_graph;
    use proptest::prelude::*;

    fn sum(t: &[(usize, usize, &str)], n: usize) -> GraphSum {
        GraphSum::from_graph(&Graph::from_triples(n, t).unwrap()).unwrap()
    }

    fn g0(a: &str) -> GraphSum {
        sum(&[(0, 0, a)], 1)
    }

    #[test]
    fn mu_signs_and_shuffles() {
        let (a, b) = (g0("a"), g0("b"));
        let ab = BarElement::tensor(&[a.clone(), b.clone()]);
        let m = bar_mu(&ab).unwrap();
        let prod = BarElement::from_sum(&a.product(&b).unwrap());
        assert_eq!(m, prod);
        let sh = BarElement::from_sum(&a).shuffle(&BarElement::from_sum(&b));
        assert_eq!(sh.len(), 2);
        assert!(bar_mu(&sh).unwrap().is_zero());
        assert!(bar_mu(&BarElement::from_sum(&a)).unwrap().is_zero());
    }

    #[test]
    fn partial_degree_bookkeeping() {
        let t = GraphSum::from_graph(&five_edge()).unwrap();
        let x = BarElement::tensor(&[g0("a"), t.clone()]);
        let expect = BarElement::tensor(&[g0("a"), crate::dga::differential(&t).unwrap()]);
        assert_eq!(bar_partial(&x).unwrap(), expect);
        let closed = BarElement::from_sum(&g0("a"));
        assert!(bar_partial(&closed).unwrap().is_zero());
    }

    #[test]
    fn closed_input_lifts_to_itself() {
        let e = g0("a");
        let l = lift_to_bar_closure(&e, 6, &Budget::default()).unwrap();
        assert_eq!(l, BarElement::from_sum(&e));
    }

    #[test]
    fn witness_search() {
        let eta = GraphSum::from_graph(&five_edge()).unwrap();
        let eps = crate::dga::differential(&eta).unwrap().connected_part();
        let w = coboundary_witness_search(&eps, &[eta], &Budget::default()).unwrap();
        assert_eq!(w, Some(vec![BigRational::one()]));
        assert_eq!(coboundary_witness_search(&eps, &[], &Budget::default()).unwrap(), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn total_differential_squares_to_zero(a in arb_graph(4, 5), b in arb_graph(3, 4), c in arb_graph(3, 4)) {
            let s = |g: &Graph| GraphSum::from_graph(g).unwrap();
            let x = BarElement::tensor(&[s(&a), s(&b), s(&c)])
                .add(&BarElement::tensor(&[s(&a), s(&c)]))
                .add(&BarElement::from_sum(&s(&a)));
            let mut ctx = BarCtx::new(Budget::default());
            let d = ctx.total(&x).unwrap();
            prop_assert!(ctx.total(&d).unwrap().is_zero());
            let dx = ctx.partial(&x).unwrap();
            prop_assert!(ctx.partial(&dx).unwrap().is_zero());
            let mx = ctx.mu(&x).unwrap();
            prop_assert!(ctx.mu(&mx).unwrap().is_zero());
        }
    }
}

//! Graphs with ordered, oriented, signed, labeled edges, and the
//! combinatorial analyses the algebra needs: Betti numbers, spanning
//! forests and loop coefficients, simple cycles, strong connectivity,
//! biconnected blocks and handles.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::labels::Monomial;
use crate::Error;

fn plus_one() -> i8 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Monomial,
    #[serde(default = "plus_one")]
    pub sign: i8,
}

impl Edge {
    pub fn new(src: usize, dst: usize, label: Monomial) -> Self {
        Edge { src, dst, label, sign: 1 }
    }

    pub fn is_loop(&self) -> bool {
        self.src == self.dst
    }

    /// The endpoint opposite `v` (for a self-loop, `v` itself).
    pub fn other(&self, v: usize) -> usize {
        if self.src == v {
            self.dst
        } else {
            self.src
        }
    }
}

/// A graph; the position of an edge in `edges` is its order ω (0-based here).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Graph {
    #[serde(rename = "vertices")]
    n: usize,
    edges: Vec<Edge>,
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: usize,
            edges: Vec<Edge>,
        }
        let raw = Raw::deserialize(de)?;
        Graph::new(raw.vertices, raw.edges).map_err(serde::de::Error::custom)
    }
}

/// A closed walk without repeated vertices, as (edge index, direction) steps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Loop {
    pub steps: Vec<(usize, i8)>,
}

impl Loop {
    pub fn reversed(&self) -> Loop {
        Loop { steps: self.steps.iter().rev().map(|&(e, d)| (e, -d)).collect() }
    }

    pub fn edge_set(&self) -> BTreeSet<usize> {
        self.steps.iter().map(|s| s.0).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub h0: usize,
    pub h1: usize,
    pub components: Vec<Vec<usize>>,
    pub strongly_connected: Vec<bool>,
    pub articulation_vertices: BTreeSet<usize>,
    /// Edge indices of each biconnected block, ordered by first edge.
    pub blocks: Vec<Vec<usize>>,
    pub biconnected_pieces: Vec<Graph>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Handle {
    pub edge_path: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HandleDecomposition {
    pub handles: Vec<Handle>,
    pub interior_edges: Vec<usize>,
    pub interior: Graph,
    pub flags: Vec<String>,
}

impl Graph {
    /// Validated constructor; reports every violation at once.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Graph, Error> {
        let mut errs = Vec::new();
        let mut seen = vec![false; n];
        for (i, e) in edges.iter().enumerate() {
            for v in [e.src, e.dst] {
                if v >= n {
                    errs.push(Error::InvalidVertexIndex { edge: i, vertex: v, n });
                } else {
                    seen[v] = true;
                }
            }
            if e.sign != 1 && e.sign != -1 {
                errs.push(Error::InvalidSign(e.sign as i64));
            }
        }
        errs.extend(seen.iter().enumerate().filter(|(_, s)| !**s).map(|(v, _)| Error::IsolatedVertex(v)));
        match errs.len() {
            0 => Ok(Graph { n, edges }),
            1 => Err(errs.pop().unwrap()),
            _ => Err(Error::InvalidGraph(errs)),
        }
    }

    /// The empty graph, unit of the product.
    pub fn empty() -> Graph {
        Graph { n: 0, edges: Vec::new() }
    }

    /// Builds a graph from (src, dst, label-text) triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, &str)]) -> Result<Graph, Error> {
        let edges = triples
            .iter()
            .map(|&(s, d, l)| Ok(Edge::new(s, d, Monomial::parse(l)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        Graph::new(n, edges)
    }

    /// No validation; only for intermediate values that are immediately
    /// passed through [`Graph::edge_subgraph`].
    pub(crate) fn from_parts_unchecked(n: usize, edges: Vec<Edge>) -> Graph {
        Graph { n, edges }
    }

    pub(crate) fn from_parts(n: usize, edges: Vec<Edge>) -> Graph {
        debug_assert!(Graph::new(n, edges.clone()).is_ok());
        Graph { n, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let adj = self.adjacency();
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut verts = vec![];
            while let Some(u) = stack.pop() {
                verts.push(u);
                for &(w, _) in &adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            verts.sort_unstable();
            out.push(verts);
        }
        out
    }

    pub fn h0(&self) -> usize {
        self.components().len()
    }

    /// Loop number |E| - |V| + h0.
    pub fn h1(&self) -> usize {
        self.edges.len() + self.h0() - self.n
    }

    pub fn weight(&self) -> usize {
        self.h1()
    }

    /// Algebraic degree h1 - |V| + h0.
    pub fn degree(&self) -> i64 {
        self.h1() as i64 - self.n as i64 + self.h0() as i64
    }

    /// Undirected adjacency: for each vertex, (neighbor, edge index) sorted.
    /// Self-loops are omitted.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            if !e.is_loop() {
                adj[e.src].push((e.dst, i));
                adj[e.dst].push((e.src, i));
            }
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| (e.src == v) as usize + (e.dst == v) as usize).sum()
    }

    /// Disjoint union with `self`'s edges first.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge { src: e.src + self.n, dst: e.dst + self.n, ..e.clone() }));
        Graph { n: self.n + other.n, edges }
    }

    /// Every edge reversed, labels kept.
    pub fn reversed(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { src: e.dst, dst: e.src, ..e.clone() }).collect(),
        }
    }

    /// Same graph with edges listed in the order `perm` (new position i holds old edge perm[i]).
    pub fn permute_edges(&self, perm: &[usize]) -> Graph {
        Graph { n: self.n, edges: perm.iter().map(|&i| self.edges[i].clone()).collect() }
    }

    pub fn with_edges(&self, edges: Vec<Edge>) -> Graph {
        Graph::from_parts(self.n, edges)
    }

    /// Subgraph on a set of edges; vertices renumbered in increasing order,
    /// unused vertices dropped, edge order preserved.
    pub fn edge_subgraph(&self, keep: &[usize]) -> Graph {
        let mut used: Vec<usize> = keep.iter().flat_map(|&i| [self.edges[i].src, self.edges[i].dst]).collect();
        used.sort_unstable();
        used.dedup();
        let mut map = vec![usize::MAX; self.n];
        for (k, &v) in used.iter().enumerate() {
            map[v] = k;
        }
        let mut ks = keep.to_vec();
        ks.sort_unstable();
        let edges = ks
            .iter()
            .map(|&i| {
                let e = &self.edges[i];
                Edge { src: map[e.src], dst: map[e.dst], ..e.clone() }
            })
            .collect();
        Graph::from_parts(used.len(), edges)
    }

    /// Spanning forest by BFS from the lowest vertex of each component,
    /// neighbors visited in (neighbor index, edge position) order.
    /// Returns, per vertex, the (parent, edge) it was discovered through.
    pub fn spanning_forest(&self) -> Vec<Option<(usize, usize)>> {
        let adj = self.adjacency();
        let mut parent = vec![None; self.n];
        let mut seen = vec![false; self.n];
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(u) = q.pop_front() {
                for &(w, e) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, e));
                        q.push_back(w);
                    }
                }
            }
        }
        parent
    }

    pub fn forest_edges(&self) -> BTreeSet<usize> {
        self.spanning_forest().iter().flatten().map(|&(_, e)| e).collect()
    }

    /// Direction of traversing edge `e` from vertex `from`.
    fn dir_from(&self, e: usize, from: usize) -> i8 {
        if self.edges[e].src == from {
            1
        } else {
            -1
        }
    }

    /// Fundamental loops of the canonical forest, one per non-forest edge
    /// (in edge order), each oriented along its non-forest edge, with χ.
    pub fn loop_data(&self) -> (BTreeSet<usize>, Vec<Loop>, Vec<Monomial>) {
        let parent = self.spanning_forest();
        let forest: BTreeSet<usize> = parent.iter().flatten().map(|&(_, e)| e).collect();
        let depth = {
            let mut d = vec![0usize; self.n];
            // parents are discovered before children in BFS order, but compute lazily
            fn dep(v: usize, p: &[Option<(usize, usize)>], d: &mut [usize]) -> usize {
                match p[v] {
                    None => 0,
                    Some((u, _)) => {
                        if d[v] == 0 {
                            d[v] = dep(u, p, d) + 1;
                        }
                        d[v]
                    }
                }
            }
            for v in 0..self.n {
                dep(v, &parent, &mut d);
            }
            d
        };
        let mut loops = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if forest.contains(&i) {
                continue;
            }
            let mut steps = vec![(i, 1i8)];
            if !e.is_loop() {
                // walk from e.dst back to e.src through the forest
                let (mut a, mut b) = (e.dst, e.src);
                let mut head = Vec::new(); // from dst upward
                let mut tail = Vec::new(); // from src upward (to be reversed)
                while a != b {
                    if depth[a] >= depth[b] {
                        let (p, f) = parent[a].expect("same component");
                        head.push((f, self.dir_from(f, a)));
                        a = p;
                    } else {
                        let (p, f) = parent[b].expect("same component");
                        tail.push((f, -self.dir_from(f, b)));
                        b = p;
                    }
                }
                steps.extend(head);
                steps.extend(tail.into_iter().rev());
            }
            loops.push(Loop { steps });
        }
        let chis = loops.iter().map(|l| self.loop_coefficient(l)).collect();
        (forest, loops, chis)
    }

    /// χ(L) = ∏ r_e^{ε(e, L)}.
    pub fn loop_coefficient(&self, l: &Loop) -> Monomial {
        l.steps.iter().fold(Monomial::one(), |acc, &(e, d)| acc.mul(&self.edges[e].label.pow(d as i64)))
    }

    /// All simple cycles of the underlying undirected multigraph, each once.
    pub fn simple_cycles(&self, budget: usize) -> Result<Vec<Loop>, Error> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                out.push(Loop { steps: vec![(i, 1)] });
            }
        }
        let adj = self.adjacency();
        let mut on_path = vec![false; self.n];
        for s in 0..self.n {
            let mut path: Vec<(usize, i8)> = Vec::new();
            on_path[s] = true;
            self.cycle_dfs(s, s, &adj, &mut on_path, &mut path, &mut out, budget)?;
            on_path[s] = false;
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cycle_dfs(
        &self,
        start: usize,
        u: usize,
        adj: &[Vec<(usize, usize)>],
        on_path: &mut [bool],
        path: &mut Vec<(usize, i8)>,
        out: &mut Vec<Loop>,
        budget: usize,
    ) -> Result<(), Error> {
        for &(w, e) in &adj[u] {
            if w < start {
                continue;
            }
            if w == start {
                // close the cycle; keep one of the two traversal directions
                if let Some(&(first, _)) = path.first() {
                    if first < e {
                        let mut steps = path.clone();
                        steps.push((e, self.dir_from(e, u)));
                        out.push(Loop { steps });
                        if out.len() > budget {
                            return Err(Error::CycleBudgetExceeded(budget));
                        }
                    }
                }
                continue;
            }
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            path.push((e, self.dir_from(e, u)));
            self.cycle_dfs(start, w, adj, on_path, path, out, budget)?;
            path.pop();
            on_path[w] = false;
        }
        Ok(())
    }

    /// Vertex-disjoint directed reachability check per component.
    pub fn strongly_connected_components_flags(&self) -> Vec<bool> {
        let mut fwd = vec![Vec::new(); self.n];
        let mut bwd = vec![Vec::new(); self.n];
        for e in &self.edges {
            fwd[e.src].push(e.dst);
            bwd[e.dst].push(e.src);
        }
        let reach = |adj: &Vec<Vec<usize>>, s: usize| {
            let mut seen = vec![false; self.n];
            let mut st = vec![s];
            seen[s] = true;
            while let Some(u) = st.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        st.push(w);
                    }
                }
            }
            seen
        };
        self.components()
            .iter()
            .map(|c| {
                let (f, b) = (reach(&fwd, c[0]), reach(&bwd, c[0]));
                c.iter().all(|&v| f[v] && b[v])
            })
            .collect()
    }

    /// Biconnected blocks as edge-index lists (self-loops are their own
    /// blocks), ordered by first edge, plus articulation vertices.
    pub fn blocks(&self) -> (Vec<Vec<usize>>, BTreeSet<usize>) {
        let adj = self.adjacency();
        let mut disc = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut timer = 0;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut estack: Vec<usize> = Vec::new();
        // iterative DFS: (vertex, parent edge, next adjacency index)
        for root in 0..self.n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut st: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&(u, pe, idx)) = st.last() {
                if idx < adj[u].len() {
                    st.last_mut().unwrap().2 += 1;
                    let (w, e) = adj[u][idx];
                    if e == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        estack.push(e);
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        st.push((w, e, 0));
                    } else if disc[w] < disc[u] {
                        estack.push(e);
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    st.pop();
                    if let Some(&(p, _, _)) = st.last() {
                        low[p] = low[p].min(low[u]);
                        if low[u] >= disc[p] {
                            let mut b = Vec::new();
                            while let Some(x) = estack.pop() {
                                b.push(x);
                                if x == pe {
                                    break;
                                }
                            }
                            blocks.push(b);
                        }
                    }
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                blocks.push(vec![i]);
            }
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let mut count = vec![0usize; self.n];
        for b in &blocks {
            let vs: BTreeSet<usize> = b.iter().flat_map(|&i| [self.edges[i].src, self.edges[i].dst]).collect();
            for v in vs {
                count[v] += 1;
            }
        }
        let arts = (0..self.n).filter(|&v| count[v] > 1).collect();
        (blocks, arts)
    }

    /// The same edges in the same order, with every articulation vertex
    /// duplicated so that each block becomes its own component.
    pub fn split_blocks(&self) -> Graph {
        let (blocks, arts) = self.blocks();
        if arts.is_empty() {
            return self.clone();
        }
        let mut edges = self.edges.clone();
        let mut n = 0;
        for b in &blocks {
            let mut map = std::collections::BTreeMap::new();
            let vs: BTreeSet<usize> = b.iter().flat_map(|&i| [self.edges[i].src, self.edges[i].dst]).collect();
            for v in vs {
                map.insert(v, n);
                n += 1;
            }
            for &i in b {
                edges[i].src = map[&self.edges[i].src];
                edges[i].dst = map[&self.edges[i].dst];
            }
        }
        Graph::from_parts(n, edges)
    }

    pub fn structure(&self) -> StructureReport {
        let components = self.components();
        let (blocks, articulation_vertices) = self.blocks();
        let biconnected_pieces = blocks.iter().map(|b| self.edge_subgraph(b)).collect();
        StructureReport {
            h0: components.len(),
            h1: self.h1(),
            strongly_connected: self.strongly_connected_components_flags(),
            components,
            articulation_vertices,
            blocks,
            biconnected_pieces,
        }
    }

    /// Maximal chains through 2-valent vertices.  Each handle is listed
    /// starting from the end whose outer edge has the smaller position.
    pub fn handle_decomposition(&self) -> HandleDecomposition {
        let two: Vec<bool> = (0..self.n)
            .map(|v| self.valence(v) == 2 && !self.edges.iter().any(|e| e.is_loop() && e.src == v))
            .collect();
        let mut used = vec![false; self.edges.len()];
        let mut handles = Vec::new();
        let mut flags = Vec::new();
        let incident = |v: usize| -> Vec<usize> {
            (0..self.edges.len()).filter(|&i| self.edges[i].src == v || self.edges[i].dst == v).collect()
        };
        for start in 0..self.n {
            if two[start] {
                continue;
            }
            for e0 in incident(start) {
                if used[e0] || self.edges[e0].is_loop() {
                    continue;
                }
                let mut path = vec![e0];
                let mut cur = self.edges[e0].other(start);
                while two[cur] {
                    let next = incident(cur).into_iter().find(|&i| i != *path.last().unwrap()).unwrap();
                    path.push(next);
                    cur = self.edges[next].other(cur);
                }
                for &i in &path {
                    used[i] = true;
                }
                if path.len() >= 2 {
                    if path.last() < path.first() {
                        path.reverse();
                    }
                    handles.push(Handle { edge_path: path });
                }
            }
        }
        if self.n > 0 && (0..self.n).all(|v| two[v]) && !self.edges.is_empty() {
            flags.push("degenerate: graph is a single cycle of 2-valent vertices".to_string());
        }
        handles.sort_by_key(|h| h.edge_path[0]);
        let in_handle: BTreeSet<usize> = handles.iter().flat_map(|h| h.edge_path.iter().copied()).collect();
        let interior_edges: Vec<usize> = (0..self.edges.len()).filter(|i| !in_handle.contains(i)).collect();
        let interior = self.edge_subgraph(&interior_edges);
        HandleDecomposition { handles, interior_edges, interior, flags }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The five-edge example on vertices t=0, u=1, z=2 with labels r1..r5.
    pub fn five_edge() -> Graph {
        Graph::from_triples(3, &[(2, 0, "r1"), (0, 2, "r2"), (0, 1, "r3"), (1, 2, "r4"), (1, 0, "r5")]).unwrap()
    }

    fn theta() -> Graph {
        Graph::from_triples(2, &[(0, 1, "a"), (1, 0, "b"), (0, 1, "c")]).unwrap()
    }

    /// Oracle: an edge subset is a simple cycle iff it is a single self-loop,
    /// or it is connected and every touched vertex has degree exactly 2.
    pub fn brute_force_cycle_count(g: &Graph) -> usize {
        let m = g.num_edges();
        let mut count = 0;
        for mask in 1u32..(1 << m) {
            let sel: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if sel.len() == 1 {
                count += g.edges()[sel[0]].is_loop() as usize;
                continue;
            }
            if sel.iter().any(|&i| g.edges()[i].is_loop()) {
                continue;
            }
            let sub = g.edge_subgraph(&sel);
            if sub.h0() == 1 && (0..sub.num_vertices()).all(|v| sub.valence(v) == 2) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn validation_errors() {
        assert!(theta().h1() == 2);
        assert!(matches!(
            Graph::from_triples(3, &[(0, 5, "a"), (0, 1, "b"), (1, 2, "c")]),
            Err(Error::InvalidVertexIndex { vertex: 5, .. })
        ));
        assert!(matches!(Graph::from_triples(3, &[(0, 1, "a")]), Err(Error::IsolatedVertex(2))));
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":1,"edges":[{"src":0,"dst":0,"label":{"coeff":[0,1],"exps":{}}}]}"#).is_err());
    }

    #[test]
    fn loop_coefficients_of_five_edge_example() {
        let g = five_edge();
        let (_, _, chis) = g.loop_data();
        assert_eq!(chis.len(), g.h1());
        // the inner triangle r2, r5, r4 and the 2-gon r1, r2
        let tri = Loop { steps: vec![(1, 1), (3, -1), (4, 1)] };
        assert_eq!(g.loop_coefficient(&tri), Monomial::parse("r2*r5/r4").unwrap());
        let gon = Loop { steps: vec![(0, 1), (1, 1)] };
        assert_eq!(g.loop_coefficient(&gon), Monomial::parse("r1*r2").unwrap());
        let g0 = Graph::from_triples(1, &[(0, 0, "a")]).unwrap();
        assert_eq!(g0.loop_data().2, vec![Monomial::sym("a")]);
    }

    #[test]
    fn fundamental_loops_are_closed_walks() {
        let g = five_edge();
        let (_, loops, _) = g.loop_data();
        for l in loops {
            let mut at = {
                let (e, d) = l.steps[0];
                if d > 0 { g.edges()[e].src } else { g.edges()[e].dst }
            };
            let start = at;
            for &(e, d) in &l.steps {
                let ed = &g.edges()[e];
                let (from, to) = if d > 0 { (ed.src, ed.dst) } else { (ed.dst, ed.src) };
                assert_eq!(from, at);
                at = to;
            }
            assert_eq!(at, start);
        }
    }

    #[test]
    fn cycle_counts() {
        let tri = Graph::from_triples(3, &[(0, 1, "a"), (1, 2, "b"), (2, 0, "c")]).unwrap();
        assert_eq!(tri.simple_cycles(100).unwrap().len(), 1);
        assert_eq!(theta().simple_cycles(100).unwrap().len(), 3);
        assert_eq!(five_edge().simple_cycles(100).unwrap().len(), 6);
        assert_eq!(brute_force_cycle_count(&five_edge()), 6);
        assert!(matches!(five_edge().simple_cycles(3), Err(Error::CycleBudgetExceeded(3))));
    }

    #[test]
    fn structure_reports() {
        let wedge = Graph::from_triples(3, &[(0, 1, "a"), (1, 0, "b"), (1, 2, "c"), (2, 1, "d")]).unwrap();
        let s = wedge.structure();
        assert_eq!(s.biconnected_pieces.len(), 2);
        assert_eq!(s.articulation_vertices, BTreeSet::from([1]));
        let sink = Graph::from_triples(2, &[(0, 1, "a"), (0, 1, "b")]).unwrap();
        assert_eq!(sink.structure().strongly_connected, vec![false]);
        let r = five_edge().structure();
        assert_eq!(r.strongly_connected, vec![true]);
        assert_eq!(r.h1 + r.components.iter().map(Vec::len).sum::<usize>(), 5 + r.h0);
    }

    #[test]
    fn split_blocks_keeps_order() {
        let g = Graph::from_triples(2, &[(0, 1, "a"), (0, 0, "s"), (1, 0, "b")]).unwrap();
        let s = g.split_blocks();
        assert_eq!(s.h0(), 2);
        assert_eq!(s.edges()[1].label, Monomial::sym("s"));
        assert_eq!(s.h1(), g.h1());
        assert_eq!(s.degree(), g.degree());
    }

    #[test]
    fn handles() {
        assert!(theta().handle_decomposition().handles.is_empty());
        let sub = Graph::from_triples(3, &[(0, 1, "a"), (1, 0, "b"), (0, 2, "c"), (2, 1, "d")]).unwrap();
        let h = sub.handle_decomposition();
        assert_eq!(h.handles, vec![Handle { edge_path: vec![2, 3] }]);
        assert_eq!(h.interior_edges, vec![0, 1]);
        let cyc = Graph::from_triples(2, &[(0, 1, "a"), (1, 0, "b")]).unwrap();
        assert!(!cyc.handle_decomposition().flags.is_empty());
    }
}

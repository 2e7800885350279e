//! Graphs as parametrized ℙ¹-linear cycles and as polynomial systems.
//!
//! Edge e (position k in the edge order, 1-based) gives the coordinate
//!
//! φ_k = (1 − x_{s(e)} / (a_e · x_{t(e)}))^{sgn e}
//!
//! in vertex variables x0, x1, …, and every loop L of a basis gives the
//! equation 1 = χ(L) ∏_{e∈L} (1 − φ_e)^{ε(e,L)}.  For an edge with sign −1
//! the factor is written (1 − 1/φ_e), which is what x_s/(a x_t) equals then.
//! Expressions come both as text and as a small JSON syntax tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::graph_core::{Edge, Graph, Loop};
use crate::labels::{Monomial, Symbol};
use crate::Error;

/// Expression tree for external algebra systems.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Expr {
    Num { value: String },
    /// A label (monomial in the generators), kept opaque.
    Label { value: String },
    Var { name: String },
    /// The k-th cube coordinate, 1-based.
    Coord { index: usize },
    Mul { args: Vec<Expr> },
    Div { num: Box<Expr>, den: Box<Expr> },
    Sub { lhs: Box<Expr>, rhs: Box<Expr> },
    Pow { base: Box<Expr>, exp: i64 },
    Eq { lhs: Box<Expr>, rhs: Box<Expr> },
}

fn one() -> Expr {
    Expr::Num { value: "1".into() }
}

fn one_minus(e: Expr) -> Expr {
    Expr::Sub { lhs: Box::new(one()), rhs: Box::new(e) }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coordinate {
    pub source: String,
    pub target: String,
    pub label: Monomial,
    /// The edge sign, ±1.
    pub exponent: i64,
}

impl Coordinate {
    /// Self-loop coordinates do not depend on the vertex variables.
    pub fn is_constant(&self) -> bool {
        self.source == self.target
    }

    pub fn expr(&self) -> Expr {
        let den = if self.label.is_one() {
            Expr::Var { name: self.target.clone() }
        } else {
            Expr::Mul { args: vec![Expr::Label { value: self.label.to_string() }, Expr::Var { name: self.target.clone() }] }
        };
        let base = one_minus(Expr::Div { num: Box::new(Expr::Var { name: self.source.clone() }), den: Box::new(den) });
        if self.exponent == 1 {
            base
        } else {
            Expr::Pow { base: Box::new(base), exp: self.exponent }
        }
    }

    /// Like `Display`, with x/(a·x) cancelled for self-loops.
    pub fn simplified(&self) -> String {
        if !self.is_constant() {
            return self.to_string();
        }
        let body = format!("1 - 1/({})", self.label);
        if self.exponent == 1 {
            body
        } else {
            format!("({body})^{}", self.exponent)
        }
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den = if self.label.is_one() { self.target.clone() } else { format!("({}*{})", self.label, self.target) };
        if self.exponent == 1 {
            write!(f, "1 - {}/{}", self.source, den)
        } else {
            write!(f, "(1 - {}/{})^{}", self.source, den, self.exponent)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParametrizedCycle {
    pub coordinates: Vec<Coordinate>,
    pub variables: Vec<String>,
    pub codimension: usize,
    #[serde(rename = "ambientDimension")]
    pub ambient_dimension: usize,
}

impl ParametrizedCycle {
    pub fn text(&self) -> String {
        let cs: Vec<String> = self.coordinates.iter().map(|c| c.to_string()).collect();
        format!("[{}]", cs.join(" | "))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coordinates": self.coordinates.iter().map(|c| serde_json::json!({
                "text": c.to_string(),
                "ast": c.expr(),
                "constant": c.is_constant(),
            })).collect::<Vec<_>>(),
            "variables": self.variables,
            "codimension": self.codimension,
            "ambientDimension": self.ambient_dimension,
        })
    }
}

fn var(v: usize) -> String {
    format!("x{v}")
}

pub fn emit_parametrization(g: &Graph) -> ParametrizedCycle {
    ParametrizedCycle {
        coordinates: g
            .edges()
            .iter()
            .map(|e| Coordinate { source: var(e.src), target: var(e.dst), label: e.label.clone(), exponent: e.sign as i64 })
            .collect(),
        variables: (0..g.num_vertices()).map(var).collect(),
        codimension: g.h1(),
        ambient_dimension: g.num_edges(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Factor {
    /// 1-based coordinate index.
    pub coord: usize,
    /// ε(e, L).
    pub exponent: i64,
    /// The edge has sign −1: the factor is 1 − 1/φ.
    pub inverted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Equation {
    #[serde(rename = "loop")]
    pub lp: Loop,
    pub chi: Monomial,
    pub factors: Vec<Factor>,
}

impl Equation {
    fn factor_text(f: &Factor) -> String {
        if f.inverted {
            format!("(1-1/f{})", f.coord)
        } else {
            format!("(1-f{})", f.coord)
        }
    }

    pub fn expr(&self) -> Expr {
        let mut num = vec![Expr::Label { value: self.chi.to_string() }];
        let mut den = Vec::new();
        for f in &self.factors {
            let c = Expr::Coord { index: f.coord };
            let x = if f.inverted { one_minus(Expr::Div { num: Box::new(one()), den: Box::new(c) }) } else { one_minus(c) };
            for _ in 0..f.exponent.abs() {
                if f.exponent > 0 { num.push(x.clone()) } else { den.push(x.clone()) }
            }
        }
        let n = Expr::Mul { args: num };
        let rhs = if den.is_empty() { n } else { Expr::Div { num: Box::new(n), den: Box::new(Expr::Mul { args: den }) } };
        Expr::Eq { lhs: Box::new(one()), rhs: Box::new(rhs) }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num = vec![self.chi.to_string()];
        let mut den = Vec::new();
        for x in &self.factors {
            for _ in 0..x.exponent.abs() {
                if x.exponent > 0 { num.push(Self::factor_text(x)) } else { den.push(Self::factor_text(x)) }
            }
        }
        write!(f, "1 = {}", num.join("*"))?;
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialSystem {
    pub equations: Vec<Equation>,
    /// Where the loop basis came from; another basis gives an equivalent
    /// system.
    #[serde(rename = "basisSource")]
    pub basis_source: String,
}

impl PolynomialSystem {
    pub fn text(&self) -> String {
        self.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "basisSource": self.basis_source,
            "equations": self.equations.iter().map(|e| serde_json::json!({
                "text": e.to_string(),
                "ast": e.expr(),
                "loop": e.lp,
                "chi": e.chi.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The system for a loop basis, by default the fundamental loops of the
/// canonical spanning forest.
pub fn emit_polynomial_system(g: &Graph, basis: Option<&[Loop]>) -> PolynomialSystem {
    let (loops, source) = match basis {
        Some(b) => (b.to_vec(), "given loop basis".to_string()),
        None => (g.loop_data().1, "fundamental loops of the canonical spanning forest".to_string()),
    };
    let equations = loops
        .into_iter()
        .map(|lp| {
            // ε(e, L) summed per edge, listed by coordinate
            let mut eps: BTreeMap<usize, i64> = BTreeMap::new();
            for &(e, d) in &lp.steps {
                *eps.entry(e).or_default() += d as i64;
            }
            let factors = eps
                .into_iter()
                .filter(|(_, x)| *x != 0)
                .map(|(e, x)| Factor { coord: e + 1, exponent: x, inverted: g.edges()[e].sign < 0 })
                .collect();
            Equation { chi: g.loop_coefficient(&lp), lp, factors }
        })
        .collect();
    PolynomialSystem { equations, basis_source: source }
}

struct RawCoord {
    num: Option<String>,
    den: Monomial,
    exponent: i64,
}

fn parse_coordinate(text: &str) -> Result<RawCoord, Error> {
    let not_linear = || Error::NotOneLLinear(text.trim().to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, exponent) = match s.strip_prefix('(').and_then(|r| r.rsplit_once(")^")) {
        Some((b, e)) => (b.to_string(), e.trim_start_matches('(').trim_end_matches(')').parse::<i64>().map_err(|_| not_linear())?),
        None => (s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(&s).to_string(), 1),
    };
    if exponent != 1 && exponent != -1 {
        return Err(not_linear());
    }
    let frac = body.strip_prefix("1-").ok_or_else(not_linear)?;
    let (num, den) = frac.split_once('/').ok_or_else(not_linear)?;
    let den = den.strip_prefix('(').and_then(|d| d.strip_suffix(')')).unwrap_or(den);
    let num = match num {
        "1" => None,
        v if v.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => {
            Some(v.to_string())
        }
        _ => return Err(not_linear()),
    };
    let den = Monomial::parse(den).map_err(|_| not_linear())?;
    Ok(RawCoord { num, den, exponent })
}

fn is_default_var(name: &str) -> bool {
    name.len() > 1 && name.starts_with('x') && name[1..].bytes().all(|b| b.is_ascii_digit())
}

/// Inverse of [`emit_parametrization`].  Vertex variables are the
/// numerators of the coordinates together with every symbol named x0, x1, …;
/// they become vertices in order of first appearance, or by number when all
/// of them are named x0, x1, ….  A coordinate
/// 1 − 1/a with no variable at all becomes a self-loop on a fresh vertex.
pub fn graph_from_cycle(coordinates: &[String]) -> Result<Graph, Error> {
    let raw: Vec<RawCoord> = coordinates.iter().map(|c| parse_coordinate(c)).collect::<Result<_, _>>()?;
    let mut vars: BTreeSet<String> = raw.iter().filter_map(|r| r.num.clone()).collect();
    for r in &raw {
        vars.extend(r.den.symbols().map(|s| s.name().to_string()).filter(|n| is_default_var(n)));
    }
    let mut index: Vec<String> = Vec::new();
    if vars.iter().all(|v| is_default_var(v)) {
        // keep the numbering of emitted cycles
        let max = vars.iter().map(|v| v[1..].parse::<usize>().unwrap_or(0)).max();
        index = max.map_or(Vec::new(), |k| (0..=k).map(var).collect());
    }
    let vertex = |name: &str, index: &mut Vec<String>| match index.iter().position(|v| v == name) {
        Some(i) => i,
        None => {
            index.push(name.to_string());
            index.len() - 1
        }
    };
    let mut edges = Vec::new();
    let mut constants = Vec::new();
    for (r, text) in raw.iter().zip(coordinates) {
        let in_den: Vec<&Symbol> = r.den.symbols().filter(|s| vars.contains(s.name())).collect();
        let sign = r.exponent as i8;
        match (&r.num, in_den.as_slice()) {
            (Some(u), [v]) if r.den.exp_of(v) == 1 => {
                let label = r.den.div(&Monomial::sym(v.name()));
                let (s, t) = (vertex(u, &mut index), vertex(v.name(), &mut index));
                edges.push((s, t, label, sign));
            }
            (None, []) => constants.push((edges.len(), r.den.clone(), sign)),
            _ => return Err(Error::NotOneLLinear(text.trim().to_string())),
        }
    }
    let mut all: Vec<Edge> = Vec::new();
    let mut next_free = index.len();
    let mut ci = constants.into_iter().peekable();
    for (k, (s, t, label, sign)) in edges.into_iter().enumerate() {
        while let Some((_, a, sg)) = ci.next_if(|c| c.0 == k) {
            all.push(Edge { sign: sg, ..Edge::new(next_free, next_free, a) });
            next_free += 1;
        }
        all.push(Edge { sign, ..Edge::new(s, t, label) });
    }
    for (_, a, sg) in ci {
        all.push(Edge { sign: sg, ..Edge::new(next_free, next_free, a) });
        next_free += 1;
    }
    Graph::new(next_free, all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonical_form, vertex_rescale};
    use crate::graph_core::tests::five_edge;
    use crate::strategies::arb_graph;
    use proptest::prelude::*;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn self_loop_is_constant() {
        let g = Graph::from_triples(1, &[(0, 0, "a")]).unwrap();
        let c = emit_parametrization(&g);
        assert_eq!(c.coordinates.len(), 1);
        assert!(c.coordinates[0].is_constant());
        assert_eq!(c.coordinates[0].simplified(), "1 - 1/(a)");
        assert_eq!(c.codimension, 1);
        let sys = emit_polynomial_system(&g, None);
        assert_eq!(sys.text(), "1 = a*(1-f1)");
    }

    #[test]
    fn five_edge_example_with_a_chosen_basis() {
        let g = five_edge();
        let c = emit_parametrization(&g);
        assert_eq!(c.ambient_dimension, 5);
        assert_eq!(c.codimension, 3);
        assert_eq!(c.coordinates[0].to_string(), "1 - x2/(r1*x0)");
        // t→z→t, t→u→z→t (r2 backwards), u→z→t→u (r5 backwards)
        let basis = vec![
            Loop { steps: vec![(1, 1), (0, 1)] },
            Loop { steps: vec![(2, 1), (3, 1), (1, -1)] },
            Loop { steps: vec![(3, 1), (0, 1), (4, -1)] },
        ];
        let sys = emit_polynomial_system(&g, Some(&basis));
        let text: Vec<String> = sys.equations.iter().map(|e| e.to_string()).collect();
        assert_eq!(text, ["1 = r1*r2*(1-f1)*(1-f2)", "1 = r2^-1*r3*r4*(1-f3)*(1-f4)/(1-f2)", "1 = r1*r4*r5^-1*(1-f1)*(1-f4)/(1-f5)"]);
        assert_eq!(sys.equations[1].chi, m("r3*r4/r2"));
        assert_eq!(sys.basis_source, "given loop basis");
    }

    #[test]
    fn default_basis_covers_every_edge() {
        let g = five_edge();
        let sys = emit_polynomial_system(&g, None);
        assert_eq!(sys.equations.len(), g.h1());
        let used: BTreeSet<usize> = sys.equations.iter().flat_map(|e| e.factors.iter().map(|f| f.coord)).collect();
        assert_eq!(used, (1..=5).collect());
        let (a0, a) = crate::augmented::generic_args(3);
        let neck = crate::augmented::make_necklace(crate::augmented::Side::L, &a0, &a);
        assert_eq!(emit_polynomial_system(&neck, None).equations.len(), 4);
    }

    #[test]
    fn reading_cycles() {
        let g = graph_from_cycle(&["(1 - x/(a*y))".into(), "1 - y/(b*x)".into()]).unwrap();
        assert_eq!(g, Graph::from_triples(2, &[(0, 1, "a"), (1, 0, "b")]).unwrap());
        let g = graph_from_cycle(&["1 - 1/a".into()]).unwrap();
        assert_eq!(g, Graph::from_triples(1, &[(0, 0, "a")]).unwrap());
        let g = graph_from_cycle(&["(1 - x0/(a*x1))^-1".into(), "1 - x1/x0".into()]).unwrap();
        assert_eq!(g.edges()[0].sign, -1);
        assert!(g.edges()[1].label.is_one());
        for totaro in ["t", "1 - t", "1 - a/t", "1 - a*t1/t2", "(1 - x/y)^2"] {
            assert!(matches!(graph_from_cycle(&[totaro.into()]), Err(Error::NotOneLLinear(_))), "{totaro}");
        }
    }

    #[test]
    fn ast_shape() {
        let g = Graph::from_triples(2, &[(0, 1, "a"), (1, 0, "b")]).unwrap();
        let j = serde_json::to_value(emit_parametrization(&g).coordinates[0].expr()).unwrap();
        assert_eq!(j["op"], "sub");
        assert_eq!(j["rhs"]["op"], "div");
        assert_eq!(j["rhs"]["den"]["args"][1]["name"], "x1");
        let e = serde_json::to_value(emit_polynomial_system(&g, None).equations[0].expr()).unwrap();
        assert_eq!(e["op"], "eq");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip(g in arb_graph(4, 6)) {
            let text: Vec<String> = emit_parametrization(&g).coordinates.iter().map(|c| c.to_string()).collect();
            let back = graph_from_cycle(&text).unwrap();
            prop_assert_eq!(&back, &g);
            // with other variable names the graph is the same up to numbering,
            // as long as every vertex is the source of some edge
            let sources: BTreeSet<usize> = g.edges().iter().map(|e| e.src).collect();
            prop_assume!(sources.len() == g.num_vertices());
            let renamed: Vec<String> = text.iter().map(|t| t.replace('x', "v")).collect();
            prop_assert_eq!(canonical_form(&graph_from_cycle(&renamed).unwrap()).unwrap(), canonical_form(&g).unwrap());
        }

        #[test]
        fn equivalent_graphs_give_equivalent_systems(g in arb_graph(4, 6), alpha in crate::strategies::arb_monomial(), rev in any::<bool>()) {
            let base = emit_polynomial_system(&g, None);
            let basis: Vec<Loop> = base.equations.iter().map(|e| e.lp.clone()).collect();
            // rescaling a vertex and reordering edges keep χ per loop
            let h = vertex_rescale(&g, 0, &alpha);
            let perm: Vec<usize> = (0..g.num_edges()).rev().collect();
            let h = h.permute_edges(&perm);
            let moved: Vec<Loop> = basis
                .iter()
                .map(|l| Loop { steps: l.steps.iter().map(|&(e, d)| (perm.iter().position(|&p| p == e).unwrap(), d)).collect() })
                .collect();
            let h = if rev { h.reversed() } else { h };
            let other = emit_polynomial_system(&h, Some(&moved));
            for (x, y) in base.equations.iter().zip(&other.equations) {
                prop_assert!(x.chi == y.chi || x.chi == y.chi.inv());
                if !rev {
                    prop_assert_eq!(&x.chi, &y.chi);
                }
            }
        }
    }
}

//! Built-in example sums and the JSON sum format.
//!
//! A sum file is either a single graph or
//! `{"name": …, "terms": [{"coeff": 1 | "-1/2", "graph": {…}}, …]}`; labels
//! may be written as monomial strings (`"a*b/c"`). Edge array order is ω.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bar::{check_completely_decomposable_with, Decomposability};
use crate::canonical::GraphSum;
use crate::dga::{differential_with, is_admissible, is_dot_zero};
use crate::graph_core::Graph;
use crate::{Budget, Error};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    pub fn value(&self) -> Result<BigRational, Error> {
        match self {
            Coeff::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Coeff::Text(t) => BigRational::from_str(t.trim()).map_err(|_| Error::Parse(format!("bad coefficient `{t}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Term {
    pub coeff: Coeff,
    pub graph: Graph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SumFile {
    #[serde(default)]
    pub name: Option<String>,
    pub terms: Vec<Term>,
}

impl SumFile {
    pub fn parse(text: &str) -> Result<SumFile, Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Sum(SumFile),
            Graph(Graph),
        }
        match serde_json::from_str::<Input>(text) {
            Ok(Input::Sum(s)) => Ok(s),
            Ok(Input::Graph(g)) => Ok(SumFile { name: None, terms: vec![Term { coeff: Coeff::Int(1), graph: g }] }),
            // untagged errors are uninformative; retry each shape for the message
            Err(_) => match serde_json::from_str::<SumFile>(text) {
                Err(e) if text.contains("\"terms\"") => Err(Error::Parse(e.to_string())),
                _ => serde_json::from_str::<Graph>(text).map(|_| unreachable!()).map_err(|e| Error::Parse(e.to_string())),
            },
        }
    }

    pub fn to_sum(&self, budget: &Budget) -> Result<GraphSum, Error> {
        let mut s = GraphSum::zero();
        for t in &self.terms {
            s.add_graph(&t.coeff.value()?, &t.graph, budget)?;
        }
        Ok(s)
    }
}

pub const EXAMPLES: &[(&str, &str)] = &[
    ("herbert4", include_str!("../corpus/herbert4.json")),
    ("herbert4-variant", include_str!("../corpus/herbert4-variant.json")),
    ("slashedbox-6", include_str!("../corpus/slashedbox-6.json")),
    ("slashedbox-5", include_str!("../corpus/slashedbox-5.json")),
    ("necklace-4", include_str!("../corpus/necklace-4.json")),
    ("sauron", include_str!("../corpus/sauron.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    EXAMPLES.iter().map(|(n, _)| *n)
}

pub fn example(name: &str) -> Result<SumFile, Error> {
    let (_, text) = EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Parse(format!("unknown example `{name}`; known: {}", names().collect::<Vec<_>>().join(", "))))?;
    SumFile::parse(text)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub summands: usize,
    pub admissible: bool,
    /// Handle count of every summand, in file order.
    pub handles: Vec<usize>,
    /// Multiplier applied to each listed coefficient (see [`verify_sum`]).
    pub signs: Vec<i64>,
    #[serde(rename = "boundaryDecomposable")]
    pub boundary_decomposable: bool,
    #[serde(rename = "completelyDecomposable")]
    pub completely_decomposable: bool,
    /// Number of words in each tensor length of the closed lift.
    #[serde(rename = "liftLayers")]
    pub lift_layers: Vec<usize>,
    pub sum: serde_json::Value,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.admissible && self.boundary_decomposable && self.completely_decomposable && self.same_handles()
    }

    pub fn same_handles(&self) -> bool {
        self.handles.windows(2).all(|w| w[0] == w[1])
    }

    pub fn as_listed(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }
}

/// Most sign patterns tried by [`verify_sum`].
const SIGN_SEARCH_TERMS: usize = 12;

fn signed_sum(file: &SumFile, mask: u32, budget: &Budget) -> Result<GraphSum, Error> {
    let mut s = GraphSum::zero();
    for (i, t) in file.terms.iter().enumerate() {
        let c = t.coeff.value()?;
        s.add_graph(&if mask >> i & 1 == 1 { -c } else { c }, &t.graph, budget)?;
    }
    Ok(s)
}

/// Admissibility, handle counts and complete decomposability of a sum.
///
/// A drawn example fixes each graph only up to its edge order ω, i.e. up to
/// a sign per summand. The listed coefficients are tried first, then every
/// relative sign pattern (first summand fixed) until one is completely
/// decomposable; `signs` records the pattern used. Patterns whose sum
/// cancels to zero are skipped.
pub fn verify_sum(name: &str, file: &SumFile, depth: usize, budget: &Budget) -> Result<ExampleReport, Error> {
    let mut admissible = true;
    for t in &file.terms {
        admissible &= is_admissible(&t.graph, budget)?.admissible;
    }
    let handles = file.terms.iter().map(|t| t.graph.handle_decomposition().handles.len()).collect();
    let k = file.terms.len();
    let masks = if (2..=SIGN_SEARCH_TERMS).contains(&k) { 1u32 << (k - 1) } else { 1 };
    let mut found = None;
    for half in 0..masks {
        let mask = half << 1;
        let sum = signed_sum(file, mask, budget)?;
        // a pattern under which the summands cancel verifies nothing
        if sum.is_zero() || !is_dot_zero(&differential_with(&sum, budget)?).0 {
            continue;
        }
        if let Decomposability::Yes { layers, .. } = check_completely_decomposable_with(&sum, depth, budget)? {
            found = Some((mask, sum, layers.iter().map(|l| l.len()).collect()));
            break;
        }
    }
    let (mask, sum, lift_layers, completely_decomposable) = match found {
        Some((mask, sum, layers)) => (mask, sum, layers, true),
        None => (0, signed_sum(file, 0, budget)?, Vec::new(), false),
    };
    let boundary_decomposable = is_dot_zero(&differential_with(&sum, budget)?).0;
    Ok(ExampleReport {
        name: name.to_string(),
        summands: k,
        admissible,
        handles,
        signs: (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect(),
        boundary_decomposable,
        completely_decomposable,
        lift_layers,
        sum: sum.to_json(),
    })
}

pub fn verify_example(name: &str, depth: usize, budget: &Budget) -> Result<ExampleReport, Error> {
    verify_sum(name, &example(name)?, depth, budget)
}

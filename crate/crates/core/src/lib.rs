//! Exact symbolic engine for the differential graded algebra of labeled,
//! oriented, ordered graphs and its bar constructions.
//!
//! Layout, bottom up:
//! - [`labels`]: the multiplicative label group (rationals x free symbols).
//! - [`graph_core`]: validated graphs, forests, loops, cycles, blocks, handles.
//! - [`canonical`]: canonical forms modulo reordering, rescaling and reversal;
//!   the graded-commutative [`GraphSum`] algebra.
//! - [`dga`]: the differential, admissibility, handle splitting.
//! - [`bar`]: the bar complex, decomposability, lifts and witnesses.
//! - [`cycles`]: parametrized cycles and polynomial systems.
//! - [`augmented`]: simplex-labeled graphs, necklace families, circular bar.
//! - [`hodge_numeric`]: polylogarithms and regularized simplex quadrature.
//! - [`corpus`]: the built-in example sums.

pub mod augmented;
pub mod bar;
pub mod canonical;
pub mod corpus;
pub mod cycles;
pub mod dga;
pub mod graph_core;
pub mod hodge_numeric;
pub mod labels;
pub mod linalg;
#[cfg(test)]
mod strategies;

pub use bar::{BarElement, BarWord};
pub use canonical::{CanonicalKey, GraphSum};
pub use graph_core::{Edge, Graph, Loop};
pub use labels::{ExtLabel, Monomial, Symbol};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("label coefficient is zero")]
    ZeroLabel,
    #[error("indeterminate form 0/0 while substituting into `{0}`")]
    IndeterminateForm(String),
    #[error("no value assigned to symbol `{0}`")]
    MissingAssignment(String),
    #[error("symbol `{0}` assigned zero")]
    ZeroAssignment(String),
    #[error("edge {edge} references vertex {vertex} but the graph has {n} vertices")]
    InvalidVertexIndex { edge: usize, vertex: usize, n: usize },
    #[error("vertex {0} has no incident edge")]
    IsolatedVertex(usize),
    #[error("edge sign must be +1 or -1, got {0}")]
    InvalidSign(i64),
    #[error("invalid graph: {0:?}")]
    InvalidGraph(Vec<Error>),
    #[error("component with {0} vertices exceeds the vertex budget {1}")]
    VertexBudgetExceeded(usize, usize),
    #[error("simple-cycle enumeration exceeded the budget of {0}")]
    CycleBudgetExceeded(usize),
    #[error("decomposition did not terminate within depth {0}")]
    DepthExceeded(usize),
    #[error("lift obstructed; residue has {0} terms")]
    LiftObstructed(usize),
    #[error("closure failed: {0}")]
    ClosureFailed(String),
    #[error("coordinate is not P1-linear: {0}")]
    NotOneLLinear(String),
    #[error("numeric domain error: {0}")]
    DomainError(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("tolerance not met: estimate {0:e}")]
    ToleranceNotMet(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Resource limits shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest connected component canonicalized by brute force.
    pub vertices: usize,
    /// Largest number of simple cycles enumerated.
    pub cycles: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { vertices: 10, cycles: 1_000_000 }
    }
}

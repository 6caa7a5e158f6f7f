//! Undirected weighted graphs, degrees and the normalized Laplacian.
//!
//! A [`Graph`] stores its adjacency `W` as a symmetric CSR matrix. Node order
//! is fixed at construction and shared by every operator built from the
//! graph. Isolated (zero-degree) nodes are allowed; the Laplacian treats them
//! with `D^{-1/2}[n] = 0`, which leaves `L[n,n] = 1`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Graph<T> {
    adjacency: CsrMatrix<T>,
    self_loops: bool,
}

impl<T: Scalar> Graph<T> {
    /// Builds a graph from undirected edges, each listed once. The adjacency
    /// is symmetrized and the result validated.
    pub fn from_edges(
        n_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
        allow_self_loops: bool,
    ) -> Result<Self> {
        let mut triplets = Vec::new();
        let mut seen = BTreeSet::new();
        for (a, b, w) in edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) references a node outside 0..{n_nodes}"
                )));
            }
            if a == b && !allow_self_loops {
                return Err(Error::InvalidGraph(format!(
                    "self-loop on node {a} but self-loops are disabled"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) listed twice")));
            }
            triplets.push((a, b, w));
            if a != b {
                triplets.push((b, a, w));
            }
        }
        let g = Graph {
            adjacency: CsrMatrix::from_triplets(n_nodes, n_nodes, triplets)?,
            self_loops: allow_self_loops,
        };
        let report = validate(&g);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report.to_string()));
        }
        Ok(g)
    }

    /// Wraps an adjacency matrix as-is. Nothing is checked; run [`validate`]
    /// before using the result.
    pub fn from_adjacency_unchecked(adjacency: CsrMatrix<T>, allow_self_loops: bool) -> Self {
        Graph {
            adjacency,
            self_loops: allow_self_loops,
        }
    }

    /// Validating counterpart of [`Graph::from_adjacency_unchecked`].
    pub fn from_adjacency(adjacency: CsrMatrix<T>, allow_self_loops: bool) -> Result<Self> {
        let g = Self::from_adjacency_unchecked(adjacency, allow_self_loops);
        let report = validate(&g);
        if !report.is_valid() {
            return Err(Error::InvalidGraph(report.to_string()));
        }
        Ok(g)
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.n_rows()
    }

    pub fn adjacency(&self) -> &CsrMatrix<T> {
        &self.adjacency
    }

    pub fn self_loops_allowed(&self) -> bool {
        self.self_loops
    }

    pub fn weight(&self, a: usize, b: usize) -> T {
        self.adjacency.get(a, b)
    }

    /// Neighborhood of `node`: every column with a nonzero weight, in
    /// ascending order (includes `node` itself only when it has a self-loop).
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency.row(node).map(|(j, _)| j)
    }

    /// Undirected edges `(a, b, w)` with `a <= b`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.adjacency.triplets().filter(|&(a, b, _)| a <= b)
    }

    pub fn n_edges(&self) -> usize {
        self.edges().count()
    }

    /// Graph with nodes reordered so that new node `i` is old node
    /// `order[i]`. `order` must be a permutation of `0..n`.
    pub fn relabel(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_nodes();
        let inverse = inverse_permutation(order, n)?;
        let triplets = self
            .adjacency
            .triplets()
            .map(|(a, b, w)| (inverse[a], inverse[b], w));
        Ok(Graph {
            adjacency: CsrMatrix::from_triplets(n, n, triplets)?,
            self_loops: self.self_loops,
        })
    }
}

pub(crate) fn inverse_permutation(order: &[usize], n: usize) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: order.len(),
        });
    }
    let mut inverse = vec![usize::MAX; n];
    for (new, &old) in order.iter().enumerate() {
        if old >= n || inverse[old] != usize::MAX {
            return Err(Error::param("order", "not a permutation"));
        }
        inverse[old] = new;
    }
    Ok(inverse)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphIssue {
    Asymmetric { row: usize, col: usize },
    NegativeWeight { row: usize, col: usize },
    NonFiniteWeight { row: usize, col: usize },
    SelfLoop { node: usize },
}

impl std::fmt::Display for GraphIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphIssue::Asymmetric { row, col } => write!(f, "asymmetric weight at ({row}, {col})"),
            GraphIssue::NegativeWeight { row, col } => write!(f, "negative weight at ({row}, {col})"),
            GraphIssue::NonFiniteWeight { row, col } => {
                write!(f, "non-finite weight at ({row}, {col})")
            }
            GraphIssue::SelfLoop { node } => write!(f, "unexpected self-loop on node {node}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<GraphIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks symmetry, sign, finiteness and self-loops. Asymmetry is reported
/// once per unordered pair, at the coordinate with the smaller row.
pub fn validate<T: Scalar>(graph: &Graph<T>) -> ValidationReport {
    let w = &graph.adjacency;
    let mut issues = Vec::new();
    for i in 0..w.n_rows() {
        for (j, v) in w.row(i) {
            if !v.is_finite() {
                issues.push(GraphIssue::NonFiniteWeight { row: i, col: j });
                continue;
            }
            if v < T::zero() {
                issues.push(GraphIssue::NegativeWeight { row: i, col: j });
            }
            if i == j && !graph.self_loops {
                issues.push(GraphIssue::SelfLoop { node: i });
            }
        }
    }
    for i in 0..w.n_rows() {
        for (j, v) in w.row(i) {
            let mirror = w.get(j, i);
            if v != mirror && v.is_finite() {
                let reported_elsewhere = j < i && w.get(j, i) != T::zero();
                if !reported_elsewhere {
                    issues.push(GraphIssue::Asymmetric { row: i.min(j), col: i.max(j) });
                }
            }
        }
    }
    ValidationReport { issues }
}

// ---------------------------------------------------------------------------
// Degrees and Laplacian
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeInfo<T> {
    pub degrees: Vec<T>,
    pub isolated: Vec<usize>,
}

/// Weighted degrees `D_nn = Σ_m W[n,m]`.
pub fn degree_info<T: Scalar>(graph: &Graph<T>) -> DegreeInfo<T> {
    let degrees = graph.adjacency.row_sums();
    let isolated = degrees
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == T::zero())
        .map(|(i, _)| i)
        .collect();
    DegreeInfo { degrees, isolated }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix<T> {
    pub values: CsrMatrix<T>,
    /// Nodes with zero degree; their row and column are those of the
    /// identity.
    pub isolated: Vec<usize>,
}

impl<T: Scalar> LaplacianMatrix<T> {
    pub fn convention_note(&self) -> Option<String> {
        if self.isolated.is_empty() {
            None
        } else {
            Some(format!(
                "{} isolated node(s) use D^-1/2 = 0, giving L[n,n] = 1: {:?}",
                self.isolated.len(),
                self.isolated
            ))
        }
    }
}

/// `D^{-1/2}` as a vector, zero on isolated nodes.
pub(crate) fn inv_sqrt_degrees<T: Scalar>(degrees: &[T]) -> Vec<T> {
    degrees
        .iter()
        .map(|&d| if d > T::zero() { d.sqrt().recip() } else { T::zero() })
        .collect()
}

/// `L = I − D^{-1/2} W D^{-1/2}`.
pub fn normalized_laplacian<T: Scalar>(graph: &Graph<T>) -> LaplacianMatrix<T> {
    let info = degree_info(graph);
    let s = inv_sqrt_degrees(&info.degrees);
    let n = graph.n_nodes();
    let mut triplets = Vec::with_capacity(graph.adjacency.nnz() + n);
    for i in 0..n {
        let mut diag = T::one();
        for (j, w) in graph.adjacency.row(i) {
            let v = s[i] * w * s[j];
            if i == j {
                diag = diag - v;
            } else {
                triplets.push((i, j, -v));
            }
        }
        triplets.push((i, i, diag));
    }
    LaplacianMatrix {
        values: CsrMatrix::from_triplets(n, n, triplets).expect("laplacian triplets are unique"),
        isolated: info.isolated,
    }
}

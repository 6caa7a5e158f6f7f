//! Graph shift operators, low/high-pass filters and the graph Fourier basis.
//!
//! A shift replaces the value at each node with a weighted combination of
//! its neighbors, `f̂ = A f`. The complementary high-pass output `f − A f`
//! keeps what varies quickly across neighborhoods.

use serde::{Deserialize, Serialize};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::graph::{degree_info, normalized_laplacian, Graph};
use crate::scalar::Scalar;
use crate::sparse::CsrMatrix;

/// Largest graph accepted by [`fourier_basis`] unless a different cap is
/// passed.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Real-valued function on nodes: one row per node, one column per signal
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSignal<T>(Matrix<T>);

impl<T: Scalar> NodeSignal<T> {
    pub fn scalar(values: Vec<T>) -> Result<Self> {
        Self::from_matrix(Matrix::column_vector(values))
    }

    pub fn from_matrix(values: Matrix<T>) -> Result<Self> {
        if let Some((row, col)) = values.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        Ok(NodeSignal(values))
    }

    pub fn constant(n: usize, c: T) -> Self {
        NodeSignal(Matrix::column_vector(vec![c; n]))
    }

    pub fn n_nodes(&self) -> usize {
        self.0.rows()
    }

    pub fn dim(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    /// Values of a one-dimensional signal.
    pub fn values(&self) -> Result<&[T]> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                actual: self.dim(),
            });
        }
        Ok(self.0.as_slice())
    }

    pub fn scaled(&self, c: T) -> Self {
        let data = self.0.as_slice().iter().map(|v| *v * c).collect();
        NodeSignal(Matrix::from_row_major(self.n_nodes(), self.dim(), data).expect("same shape"))
    }

    /// Signal with rows reordered so that new row `i` is old row `order[i]`.
    pub fn relabel(&self, order: &[usize]) -> Self {
        NodeSignal(self.0.select_rows(order))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftKind {
    /// `A = W`
    Adjacency,
    /// `A = D^{-1} W`; isolated nodes get an all-zero row.
    #[default]
    Transition,
    /// `A = L = I − D^{-1/2} W D^{-1/2}`
    Laplacian,
}

impl std::fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ShiftKind::Adjacency => "adjacency",
            ShiftKind::Transition => "transition",
            ShiftKind::Laplacian => "laplacian",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOperator<T> {
    pub kind: ShiftKind,
    pub values: CsrMatrix<T>,
    pub row_stochastic: bool,
    pub isolated: Vec<usize>,
}

pub fn shift_operator<T: Scalar>(graph: &Graph<T>, kind: ShiftKind) -> ShiftOperator<T> {
    let info = degree_info(graph);
    let values = match kind {
        ShiftKind::Adjacency => graph.adjacency().clone(),
        ShiftKind::Transition => graph
            .adjacency()
            .map_values(|i, _, w| w / info.degrees[i]),
        ShiftKind::Laplacian => normalized_laplacian(graph).values,
    };
    ShiftOperator {
        kind,
        values,
        row_stochastic: kind == ShiftKind::Transition,
        isolated: info.isolated,
    }
}

impl<T: Scalar> ShiftOperator<T> {
    pub fn n_nodes(&self) -> usize {
        self.values.n_rows()
    }

    fn check(&self, f: &NodeSignal<T>) -> Result<()> {
        if f.n_nodes() != self.n_nodes() {
            return Err(Error::DimensionMismatch {
                expected: self.n_nodes(),
                actual: f.n_nodes(),
            });
        }
        Ok(())
    }
}

/// Low-pass (shifted) signal `A f`, column-wise for vector signals.
pub fn apply_shift<T: Scalar>(op: &ShiftOperator<T>, f: &NodeSignal<T>) -> Result<NodeSignal<T>> {
    op.check(f)?;
    Ok(NodeSignal(op.values.mul_dense(f.matrix())?))
}

/// High-pass signal `f − A f`.
pub fn high_pass<T: Scalar>(op: &ShiftOperator<T>, f: &NodeSignal<T>) -> Result<NodeSignal<T>> {
    let low = apply_shift(op, f)?;
    let data = f
        .matrix()
        .as_slice()
        .iter()
        .zip(low.matrix().as_slice())
        .map(|(a, b)| *a - *b)
        .collect();
    Ok(NodeSignal(Matrix::from_row_major(f.n_nodes(), f.dim(), data)?))
}

/// Orthonormal eigenbasis of a symmetric shift operator.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierBasis<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Matrix<T>,
}

/// Dense eigendecomposition `A = U Λ Uᵀ`.
///
/// Eigenpairs are sorted by eigenvalue, ties broken by the index of the first
/// significant component. Each eigenvector is signed so that its first
/// significant component (magnitude above `√ε · max|u|`) is positive.
/// Transition operators are rejected: they are not symmetric in general.
pub fn fourier_basis<T: Scalar>(op: &ShiftOperator<T>, cap: usize) -> Result<FourierBasis<T>> {
    let n = op.n_nodes();
    if op.kind == ShiftKind::Transition {
        return Err(Error::NotSymmetric(
            "the transition operator D^-1 W has no orthonormal eigenbasis in general; \
             use the adjacency or laplacian operator"
                .into(),
        ));
    }
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    if let Some((i, j, gap)) = op.values.max_asymmetry() {
        if gap > T::epsilon().sqrt() {
            return Err(Error::NotSymmetric(format!("entry ({i}, {j}) differs from its mirror by {gap}")));
        }
    }
    let dense = op.values.to_dense();
    // symmetric, so row-major == column-major
    let (vals, vecs) = T::symmetric_eigen(n, dense.into_vec());

    let tol = T::epsilon().sqrt();
    let mut pairs: Vec<(T, usize, Vec<T>)> = (0..n)
        .map(|j| {
            let mut col = vecs[j * n..(j + 1) * n].to_vec();
            let max = col.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            let lead = col.iter().position(|v| v.abs() > tol * max).unwrap_or(0);
            if col[lead] < T::zero() {
                col.iter_mut().for_each(|v| *v = -*v);
            }
            (vals[j], lead, col)
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite eigenvalues")
            .then(a.1.cmp(&b.1))
    });

    let mut u = Matrix::zeros(n, n);
    for (j, (_, _, col)) in pairs.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            u[(i, j)] = *v;
        }
    }
    Ok(FourierBasis {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        eigenvectors: u,
    })
}

impl<T: Scalar> FourierBasis<T> {
    pub fn n_nodes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Spectrum `Uᵀ f`.
    pub fn gft(&self, f: &[T]) -> Result<Vec<T>> {
        let n = self.n_nodes();
        if f.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: f.len(),
            });
        }
        let u = &self.eigenvectors;
        Ok((0..n)
            .map(|j| (0..n).fold(T::zero(), |acc, i| acc + u[(i, j)] * f[i]))
            .collect())
    }

    /// Signal `U s`.
    pub fn igft(&self, spectrum: &[T]) -> Result<Vec<T>> {
        let n = self.n_nodes();
        if spectrum.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: spectrum.len(),
            });
        }
        let u = &self.eigenvectors;
        Ok((0..n)
            .map(|i| u.row(i).iter().zip(spectrum).fold(T::zero(), |acc, (a, b)| acc + *a * *b))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph<f64> {
        Graph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)], false).unwrap()
    }

    fn edge2() -> Graph<f64> {
        Graph::from_edges(2, vec![(0, 1, 1.0)], false).unwrap()
    }

    #[test]
    fn transition_two_nodes() {
        let op = shift_operator(&edge2(), ShiftKind::Transition);
        assert_eq!(op.values.to_dense().as_slice(), &[0.0, 1.0, 1.0, 0.0]);
        assert!(op.row_stochastic);
    }

    #[test]
    fn transition_path_middle_row() {
        let op = shift_operator(&path3(), ShiftKind::Transition);
        assert_eq!(op.values.to_dense().row(1), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn adjacency_is_w() {
        let g = Graph::from_edges(3, vec![(0, 1, 0.3), (1, 2, 2.5)], false).unwrap();
        let op = shift_operator(&g, ShiftKind::Adjacency);
        assert_eq!(&op.values, g.adjacency());
    }

    #[test]
    fn transition_isolated_row_is_zero() {
        let g = Graph::from_edges(3, vec![(0, 1, 1.0)], false).unwrap();
        let op = shift_operator(&g, ShiftKind::Transition);
        assert_eq!(op.values.row_nnz(2), 0);
        assert_eq!(op.isolated, vec![2]);
    }

    #[test]
    fn shift_and_high_pass_on_path() {
        let op = shift_operator(&path3(), ShiftKind::Transition);
        let f = NodeSignal::scalar(vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(apply_shift(&op, &f).unwrap().values().unwrap(), &[0.0, 0.5, 0.0]);
        assert_eq!(high_pass(&op, &f).unwrap().values().unwrap(), &[0.0, -0.5, 1.0]);
    }

    #[test]
    fn constants_pass_low_and_vanish_high() {
        let op = shift_operator(&path3(), ShiftKind::Transition);
        let c = NodeSignal::constant(3, 2.5);
        assert_eq!(apply_shift(&op, &c).unwrap(), c);
        assert!(high_pass(&op, &c).unwrap().values().unwrap().iter().all(|v| *v == 0.0));
        let z = NodeSignal::constant(3, 0.0);
        assert_eq!(apply_shift(&op, &z).unwrap(), z);
    }

    #[test]
    fn high_pass_scales_linearly() {
        let op = shift_operator(&path3(), ShiftKind::Transition);
        let f = NodeSignal::scalar(vec![0.1, -0.7, 0.3]).unwrap();
        let a = high_pass(&op, &f).unwrap();
        let b = high_pass(&op, &f.scaled(2.0)).unwrap();
        for (x, y) in a.values().unwrap().iter().zip(b.values().unwrap()) {
            assert_eq!(2.0 * x, *y);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let op = shift_operator(&path3(), ShiftKind::Transition);
        let f = NodeSignal::scalar(vec![1.0, 2.0]).unwrap();
        assert!(matches!(apply_shift(&op, &f), Err(Error::DimensionMismatch { .. })));
        assert!(high_pass(&op, &f).is_err());
    }

    #[test]
    fn basis_two_nodes() {
        let op = shift_operator(&edge2(), ShiftKind::Laplacian);
        let b = fourier_basis(&op, DEFAULT_DENSE_CAP).unwrap();
        assert!((b.eigenvalues[0]).abs() < 1e-12);
        assert!((b.eigenvalues[1] - 2.0).abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = &b.eigenvectors;
        assert!((u[(0, 0)] - h).abs() < 1e-12 && (u[(1, 0)] - h).abs() < 1e-12);
        assert!((u[(0, 1)] - h).abs() < 1e-12 && (u[(1, 1)] + h).abs() < 1e-12);
    }

    #[test]
    fn basis_edgeless_is_identity() {
        let g = Graph::<f64>::from_edges(4, vec![], false).unwrap();
        let b = fourier_basis(&shift_operator(&g, ShiftKind::Laplacian), DEFAULT_DENSE_CAP).unwrap();
        assert_eq!(b.eigenvalues, vec![1.0; 4]);
        assert!(b.eigenvectors.max_abs_diff(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn basis_rejects_transition_and_large() {
        assert!(matches!(
            fourier_basis(&shift_operator(&path3(), ShiftKind::Transition), 10),
            Err(Error::NotSymmetric(_))
        ));
        assert!(matches!(
            fourier_basis(&shift_operator(&path3(), ShiftKind::Laplacian), 2),
            Err(Error::TooLarge { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn eigenvector_maps_to_unit_spectrum() {
        let b = fourier_basis(&shift_operator(&path3(), ShiftKind::Laplacian), 10).unwrap();
        for j in 0..3 {
            let s = b.gft(&b.eigenvectors.column(j)).unwrap();
            for (i, v) in s.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-12);
            }
        }
        assert!(b.gft(&[1.0]).is_err());
        assert!(b.igft(&[1.0]).is_err());
    }
}

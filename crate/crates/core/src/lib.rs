//! # graph-influence
//!
//! Graph signal processing for interpretability: build a neighborhood graph
//! over a dataset, place a task-specific explanation function on its nodes,
//! high-pass filter that function and rank nodes by the magnitude of the
//! response.
//!
//! | Module | Purpose |
//! |--------|---------|
//! | [`graph`] | undirected weighted graphs, degrees, normalized Laplacian |
//! | [`knn`] | k-nearest-neighbor graphs from feature matrices |
//! | [`spectral`] | shift operators, low/high-pass filters, graph Fourier basis |
//! | [`influence`] | influence scores, p-hop variant, resampling |
//! | [`explain`] | MMD, distrust, KDE and sparsity-ratio node functions |
//! | [`pipelines`] | prototypes/criticisms, noisy labels, adversarial statistics, sampling |
//! | [`io`], [`manifest`] | file formats and run manifests |
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.
//!
//! ```
//! use graph_influence::{influence_scores, Graph64, NodeSignal, ShiftKind};
//!
//! // path 0 – 1 – 2 with a spike at node 2
//! let g = Graph64::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
//! let f = NodeSignal::scalar(vec![0.0, 0.0, 1.0]).unwrap();
//! let s = influence_scores(&g, &f, ShiftKind::Transition).unwrap();
//! assert_eq!(s.scores, vec![0.0, 0.25, 1.0]);
//! ```

pub mod dense;
pub mod error;
pub mod explain;
pub mod graph;
pub mod influence;
pub mod io;
pub mod knn;
pub mod manifest;
pub mod pipelines;
pub mod scalar;
pub mod sparse;
pub mod spectral;
pub mod synthetic;

pub use dense::Matrix;
pub use error::{Error, Result};
pub use explain::{
    distrust_function, kde_scores, mmd, mmd_global_function, mmd_local_function, mmd_with,
    sparsity_ratio_function, KernelConfig, MmdEstimate, MmdEstimator, NodeFunction,
};
pub use graph::{
    degree_info, normalized_laplacian, validate, DegreeInfo, Graph, GraphIssue, LaplacianMatrix,
    ValidationReport,
};
pub use influence::{
    influence_scores, influence_scores_phop, influence_scores_vector, influence_scores_vector_with,
    influence_scores_with,
    normalize_scores, resampling_distribution, InfluenceScores, Magnitude, NodeSampler,
    ScoreSource,
};
pub use knn::{build_knn_graph, pairwise_distances, Bandwidth, Dataset, KnnConfig, Metric, Weighting};
pub use manifest::RunManifest;
pub use pipelines::RankedSelection;
pub use scalar::Scalar;
pub use sparse::CsrMatrix;
pub use spectral::{
    apply_shift, fourier_basis, high_pass, shift_operator, FourierBasis, NodeSignal, ShiftKind,
    ShiftOperator, DEFAULT_DENSE_CAP,
};

pub type Graph64 = Graph<f64>;
pub type Graph32 = Graph<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Dataset64 = Dataset<f64>;
pub type Dataset32 = Dataset<f32>;
pub type NodeSignal64 = NodeSignal<f64>;
pub type NodeSignal32 = NodeSignal<f32>;
pub type InfluenceScores64 = InfluenceScores<f64>;
pub type FourierBasis64 = FourierBasis<f64>;
pub type RankedSelection64 = RankedSelection<f64>;

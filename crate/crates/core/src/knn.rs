//! k-nearest-neighbor domain graphs over feature matrices.
//!
//! Each sample selects its `k` closest other samples (ties go to the lower
//! index); the directed relation is then symmetrized by union, so an edge
//! exists whenever either endpoint selected the other.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{norm, squared_euclidean, Matrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{cast, median, Scalar};

/// Feature table with optional per-sample annotations.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    pub features: Matrix<T>,
    pub labels: Option<Vec<i64>>,
    pub flags: Option<Vec<bool>>,
    pub ids: Option<Vec<String>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(features: Matrix<T>) -> Result<Self> {
        if let Some((row, col)) = features.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        Ok(Dataset {
            features,
            labels: None,
            flags: None,
            ids: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<i64>) -> Result<Self> {
        self.check_len(labels.len())?;
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_flags(mut self, flags: Vec<bool>) -> Result<Self> {
        self.check_len(flags.len())?;
        self.flags = Some(flags);
        Ok(self)
    }

    pub fn with_ids(mut self, ids: Vec<String>) -> Result<Self> {
        self.check_len(ids.len())?;
        self.ids = Some(ids);
        Ok(self)
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn labels(&self) -> Result<&[i64]> {
        self.labels.as_deref().ok_or(Error::EmptyInput("labels"))
    }

    pub fn flags(&self) -> Result<&[bool]> {
        self.flags.as_deref().ok_or(Error::EmptyInput("flags"))
    }

    /// Subset of samples (with their annotations) in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        Dataset {
            features: self.features.select_rows(idx),
            labels: self.labels.as_ref().map(|v| idx.iter().map(|&i| v[i]).collect()),
            flags: self.flags.as_ref().map(|v| idx.iter().map(|&i| v[i]).collect()),
            ids: self
                .ids
                .as_ref()
                .map(|v| idx.iter().map(|&i| v[i].clone()).collect()),
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n_samples() {
            return Err(Error::DimensionMismatch {
                expected: self.n_samples(),
                actual: len,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// `1 − cos(a, b)`; a zero vector is at distance 1 from every other row.
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Weighting {
    #[default]
    Binary,
    Gaussian,
}

/// Kernel/edge bandwidth selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    #[default]
    Median,
    Fixed(f64),
}

impl Bandwidth {
    pub(crate) fn check(&self) -> Result<()> {
        match *self {
            Bandwidth::Fixed(s) if !(s > 0.0 && s.is_finite()) => {
                Err(Error::param("bandwidth", format!("fixed bandwidth must be > 0, got {s}")))
            }
            _ => Ok(()),
        }
    }

    /// Resolves to a concrete σ. The median of `distances` is used for
    /// [`Bandwidth::Median`]; when that median is zero the mean of the
    /// positive distances is used instead, and 1 when every distance is zero.
    pub(crate) fn resolve<T: Scalar>(&self, distances: &[T]) -> T {
        match *self {
            Bandwidth::Fixed(s) => cast(s),
            Bandwidth::Median => {
                let m = median(distances).unwrap_or_else(T::one);
                if m > T::zero() {
                    return m;
                }
                let positive: Vec<T> = distances.iter().copied().filter(|d| *d > T::zero()).collect();
                if positive.is_empty() {
                    T::one()
                } else {
                    positive.iter().fold(T::zero(), |a, b| a + *b)
                        / crate::scalar::from_usize(positive.len())
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
    #[serde(default)]
    pub metric: Metric,
    #[serde(default)]
    pub weighting: Weighting,
    #[serde(default)]
    pub bandwidth: Bandwidth,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 20,
            metric: Metric::Euclidean,
            weighting: Weighting::Binary,
            bandwidth: Bandwidth::Median,
        }
    }
}

impl KnnConfig {
    pub fn with_k(k: usize) -> Self {
        KnnConfig {
            k,
            ..Default::default()
        }
    }
}

pub(crate) fn distance<T: Scalar>(a: &[T], b: &[T], metric: Metric) -> T {
    match metric {
        Metric::Euclidean => squared_euclidean(a, b).sqrt(),
        Metric::Cosine => {
            if a == b {
                return T::zero();
            }
            let (na, nb) = (norm(a), norm(b));
            if na == T::zero() || nb == T::zero() {
                return T::one();
            }
            let dot = a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y);
            let cos = dot / (na * nb);
            (T::one() - cos).max(T::zero()).min(cast(2.0))
        }
    }
}

fn check_features<T: Scalar>(features: &Matrix<T>) -> Result<()> {
    if let Some((row, col)) = features.first_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    Ok(())
}

/// Dense symmetric distance matrix with zero diagonal. Rows are evaluated in
/// parallel; each entry is computed once and mirrored.
pub fn pairwise_distances<T: Scalar>(features: &Matrix<T>, metric: Metric) -> Result<Matrix<T>> {
    let n = features.rows();
    if n < 2 {
        return Err(Error::param("features", "at least two samples are required"));
    }
    check_features(features)?;
    let upper: Vec<Vec<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .map(|j| distance(features.row(i), features.row(j), metric))
                .collect()
        })
        .collect();
    let mut d = Matrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + 1 + off;
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(d)
}

/// Directed k-NN selections: for each node, `(neighbor, distance)` sorted by
/// distance then index.
pub fn knn_selections<T: Scalar>(
    features: &Matrix<T>,
    k: usize,
    metric: Metric,
) -> Result<Vec<Vec<(usize, T)>>> {
    let n = features.rows();
    if k == 0 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if k >= n {
        return Err(Error::param("k", format!("k = {k} must be smaller than the sample count {n}")));
    }
    check_features(features)?;
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut cand: Vec<(usize, T)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (j, distance(features.row(i), features.row(j), metric)))
                .collect();
            let cmp = |a: &(usize, T), b: &(usize, T)| {
                a.1.partial_cmp(&b.1)
                    .expect("finite distances")
                    .then(a.0.cmp(&b.0))
            };
            cand.select_nth_unstable_by(k - 1, cmp);
            cand.truncate(k);
            cand.sort_by(cmp);
            cand
        })
        .collect())
}

/// Builds the union-symmetrized k-NN graph.
///
/// Gaussian weights are `exp(−d²/(2σ²))` with σ resolved from all selected
/// k-NN distances; weights that would underflow to zero are clamped to the
/// smallest positive value so that every selected edge survives.
pub fn build_knn_graph<T: Scalar>(dataset: &Dataset<T>, config: &KnnConfig) -> Result<Graph<T>> {
    config.bandwidth.check()?;
    let n = dataset.n_samples();
    let selections = knn_selections(&dataset.features, config.k, config.metric)?;

    let mut pairs: Vec<(usize, usize, T)> = selections
        .iter()
        .enumerate()
        .flat_map(|(i, sel)| sel.iter().map(move |&(j, d)| (i.min(j), i.max(j), d)))
        .collect();
    pairs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    pairs.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);

    let edges: Vec<(usize, usize, T)> = match config.weighting {
        Weighting::Binary => pairs.iter().map(|&(a, b, _)| (a, b, T::one())).collect(),
        Weighting::Gaussian => {
            let selected: Vec<T> = selections.iter().flatten().map(|&(_, d)| d).collect();
            let sigma = config.bandwidth.resolve(&selected);
            let two_s2 = cast::<T>(2.0) * sigma * sigma;
            pairs
                .iter()
                .map(|&(a, b, d)| {
                    let w = (-(d * d) / two_s2).exp().max(T::min_positive_value());
                    (a, b, w)
                })
                .collect()
        }
    };
    Graph::from_edges(n, edges, false)
}

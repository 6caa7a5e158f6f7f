//! Task-specific explanation functions defined on graph nodes.
//!
//! Each function encodes a hypothesis as a real value per node; the influence
//! filter then looks for places where that value changes abruptly.
//!
//! | Function | Node value |
//! |----------|------------|
//! | [`mmd_global_function`] | MMD between the data without a node's neighborhood and the same set plus the node |
//! | [`mmd_local_function`] | as above, restricted to the node's class |
//! | [`distrust_function`] | fraction of neighbors whose label disagrees |
//! | [`kde_scores`] | RBF kernel density against the predicted class's reference samples |
//! | [`sparsity_ratio_function`] | size relative to the largest element |

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{squared_euclidean, Matrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::knn::{Bandwidth, Dataset};
use crate::scalar::{cast, from_usize, Scalar};
use crate::spectral::NodeSignal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct KernelConfig {
    /// RBF bandwidth; the median heuristic uses the median pairwise distance
    /// of the relevant sample pool.
    #[serde(default)]
    pub bandwidth: Bandwidth,
}

impl KernelConfig {
    pub fn fixed(sigma: f64) -> Self {
        KernelConfig {
            bandwidth: Bandwidth::Fixed(sigma),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MmdEstimator {
    /// V-statistic; never negative.
    #[default]
    Biased,
    /// U-statistic excluding self-pairs; needs two samples per set and can be
    /// slightly negative.
    Unbiased,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdEstimate<T> {
    pub squared: T,
    /// `sqrt(max(squared, 0))`
    pub value: T,
    pub sigma: T,
}

/// `exp(−‖x − y‖² / (2σ²))`
#[inline]
pub fn rbf<T: Scalar>(x: &[T], y: &[T], sigma: T) -> T {
    (-squared_euclidean(x, y) / (cast::<T>(2.0) * sigma * sigma)).exp()
}

/// Distances between every pair of distinct rows.
pub(crate) fn pooled_pairwise_distances<T: Scalar>(rows: &[&[T]]) -> Vec<T> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(squared_euclidean(rows[i], rows[j]).sqrt());
        }
    }
    out
}

fn resolve_sigma<T: Scalar>(kernel: &KernelConfig, rows: &[&[T]]) -> Result<T> {
    kernel.bandwidth.check()?;
    Ok(match kernel.bandwidth {
        Bandwidth::Fixed(s) => cast(s),
        Bandwidth::Median => kernel.bandwidth.resolve(&pooled_pairwise_distances(rows)),
    })
}

fn mean_kernel<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, sigma: T, skip_diagonal: bool) -> T {
    let mut sum = T::zero();
    let mut count = 0usize;
    for i in 0..a.rows() {
        for j in 0..b.rows() {
            if skip_diagonal && i == j {
                continue;
            }
            sum = sum + rbf(a.row(i), b.row(j), sigma);
            count += 1;
        }
    }
    sum / from_usize(count)
}

/// Squared MMD between two sample sets with an RBF kernel (biased
/// estimator).
pub fn mmd<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, kernel: &KernelConfig) -> Result<MmdEstimate<T>> {
    mmd_with(a, b, kernel, MmdEstimator::Biased)
}

pub fn mmd_with<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    kernel: &KernelConfig,
    estimator: MmdEstimator,
) -> Result<MmdEstimate<T>> {
    if a.rows() == 0 || b.rows() == 0 {
        return Err(Error::EmptyInput("mmd sample set"));
    }
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            actual: b.cols(),
        });
    }
    let pool: Vec<&[T]> = (0..a.rows()).map(|i| a.row(i)).chain((0..b.rows()).map(|i| b.row(i))).collect();
    let sigma = resolve_sigma(kernel, &pool)?;
    let squared = match estimator {
        MmdEstimator::Biased => {
            let v = mean_kernel(a, a, sigma, false) + mean_kernel(b, b, sigma, false)
                - cast::<T>(2.0) * mean_kernel(a, b, sigma, false);
            v.max(T::zero())
        }
        MmdEstimator::Unbiased => {
            if a.rows() < 2 || b.rows() < 2 {
                return Err(Error::param("estimator", "unbiased MMD needs two samples per set"));
            }
            mean_kernel(a, a, sigma, true) + mean_kernel(b, b, sigma, true)
                - cast::<T>(2.0) * mean_kernel(a, b, sigma, false)
        }
    };
    Ok(MmdEstimate {
        squared,
        value: squared.max(T::zero()).sqrt(),
        sigma,
    })
}

/// Values of an explanation function plus the nodes whose value had to be
/// substituted or defaulted.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeFunction<T> {
    pub values: Vec<T>,
    pub flagged: Vec<usize>,
    /// Kernel bandwidth per class (`None` key for the pooled/global case).
    pub sigmas: BTreeMap<Option<i64>, T>,
}

impl<T: Scalar> NodeFunction<T> {
    pub fn signal(&self) -> Result<NodeSignal<T>> {
        NodeSignal::scalar(self.values.clone())
    }
}

/// Leave-neighborhood-out MMD for every node of `members`.
///
/// For node `i` with removal set `R = {i} ∪ N_i`, let `S = members \ R`
/// (`m = |S|`). Because `S ∪ {x_i}` differs from `S` by one point, the biased
/// estimate collapses to
///
/// ```text
/// MMD²(S, S ∪ {x_i}) = (k(x_i, x_i) − 2 ρ + μ) / (m + 1)²
/// ρ = mean_{s∈S} k(x_i, s),   μ = mean_{s,s'∈S} k(s, s')
/// ```
///
/// and the sums over `S` follow from precomputed row sums over `members`,
/// so each node costs `O(|R|²)` kernel evaluations.
fn leave_neighborhood_out<T: Scalar>(
    features: &Matrix<T>,
    graph: &Graph<T>,
    members: &[usize],
    sigma: T,
    min_remaining: usize,
) -> Vec<Option<T>> {
    let n = features.rows();
    let mut in_class = vec![false; n];
    for &i in members {
        in_class[i] = true;
    }
    let k = |a: usize, b: usize| rbf(features.row(a), features.row(b), sigma);
    let row_sums: Vec<T> = members
        .par_iter()
        .map(|&a| members.iter().fold(T::zero(), |acc, &b| acc + k(a, b)))
        .collect();
    let mut row_sum = vec![T::zero(); n];
    for (&a, &s) in members.iter().zip(&row_sums) {
        row_sum[a] = s;
    }
    let total = row_sums.iter().fold(T::zero(), |acc, v| acc + *v);

    members
        .par_iter()
        .map(|&i| {
            let mut removal: Vec<usize> = graph.neighbors(i).filter(|&j| in_class[j]).collect();
            if !removal.contains(&i) {
                removal.push(i);
            }
            let m = members.len() - removal.len();
            if m < min_remaining {
                return None;
            }
            let mut inner = T::zero();
            let mut removed_rows = T::zero();
            let mut to_node = T::zero();
            for &a in &removal {
                removed_rows = removed_rows + row_sum[a];
                to_node = to_node + k(i, a);
                for &b in &removal {
                    inner = inner + k(a, b);
                }
            }
            let mf: T = from_usize(m);
            let s = total - cast::<T>(2.0) * removed_rows + inner;
            let mu = s / (mf * mf);
            let rho = (row_sum[i] - to_node) / mf;
            let v = (T::one() - cast::<T>(2.0) * rho + mu) / ((mf + T::one()) * (mf + T::one()));
            Some(v.max(T::zero()))
        })
        .collect()
}

fn fill_flagged<T: Scalar>(raw: &[Option<T>], fallback: T) -> (Vec<T>, Vec<usize>) {
    let max = raw.iter().flatten().copied().fold(None, |m: Option<T>, v| Some(m.map_or(v, |m| m.max(v))));
    let sub = max.unwrap_or(fallback);
    let mut flagged = Vec::new();
    let values = raw
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.unwrap_or_else(|| {
                flagged.push(i);
                sub
            })
        })
        .collect();
    (values, flagged)
}

fn check_graph<T: Scalar>(dataset: &Dataset<T>, graph: &Graph<T>) -> Result<()> {
    if dataset.n_samples() != graph.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: dataset.n_samples(),
            actual: graph.n_nodes(),
        });
    }
    Ok(())
}

fn rows_of<'a, T: Scalar>(m: &'a Matrix<T>, idx: &[usize]) -> Vec<&'a [T]> {
    idx.iter().map(|&i| m.row(i)).collect()
}

/// `f(i) = MMD²(X̄, X̄ ∪ {x_i})` with `X̄` the dataset minus `i` and its
/// neighbors. The median bandwidth is resolved once over the whole dataset.
/// Nodes whose neighborhood covers the dataset are flagged and receive the
/// maximum over the remaining nodes.
pub fn mmd_global_function<T: Scalar>(
    dataset: &Dataset<T>,
    graph: &Graph<T>,
    kernel: &KernelConfig,
) -> Result<NodeFunction<T>> {
    check_graph(dataset, graph)?;
    let all: Vec<usize> = (0..dataset.n_samples()).collect();
    let sigma = resolve_sigma(kernel, &rows_of(&dataset.features, &all))?;
    let raw = leave_neighborhood_out(&dataset.features, graph, &all, sigma, 1);
    let (values, flagged) = fill_flagged(&raw, T::zero());
    Ok(NodeFunction {
        values,
        flagged,
        sigmas: BTreeMap::from([(None, sigma)]),
    })
}

/// Class-conditional variant of [`mmd_global_function`]: both sets contain
/// only samples with node `i`'s label, and the median bandwidth is resolved
/// per class. Nodes left with fewer than two same-class samples are flagged
/// and receive their class maximum.
pub fn mmd_local_function<T: Scalar>(
    dataset: &Dataset<T>,
    graph: &Graph<T>,
    kernel: &KernelConfig,
) -> Result<NodeFunction<T>> {
    check_graph(dataset, graph)?;
    let labels = dataset.labels()?;
    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    let n = dataset.n_samples();
    let mut values = vec![T::zero(); n];
    let mut flagged = Vec::new();
    let mut sigmas = BTreeMap::new();
    for (&label, members) in &classes {
        let sigma = resolve_sigma(kernel, &rows_of(&dataset.features, members))?;
        sigmas.insert(Some(label), sigma);
        let raw = leave_neighborhood_out(&dataset.features, graph, members, sigma, 2);
        let (class_values, class_flagged) = fill_flagged(&raw, T::zero());
        for (pos, &node) in members.iter().enumerate() {
            values[node] = class_values[pos];
        }
        flagged.extend(class_flagged.iter().map(|&p| members[p]));
    }
    flagged.sort_unstable();
    Ok(NodeFunction {
        values,
        flagged,
        sigmas,
    })
}

/// `f(i) = 1 − |{j ∈ N_i : label_j = label_i}| / |N_i|`, self excluded.
/// Isolated nodes get 0 and are flagged.
pub fn distrust_function<T: Scalar>(graph: &Graph<T>, labels: &[i64]) -> Result<NodeFunction<T>> {
    if labels.len() != graph.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: graph.n_nodes(),
            actual: labels.len(),
        });
    }
    let mut flagged = Vec::new();
    let values = (0..graph.n_nodes())
        .map(|i| {
            let (mut total, mut agree) = (0usize, 0usize);
            for j in graph.neighbors(i).filter(|&j| j != i) {
                total += 1;
                if labels[j] == labels[i] {
                    agree += 1;
                }
            }
            if total == 0 {
                flagged.push(i);
                T::zero()
            } else {
                T::one() - from_usize::<T>(agree) / from_usize(total)
            }
        })
        .collect();
    Ok(NodeFunction {
        values,
        flagged,
        sigmas: BTreeMap::new(),
    })
}

/// Mean RBF kernel between each query and the reference samples of its
/// predicted class (unnormalized density; higher = more typical). With
/// `log = true` the natural log of that mean is returned, evaluated with
/// log-sum-exp. The median bandwidth is resolved over all reference samples.
pub fn kde_scores<T: Scalar>(
    query: &Matrix<T>,
    reference: &BTreeMap<i64, Matrix<T>>,
    predicted: &[i64],
    kernel: &KernelConfig,
    log: bool,
) -> Result<NodeFunction<T>> {
    if predicted.len() != query.rows() {
        return Err(Error::DimensionMismatch {
            expected: query.rows(),
            actual: predicted.len(),
        });
    }
    for &c in predicted {
        match reference.get(&c) {
            Some(r) if r.rows() > 0 => {
                if r.cols() != query.cols() {
                    return Err(Error::DimensionMismatch {
                        expected: query.cols(),
                        actual: r.cols(),
                    });
                }
            }
            _ => return Err(Error::MissingClass(c)),
        }
    }
    let pool: Vec<&[T]> = reference
        .values()
        .flat_map(|m| (0..m.rows()).map(move |i| m.row(i)))
        .collect();
    let sigma = resolve_sigma(kernel, &pool)?;
    let two_s2 = cast::<T>(2.0) * sigma * sigma;
    let values = (0..query.rows())
        .into_par_iter()
        .map(|i| {
            let r = &reference[&predicted[i]];
            let exps: Vec<T> = (0..r.rows())
                .map(|j| -squared_euclidean(query.row(i), r.row(j)) / two_s2)
                .collect();
            let count: T = from_usize(r.rows());
            if log {
                let top = exps.iter().copied().fold(T::neg_infinity(), T::max);
                let s = exps.iter().fold(T::zero(), |acc, e| acc + (*e - top).exp());
                top + s.ln() - count.ln()
            } else {
                exps.iter().fold(T::zero(), |acc, e| acc + e.exp()) / count
            }
        })
        .collect();
    Ok(NodeFunction {
        values,
        flagged: Vec::new(),
        sigmas: BTreeMap::from([(None, sigma)]),
    })
}

/// `f(i) = size(i) / max(size)`.
pub fn sparsity_ratio_function<T: Scalar>(sizes: &[T]) -> Result<NodeSignal<T>> {
    if sizes.is_empty() {
        return Err(Error::EmptyInput("node sizes"));
    }
    if let Some(i) = sizes.iter().position(|s| !(*s > T::zero() && s.is_finite())) {
        return Err(Error::param("sizes", format!("size at node {i} is not positive")));
    }
    let max = sizes.iter().copied().fold(T::zero(), T::max);
    NodeSignal::scalar(sizes.iter().map(|s| *s / max).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn mmd_identical_sets_is_zero() {
        let a = m(&[&[0.0, 1.0], &[2.0, -1.0], &[0.5, 0.5]]);
        let e = mmd(&a, &a, &KernelConfig::default()).unwrap();
        assert!(e.squared.abs() < 1e-12);
    }

    #[test]
    fn mmd_two_points_closed_form() {
        let e = mmd(&m(&[&[0.0]]), &m(&[&[1.0]]), &KernelConfig::fixed(1.0)).unwrap();
        let expected = 2.0 - 2.0 * (-0.5f64).exp();
        assert!((e.squared - expected).abs() < 1e-12);
        assert!((e.squared - 0.78694).abs() < 1e-5);
        assert!((e.value - expected.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mmd_errors() {
        let empty = Matrix::<f64>::zeros(0, 1);
        assert!(mmd(&empty, &m(&[&[1.0]]), &KernelConfig::default()).is_err());
        assert!(mmd(&m(&[&[1.0, 2.0]]), &m(&[&[1.0]]), &KernelConfig::default()).is_err());
        assert!(mmd_with(&m(&[&[1.0]]), &m(&[&[2.0], &[3.0]]), &KernelConfig::default(), MmdEstimator::Unbiased)
            .is_err());
    }

    #[test]
    fn distrust_examples() {
        // star: node 0 with neighbors 1..=4
        let g = Graph::from_edges(6, (1..5).map(|j| (0, j, 1.0)), false).unwrap();
        let f = distrust_function(&g, &[1, 1, 1, 1, 2, 1]).unwrap();
        assert_eq!(f.values[0], 0.25);
        assert_eq!(f.values[1], 0.0);
        assert_eq!(f.values[4], 1.0);
        assert_eq!(f.values[5], 0.0);
        assert_eq!(f.flagged, vec![5]);
        assert!(distrust_function(&g, &[1, 2]).is_err());
    }

    #[test]
    fn kde_examples() {
        let refs = BTreeMap::from([(0, m(&[&[-1.0], &[0.0], &[1.0]])), (1, m(&[&[5.0]]))]);
        let q = m(&[&[0.0], &[5.0], &[1000.0]]);
        let f = kde_scores(&q, &refs, &[0, 1, 1], &KernelConfig::fixed(1.0), false).unwrap();
        let expected = (2.0 * (-0.5f64).exp() + 1.0) / 3.0;
        assert!((f.values[0] - expected).abs() < 1e-12);
        assert!((f.values[0] - 0.737687).abs() < 1e-5);
        assert_eq!(f.values[1], 1.0);
        assert!(f.values[2] < 1e-100);
        let lg = kde_scores(&q, &refs, &[0, 1, 1], &KernelConfig::fixed(1.0), true).unwrap();
        assert!((lg.values[0] - expected.ln()).abs() < 1e-12);
        assert!(lg.values[2].is_finite());
        assert!(matches!(
            kde_scores(&q, &refs, &[0, 2, 1], &KernelConfig::fixed(1.0), false),
            Err(Error::MissingClass(2))
        ));
    }

    #[test]
    fn sparsity_examples() {
        let f = sparsity_ratio_function(&[10.0, 20.0, 40.0]).unwrap();
        assert_eq!(f.values().unwrap(), &[0.25, 0.5, 1.0]);
        assert_eq!(sparsity_ratio_function(&[3.0, 3.0]).unwrap().values().unwrap(), &[1.0, 1.0]);
        assert_eq!(sparsity_ratio_function(&[7.0]).unwrap().values().unwrap(), &[1.0]);
        assert!(sparsity_ratio_function(&[1.0, 0.0]).is_err());
        assert!(sparsity_ratio_function::<f64>(&[]).is_err());
    }

    #[test]
    fn global_flags_covering_neighborhood() {
        // star over 3 nodes: node 0's neighborhood is everything
        let d = Dataset::new(m(&[&[0.0], &[1.0], &[2.0]])).unwrap();
        let g = Graph::from_edges(3, vec![(0, 1, 1.0), (0, 2, 1.0)], false).unwrap();
        let f = mmd_global_function(&d, &g, &KernelConfig::fixed(1.0)).unwrap();
        assert_eq!(f.flagged, vec![0]);
        assert_eq!(f.values[0], f.values[1].max(f.values[2]));
    }
}

//! Node influence from high-pass filtered explanation functions.
//!
//! The influence of node `i` is the magnitude of the high-pass response
//! `(f − A f)(i)`: nodes where the explanation function changes abruptly
//! relative to their neighborhood explain most of the function's variation.
//!
//! Two pipelines are exposed:
//!
//! * [`influence_scores`] / [`influence_scores_vector`] filter `f` directly
//!   with a shift operator.
//! * [`influence_scores_phop`] first smooths `f` over a `p`-hop support and
//!   then high-pass filters the smoothed signal, returning max-normalized
//!   absolute responses.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_info, Graph};
use crate::scalar::{from_usize, Scalar};
use crate::spectral::{high_pass, shift_operator, NodeSignal, ShiftKind};

/// How the high-pass response at a node is turned into a score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Magnitude {
    /// `‖f_h(i)‖²`
    #[default]
    Squared,
    /// `‖f_h(i)‖`
    Absolute,
}

/// Which filter produced a set of scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method")]
pub enum ScoreSource {
    Shift { kind: ShiftKind },
    PHop { hops: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceScores<T> {
    pub scores: Vec<T>,
    pub normalized: bool,
    pub source: ScoreSource,
    pub magnitude: Magnitude,
    /// Zero-degree nodes. Under the transition operator their low-pass
    /// output is zero, so their score is the magnitude of `f(i)` itself.
    pub isolated: Vec<usize>,
}

impl<T: Scalar> InfluenceScores<T> {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Node ids by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<usize> {
        rank_descending(&self.scores)
    }
}

/// Indices sorted by descending value; equal values keep ascending index
/// order.
pub fn rank_descending<T: Scalar>(values: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .expect("scores are finite")
            .then(a.cmp(&b))
    });
    order
}

fn check_len<T: Scalar>(graph: &Graph<T>, f: &NodeSignal<T>) -> Result<()> {
    if f.n_nodes() != graph.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: graph.n_nodes(),
            actual: f.n_nodes(),
        });
    }
    Ok(())
}

/// Squared high-pass response of a one-dimensional signal.
pub fn influence_scores<T: Scalar>(
    graph: &Graph<T>,
    f: &NodeSignal<T>,
    kind: ShiftKind,
) -> Result<InfluenceScores<T>> {
    influence_scores_with(graph, f, kind, Magnitude::Squared)
}

pub fn influence_scores_with<T: Scalar>(
    graph: &Graph<T>,
    f: &NodeSignal<T>,
    kind: ShiftKind,
    magnitude: Magnitude,
) -> Result<InfluenceScores<T>> {
    f.values()?;
    influence_scores_vector_with(graph, f, kind, magnitude)
}

/// `scores[i] = ‖row i of (F − A F)‖²` for an `n × d` signal.
pub fn influence_scores_vector<T: Scalar>(
    graph: &Graph<T>,
    f: &NodeSignal<T>,
    kind: ShiftKind,
) -> Result<InfluenceScores<T>> {
    influence_scores_vector_with(graph, f, kind, Magnitude::Squared)
}

pub fn influence_scores_vector_with<T: Scalar>(
    graph: &Graph<T>,
    f: &NodeSignal<T>,
    kind: ShiftKind,
    magnitude: Magnitude,
) -> Result<InfluenceScores<T>> {
    check_len(graph, f)?;
    let op = shift_operator(graph, kind);
    let filtered = high_pass(&op, f)?;
    let m = filtered.matrix();
    let scores = (0..m.rows())
        .map(|i| {
            let sq = m.row(i).iter().fold(T::zero(), |acc, v| acc + *v * *v);
            match magnitude {
                Magnitude::Squared => sq,
                Magnitude::Absolute => sq.sqrt(),
            }
        })
        .collect();
    Ok(InfluenceScores {
        scores,
        normalized: false,
        source: ScoreSource::Shift { kind },
        magnitude,
        isolated: op.isolated,
    })
}

/// Support of `A_nᵖ` with `A_n = D^{-1/2} W D^{-1/2}`: for each node, the
/// sorted set of nodes reachable by a walk of exactly `p` edges. Entries of
/// `A_n` are nonnegative, so no cancellation can empty a reachable entry.
pub fn phop_support<T: Scalar>(graph: &Graph<T>, p: usize) -> Result<Vec<Vec<usize>>> {
    if p < 1 {
        return Err(Error::param("hops", "must be at least 1"));
    }
    let n = graph.n_nodes();
    let w = graph.adjacency();
    Ok((0..n)
        .into_par_iter()
        .map(|start| {
            let mut mark = vec![false; n];
            let mut frontier = vec![start];
            for _ in 0..p {
                let mut next = Vec::new();
                for &u in &frontier {
                    for (v, _) in w.row(u) {
                        if !mark[v] {
                            mark[v] = true;
                            next.push(v);
                        }
                    }
                }
                for &v in &next {
                    mark[v] = false;
                }
                frontier = next;
            }
            frontier.sort_unstable();
            frontier
        })
        .collect())
}

/// Smoothing and filtering over the `p`-hop support `P`, with `M[i] = |P_i|`:
///
/// ```text
/// f₁       = (P f) / M
/// f_filter = f₁ − (P f₁) / M
/// score    = |f_filter| / max |f_filter|
/// ```
///
/// `P` is the 0/1 support mask of `A_nᵖ`, so the row average preserves
/// constants. Rows with an empty support (isolated nodes) smooth to zero.
/// The returned scores are max-normalized; an all-zero response stays zero.
pub fn influence_scores_phop<T: Scalar>(
    graph: &Graph<T>,
    f: &NodeSignal<T>,
    p: usize,
) -> Result<InfluenceScores<T>> {
    check_len(graph, f)?;
    let values = f.values()?;
    let support = phop_support(graph, p)?;
    let smooth = |x: &[T]| -> Vec<T> {
        support
            .iter()
            .map(|row| {
                if row.is_empty() {
                    T::zero()
                } else {
                    row.iter().fold(T::zero(), |acc, &j| acc + x[j]) / from_usize(row.len())
                }
            })
            .collect()
    };
    let f1 = smooth(values);
    let f1_smooth = smooth(&f1);
    let scores: Vec<T> = f1
        .iter()
        .zip(&f1_smooth)
        .map(|(a, b)| (*a - *b).abs())
        .collect();
    let isolated = degree_info(graph).isolated;
    Ok(normalize_scores(InfluenceScores {
        scores,
        normalized: false,
        source: ScoreSource::PHop { hops: p },
        magnitude: Magnitude::Absolute,
        isolated,
    }))
}

/// Divides by the maximum score. All-zero input is returned unchanged with
/// `normalized = false`.
pub fn normalize_scores<T: Scalar>(mut scores: InfluenceScores<T>) -> InfluenceScores<T> {
    let max = scores.scores.iter().copied().fold(T::zero(), T::max);
    if max > T::zero() {
        scores.scores.iter_mut().for_each(|s| *s = *s / max);
        scores.normalized = true;
    } else {
        scores.normalized = false;
    }
    scores
}

/// `p(n) = score(n) / Σ score`.
pub fn resampling_distribution<T: Scalar>(scores: &InfluenceScores<T>) -> Result<Vec<T>> {
    if let Some(i) = scores.scores.iter().position(|s| !(*s >= T::zero())) {
        return Err(Error::param("scores", format!("score at node {i} is negative or NaN")));
    }
    let total = scores.scores.iter().fold(T::zero(), |a, b| a + *b);
    if total <= T::zero() {
        return Err(Error::ZeroDistribution);
    }
    Ok(scores.scores.iter().map(|s| *s / total).collect())
}

/// Seeded draws from a node distribution.
#[derive(Debug, Clone)]
pub struct NodeSampler {
    weights: Vec<f64>,
    rng: ChaCha8Rng,
}

impl NodeSampler {
    pub fn new<T: Scalar>(probabilities: &[T], seed: u64) -> Result<Self> {
        let weights: Vec<f64> = probabilities
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect();
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::param("probabilities", "must be finite and nonnegative"));
        }
        if !weights.iter().any(|w| *w > 0.0) {
            return Err(Error::ZeroDistribution);
        }
        Ok(NodeSampler {
            weights,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    /// Independent draws with replacement.
    pub fn draw(&mut self, count: usize) -> Vec<usize> {
        let dist = WeightedIndex::new(&self.weights).expect("validated weights");
        (0..count).map(|_| dist.sample(&mut self.rng)).collect()
    }

    /// `count` distinct nodes drawn sequentially, each with probability
    /// proportional to its weight among the nodes not yet drawn. Once every
    /// positive-weight node is taken, the remaining picks are uniform over
    /// the zero-weight nodes.
    pub fn sample_without_replacement(&mut self, count: usize) -> Result<Vec<usize>> {
        let n = self.weights.len();
        if count > n {
            return Err(Error::param("count", format!("{count} exceeds the {n} nodes")));
        }
        let positive = self.weights.iter().filter(|w| **w > 0.0).count();
        let first = count.min(positive);
        let mut picked: Vec<usize> = index::sample_weighted(&mut self.rng, n, |i| self.weights[i], first)
            .map_err(|e| Error::param("probabilities", e.to_string()))?
            .into_vec();
        if count > first {
            let rest: Vec<usize> = (0..n).filter(|i| self.weights[*i] == 0.0).collect();
            let extra = index::sample(&mut self.rng, rest.len(), count - first);
            picked.extend(extra.iter().map(|k| rest[k]));
        }
        Ok(picked)
    }
}

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::influence::{influence_scores_vector, resampling_distribution, NodeSampler};
use crate::scalar::Scalar;
use crate::spectral::{NodeSignal, ShiftKind};

use super::RankedSelection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SamplingStrategy {
    /// Highest vector-signal influence first; deterministic.
    #[default]
    Margin,
    /// Seeded draw without replacement with probability proportional to
    /// influence.
    Resampling,
    /// Seeded uniform draw.
    Random,
}

/// Picks `budget` nodes from an `n × d` embedding signal on `graph`.
/// Selections carry the nodes' influence scores in pick order.
pub fn ssl_sample_selection<T: Scalar>(
    embedding: &NodeSignal<T>,
    graph: &Graph<T>,
    budget: usize,
    strategy: SamplingStrategy,
    seed: u64,
) -> Result<RankedSelection<T>> {
    let n = graph.n_nodes();
    if budget == 0 {
        return Err(Error::param("budget", "must be at least 1"));
    }
    if budget > n {
        return Err(Error::param("budget", format!("{budget} exceeds the {n} nodes")));
    }
    let influence = influence_scores_vector(graph, embedding, ShiftKind::Transition)?;
    let (ids, task) = match strategy {
        SamplingStrategy::Margin => {
            let mut r = influence.ranking();
            r.truncate(budget);
            (r, "sample-margin")
        }
        SamplingStrategy::Resampling => {
            let p = resampling_distribution(&influence)?;
            let ids = NodeSampler::new(&p, seed)?.sample_without_replacement(budget)?;
            (ids, "sample-resampling")
        }
        SamplingStrategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (index::sample(&mut rng, n, budget).into_vec(), "sample-random")
        }
    };
    let scores = ids.iter().map(|&i| influence.scores[i]).collect();
    RankedSelection::new(task, ids, scores)
}

/// Elementwise product `S ⊙ I` of a saliency map and influence scores.
pub fn combine_saliency<T: Scalar>(saliency: &[T], influence: &[T]) -> Result<Vec<T>> {
    if saliency.len() != influence.len() {
        return Err(Error::DimensionMismatch {
            expected: saliency.len(),
            actual: influence.len(),
        });
    }
    if let Some(i) = saliency.iter().chain(influence).position(|v| !(*v >= T::zero())) {
        return Err(Error::param("saliency", format!("entry {i} is negative or NaN")));
    }
    Ok(saliency.iter().zip(influence).map(|(s, i)| *s * *i).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saliency_examples() {
        assert_eq!(combine_saliency(&[0.2, 0.5], &[1.0, 1.0]).unwrap(), vec![0.2, 0.5]);
        assert_eq!(combine_saliency(&[0.2, 0.5], &[0.0, 1.0]).unwrap(), vec![0.0, 0.5]);
        assert_eq!(combine_saliency(&[0.2, 0.5], &[0.5, 1.0]).unwrap(), vec![0.1, 0.5]);
        assert!(combine_saliency(&[0.2], &[0.5, 1.0]).is_err());
        assert!(combine_saliency(&[-0.2], &[0.5]).is_err());
    }

    #[test]
    fn budget_bounds() {
        let g = Graph::from_edges(3, vec![(0, 1, 1.0), (1, 2, 1.0)], false).unwrap();
        let f = NodeSignal::scalar(vec![0.0, 0.0, 1.0]).unwrap();
        assert!(ssl_sample_selection(&f, &g, 0, SamplingStrategy::Margin, 0).is_err());
        assert!(ssl_sample_selection(&f, &g, 4, SamplingStrategy::Margin, 0).is_err());
        for s in [SamplingStrategy::Margin, SamplingStrategy::Resampling, SamplingStrategy::Random] {
            let mut ids = ssl_sample_selection(&f, &g, 3, s, 1).unwrap().ids;
            ids.sort();
            assert_eq!(ids, vec![0, 1, 2]);
        }
    }
}

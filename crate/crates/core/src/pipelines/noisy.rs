//! Label-noise detection and decision-boundary sampling via the distrust
//! function.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::explain::{distrust_function, NodeFunction};
use crate::influence::{influence_scores, InfluenceScores};
use crate::knn::{build_knn_graph, Dataset, KnnConfig};
use crate::scalar::Scalar;
use crate::spectral::ShiftKind;

use super::RankedSelection;

/// Flips `round(beta · class_size)` labels in each of the two classes,
/// chosen uniformly under `seed`. Returns the corrupted labels and the flip
/// mask.
pub fn corrupt_labels(labels: &[i64], beta: f64, seed: u64) -> Result<(Vec<i64>, Vec<bool>)> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::param("beta", format!("flip fraction {beta} must lie in (0, 0.5)")));
    }
    let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    if classes.len() != 2 {
        return Err(Error::NonBinaryLabels(classes.len()));
    }
    let ids: Vec<i64> = classes.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corrupted = labels.to_vec();
    let mut mask = vec![false; labels.len()];
    for (c, members) in &classes {
        let other = if *c == ids[0] { ids[1] } else { ids[0] };
        let count = (beta * members.len() as f64).round() as usize;
        for k in index::sample(&mut rng, members.len(), count).iter() {
            let node = members[k];
            corrupted[node] = other;
            mask[node] = true;
        }
    }
    Ok((corrupted, mask))
}

#[derive(Debug, Clone)]
pub struct NoisyLabelDetection<T> {
    /// Every node, by descending influence.
    pub ranking: RankedSelection<T>,
    pub distrust: NodeFunction<T>,
    pub influence: InfluenceScores<T>,
}

/// k-NN graph over the features, distrust of the given labels, influence
/// under `operator`, all nodes ranked by descending influence.
pub fn noisy_label_detection<T: Scalar>(
    dataset: &Dataset<T>,
    labels: &[i64],
    knn: &KnnConfig,
    operator: ShiftKind,
) -> Result<NoisyLabelDetection<T>> {
    let graph = build_knn_graph(dataset, knn)?;
    let distrust = distrust_function(&graph, labels)?;
    let influence = influence_scores(&graph, &distrust.signal()?, operator)?;
    let ranking = RankedSelection::top("noisy-labels", &influence.scores, dataset.n_samples());
    Ok(NoisyLabelDetection {
        ranking,
        distrust,
        influence,
    })
}

/// Most confusing samples in a latent space: the noisy-label computation
/// restricted to nodes with nonzero influence, truncated to `top_k`.
pub fn confusing_samples<T: Scalar>(
    latent: &Dataset<T>,
    labels: &[i64],
    knn: &KnnConfig,
    top_k: usize,
) -> Result<RankedSelection<T>> {
    let n = latent.n_samples();
    let det = noisy_label_detection(latent, labels, knn, ShiftKind::Transition)?;
    let mut warnings = Vec::new();
    let k = if top_k > n {
        warnings.push(format!("top_k = {top_k} exceeds the {n} samples; clipped"));
        n
    } else {
        top_k
    };
    let mut sel = det.ranking;
    let keep: Vec<usize> = (0..sel.ids.len())
        .filter(|&p| sel.scores[p] > T::zero())
        .take(k)
        .collect();
    sel.ids = keep.iter().map(|&p| sel.ids[p]).collect();
    sel.scores = keep.iter().map(|&p| sel.scores[p]).collect();
    if sel.ids.is_empty() {
        warnings.push("no node has nonzero influence: labels agree across every neighborhood".into());
    }
    sel.task = "confusing".into();
    sel.warnings = warnings;
    Ok(sel)
}

/// Fractions inspected and the share of flips recovered at each.
#[derive(Debug, Clone, PartialEq)]
pub struct RecallCurve {
    pub budgets: Vec<f64>,
    pub recalls: Vec<f64>,
}

impl RecallCurve {
    /// Recall at the first budget `>= b`.
    pub fn at(&self, b: f64) -> Option<f64> {
        self.budgets
            .iter()
            .position(|x| *x >= b - 1e-12)
            .map(|p| self.recalls[p])
    }
}

/// `0.00, 0.01, …, 1.00`
pub fn percent_grid() -> Vec<f64> {
    (0..=100).map(|p| p as f64 / 100.0).collect()
}

/// Number of inspected nodes for budget `b` over `n` nodes: `⌈b·n⌉`, with
/// products within 1e-9 of an integer snapped to it.
fn budget_count(b: f64, n: usize) -> usize {
    let x = b * n as f64;
    let r = x.round();
    let c = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    (c.max(0.0) as usize).min(n)
}

/// `recall(b) = |top ⌈b·n⌉ ∩ flips| / |flips|` for each budget.
pub fn recall_curve<T: Scalar>(
    ranked: &RankedSelection<T>,
    flip_mask: &[bool],
    budgets: &[f64],
) -> Result<RecallCurve> {
    let n = flip_mask.len();
    let total = flip_mask.iter().filter(|f| **f).count();
    if total == 0 {
        return Err(Error::param("flip_mask", "no flips; recall is undefined"));
    }
    if let Some(bad) = ranked.ids.iter().find(|&&i| i >= n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad + 1,
        });
    }
    if let Some(b) = budgets.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::param("budgets", format!("{b} is outside [0, 1]")));
    }
    let mut hits = vec![0usize; ranked.ids.len() + 1];
    for (p, &i) in ranked.ids.iter().enumerate() {
        hits[p + 1] = hits[p] + usize::from(flip_mask[i]);
    }
    let recalls = budgets
        .iter()
        .map(|&b| {
            let c = budget_count(b, n).min(ranked.ids.len());
            hits[c] as f64 / total as f64
        })
        .collect();
    Ok(RecallCurve {
        budgets: budgets.to_vec(),
        recalls,
    })
}

/// Uniformly shuffled node order.
pub fn random_ranking<T: Scalar>(n: usize, seed: u64) -> RankedSelection<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = index::sample(&mut rng, n, n).into_vec();
    RankedSelection {
        scores: vec![T::zero(); n],
        ids,
        task: "random".into(),
        threshold: None,
        warnings: Vec::new(),
    }
}

#[derive(Debug, Clone)]
pub struct SeedOutcome {
    pub seed: u64,
    pub n_flips: usize,
    pub margin: RecallCurve,
    pub random: RecallCurve,
}

#[derive(Debug, Clone)]
pub struct NoisyLabelExperiment {
    pub budgets: Vec<f64>,
    pub per_seed: Vec<SeedOutcome>,
    pub mean_margin: Vec<f64>,
    pub mean_random: Vec<f64>,
}

/// Repeats corrupt → detect → recall for each seed (in parallel; results
/// are ordered by seed position) and averages the curves. The random
/// baseline for seed `s` shuffles with seed `s ^ 0x9E37_79B9_7F4A_7C15`.
pub fn noisy_label_experiment<T: Scalar>(
    dataset: &Dataset<T>,
    beta: f64,
    knn: &KnnConfig,
    seeds: &[u64],
    budgets: &[f64],
) -> Result<NoisyLabelExperiment> {
    let clean = dataset.labels()?;
    let per_seed: Vec<SeedOutcome> = seeds
        .par_iter()
        .map(|&seed| -> Result<SeedOutcome> {
            let (corrupted, mask) = corrupt_labels(clean, beta, seed)?;
            let det = noisy_label_detection(dataset, &corrupted, knn, ShiftKind::Transition)?;
            let random = random_ranking::<T>(dataset.n_samples(), seed ^ 0x9E37_79B9_7F4A_7C15);
            Ok(SeedOutcome {
                seed,
                n_flips: mask.iter().filter(|m| **m).count(),
                margin: recall_curve(&det.ranking, &mask, budgets)?,
                random: recall_curve(&random, &mask, budgets)?,
            })
        })
        .collect::<Result<_>>()?;
    let mean = |pick: &dyn Fn(&SeedOutcome) -> &RecallCurve| -> Vec<f64> {
        (0..budgets.len())
            .map(|j| per_seed.iter().map(|o| pick(o).recalls[j]).sum::<f64>() / per_seed.len().max(1) as f64)
            .collect()
    };
    Ok(NoisyLabelExperiment {
        budgets: budgets.to_vec(),
        mean_margin: mean(&|o| &o.margin),
        mean_random: mean(&|o| &o.random),
        per_seed,
    })
}

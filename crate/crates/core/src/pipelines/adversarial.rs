//! Sample-level statistics for flagged (e.g. adversarial) versus unflagged
//! samples.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::explain::{kde_scores, mmd_global_function, KernelConfig, NodeFunction};
use crate::influence::{influence_scores, InfluenceScores};
use crate::knn::{build_knn_graph, Dataset, KnnConfig};
use crate::scalar::Scalar;
use crate::spectral::ShiftKind;

#[derive(Debug, Clone)]
pub enum AdversarialFunction<T> {
    MmdGlobal,
    Kde {
        /// Reference (training) samples per class.
        reference: BTreeMap<i64, Matrix<T>>,
        /// Model prediction for every node.
        predicted: Vec<i64>,
        log: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub histogram: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationSummary {
    pub flagged: GroupStats,
    pub unflagged: GroupStats,
    /// Shared histogram bin edges (`bins + 1` values).
    pub bin_edges: Vec<f64>,
    /// Probability that a flagged sample scores above an unflagged one
    /// (ties count one half). `None` when a group is empty.
    pub auc: Option<f64>,
    /// `max(auc, 1 − auc)`: separation regardless of orientation.
    pub separation: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone)]
pub struct AdversarialReport<T> {
    pub function: NodeFunction<T>,
    pub influence: InfluenceScores<T>,
    /// Statistics of the influence scores.
    pub margin: SeparationSummary,
    /// Statistics of the raw function values, for comparison.
    pub raw: SeparationSummary,
}

/// Mann–Whitney estimate of the ROC area for `scores` predicting `flags`.
/// Invariant to the order of the inputs.
pub fn roc_auc(scores: &[f64], flags: &[bool]) -> Option<f64> {
    let n_pos = flags.iter().filter(|f| **f).count();
    let n_neg = flags.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).expect("finite scores"));
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && scores[order[end + 1]] == scores[order[start]] {
            end += 1;
        }
        // 1-based ranks start+1 ..= end+1 share their mean
        let avg = (start + end) as f64 / 2.0 + 1.0;
        for &i in &order[start..=end] {
            if flags[i] {
                rank_sum += avg;
            }
        }
        start = end + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

fn group_stats(values: &[f64], edges: &[f64]) -> GroupStats {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let count = sorted.len();
    let (mean, std) = if count == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let mean = sorted.iter().sum::<f64>() / count as f64;
        let var = sorted.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
        (mean, var.sqrt())
    };
    let bins = edges.len() - 1;
    let mut histogram = vec![0usize; bins];
    let (lo, hi) = (edges[0], edges[bins]);
    for v in &sorted {
        let b = if hi > lo {
            (((v - lo) / (hi - lo)) * bins as f64).floor() as usize
        } else {
            0
        };
        histogram[b.min(bins - 1)] += 1;
    }
    GroupStats {
        count,
        mean,
        std,
        histogram,
    }
}

/// Per-group mean, standard deviation, histogram and ROC area.
pub fn separation_summary(values: &[f64], flags: &[bool], bins: usize) -> Result<SeparationSummary> {
    if bins == 0 {
        return Err(Error::param("bins", "must be at least 1"));
    }
    if values.len() != flags.len() {
        return Err(Error::DimensionMismatch {
            expected: flags.len(),
            actual: values.len(),
        });
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 0.0) };
    let edges: Vec<f64> = (0..=bins)
        .map(|b| if b == bins { hi } else { lo + (hi - lo) * b as f64 / bins as f64 })
        .collect();
    let pick = |want: bool| -> Vec<f64> {
        values
            .iter()
            .zip(flags)
            .filter(|(_, f)| **f == want)
            .map(|(v, _)| *v)
            .collect()
    };
    let auc = roc_auc(values, flags);
    Ok(SeparationSummary {
        flagged: group_stats(&pick(true), &edges),
        unflagged: group_stats(&pick(false), &edges),
        bin_edges: edges,
        auc,
        separation: auc.map(|a| a.max(1.0 - a)),
        degenerate: auc.is_none(),
    })
}

/// Graph over all samples, the chosen function per node, influence under the
/// transition operator, and flagged/unflagged summaries of both the
/// influence scores and the raw function values.
pub fn adversarial_characterization<T: Scalar>(
    dataset: &Dataset<T>,
    knn: &KnnConfig,
    function: &AdversarialFunction<T>,
    kernel: &KernelConfig,
    bins: usize,
) -> Result<AdversarialReport<T>> {
    let flags = dataset.flags()?;
    let graph = build_knn_graph(dataset, knn)?;
    let function = match function {
        AdversarialFunction::MmdGlobal => mmd_global_function(dataset, &graph, kernel)?,
        AdversarialFunction::Kde {
            reference,
            predicted,
            log,
        } => kde_scores(&dataset.features, reference, predicted, kernel, *log)?,
    };
    let influence = influence_scores(&graph, &function.signal()?, ShiftKind::Transition)?;
    let to_f64 = |v: &[T]| -> Vec<f64> { v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect() };
    Ok(AdversarialReport {
        margin: separation_summary(&to_f64(&influence.scores), flags, bins)?,
        raw: separation_summary(&to_f64(&function.values), flags, bins)?,
        function,
        influence,
    })
}

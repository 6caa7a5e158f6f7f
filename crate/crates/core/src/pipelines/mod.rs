//! End-to-end workflows: graph construction, an explanation function and
//! influence estimation composed for a specific interpretability task.

mod adversarial;
mod noisy;
mod prototypes;
mod sampling;

pub use adversarial::{
    adversarial_characterization, roc_auc, AdversarialFunction, AdversarialReport, GroupStats,
    separation_summary, SeparationSummary,
};
pub use noisy::{
    confusing_samples, corrupt_labels, noisy_label_detection, noisy_label_experiment,
    percent_grid, random_ranking, recall_curve, NoisyLabelDetection, NoisyLabelExperiment,
    RecallCurve, SeedOutcome,
};
pub use prototypes::{
    evaluate_1nn, percentile, prototypes_criticisms, MmdMode, PrototypeConfig, PrototypeOrder,
    PrototypeSelection,
};
pub use sampling::{combine_saliency, ssl_sample_selection, SamplingStrategy};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered node selection (descending influence unless the task says
/// otherwise) with its scores and provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSelection<T> {
    pub ids: Vec<usize>,
    pub scores: Vec<T>,
    pub task: String,
    pub threshold: Option<f64>,
    pub warnings: Vec<String>,
}

impl<T: Scalar> RankedSelection<T> {
    pub fn new(task: impl Into<String>, ids: Vec<usize>, scores: Vec<T>) -> Result<Self> {
        if ids.len() != scores.len() {
            return Err(Error::DimensionMismatch {
                expected: ids.len(),
                actual: scores.len(),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = ids.iter().find(|i| !seen.insert(**i)) {
            return Err(Error::param("ids", format!("node {dup} selected twice")));
        }
        Ok(RankedSelection {
            ids,
            scores,
            task: task.into(),
            threshold: None,
            warnings: Vec::new(),
        })
    }

    /// Top nodes of `values` by descending value (ties by ascending id).
    pub fn top(task: impl Into<String>, values: &[T], count: usize) -> Self {
        let mut ids = crate::influence::rank_descending(values);
        ids.truncate(count);
        let scores = ids.iter().map(|&i| values[i]).collect();
        RankedSelection {
            ids,
            scores,
            task: task.into(),
            threshold: None,
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

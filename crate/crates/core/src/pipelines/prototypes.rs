use serde::{Deserialize, Serialize};

use crate::dense::squared_euclidean;
use crate::error::{Error, Result};
use crate::explain::{mmd_global_function, mmd_local_function, KernelConfig, NodeFunction};
use crate::graph::Graph;
use crate::influence::{influence_scores, rank_descending, InfluenceScores};
use crate::knn::{build_knn_graph, Dataset, KnnConfig};
use crate::scalar::{cast, Scalar};
use crate::spectral::ShiftKind;

use super::RankedSelection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MmdMode {
    #[default]
    Global,
    /// Class-conditional; needs labels.
    Local,
}

/// Direction in which low-influence candidates are ranked by function value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PrototypeOrder {
    /// Lowest MMD response first.
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrototypeConfig {
    pub knn: KnnConfig,
    #[serde(default)]
    pub kernel: KernelConfig,
    #[serde(default)]
    pub mode: MmdMode,
    /// Percentile (0–100) of the influence scores; prototypes are drawn from
    /// nodes at or below it.
    pub threshold_percentile: f64,
    pub n_prototypes: usize,
    pub n_criticisms: usize,
    #[serde(default)]
    pub order: PrototypeOrder,
    #[serde(default)]
    pub operator: ShiftKind,
}

impl Default for PrototypeConfig {
    fn default() -> Self {
        PrototypeConfig {
            knn: KnnConfig::default(),
            kernel: KernelConfig::default(),
            mode: MmdMode::Global,
            threshold_percentile: 50.0,
            n_prototypes: 10,
            n_criticisms: 10,
            order: PrototypeOrder::Ascending,
            operator: ShiftKind::Transition,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PrototypeSelection<T> {
    pub prototypes: RankedSelection<T>,
    pub criticisms: RankedSelection<T>,
    pub function: NodeFunction<T>,
    pub influence: InfluenceScores<T>,
    pub graph: Graph<T>,
}

/// Linear-interpolation percentile (`q` in 0–100) of `values`.
pub fn percentile<T: Scalar>(values: &[T], q: f64) -> Result<T> {
    if values.is_empty() {
        return Err(Error::EmptyInput("percentile values"));
    }
    if !(0.0..=100.0).contains(&q) {
        return Err(Error::param("percentile", format!("{q} is outside 0..=100")));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let pos = q / 100.0 * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac: T = cast(pos - lo as f64);
    Ok(v[lo] + (v[hi] - v[lo]) * frac)
}

/// Criticisms are the `n_criticisms` most influential nodes. Prototypes are
/// taken from the remaining nodes whose influence is at or below the
/// threshold percentile, ranked by function value in `order`.
pub fn prototypes_criticisms<T: Scalar>(
    dataset: &Dataset<T>,
    config: &PrototypeConfig,
) -> Result<PrototypeSelection<T>> {
    let n = dataset.n_samples();
    if config.n_prototypes + config.n_criticisms > n {
        return Err(Error::param(
            "n_prototypes + n_criticisms",
            format!("{} exceeds the {n} samples", config.n_prototypes + config.n_criticisms),
        ));
    }
    let graph = build_knn_graph(dataset, &config.knn)?;
    let function = match config.mode {
        MmdMode::Global => mmd_global_function(dataset, &graph, &config.kernel)?,
        MmdMode::Local => mmd_local_function(dataset, &graph, &config.kernel)?,
    };
    let influence = influence_scores(&graph, &function.signal()?, config.operator)?;

    let ranking = rank_descending(&influence.scores);
    let crit_ids: Vec<usize> = ranking[..config.n_criticisms].to_vec();
    let mut is_crit = vec![false; n];
    crit_ids.iter().for_each(|&i| is_crit[i] = true);
    let criticisms = RankedSelection::new(
        "criticisms",
        crit_ids.clone(),
        crit_ids.iter().map(|&i| influence.scores[i]).collect(),
    )?;

    let cut = percentile(&influence.scores, config.threshold_percentile)?;
    let mut candidates: Vec<usize> = (0..n)
        .filter(|&i| !is_crit[i] && influence.scores[i] <= cut)
        .collect();
    let f = &function.values;
    candidates.sort_by(|&a, &b| {
        let o = f[a].partial_cmp(&f[b]).expect("finite function values");
        let o = match config.order {
            PrototypeOrder::Ascending => o,
            PrototypeOrder::Descending => o.reverse(),
        };
        o.then(a.cmp(&b))
    });
    let mut warnings = Vec::new();
    if candidates.len() < config.n_prototypes {
        warnings.push(format!(
            "only {} nodes fall under the {}th influence percentile; returning {} prototypes instead of {}",
            candidates.len(),
            config.threshold_percentile,
            candidates.len(),
            config.n_prototypes
        ));
    }
    candidates.truncate(config.n_prototypes);
    let mut prototypes = RankedSelection::new(
        "prototypes",
        candidates.clone(),
        candidates.iter().map(|&i| f[i]).collect(),
    )?;
    prototypes.threshold = Some(config.threshold_percentile);
    prototypes.warnings = warnings;

    Ok(PrototypeSelection {
        prototypes,
        criticisms,
        function,
        influence,
        graph,
    })
}

/// Error rate of a Euclidean 1-nearest-neighbor classifier trained on
/// `train` and evaluated on `test` (ties go to the lower training index).
pub fn evaluate_1nn<T: Scalar>(train: &Dataset<T>, test: &Dataset<T>) -> Result<f64> {
    if train.n_samples() == 0 || test.n_samples() == 0 {
        return Err(Error::EmptyInput("1-NN train or test set"));
    }
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            expected: train.dim(),
            actual: test.dim(),
        });
    }
    let train_labels = train.labels()?;
    let test_labels = test.labels()?;
    let errors = (0..test.n_samples())
        .filter(|&q| {
            let x = test.features.row(q);
            let mut best = 0;
            let mut best_d = squared_euclidean(x, train.features.row(0));
            for t in 1..train.n_samples() {
                let d = squared_euclidean(x, train.features.row(t));
                if d < best_d {
                    best = t;
                    best_d = d;
                }
            }
            train_labels[best] != test_labels[q]
        })
        .count();
    Ok(errors as f64 / test.n_samples() as f64)
}

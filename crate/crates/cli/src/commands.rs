//! Subcommand arguments and their execution.
//!
//! Each `*Args` struct is both a clap parser and the serialized `params` of
//! the run manifest. Input paths are optional at the clap level so that a
//! manifest can supply them; a missing required input is a usage error.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use graph_influence::io::{self, sibling};
use graph_influence::pipelines::{
    adversarial_characterization, confusing_samples, corrupt_labels, noisy_label_detection,
    percent_grid, prototypes_criticisms, recall_curve, ssl_sample_selection, AdversarialFunction,
    MmdMode, PrototypeConfig, PrototypeOrder, SamplingStrategy, SeparationSummary,
};
use graph_influence::{
    build_knn_graph, fourier_basis, influence_scores_phop, influence_scores_vector_with,
    influence_scores_with, normalize_scores, shift_operator, Bandwidth, Dataset64, Graph64,
    KernelConfig, KnnConfig, Magnitude, Matrix64, Metric, NodeSignal, RunManifest, ShiftKind,
    Weighting,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::OUT_DIR_ENV;

#[derive(Debug)]
pub enum CliError {
    /// Bad or missing arguments; exit code 2.
    Usage(String),
    /// Unreadable or invalid data; exit code 1.
    Data(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<graph_influence::Error> for CliError {
    fn from(e: graph_influence::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn required<'a, V>(value: &'a Option<V>, flag: &str) -> CliResult<&'a V> {
    value.as_ref().ok_or_else(|| usage(format!("missing required --{flag}")))
}

/// Parses a kebab-case enum through its serde representation.
fn kebab<E: DeserializeOwned>(s: &str) -> Result<E, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

/// Flags shared by every subcommand; never serialized into params.
#[derive(Args, Debug, Clone, Default)]
pub struct RunArgs {
    /// Take every parameter from this manifest instead of the flags.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Primary output file. Defaults to a file in $GRAPH_INFLUENCE_OUT_DIR
    /// (or the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct KnnArgs {
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    /// euclidean | cosine
    #[arg(long, default_value = "euclidean", value_parser = kebab::<Metric>)]
    pub metric: Metric,
    /// binary | gaussian
    #[arg(long, default_value = "binary", value_parser = kebab::<Weighting>)]
    pub weighting: Weighting,
    /// Fixed Gaussian edge bandwidth (median heuristic when absent).
    #[arg(long)]
    pub edge_bandwidth: Option<f64>,
}

impl KnnArgs {
    fn config(&self) -> KnnConfig {
        KnnConfig {
            k: self.k,
            metric: self.metric,
            weighting: self.weighting,
            bandwidth: self.edge_bandwidth.map_or(Bandwidth::Median, Bandwidth::Fixed),
        }
    }
}

fn kernel(bandwidth: Option<f64>) -> KernelConfig {
    bandwidth.map_or_else(KernelConfig::default, KernelConfig::fixed)
}

/// Files produced by a run, written in order after the computation succeeds.
pub struct Outputs {
    files: Vec<(PathBuf, String, Option<String>)>,
}

impl Outputs {
    fn new() -> Self {
        Outputs { files: Vec::new() }
    }

    /// Adds a CSV file and records its header as the schema.
    fn csv(&mut self, path: PathBuf, contents: String) {
        let schema = contents.lines().next().map(str::to_owned);
        self.files.push((path, contents, schema));
    }

    fn json(&mut self, path: PathBuf, value: &serde_json::Value) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(value).context("serializing report")?;
        s.push('\n');
        self.files.push((path, s, Some("json".into())));
        Ok(())
    }
}

pub trait Task: Serialize + DeserializeOwned + Clone {
    const NAME: &'static str;
    const DEFAULT_OUT: &'static str;

    fn run_args(&self) -> &RunArgs;
    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)>;
    fn seed(&self) -> Option<u64> {
        None
    }
    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()>;
}

fn default_out(name: &str) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(name),
        _ => PathBuf::from(name),
    }
}

pub fn execute<A: Task>(args: A) -> CliResult<()> {
    let cli_out = args.run_args().out.clone();
    let (task, manifest_out) = match &args.run_args().manifest {
        Some(path) => {
            let m = RunManifest::load(path).map_err(|e| usage(format!("cannot use manifest: {e}")))?;
            if m.task != A::NAME {
                return Err(usage(format!(
                    "manifest {} is for `{}`, not `{}`",
                    path.display(),
                    m.task,
                    A::NAME
                )));
            }
            let task: A = serde_json::from_value(m.params.clone())
                .map_err(|e| usage(format!("manifest parameters do not fit `{}`: {e}", A::NAME)))?;
            (task, Some(PathBuf::from(m.output)))
        }
        None => (args, None),
    };
    let out = cli_out.or(manifest_out).unwrap_or_else(|| default_out(A::DEFAULT_OUT));

    let mut outputs = Outputs::new();
    task.run(&out, &mut outputs)?;

    let mut manifest = RunManifest::new(A::NAME, out.display().to_string());
    manifest.inputs = task
        .inputs()
        .into_iter()
        .filter_map(|(role, p)| p.map(|p| (role.to_owned(), p.display().to_string())))
        .collect();
    manifest.params = serde_json::to_value(&task).context("serializing parameters")?;
    manifest.seed = task.seed();
    let mut schemas = BTreeMap::new();
    for (path, contents, schema) in &outputs.files {
        io::write_text(path, contents)?;
        if let Some(s) = schema {
            schemas.insert(file_name(path), s.clone());
        }
    }
    manifest.schemas = schemas;
    manifest.save(&sibling(&out, "manifest.json"))?;
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load_features(path: &Path) -> CliResult<Dataset64> {
    Ok(Dataset64::new(io::read_matrix(path)?)?)
}

fn load_with_labels(features: &Path, labels: &Path) -> CliResult<Dataset64> {
    Ok(io::load_dataset::<f64>(features, Some(labels), None)?)
}

fn load_signal(path: &Path, n: usize) -> CliResult<NodeSignal<f64>> {
    let m: Matrix64 = io::read_matrix(path)?;
    if m.rows() != n {
        return Err(CliError::Data(anyhow::anyhow!(
            "{} has {} rows but the graph has {n} nodes",
            path.display(),
            m.rows()
        )));
    }
    Ok(NodeSignal::from_matrix(m)?)
}

// ---------------------------------------------------------------------------
// build-graph
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BuildGraphArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    /// Feature CSV, one row per sample.
    #[arg(long)]
    pub features: Option<PathBuf>,
    #[command(flatten)]
    pub knn: KnnArgs,
}

impl Task for BuildGraphArgs {
    const NAME: &'static str = "build-graph";
    const DEFAULT_OUT: &'static str = "graph.edges";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("features", self.features.as_ref())]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let ds = load_features(required(&self.features, "features")?)?;
        let g = build_knn_graph(&ds, &self.knn.config())?;
        outputs.files.push((out.to_path_buf(), io::format_graph(&g), Some("src dst weight".into())));
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// influence
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct InfluenceArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    /// Edge-list graph.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Node signal CSV: one row per node, one column per dimension.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// adjacency | transition | laplacian
    #[arg(long, default_value = "transition", value_parser = kebab::<ShiftKind>)]
    pub operator: ShiftKind,
    /// squared | absolute
    #[arg(long, default_value = "squared", value_parser = kebab::<Magnitude>)]
    pub magnitude: Magnitude,
    /// Use the p-hop averaging filter with this many hops instead of the
    /// shift operator (scalar signals only).
    #[arg(long)]
    pub hops: Option<usize>,
    /// Divide scores by their maximum.
    #[arg(long)]
    pub normalize: bool,
}

impl Task for InfluenceArgs {
    const NAME: &'static str = "influence";
    const DEFAULT_OUT: &'static str = "scores.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("graph", self.graph.as_ref()), ("signal", self.signal.as_ref())]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let g: Graph64 = io::load_graph(required(&self.graph, "graph")?, false)?;
        let f = load_signal(required(&self.signal, "signal")?, g.n_nodes())?;
        let mut scores = match self.hops {
            Some(p) => influence_scores_phop(&g, &f, p)?,
            None if f.dim() == 1 => influence_scores_with(&g, &f, self.operator, self.magnitude)?,
            None => influence_scores_vector_with(&g, &f, self.operator, self.magnitude)?,
        };
        if self.normalize {
            scores = normalize_scores(scores);
        }
        outputs.csv(out.to_path_buf(), io::format_scores(&scores.scores));
        outputs.json(
            sibling(out, "report.json"),
            &json!({
                "n_nodes": g.n_nodes(),
                "signal_dim": f.dim(),
                "source": scores.source,
                "magnitude": scores.magnitude,
                "normalized": scores.normalized,
                "isolated": scores.isolated,
            }),
        )
    }
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Single-column node signal CSV.
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// laplacian | adjacency
    #[arg(long, default_value = "laplacian", value_parser = kebab::<ShiftKind>)]
    pub operator: ShiftKind,
    /// Refuse dense eigendecomposition above this many nodes.
    #[arg(long, default_value_t = graph_influence::DEFAULT_DENSE_CAP)]
    pub max_nodes: usize,
}

impl Task for SpectrumArgs {
    const NAME: &'static str = "spectrum";
    const DEFAULT_OUT: &'static str = "spectrum.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("graph", self.graph.as_ref()), ("signal", self.signal.as_ref())]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let g: Graph64 = io::load_graph(required(&self.graph, "graph")?, false)?;
        let f = load_signal(required(&self.signal, "signal")?, g.n_nodes())?;
        let basis = fourier_basis(&shift_operator(&g, self.operator), self.max_nodes)?;
        let coeffs = basis.gft(f.values()?)?;
        outputs.csv(out.to_path_buf(), io::format_spectrum(&basis, &coeffs));
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// prototypes
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct PrototypesArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Integer labels; required for `--mode local`.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub knn: KnnArgs,
    /// Fixed RBF bandwidth for the MMD function (median heuristic when absent).
    #[arg(long)]
    pub kernel_bandwidth: Option<f64>,
    /// global | local
    #[arg(long, default_value = "global", value_parser = kebab::<MmdMode>)]
    pub mode: MmdMode,
    #[arg(long, default_value_t = 50.0)]
    pub threshold_percentile: f64,
    #[arg(long, default_value_t = 10)]
    pub n_prototypes: usize,
    #[arg(long, default_value_t = 10)]
    pub n_criticisms: usize,
    /// ascending | descending
    #[arg(long, default_value = "ascending", value_parser = kebab::<PrototypeOrder>)]
    pub order: PrototypeOrder,
    #[arg(long, default_value = "transition", value_parser = kebab::<ShiftKind>)]
    pub operator: ShiftKind,
}

impl Task for PrototypesArgs {
    const NAME: &'static str = "prototypes";
    const DEFAULT_OUT: &'static str = "prototypes.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("features", self.features.as_ref()), ("labels", self.labels.as_ref())]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let features = required(&self.features, "features")?;
        if self.mode == MmdMode::Local && self.labels.is_none() {
            return Err(usage("--mode local needs --labels"));
        }
        let ds = io::load_dataset::<f64>(features, self.labels.as_deref(), None)?;
        let config = PrototypeConfig {
            knn: self.knn.config(),
            kernel: kernel(self.kernel_bandwidth),
            mode: self.mode,
            threshold_percentile: self.threshold_percentile,
            n_prototypes: self.n_prototypes,
            n_criticisms: self.n_criticisms,
            order: self.order,
            operator: self.operator,
        };
        let sel = prototypes_criticisms(&ds, &config)?;
        let mut csv = String::from("role,rank,node_id,score\n");
        for (role, s) in [("prototype", &sel.prototypes), ("criticism", &sel.criticisms)] {
            for (r, (i, v)) in s.ids.iter().zip(&s.scores).enumerate() {
                csv.push_str(&format!("{role},{},{i},{v}\n", r + 1));
            }
        }
        outputs.csv(out.to_path_buf(), csv);
        outputs.csv(sibling(out, "function.csv"), io::format_function(&sel.function.values));
        outputs.csv(sibling(out, "influence.csv"), io::format_scores(&sel.influence.scores));
        let sigmas: BTreeMap<String, f64> = sel
            .function
            .sigmas
            .iter()
            .map(|(k, v)| (k.map_or_else(|| "all".to_owned(), |c| c.to_string()), *v))
            .collect();
        outputs.json(
            sibling(out, "report.json"),
            &json!({
                "threshold": sel.prototypes.threshold,
                "flagged": sel.function.flagged,
                "sigmas": sigmas,
                "warnings": sel.prototypes.warnings.iter().chain(&sel.criticisms.warnings).collect::<Vec<_>>(),
            }),
        )
    }
}

// ---------------------------------------------------------------------------
// noisy-labels
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct NoisyLabelsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// Observed (possibly corrupted) labels.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Known flip mask (0/1); when given, a recall curve is written.
    #[arg(long)]
    pub flips: Option<PathBuf>,
    #[command(flatten)]
    pub knn: KnnArgs,
    #[arg(long, default_value = "transition", value_parser = kebab::<ShiftKind>)]
    pub operator: ShiftKind,
}

impl Task for NoisyLabelsArgs {
    const NAME: &'static str = "noisy-labels";
    const DEFAULT_OUT: &'static str = "noisy-ranking.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![
            ("features", self.features.as_ref()),
            ("labels", self.labels.as_ref()),
            ("flips", self.flips.as_ref()),
        ]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let ds = io::load_dataset::<f64>(
            required(&self.features, "features")?,
            Some(required(&self.labels, "labels")?),
            self.flips.as_deref(),
        )?;
        let det = noisy_label_detection(&ds, ds.labels()?, &self.knn.config(), self.operator)?;
        outputs.csv(out.to_path_buf(), io::format_selection(&det.ranking));
        outputs.csv(sibling(out, "distrust.csv"), io::format_function(&det.distrust.values));
        let mut report = json!({
            "n_samples": ds.n_samples(),
            "isolated": det.distrust.flagged,
        });
        if let Some(flags) = &ds.flags {
            let curve = recall_curve(&det.ranking, flags, &percent_grid())?;
            report["recall_at_30_percent"] = json!(curve.at(0.3));
            outputs.csv(sibling(out, "recall.csv"), io::format_recall(&curve));
        }
        outputs.json(sibling(out, "report.json"), &report)
    }
}

// ---------------------------------------------------------------------------
// confusing
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ConfusingArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    /// Latent representations, one row per sample.
    #[arg(long)]
    pub latent: Option<PathBuf>,
    /// Predicted labels.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub knn: KnnArgs,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
}

impl Task for ConfusingArgs {
    const NAME: &'static str = "confusing";
    const DEFAULT_OUT: &'static str = "confusing.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("latent", self.latent.as_ref()), ("labels", self.labels.as_ref())]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let ds = load_with_labels(required(&self.latent, "latent")?, required(&self.labels, "labels")?)?;
        let sel = confusing_samples(&ds, ds.labels()?, &self.knn.config(), self.top_k)?;
        for w in &sel.warnings {
            eprintln!("warning: {w}");
        }
        outputs.csv(out.to_path_buf(), io::format_selection(&sel));
        outputs.json(sibling(out, "report.json"), &json!({ "selected": sel.len(), "warnings": sel.warnings }))
    }
}

// ---------------------------------------------------------------------------
// adversarial
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionKind {
    MmdGlobal,
    Kde,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct AdversarialArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    #[arg(long)]
    pub features: Option<PathBuf>,
    /// 0/1 column marking adversarial samples.
    #[arg(long)]
    pub flags: Option<PathBuf>,
    /// mmd-global | kde
    #[arg(long, default_value = "mmd-global", value_parser = kebab::<FunctionKind>)]
    pub function: FunctionKind,
    #[command(flatten)]
    pub knn: KnnArgs,
    #[arg(long)]
    pub kernel_bandwidth: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Reference (training) features for `kde`.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Class labels of the reference features.
    #[arg(long)]
    pub reference_labels: Option<PathBuf>,
    /// Predicted class of every sample, for `kde`.
    #[arg(long)]
    pub predicted: Option<PathBuf>,
    /// Use log densities for `kde`.
    #[arg(long)]
    pub log: bool,
}

fn summary_json(s: &SeparationSummary) -> serde_json::Value {
    serde_json::to_value(s).unwrap_or(serde_json::Value::Null)
}

impl Task for AdversarialArgs {
    const NAME: &'static str = "adversarial";
    const DEFAULT_OUT: &'static str = "adversarial.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![
            ("features", self.features.as_ref()),
            ("flags", self.flags.as_ref()),
            ("reference", self.reference.as_ref()),
            ("reference_labels", self.reference_labels.as_ref()),
            ("predicted", self.predicted.as_ref()),
        ]
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let ds = io::load_dataset::<f64>(required(&self.features, "features")?, None, Some(required(&self.flags, "flags")?))?;
        let function = match self.function {
            FunctionKind::MmdGlobal => AdversarialFunction::MmdGlobal,
            FunctionKind::Kde => {
                let refs = load_with_labels(
                    required(&self.reference, "reference")?,
                    required(&self.reference_labels, "reference-labels")?,
                )?;
                let predicted = io::read_labels(required(&self.predicted, "predicted")?)?;
                let mut by_class: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
                for (i, &l) in refs.labels()?.iter().enumerate() {
                    by_class.entry(l).or_default().push(i);
                }
                let reference = by_class
                    .into_iter()
                    .map(|(c, idx)| (c, refs.features.select_rows(&idx)))
                    .collect();
                AdversarialFunction::Kde {
                    reference,
                    predicted,
                    log: self.log,
                }
            }
        };
        let report = adversarial_characterization(&ds, &self.knn.config(), &function, &kernel(self.kernel_bandwidth), self.bins)?;
        let flags = ds.flags()?;
        let mut csv = String::from("node_id,flag,function_value,score\n");
        for i in 0..ds.n_samples() {
            csv.push_str(&format!(
                "{i},{},{},{}\n",
                u8::from(flags[i]),
                report.function.values[i],
                report.influence.scores[i]
            ));
        }
        outputs.csv(out.to_path_buf(), csv);
        outputs.json(
            sibling(out, "report.json"),
            &json!({
                "function": self.function,
                "margin": summary_json(&report.margin),
                "raw": summary_json(&report.raw),
                "substituted": report.function.flagged,
            }),
        )
    }
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Node embedding CSV (one row per node).
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<usize>,
    /// margin | resampling | random
    #[arg(long, default_value = "margin", value_parser = kebab::<SamplingStrategy>)]
    pub strategy: SamplingStrategy,
    /// Required for the randomized strategies.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Task for SampleArgs {
    const NAME: &'static str = "sample";
    const DEFAULT_OUT: &'static str = "sample.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("graph", self.graph.as_ref()), ("embedding", self.embedding.as_ref())]
    }

    fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let seed = match (self.strategy, self.seed) {
            (SamplingStrategy::Margin, s) => s.unwrap_or(0),
            (_, Some(s)) => s,
            (_, None) => return Err(usage("--seed is required for randomized sampling strategies")),
        };
        let budget = *required(&self.budget, "budget")?;
        let g: Graph64 = io::load_graph(required(&self.graph, "graph")?, false)?;
        let emb = load_signal(required(&self.embedding, "embedding")?, g.n_nodes())?;
        let sel = ssl_sample_selection(&emb, &g, budget, self.strategy, seed)?;
        outputs.csv(out.to_path_buf(), io::format_selection(&sel));
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// corrupt-labels
// ---------------------------------------------------------------------------

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CorruptLabelsArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub run: RunArgs,
    /// Clean binary labels.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Fraction of each class to flip, in (0, 0.5).
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Task for CorruptLabelsArgs {
    const NAME: &'static str = "corrupt-labels";
    const DEFAULT_OUT: &'static str = "labels.corrupted.csv";

    fn run_args(&self) -> &RunArgs {
        &self.run
    }

    fn inputs(&self) -> Vec<(&'static str, Option<&PathBuf>)> {
        vec![("labels", self.labels.as_ref())]
    }

    fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn run(&self, out: &Path, outputs: &mut Outputs) -> CliResult<()> {
        let seed = *required(&self.seed, "seed")?;
        let labels = io::read_labels(required(&self.labels, "labels")?)?;
        let (corrupted, mask) = corrupt_labels(&labels, self.beta, seed)?;
        outputs.csv(out.to_path_buf(), io::format_labels(&corrupted));
        outputs.csv(sibling(out, "flips.csv"), io::format_flags(&mask, "flipped"));
        Ok(())
    }
}

//! Text formats: numeric CSV tables, label/flag columns, the edge-list graph
//! format and the CSV outputs of every pipeline.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! reading a written file reproduces the exact values.
//!
//! Edge list:
//!
//! ```text
//! #nodes 5
//! 0 1 1
//! 1 4 0.25
//! ```
//!
//! One undirected edge per line (`src dst weight`, 0-based), each pair
//! listed once. `#nodes N` is optional; without it the node count is one
//! past the largest index. Other lines starting with `#` are comments.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dense::Matrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::knn::Dataset;
use crate::pipelines::{RankedSelection, RecallCurve};
use crate::scalar::Scalar;
use crate::spectral::FourierBasis;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))
}

/// Raw records with 1-based line numbers. The first record is treated as a
/// header when any of its fields fails `is_value`.
fn read_records(path: &Path, is_value: impl Fn(&str) -> bool) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    let mut out: Vec<(usize, Vec<String>)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        out.push((line, rec.iter().map(str::to_owned).collect()));
    }
    if let Some((_, first)) = out.first() {
        if first.iter().any(|f| !is_value(f)) {
            out.remove(0);
        }
    }
    Ok(out)
}

/// Numeric table, one row per sample. Non-finite cells are rejected with
/// their row and column.
pub fn read_matrix<T: Scalar>(path: &Path) -> Result<Matrix<T>> {
    let records = read_records(path, |f| f.parse::<f64>().is_ok())?;
    let cols = records.first().map_or(0, |r| r.1.len());
    let mut data = Vec::with_capacity(records.len() * cols);
    for (row, (line, rec)) in records.iter().enumerate() {
        if rec.len() != cols {
            return Err(parse_err(path, *line, format!("expected {cols} columns, found {}", rec.len())));
        }
        for (col, field) in rec.iter().enumerate() {
            let v: T = field
                .parse()
                .map_err(|_| parse_err(path, *line, format!("column {col}: `{field}` is not a number")))?;
            if !v.is_finite() {
                return Err(parse_err(
                    path,
                    *line,
                    format!("non-finite value `{field}` at row {row}, column {col}"),
                ));
            }
            data.push(v);
        }
    }
    Matrix::from_row_major(records.len(), cols, data)
}

fn read_single_column<V>(
    path: &Path,
    what: &str,
    parse: impl Fn(&str) -> Option<V>,
) -> Result<Vec<V>> {
    let records = read_records(path, |f| parse(f).is_some())?;
    records
        .iter()
        .map(|(line, rec)| {
            if rec.len() != 1 {
                return Err(parse_err(path, *line, format!("expected a single {what} column")));
            }
            parse(&rec[0]).ok_or_else(|| parse_err(path, *line, format!("`{}` is not a valid {what}", rec[0])))
        })
        .collect()
}

pub fn read_labels(path: &Path) -> Result<Vec<i64>> {
    read_single_column(path, "integer label", |f| f.parse().ok())
}

pub fn read_flags(path: &Path) -> Result<Vec<bool>> {
    read_single_column(path, "0/1 flag", |f| match f {
        "0" => Some(false),
        "1" => Some(true),
        _ => None,
    })
}

/// Loads features plus optional aligned label and flag columns.
pub fn load_dataset<T: Scalar>(
    features: &Path,
    labels: Option<&Path>,
    flags: Option<&Path>,
) -> Result<Dataset<T>> {
    let m = read_matrix(features)?;
    let n = m.rows();
    let mut ds = Dataset::new(m)?;
    let mismatch = |other: &Path, count: usize| Error::RowMismatch {
        left_name: features.display().to_string(),
        left: n,
        right_name: other.display().to_string(),
        right: count,
    };
    if let Some(p) = labels {
        let l = read_labels(p)?;
        if l.len() != n {
            return Err(mismatch(p, l.len()));
        }
        ds = ds.with_labels(l)?;
    }
    if let Some(p) = flags {
        let f = read_flags(p)?;
        if f.len() != n {
            return Err(mismatch(p, f.len()));
        }
        ds = ds.with_flags(f)?;
    }
    Ok(ds)
}

// ---------------------------------------------------------------------------
// Edge lists
// ---------------------------------------------------------------------------

pub fn format_graph<T: Scalar>(graph: &Graph<T>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "#nodes {}", graph.n_nodes());
    for (a, b, w) in graph.edges() {
        let _ = writeln!(s, "{a} {b} {w}");
    }
    s
}

pub fn save_graph<T: Scalar>(graph: &Graph<T>, path: &Path) -> Result<()> {
    write_text(path, &format_graph(graph))
}

pub fn parse_graph<T: Scalar>(text: &str, path: &Path, allow_self_loops: bool) -> Result<Graph<T>> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_index: Option<usize> = None;
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix("#nodes") {
            let n = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(path, line, format!("bad node count `{}`", rest.trim())))?;
            declared = Some(n);
            continue;
        }
        if t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(path, line, "expected `src dst weight`"));
        }
        let idx = |f: &str| f.parse::<usize>().map_err(|_| parse_err(path, line, format!("bad node index `{f}`")));
        let (a, b) = (idx(fields[0])?, idx(fields[1])?);
        let w: T = fields[2]
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad weight `{}`", fields[2])))?;
        if !w.is_finite() || w < T::zero() {
            return Err(parse_err(path, line, format!("weight {} must be finite and nonnegative", fields[2])));
        }
        if a == b && !allow_self_loops {
            return Err(parse_err(path, line, format!("self-loop on node {a} but self-loops are disabled")));
        }
        if let Some(n) = declared {
            if a >= n || b >= n {
                return Err(parse_err(path, line, format!("node index outside declared count {n}")));
            }
        }
        max_index = Some(max_index.map_or(a.max(b), |m| m.max(a).max(b)));
        edges.push((line, a, b, w));
    }
    let n = declared.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    let mut seen = std::collections::BTreeMap::new();
    for &(line, a, b, _) in &edges {
        if let Some(first) = seen.insert((a.min(b), a.max(b)), line) {
            return Err(parse_err(path, line, format!("edge ({a}, {b}) already listed on line {first}")));
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(_, a, b, w)| (a, b, w)), allow_self_loops)
}

pub fn load_graph<T: Scalar>(path: &Path, allow_self_loops: bool) -> Result<Graph<T>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_graph(&text, path, allow_self_loops)
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

/// `node_id,score,rank` with rank 1 for the highest score.
pub fn format_scores<T: Scalar>(scores: &[T]) -> String {
    let order = crate::influence::rank_descending(scores);
    let mut rank = vec![0usize; scores.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r + 1;
    }
    let mut s = String::from("node_id,score,rank\n");
    for (i, v) in scores.iter().enumerate() {
        let _ = writeln!(s, "{i},{v},{}", rank[i]);
    }
    s
}

/// `node_id,value`
pub fn format_function<T: Scalar>(values: &[T]) -> String {
    let mut s = String::from("node_id,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{i},{v}");
    }
    s
}

/// `index,eigenvalue,coefficient`
pub fn format_spectrum<T: Scalar>(basis: &FourierBasis<T>, coefficients: &[T]) -> String {
    let mut s = String::from("index,eigenvalue,coefficient\n");
    for (j, (l, c)) in basis.eigenvalues.iter().zip(coefficients).enumerate() {
        let _ = writeln!(s, "{j},{l},{c}");
    }
    s
}

/// `rank,node_id,score`
pub fn format_selection<T: Scalar>(sel: &RankedSelection<T>) -> String {
    let mut s = String::from("rank,node_id,score\n");
    for (r, (i, v)) in sel.ids.iter().zip(&sel.scores).enumerate() {
        let _ = writeln!(s, "{},{i},{v}", r + 1);
    }
    s
}

/// `budget,recall`
pub fn format_recall(curve: &RecallCurve) -> String {
    let mut s = String::from("budget,recall\n");
    for (b, r) in curve.budgets.iter().zip(&curve.recalls) {
        let _ = writeln!(s, "{b},{r}");
    }
    s
}

pub fn format_labels(labels: &[i64]) -> String {
    let mut s = String::from("label\n");
    for l in labels {
        let _ = writeln!(s, "{l}");
    }
    s
}

pub fn format_flags(flags: &[bool], header: &str) -> String {
    let mut s = format!("{header}\n");
    for f in flags {
        s.push_str(if *f { "1\n" } else { "0\n" });
    }
    s
}

/// `stem.suffix` next to `path`, e.g. `out/scores.csv` → `out/scores.manifest.json`.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or_else(|| "output".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.{suffix}"))
}

//! Experiment runner: parse a flat key-value config, assemble the data,
//! execute the selected methods, score them, and write machine-readable
//! artifacts.
//!
//! Config format: `key = value` lines, `#` comments, dotted section names.
//! See the crate README for the full key list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{kmeans, lsr_solve, KmeansConfig};
use crate::data::{
    generate, load_labels, load_matrix, normalize_columns, pca_reduce, save_labels, save_matrix,
    NoiseSpec, SubspaceSpec,
};
use crate::error::{Error, Result};
use crate::metrics::{accuracy, contrast_index, nmi};
use crate::solver::{solve, InitStrategy, SolverConfig};
use crate::spectral::{build_similarity, normalized_cuts, SimilarityMatrix};
use crate::types::{ClusterLabels, DataMatrix};

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic(SubspaceSpec),
    File {
        matrix: PathBuf,
        labels: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preprocess {
    /// PCA energy threshold in (0, 1]; `None` skips the projection.
    pub pca_energy: Option<f64>,
    /// Unit-normalize columns after the optional projection.
    pub normalize: bool,
}

impl Default for Preprocess {
    fn default() -> Self {
        Self {
            pca_energy: None,
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpec {
    Clf(SolverConfig),
    Lsr { lambda: f64 },
    Kmeans { restarts: usize, max_iter: usize },
}

impl MethodSpec {
    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Clf(_) => "clf",
            MethodSpec::Lsr { .. } => "lsr",
            MethodSpec::Kmeans { .. } => "kmeans",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub data: DataSource,
    pub preprocess: Preprocess,
    pub methods: Vec<MethodSpec>,
    /// Cluster count; inferred from ground truth when absent.
    pub k: Option<usize>,
    pub seed: u64,
    /// Raw key-value pairs, echoed into reports.
    pub echo: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let map = parse_kv(text)?;
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let (data, preprocess, methods, k, seed) = {
            let mut get = |key: &str| -> Option<String> {
                seen.insert(key.to_string());
                map.get(key).cloned()
            };

            let source = get("data.source").unwrap_or_else(|| "synthetic".into());
            let data = match source.as_str() {
                "synthetic" => {
                    let spec = SubspaceSpec {
                        ambient_dim: parse_field(
                            get("synthetic.ambient_dim"),
                            "synthetic.ambient_dim",
                            30usize,
                        )?,
                        subspace_dim: parse_field(
                            get("synthetic.subspace_dim"),
                            "synthetic.subspace_dim",
                            4usize,
                        )?,
                        num_subspaces: parse_field(
                            get("synthetic.num_subspaces"),
                            "synthetic.num_subspaces",
                            3usize,
                        )?,
                        points_per_subspace: parse_field(
                            get("synthetic.points_per_subspace"),
                            "synthetic.points_per_subspace",
                            50usize,
                        )?,
                        noise: parse_noise(get("synthetic.noise").as_deref().unwrap_or("none"))?,
                        seed: 0, // overwritten by the experiment seed below
                    };
                    DataSource::Synthetic(spec)
                }
                "file" => {
                    let matrix = get("data.matrix")
                        .ok_or_else(|| Error::config("data.source = file requires data.matrix"))?
                        .into();
                    let labels = get("data.labels").map(PathBuf::from);
                    DataSource::File { matrix, labels }
                }
                other => {
                    return Err(Error::config(format!(
                        "data.source must be synthetic or file, got {other:?}"
                    )))
                }
            };

            let preprocess = Preprocess {
                pca_energy: match get("preprocess.pca_energy") {
                    Some(v) => Some(parse_value::<f64>(&v, "preprocess.pca_energy")?),
                    None => None,
                },
                normalize: parse_field(get("preprocess.normalize"), "preprocess.normalize", true)?,
            };

            let methods_raw = get("methods").ok_or_else(|| {
                Error::config("config must list at least one method via `methods = ...`")
            })?;
            let mut methods = Vec::new();
            for name in methods_raw
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
            {
                match name {
                    "clf" => methods.push(MethodSpec::Clf(SolverConfig {
                        lambda: parse_field(get("clf.lambda"), "clf.lambda", 0.1f64)?,
                        c: parse_field(get("clf.c"), "clf.c", 0.5f64)?,
                        tol: parse_field(get("clf.tol"), "clf.tol", 1e-6f64)?,
                        max_iter: parse_field(get("clf.max_iter"), "clf.max_iter", 200usize)?,
                        init: match get("clf.init").as_deref().unwrap_or("zero") {
                            "zero" => InitStrategy::Zero,
                            "lsr" => InitStrategy::Lsr,
                            other => {
                                return Err(Error::config(format!(
                                    "clf.init must be zero or lsr, got {other:?}"
                                )))
                            }
                        },
                    })),
                    "lsr" => methods.push(MethodSpec::Lsr {
                        lambda: parse_field(get("lsr.lambda"), "lsr.lambda", 0.1f64)?,
                    }),
                    "kmeans" => methods.push(MethodSpec::Kmeans {
                        restarts: parse_field(get("kmeans.restarts"), "kmeans.restarts", 20usize)?,
                        max_iter: parse_field(get("kmeans.max_iter"), "kmeans.max_iter", 100usize)?,
                    }),
                    other => return Err(Error::config(format!("unknown method {other:?}"))),
                }
            }
            if methods.is_empty() {
                return Err(Error::config("methods list is empty"));
            }

            let k = match get("experiment.k") {
                Some(v) => Some(parse_value::<usize>(&v, "experiment.k")?),
                None => None,
            };
            let seed = parse_field(get("experiment.seed"), "experiment.seed", 0u64)?;
            (data, preprocess, methods, k, seed)
        };

        // Reject unknown keys so typos do not silently fall back to defaults.
        for key in map.keys() {
            if !seen.contains(key) {
                return Err(Error::config(format!("unknown config key {key:?}")));
            }
        }

        let mut cfg = ExperimentConfig {
            data,
            preprocess,
            methods,
            k,
            seed,
            echo: map,
        };
        if let DataSource::Synthetic(ref mut spec) = cfg.data {
            spec.seed = cfg.seed;
        }
        Ok(cfg)
    }
}

fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let mut line = raw.trim();
        if let Some(i) = line.find('#') {
            line = line[..i].trim_end();
        }
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(Error::config(format!(
                "line {}: empty key or value in {raw:?}",
                lineno + 1
            )));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::config(format!(
                "line {}: duplicate key {key:?}",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

fn parse_value<T: std::str::FromStr>(value: &str, key: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("cannot parse {key} value {value:?}")))
}

fn parse_field<T: std::str::FromStr>(value: Option<String>, key: &str, default: T) -> Result<T> {
    match value {
        Some(v) => parse_value(&v, key),
        None => Ok(default),
    }
}

fn parse_noise(text: &str) -> Result<NoiseSpec> {
    let text = text.trim();
    if text == "none" {
        return Ok(NoiseSpec::None);
    }
    let (name, args) = text
        .split_once('(')
        .and_then(|(n, rest)| rest.strip_suffix(')').map(|a| (n.trim(), a)))
        .ok_or_else(|| {
            Error::config(format!(
                "noise must be none, gaussian(s), entry_sparse(f, m), or sample_specific(f, m); got {text:?}"
            ))
        })?;
    let parts: Vec<f64> = args
        .split(',')
        .map(|p| parse_value::<f64>(p.trim(), "noise argument"))
        .collect::<Result<_>>()?;
    match (name, parts.as_slice()) {
        ("gaussian", [sigma]) => Ok(NoiseSpec::Gaussian { sigma: *sigma }),
        ("entry_sparse", [fraction, magnitude]) => Ok(NoiseSpec::EntrySparse {
            fraction: *fraction,
            magnitude: *magnitude,
        }),
        ("sample_specific", [fraction, magnitude]) => Ok(NoiseSpec::SampleSpecific {
            fraction: *fraction,
            magnitude: *magnitude,
        }),
        _ => Err(Error::config(format!("malformed noise spec {text:?}"))),
    }
}

/// Per-method results inside a [`RunReport`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MethodReport {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub ac: Option<f64>,
    pub nmi: Option<f64>,
    pub ci: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub objective_history: Option<Vec<f64>>,
    pub wall_time_secs: f64,
}

/// Full experiment report; serializes to the `report.json` schema.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub seed: u64,
    pub k: usize,
    pub config: BTreeMap<String, String>,
    pub methods: Vec<MethodReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Copy with wall times zeroed, for byte-level determinism comparisons.
    pub fn without_wall_times(&self) -> RunReport {
        let mut copy = self.clone();
        for m in &mut copy.methods {
            m.wall_time_secs = 0.0;
        }
        copy
    }
}

struct PreparedData {
    x: DataMatrix,
    gt: Option<ClusterLabels>,
    k: usize,
}

fn prepare_data(cfg: &ExperimentConfig) -> Result<PreparedData> {
    let (x, gt) = match &cfg.data {
        DataSource::Synthetic(spec) => {
            let (x, labels) = generate(spec)?;
            (x, Some(labels))
        }
        DataSource::File { matrix, labels } => {
            let x = load_matrix(matrix)?;
            let gt = labels.as_ref().map(load_labels).transpose()?;
            if let Some(gt) = &gt {
                if gt.len() != x.num_samples() {
                    return Err(Error::config(format!(
                        "label file has {} entries but matrix has {} samples",
                        gt.len(),
                        x.num_samples()
                    )));
                }
            }
            (x, gt)
        }
    };

    let mut x = x;
    if let Some(energy) = cfg.preprocess.pca_energy {
        x = pca_reduce(&x, energy)?;
    }
    if cfg.preprocess.normalize {
        x = normalize_columns(&x)?;
    }

    let k = match (cfg.k, &gt) {
        (Some(k), Some(gt)) => {
            if k != gt.k() {
                return Err(Error::config(format!(
                    "experiment.k = {k} but ground truth has {} clusters",
                    gt.k()
                )));
            }
            k
        }
        (Some(k), None) => k,
        (None, Some(gt)) => gt.k(),
        (None, None) => {
            return Err(Error::config(
                "experiment.k is required when no ground-truth labels are available",
            ))
        }
    };
    if k == 0 || k > x.num_samples() {
        return Err(Error::config(format!(
            "cluster count k = {k} invalid for {} samples",
            x.num_samples()
        )));
    }
    Ok(PreparedData { x, gt, k })
}

struct MethodOutcome {
    labels: ClusterLabels,
    similarity: Option<SimilarityMatrix>,
    iterations: Option<usize>,
    converged: Option<bool>,
    objective_history: Option<Vec<f64>>,
    params: BTreeMap<String, String>,
}

fn run_method(method: &MethodSpec, data: &PreparedData, seed: u64) -> Result<MethodOutcome> {
    match method {
        MethodSpec::Clf(solver_cfg) => {
            let report = solve(&data.x, solver_cfg)?;
            let w = build_similarity(&report.z_star)?;
            let labels = normalized_cuts(&w, data.k, seed)?;
            let mut params = BTreeMap::new();
            params.insert("lambda".into(), format!("{}", solver_cfg.lambda));
            params.insert("c".into(), format!("{}", solver_cfg.c));
            params.insert("tol".into(), format!("{}", solver_cfg.tol));
            params.insert("max_iter".into(), format!("{}", solver_cfg.max_iter));
            Ok(MethodOutcome {
                labels,
                similarity: Some(w),
                iterations: Some(report.iterations),
                converged: Some(report.converged),
                objective_history: Some(report.objective_history),
                params,
            })
        }
        MethodSpec::Lsr { lambda } => {
            let z = lsr_solve(&data.x, *lambda)?;
            let w = build_similarity(&z)?;
            let labels = normalized_cuts(&w, data.k, seed)?;
            let mut params = BTreeMap::new();
            params.insert("lambda".into(), format!("{lambda}"));
            Ok(MethodOutcome {
                labels,
                similarity: Some(w),
                iterations: None,
                converged: None,
                objective_history: None,
                params,
            })
        }
        MethodSpec::Kmeans { restarts, max_iter } => {
            let cfg = KmeansConfig {
                k: data.k,
                restarts: *restarts,
                max_iter: *max_iter,
                seed,
            };
            let labels = kmeans(data.x.values(), &cfg)?;
            let mut params = BTreeMap::new();
            params.insert("restarts".into(), format!("{restarts}"));
            params.insert("max_iter".into(), format!("{max_iter}"));
            Ok(MethodOutcome {
                labels,
                similarity: None,
                iterations: None,
                converged: None,
                objective_history: None,
                params,
            })
        }
    }
}

fn score(
    outcome: &MethodOutcome,
    gt: Option<&ClusterLabels>,
) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    match gt {
        Some(gt) => {
            let ac = accuracy(gt, &outcome.labels)?;
            let mi = nmi(gt, &outcome.labels)?;
            let ci = outcome
                .similarity
                .as_ref()
                .map(|w| contrast_index(w, gt))
                .transpose()?;
            Ok((Some(ac), Some(mi), ci))
        }
        None => Ok((None, None, None)),
    }
}

fn tag_method_error(err: Error, name: &str) -> Error {
    match err {
        Error::Numerical(msg) => Error::numerical(format!("method {name}: {msg}")),
        other => other,
    }
}

/// Execute the configured pipeline and write `report.json` plus per-method
/// similarity and label CSVs into `out_dir`.
pub fn run(cfg: &ExperimentConfig, out_dir: impl AsRef<Path>) -> Result<RunReport> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let data = prepare_data(cfg)?;

    let mut methods = Vec::new();
    for method in &cfg.methods {
        let name = method.name();
        let start = Instant::now();
        let outcome = run_method(method, &data, cfg.seed).map_err(|e| tag_method_error(e, name))?;
        let wall_time_secs = start.elapsed().as_secs_f64();
        let (ac, mi, ci) = score(&outcome, data.gt.as_ref())?;

        if let Some(w) = &outcome.similarity {
            save_matrix(out_dir.join(format!("w_{name}.csv")), w.values())?;
        }
        save_labels(out_dir.join(format!("labels_{name}.csv")), &outcome.labels)?;

        methods.push(MethodReport {
            name: name.to_string(),
            params: outcome.params,
            ac,
            nmi: mi,
            ci,
            iterations: outcome.iterations,
            converged: outcome.converged,
            objective_history: outcome.objective_history,
            wall_time_secs,
        });
    }

    if let Some(gt) = &data.gt {
        save_labels(out_dir.join("labels_gt.csv"), gt)?;
    }

    let report = RunReport {
        seed: cfg.seed,
        k: data.k,
        config: cfg.echo.clone(),
        methods,
    };
    std::fs::write(out_dir.join("report.json"), report.to_json())
        .map_err(|e| Error::io(out_dir.join("report.json").display().to_string(), e))?;
    Ok(report)
}

/// One cell of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub c: f64,
    pub method: String,
    pub ac: Option<f64>,
    pub nmi: Option<f64>,
    pub ci: Option<f64>,
    pub status: String,
}

/// Run every method at every `(lambda, c)` grid point and write a long-format
/// CSV (`lambda,c,method,ac,nmi,ci,status`) to `out_dir/sweep.csv`.
///
/// `lambda` overrides the regularization of `clf` and `lsr`; `c` overrides the
/// scale of `clf` only. Failures are recorded per cell with `status = error`
/// and the sweep continues. Grid points run in parallel; rows come back in
/// grid order.
pub fn sweep(
    cfg: &ExperimentConfig,
    lambdas: &[f64],
    cs: &[f64],
    out_dir: impl AsRef<Path>,
) -> Result<Vec<SweepRow>> {
    if lambdas.is_empty() || cs.is_empty() {
        return Err(Error::config("sweep grids must be non-empty"));
    }
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let data = prepare_data(cfg)?;

    let grid: Vec<(f64, f64)> = lambdas
        .iter()
        .flat_map(|&l| cs.iter().map(move |&c| (l, c)))
        .collect();

    let rows: Vec<Vec<SweepRow>> = grid
        .par_iter()
        .map(|&(lambda, c)| {
            cfg.methods
                .iter()
                .map(|method| {
                    let patched = match method {
                        MethodSpec::Clf(s) => MethodSpec::Clf(SolverConfig { lambda, c, ..*s }),
                        MethodSpec::Lsr { .. } => MethodSpec::Lsr { lambda },
                        other => other.clone(),
                    };
                    match run_method(&patched, &data, cfg.seed)
                        .and_then(|outcome| score(&outcome, data.gt.as_ref()))
                    {
                        Ok((ac, mi, ci)) => SweepRow {
                            lambda,
                            c,
                            method: method.name().to_string(),
                            ac,
                            nmi: mi,
                            ci,
                            status: "ok".into(),
                        },
                        Err(e) => SweepRow {
                            lambda,
                            c,
                            method: method.name().to_string(),
                            ac: None,
                            nmi: None,
                            ci: None,
                            status: format!("error: {e}"),
                        },
                    }
                })
                .collect()
        })
        .collect();

    let rows: Vec<SweepRow> = rows.into_iter().flatten().collect();
    let csv = sweep_to_csv(&rows);
    std::fs::write(out_dir.join("sweep.csv"), csv)
        .map_err(|e| Error::io(out_dir.join("sweep.csv").display().to_string(), e))?;
    Ok(rows)
}

fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("lambda,c,method,ac,nmi,ci,status\n");
    for row in rows {
        let fmt = |v: Option<f64>| v.map(|x| format!("{x:.17}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{:e},{:e},{},{},{},{},{}",
            row.lambda,
            row.c,
            row.method,
            fmt(row.ac),
            fmt(row.nmi),
            fmt(row.ci),
            row.status.replace(',', ";")
        );
    }
    out
}

/// Parse the CSV written by [`sweep`]; used by tests and downstream tooling.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 {
            if line != "lambda,c,method,ac,nmi,ci,status" {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unexpected sweep header {line:?}"),
                });
            }
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 7 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected 7 fields, found {}", parts.len()),
            });
        }
        let opt = |s: &str, key: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(parse_value::<f64>(s, key).map_err(|_| {
                    Error::Parse {
                        line: lineno + 1,
                        message: format!("bad {key} value {s:?}"),
                    }
                })?))
            }
        };
        rows.push(SweepRow {
            lambda: parse_value(parts[0], "lambda").map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("bad lambda {:?}", parts[0]),
            })?,
            c: parse_value(parts[1], "c").map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("bad c {:?}", parts[1]),
            })?,
            method: parts[2].to_string(),
            ac: opt(parts[3], "ac")?,
            nmi: opt(parts[4], "nmi")?,
            ci: opt(parts[5], "ci")?,
            status: parts[6].to_string(),
        });
    }
    Ok(rows)
}

/// Read the generator portion of a config file: the `synthetic.*` keys plus
/// `experiment.seed`. Other experiment keys are tolerated so a full run
/// config doubles as a generator spec; unknown keys are still rejected.
pub fn parse_generator_spec(text: &str) -> Result<SubspaceSpec> {
    let map = parse_kv(text)?;
    if let Some(source) = map.get("data.source") {
        if source != "synthetic" {
            return Err(Error::config("generation requires data.source = synthetic"));
        }
    }
    const TOLERATED: &[&str] = &[
        "data.source",
        "data.matrix",
        "data.labels",
        "preprocess.pca_energy",
        "preprocess.normalize",
        "methods",
        "experiment.k",
        "clf.lambda",
        "clf.c",
        "clf.tol",
        "clf.max_iter",
        "clf.init",
        "lsr.lambda",
        "kmeans.restarts",
        "kmeans.max_iter",
    ];
    let consumed = [
        "synthetic.ambient_dim",
        "synthetic.subspace_dim",
        "synthetic.num_subspaces",
        "synthetic.points_per_subspace",
        "synthetic.noise",
        "experiment.seed",
    ];
    for key in map.keys() {
        if !consumed.contains(&key.as_str()) && !TOLERATED.contains(&key.as_str()) {
            return Err(Error::config(format!("unknown config key {key:?}")));
        }
    }
    let field = |key: &str| map.get(key).cloned();
    Ok(SubspaceSpec {
        ambient_dim: parse_field(
            field("synthetic.ambient_dim"),
            "synthetic.ambient_dim",
            30usize,
        )?,
        subspace_dim: parse_field(
            field("synthetic.subspace_dim"),
            "synthetic.subspace_dim",
            4usize,
        )?,
        num_subspaces: parse_field(
            field("synthetic.num_subspaces"),
            "synthetic.num_subspaces",
            3usize,
        )?,
        points_per_subspace: parse_field(
            field("synthetic.points_per_subspace"),
            "synthetic.points_per_subspace",
            50usize,
        )?,
        noise: parse_noise(field("synthetic.noise").as_deref().unwrap_or("none"))?,
        seed: parse_field(field("experiment.seed"), "experiment.seed", 0u64)?,
    })
}

/// Generate synthetic data and write `matrix.csv` plus `labels.csv` into
/// `out_dir`.
pub fn generate_to_dir(spec: &SubspaceSpec, out_dir: impl AsRef<Path>) -> Result<()> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir.display().to_string(), e))?;
    let (x, labels) = generate(spec)?;
    save_matrix(out_dir.join("matrix.csv"), x.values())?;
    save_labels(out_dir.join("labels.csv"), &labels)?;
    Ok(())
}

//! Command implementations and their machine-readable reports.
//!
//! Each `cmd_*` function does the work of one `tricount` subcommand and
//! returns a [`RunReport`]. The binary only parses flags and prints.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::analytics::{self, BoundKind, BoundSource, ChernoffPlan};
use crate::error::{Error, Result};
use crate::estimator::{estimate_with, EstimateOptions};
use crate::exact::{count_exact, TriangleProfile};
use crate::graph::{load_edge_list_file, Graph, LoadedGraph};
use crate::sampler::{Sampler, SamplerKind};
use crate::stream::{run_stream, FileEdgeStream, SpooledEdgeStream, StreamOptions};

/// Output encodings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

/// What was read.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub vertices: usize,
    pub edges: usize,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

impl InputDigest {
    fn new(path: &Path, loaded: &LoadedGraph) -> Self {
        InputDigest {
            path: path.display().to_string(),
            vertices: loaded.graph.n(),
            edges: loaded.graph.m(),
            self_loops_dropped: loaded.self_loops_dropped,
            duplicates_dropped: loaded.duplicates_dropped,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeTriangles {
    pub u: usize,
    pub v: usize,
    pub triangles: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub triangles: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_vertex: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_edge: Option<Vec<EdgeTriangles>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub estimate: f64,
    pub s: u64,
    pub sampler: SamplerKind,
    pub seed: u64,
    pub empirical_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub sampler: SamplerKind,
    pub s: u64,
    pub closed_form: f64,
    pub generic: f64,
    pub difference: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceResult {
    pub triangles: u64,
    pub rows: Vec<VarianceRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamResult {
    pub estimate: f64,
    pub s: u64,
    pub seed: u64,
    pub n: usize,
    pub empirical_variance: f64,
    pub passes_used: usize,
    pub peak_state_bytes: usize,
}

/// How errors are measured in a benchmark row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMetric {
    /// `|estimate − Δ| / Δ`.
    Relative,
    /// `|estimate − Δ|`, used when `Δ = 0`.
    Absolute,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub sampler: SamplerKind,
    pub s: u64,
    pub repetitions: u64,
    pub truth: u64,
    pub mean_estimate: f64,
    pub mean_error: f64,
    pub error_metric: ErrorMetric,
    /// Sample variance of the estimates across repetitions.
    pub empirical_variance: f64,
    pub analytical_variance: f64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub sampler: SamplerKind,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchResult {
    pub rows: Vec<BenchRow>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<Skipped>,
}

/// The payload of a report, tagged by command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Exact(ExactResult),
    Estimate(EstimateResult),
    Variance(VarianceResult),
    Plan(ChernoffPlan),
    Stream(StreamResult),
    Bench(BenchResult),
}

/// One command run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<InputDigest>,
    pub result: Payload,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("malformed report: {e}")))
    }

    /// Tab-separated rendering: a table when the payload has rows, else key/value lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let result = serde_json::to_value(&self.result).expect("reports serialize");
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        match result.get("rows").and_then(Value::as_array) {
            Some(rows) if !rows.is_empty() => {
                let columns: Vec<String> = rows[0]
                    .as_object()
                    .map(|o| o.keys().cloned().collect())
                    .unwrap_or_default();
                let _ = writeln!(out, "{}", columns.join("\t"));
                for row in rows {
                    let cells: Vec<String> = columns.iter().map(|c| cell(&row[c])).collect();
                    let _ = writeln!(out, "{}", cells.join("\t"));
                }
            }
            _ => {
                if let Some(fields) = result.as_object() {
                    for (key, value) in fields {
                        let _ = writeln!(out, "{key}\t{}", cell(value));
                    }
                }
                let _ = writeln!(out, "elapsed_ms\t{}", self.elapsed_ms);
            }
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Tsv => self.to_tsv(),
        }
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn load(path: &Path) -> Result<(LoadedGraph, InputDigest)> {
    let loaded = load_edge_list_file(path)?;
    let digest = InputDigest::new(path, &loaded);
    Ok((loaded, digest))
}

/// Exact triangle count, optionally with the per-vertex and per-edge profile.
pub fn cmd_exact(path: &Path, with_profile: bool) -> Result<RunReport> {
    let start = Instant::now();
    let (loaded, digest) = load(path)?;
    let profile = count_exact(&loaded.graph);
    let result = ExactResult {
        triangles: profile.total,
        per_vertex: with_profile.then(|| profile.per_vertex.clone()),
        per_edge: with_profile.then(|| {
            profile
                .edges()
                .map(|((u, v), triangles)| EdgeTriangles { u, v, triangles })
                .collect()
        }),
    };
    Ok(RunReport {
        command: format!("exact {}", path.display()),
        input: Some(digest),
        result: Payload::Exact(result),
        elapsed_ms: elapsed_ms(start),
        seed: None,
    })
}

fn build_sampler(
    g: &Graph,
    kind: SamplerKind,
    profile: Option<&TriangleProfile>,
) -> Result<Sampler> {
    match (kind, profile) {
        (SamplerKind::Optimal, None) => Sampler::build(g, kind, Some(&count_exact(g))),
        _ => Sampler::build(g, kind, profile),
    }
}

/// Monte Carlo estimate with one sampler.
pub fn cmd_estimate(
    path: &Path,
    kind: SamplerKind,
    s: u64,
    seed: u64,
    deterministic: bool,
) -> Result<RunReport> {
    let start = Instant::now();
    let (loaded, digest) = load(path)?;
    let g = &loaded.graph;
    let sampler = build_sampler(g, kind, None)?;
    let options = EstimateOptions {
        parallel: !deterministic,
        retain_values: false,
    };
    let e = estimate_with(g, &sampler, s, seed, options)?;
    Ok(RunReport {
        command: format!(
            "estimate {} --sampler {kind} --samples {s} --seed {seed}",
            path.display()
        ),
        input: Some(digest),
        result: Payload::Estimate(EstimateResult {
            estimate: e.value,
            s,
            sampler: kind,
            seed,
            empirical_variance: e.empirical_variance,
        }),
        elapsed_ms: elapsed_ms(start),
        seed: Some(seed),
    })
}

/// Closed-form and generic variances for one sampler, or for every sampler that applies.
pub fn cmd_variance(path: &Path, kind: Option<SamplerKind>, s: u64) -> Result<RunReport> {
    let start = Instant::now();
    let (loaded, digest) = load(path)?;
    let g = &loaded.graph;
    let profile = count_exact(g);
    let row = |kind| -> Result<VarianceRow> {
        let r = analytics::variance_report(g, &profile, kind, s)?;
        Ok(VarianceRow {
            sampler: kind,
            s,
            closed_form: r.analytical_variance,
            generic: r.generic_variance,
            difference: r.analytical_variance - r.generic_variance,
        })
    };
    let rows = match kind {
        Some(kind) => vec![row(kind)?],
        None => SamplerKind::ALL
            .into_iter()
            .filter_map(|k| row(k).ok())
            .collect(),
    };
    let command = match kind {
        Some(k) => format!("variance {} --sampler {k} --samples {s}", path.display()),
        None => format!("variance {} --samples {s}", path.display()),
    };
    Ok(RunReport {
        command,
        input: Some(digest),
        result: Payload::Variance(VarianceResult {
            triangles: profile.total,
            rows,
        }),
        elapsed_ms: elapsed_ms(start),
        seed: None,
    })
}

/// Inputs for a Chernoff plan.
#[derive(Clone, Debug)]
pub enum PlanInput<'a> {
    /// Derive the average (and, unless given, the bound) from the file's exact profile.
    File {
        path: &'a Path,
        upper_bound: Option<f64>,
    },
    /// Everything supplied directly.
    Params {
        n: u64,
        upper_bound: f64,
        average: f64,
    },
}

/// Chernoff sample-size plan.
pub fn cmd_plan(
    epsilon: f64,
    c: f64,
    bound_kind: BoundKind,
    input: PlanInput<'_>,
) -> Result<RunReport> {
    let start = Instant::now();
    let (plan, digest, command) = match input {
        PlanInput::File { path, upper_bound } => {
            let (loaded, digest) = load(path)?;
            let profile = count_exact(&loaded.graph);
            let plan = analytics::plan_from_profile(
                &loaded.graph,
                &profile,
                epsilon,
                c,
                bound_kind,
                upper_bound,
            )?;
            let command = format!(
                "plan {} --epsilon {epsilon} --c {c} --bound {bound_kind}",
                path.display()
            );
            (plan, Some(digest), command)
        }
        PlanInput::Params {
            n,
            upper_bound,
            average,
        } => {
            let s = analytics::chernoff_sample_size(epsilon, c, n, upper_bound, average)?;
            let plan = ChernoffPlan {
                epsilon,
                c,
                bound_kind,
                n,
                upper_bound,
                upper_bound_source: BoundSource::Supplied,
                average,
                s,
            };
            let command = format!(
                "plan --epsilon {epsilon} --c {c} --bound {bound_kind} --n {n} --upper-bound {upper_bound} --average {average}"
            );
            (plan, None, command)
        }
    };
    Ok(RunReport {
        command,
        input: digest,
        result: Payload::Plan(plan),
        elapsed_ms: elapsed_ms(start),
        seed: None,
    })
}

/// Streaming estimate over an edge-list file, or standard input when `path` is `-`.
pub fn cmd_stream(
    path: &Path,
    s: u64,
    seed: u64,
    n: Option<usize>,
    strict: bool,
) -> Result<RunReport> {
    let start = Instant::now();
    let options = StreamOptions { strict };
    let outcome = if path.as_os_str() == "-" {
        run_stream(
            &mut SpooledEdgeStream::new(std::io::stdin().lock())?,
            s,
            seed,
            n,
            options,
        )?
    } else {
        run_stream(&mut FileEdgeStream::open(path)?, s, seed, n, options)?
    };
    let mut command = format!("stream {} --samples {s} --seed {seed}", path.display());
    if let Some(n) = n {
        let _ = write!(command, " --n {n}");
    }
    Ok(RunReport {
        command,
        input: None,
        result: Payload::Stream(StreamResult {
            estimate: outcome.estimate.value,
            s,
            seed,
            n: outcome.state.n(),
            empirical_variance: outcome.estimate.empirical_variance,
            passes_used: outcome.passes_used,
            peak_state_bytes: outcome.peak_state_bytes,
        }),
        elapsed_ms: elapsed_ms(start),
        seed: Some(seed),
    })
}

/// Error of every sampler at every trial count, averaged over repetitions.
///
/// Repetition `r` runs with seed `seed + r`. Samplers that cannot be built on
/// this graph are listed under `skipped`.
pub fn cmd_bench(
    path: &Path,
    kinds: &[SamplerKind],
    grid: &[u64],
    repetitions: u64,
    seed: u64,
    deterministic: bool,
) -> Result<RunReport> {
    let start = Instant::now();
    if repetitions == 0 || grid.is_empty() || grid.contains(&0) {
        return Err(Error::InvalidArgument(
            "need repetitions ≥ 1 and a non-empty grid of positive trial counts".into(),
        ));
    }
    let (loaded, digest) = load(path)?;
    let g = &loaded.graph;
    let profile = count_exact(g);
    let truth = profile.total;
    let metric = if truth == 0 {
        ErrorMetric::Absolute
    } else {
        ErrorMetric::Relative
    };
    let options = EstimateOptions {
        parallel: !deterministic,
        retain_values: false,
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for &kind in kinds {
        let sampler = match Sampler::build(g, kind, Some(&profile)) {
            Ok(s) => s,
            Err(e) => {
                skipped.push(Skipped {
                    sampler: kind,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        for &s in grid {
            let cell_start = Instant::now();
            let estimates = (0..repetitions)
                .map(|r| {
                    estimate_with(g, &sampler, s, seed.wrapping_add(r), options).map(|e| e.value)
                })
                .collect::<Result<Vec<f64>>>()?;
            let reps = repetitions as f64;
            let mean = estimates.iter().sum::<f64>() / reps;
            let error = |x: f64| match metric {
                ErrorMetric::Relative => (x - truth as f64).abs() / truth as f64,
                ErrorMetric::Absolute => (x - truth as f64).abs(),
            };
            let mean_error = estimates.iter().map(|&x| error(x)).sum::<f64>() / reps;
            let empirical_variance = if repetitions > 1 {
                estimates.iter().map(|&x| (x - mean).powi(2)).sum::<f64>() / (reps - 1.0)
            } else {
                0.0
            };
            rows.push(BenchRow {
                sampler: kind,
                s,
                repetitions,
                truth,
                mean_estimate: mean,
                mean_error,
                error_metric: metric,
                empirical_variance,
                analytical_variance: analytics::variance_closed_form(g, &profile, kind, s)?,
                elapsed_ms: elapsed_ms(cell_start),
            });
        }
    }
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    let grid_text: Vec<String> = grid.iter().map(u64::to_string).collect();
    Ok(RunReport {
        command: format!(
            "bench {} --sampler {} --samples {} --repetitions {repetitions} --seed {seed}",
            path.display(),
            names.join(","),
            grid_text.join(",")
        ),
        input: Some(digest),
        result: Payload::Bench(BenchResult { rows, skipped }),
        elapsed_ms: elapsed_ms(start),
        seed: Some(seed),
    })
}

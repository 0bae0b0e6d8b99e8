//! Two-pass streaming estimator for q-optimal sampling with uniform vertex selection.
//!
//! `s` vertices are sampled up front. Pass one records each sampled vertex's
//! neighborhood as a bit vector. Pass two watches every stream edge `(j, d)`
//! and, whenever both endpoints neighbor a sampled `i`, credits the edges
//! `{i, j}` and `{i, d}` and the vertex `i` with one triangle. When the vertex
//! count is unknown an extra pass finds it first.
//!
//! State is `s · n` bits plus `s · n` counters of the narrowest width that can
//! hold a per-edge count.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use bitvec::prelude::*;
use log::debug;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{importance_weight, reduce_blocked, Estimate};
use crate::graph::{parse_line, Line};
use crate::rng::{substream_rng, Substream};
use crate::sampler::{sample_proportional, Probability, SamplerKind};

/// A replayable, ordered sequence of undirected edges.
pub trait EdgeStreamSource {
    /// Visits every edge once in stream order. Counts as one pass when it completes.
    fn pass(&mut self, visit: &mut dyn FnMut(usize, usize) -> Result<()>) -> Result<()>;

    /// Completed traversals so far.
    fn passes(&self) -> usize;

    /// False when an extra pass to discover the vertex count cannot be afforded.
    fn replayable(&self) -> bool {
        true
    }
}

/// Edges held in memory.
#[derive(Clone, Debug, Default)]
pub struct MemoryEdgeStream {
    edges: Vec<(usize, usize)>,
    passes: usize,
}

impl MemoryEdgeStream {
    pub fn new(edges: Vec<(usize, usize)>) -> Self {
        MemoryEdgeStream { edges, passes: 0 }
    }
}

impl EdgeStreamSource for MemoryEdgeStream {
    fn pass(&mut self, visit: &mut dyn FnMut(usize, usize) -> Result<()>) -> Result<()> {
        for &(u, v) in &self.edges {
            visit(u, v)?;
        }
        self.passes += 1;
        Ok(())
    }

    fn passes(&self) -> usize {
        self.passes
    }
}

fn visit_lines<R: BufRead>(
    reader: R,
    visit: &mut dyn FnMut(usize, usize) -> Result<()>,
) -> Result<()> {
    for (index, text) in reader.lines().enumerate() {
        if let Line::Edge(u, v) = parse_line(&text?, index + 1)? {
            visit(u, v)?;
        }
    }
    Ok(())
}

/// An edge-list file, re-read from disk on every pass.
#[derive(Clone, Debug)]
pub struct FileEdgeStream {
    path: PathBuf,
    passes: usize,
}

impl FileEdgeStream {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        File::open(&path)?;
        Ok(FileEdgeStream { path, passes: 0 })
    }
}

impl EdgeStreamSource for FileEdgeStream {
    fn pass(&mut self, visit: &mut dyn FnMut(usize, usize) -> Result<()>) -> Result<()> {
        visit_lines(BufReader::new(File::open(&self.path)?), visit)?;
        self.passes += 1;
        Ok(())
    }

    fn passes(&self) -> usize {
        self.passes
    }
}

/// A one-shot reader (such as a pipe). The first pass copies it to an
/// anonymous temporary file; later passes replay that copy.
#[derive(Debug)]
pub struct SpooledEdgeStream<R> {
    input: Option<R>,
    spool: File,
    passes: usize,
}

impl<R: Read> SpooledEdgeStream<R> {
    pub fn new(input: R) -> Result<Self> {
        Ok(SpooledEdgeStream {
            input: Some(input),
            spool: tempfile::tempfile()?,
            passes: 0,
        })
    }
}

impl<R: Read> EdgeStreamSource for SpooledEdgeStream<R> {
    fn pass(&mut self, visit: &mut dyn FnMut(usize, usize) -> Result<()>) -> Result<()> {
        match self.input.take() {
            Some(input) => {
                let mut reader = BufReader::new(input);
                let mut line = String::new();
                let mut number = 0;
                loop {
                    line.clear();
                    if reader.read_line(&mut line)? == 0 {
                        break;
                    }
                    number += 1;
                    self.spool.write_all(line.as_bytes())?;
                    if !line.ends_with('\n') {
                        self.spool.write_all(b"\n")?;
                    }
                    if let Line::Edge(u, v) = parse_line(&line, number)? {
                        visit(u, v)?;
                    }
                }
                self.spool.flush()?;
            }
            None => {
                self.spool.seek(SeekFrom::Start(0))?;
                visit_lines(BufReader::new(&mut self.spool), visit)?;
            }
        }
        self.passes += 1;
        Ok(())
    }

    fn passes(&self) -> usize {
        self.passes
    }

    fn replayable(&self) -> bool {
        false
    }
}

/// Where a [`StreamState`] is in the pass pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StreamPhase {
    /// Neighborhood vectors are filled; local counts are not.
    Neighborhoods,
    /// Both passes are done.
    Counted,
}

/// Per-edge counters of a fixed width.
#[derive(Clone, Debug)]
enum Counters {
    U8(Vec<u8>),
    U16(Vec<u16>),
    U32(Vec<u32>),
    U64(Vec<u64>),
}

impl Counters {
    /// Zeroed counters wide enough for values up to `max`.
    fn zeroed(len: usize, max: usize) -> Self {
        if max <= u8::MAX as usize {
            Counters::U8(vec![0; len])
        } else if max <= u16::MAX as usize {
            Counters::U16(vec![0; len])
        } else if max <= u32::MAX as usize {
            Counters::U32(vec![0; len])
        } else {
            Counters::U64(vec![0; len])
        }
    }

    fn get(&self, idx: usize) -> u64 {
        match self {
            Counters::U8(v) => v[idx] as u64,
            Counters::U16(v) => v[idx] as u64,
            Counters::U32(v) => v[idx] as u64,
            Counters::U64(v) => v[idx],
        }
    }

    fn increment(&mut self, idx: usize) {
        match self {
            Counters::U8(v) => v[idx] += 1,
            Counters::U16(v) => v[idx] += 1,
            Counters::U32(v) => v[idx] += 1,
            Counters::U64(v) => v[idx] += 1,
        }
    }

    fn width(&self) -> usize {
        match self {
            Counters::U8(_) => 1,
            Counters::U16(_) => 2,
            Counters::U32(_) => 4,
            Counters::U64(_) => 8,
        }
    }

    fn heap_bytes(&self) -> usize {
        self.width()
            * match self {
                Counters::U8(v) => v.capacity(),
                Counters::U16(v) => v.capacity(),
                Counters::U32(v) => v.capacity(),
                Counters::U64(v) => v.capacity(),
            }
    }
}

/// Sampled vertices with their neighborhood vectors and local-triangle counters.
#[derive(Clone, Debug)]
pub struct StreamState {
    n: usize,
    sampled: Vec<usize>,
    /// Row `t` holds the neighborhood vector of `sampled[t]`.
    neighborhoods: BitVec<u64, Lsb0>,
    /// Row `t` holds the per-edge triangle counts of `sampled[t]`.
    edge_counts: Option<Counters>,
    local_counts: Vec<u64>,
    phase: StreamPhase,
}

impl StreamState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sampled(&self) -> &[usize] {
        &self.sampled
    }

    pub fn phase(&self) -> StreamPhase {
        self.phase
    }

    /// Whether `j` is a neighbor of the `t`-th sampled vertex.
    pub fn is_neighbor(&self, t: usize, j: usize) -> bool {
        self.neighborhoods[t * self.n + j]
    }

    /// Triangles found on the edge between the `t`-th sampled vertex and `j`.
    pub fn edge_count(&self, t: usize, j: usize) -> u64 {
        self.edge_counts
            .as_ref()
            .map_or(0, |c| c.get(t * self.n + j))
    }

    /// Triangles found at the `t`-th sampled vertex.
    pub fn local_count(&self, t: usize) -> u64 {
        self.local_counts[t]
    }

    /// Bytes of heap held by the state.
    pub fn heap_bytes(&self) -> usize {
        self.sampled.capacity() * std::mem::size_of::<usize>()
            + std::mem::size_of_val(self.neighborhoods.as_raw_slice())
            + self.edge_counts.as_ref().map_or(0, Counters::heap_bytes)
            + self.local_counts.capacity() * std::mem::size_of::<u64>()
    }

    /// Width in bytes of a per-edge counter (zero before the second pass).
    pub fn counter_width(&self) -> usize {
        self.edge_counts.as_ref().map_or(0, Counters::width)
    }
}

fn check_endpoint(v: usize, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n })
    }
}

/// Pass that finds `n` as one more than the largest endpoint.
pub fn pass_count_n(source: &mut dyn EdgeStreamSource) -> Result<usize> {
    let mut max = None;
    source.pass(&mut |u, v| {
        max = max.max(Some(u.max(v)));
        Ok(())
    })?;
    max.map(|m| m + 1).ok_or(Error::EmptyInput)
}

/// `s` vertices drawn uniformly with replacement; draw `t` uses vertex substream `t`.
pub fn sample_vertices(n: usize, s: u64, seed: u64) -> Vec<usize> {
    (0..s)
        .map(|t| substream_rng(seed, Substream::Vertex, t).gen_range(0..n))
        .collect()
}

/// Knobs for the pass pipeline.
#[derive(Clone, Copy, Debug, Default)]
pub struct StreamOptions {
    /// Hash every edge during the first pass and reject any repeat.
    pub strict: bool,
}

/// First pass: builds the neighborhood vector of every sampled vertex.
///
/// A repeated edge at a sampled vertex is always an error; `strict` extends
/// the check to every edge.
pub fn pass1_neighborhoods(
    source: &mut dyn EdgeStreamSource,
    sampled: Vec<usize>,
    n: usize,
    options: StreamOptions,
) -> Result<StreamState> {
    for &i in &sampled {
        check_endpoint(i, n)?;
    }
    let mut bits = bitvec![u64, Lsb0; 0; sampled.len() * n];
    let mut seen = options.strict.then(HashSet::new);
    let mut loops = 0usize;
    source.pass(&mut |u, v| {
        check_endpoint(u, n)?;
        check_endpoint(v, n)?;
        if u == v {
            loops += 1;
            return Ok(());
        }
        if let Some(seen) = seen.as_mut() {
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateStreamEdge { u, v });
            }
        }
        for (t, &i) in sampled.iter().enumerate() {
            let other = if i == u {
                v
            } else if i == v {
                u
            } else {
                continue;
            };
            if bits.replace(t * n + other, true) {
                return Err(Error::DuplicateStreamEdge { u, v });
            }
        }
        Ok(())
    })?;
    if loops > 0 {
        debug!("skipped {loops} self-loop(s) in the stream");
    }
    let local_counts = vec![0; sampled.len()];
    Ok(StreamState {
        n,
        sampled,
        neighborhoods: bits,
        edge_counts: None,
        local_counts,
        phase: StreamPhase::Neighborhoods,
    })
}

/// Second pass: counts the triangles at every sampled vertex and its edges.
pub fn pass2_local_counts(
    source: &mut dyn EdgeStreamSource,
    state: &mut StreamState,
) -> Result<()> {
    if state.phase != StreamPhase::Neighborhoods {
        return Err(Error::StreamPhase {
            expected: StreamPhase::Neighborhoods,
            found: state.phase,
        });
    }
    let n = state.n;
    let s = state.sampled.len();
    let mut counters = Counters::zeroed(s * n, n);
    let bits = &state.neighborhoods;
    let local = &mut state.local_counts;
    source.pass(&mut |j, d| {
        check_endpoint(j, n)?;
        check_endpoint(d, n)?;
        if j == d {
            return Ok(());
        }
        for (t, z) in local.iter_mut().enumerate() {
            let row = t * n;
            if bits[row + j] && bits[row + d] {
                counters.increment(row + j);
                counters.increment(row + d);
                *z += 1;
            }
        }
        Ok(())
    })?;
    state.edge_counts = Some(counters);
    state.phase = StreamPhase::Counted;
    Ok(())
}

/// Per-trial outcome of the final partner draw.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamTrial {
    pub vertex: usize,
    pub partner: Option<usize>,
    pub value: f64,
}

/// Draws a partner for every sampled vertex in proportion to its edge counts
/// and averages the resulting trial values.
///
/// Partner draw `t` uses neighbor substream `t` of `seed`, the same substream
/// the in-memory estimator uses for trial `t`.
pub fn finalize_stream_estimate(
    state: &StreamState,
    seed: u64,
) -> Result<(Estimate, Vec<StreamTrial>)> {
    if state.phase != StreamPhase::Counted {
        return Err(Error::StreamPhase {
            expected: StreamPhase::Counted,
            found: state.phase,
        });
    }
    if state.sampled.is_empty() {
        return Err(Error::InvalidArgument("no vertices were sampled".into()));
    }
    let n = state.n;
    let p = Probability::new(1, n as u64);
    let mut row = vec![0u64; n];
    let trials: Vec<StreamTrial> = state
        .sampled
        .iter()
        .enumerate()
        .map(|(t, &vertex)| {
            let twice_local = 2 * state.local_counts[t];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = state.edge_count(t, j);
            }
            let mut rng = substream_rng(seed, Substream::Neighbor, t as u64);
            match sample_proportional(&row, twice_local, &mut rng) {
                None => StreamTrial {
                    vertex,
                    partner: None,
                    value: 0.0,
                },
                Some(j) => StreamTrial {
                    vertex,
                    partner: Some(j),
                    value: importance_weight(row[j], p, Probability::new(row[j], twice_local)),
                },
            }
        })
        .collect();
    let values: Vec<f64> = trials.iter().map(|t| t.value).collect();
    let estimate = reduce_blocked(&values).into_estimate(SamplerKind::QOptUniform, seed, None);
    Ok((estimate, trials))
}

/// Everything a full streaming run produces.
#[derive(Clone, Debug)]
pub struct StreamOutcome {
    pub estimate: Estimate,
    pub trials: Vec<StreamTrial>,
    pub state: StreamState,
    pub passes_used: usize,
    pub peak_state_bytes: usize,
}

/// Runs the whole pipeline: an optional pass for `n`, then the two counting passes.
pub fn run_stream(
    source: &mut dyn EdgeStreamSource,
    s: u64,
    seed: u64,
    n: Option<usize>,
    options: StreamOptions,
) -> Result<StreamOutcome> {
    if s == 0 {
        return Err(Error::InvalidArgument(
            "trial count must be at least 1".into(),
        ));
    }
    let start = source.passes();
    let n = match n {
        Some(n) => n,
        None if !source.replayable() => return Err(Error::NonReplayable(
            "piped input cannot be replayed to discover the vertex count; pass --n or use a file"
                .into(),
        )),
        None => pass_count_n(source)?,
    };
    if n == 0 {
        return Err(Error::InvalidArgument(
            "vertex count must be positive".into(),
        ));
    }
    let sampled = sample_vertices(n, s, seed);
    let mut state = pass1_neighborhoods(source, sampled, n, options)?;
    pass2_local_counts(source, &mut state)?;
    let peak_state_bytes = state.heap_bytes();
    let (estimate, trials) = finalize_stream_estimate(&state, seed)?;
    Ok(StreamOutcome {
        estimate,
        trials,
        passes_used: source.passes() - start,
        peak_state_bytes,
        state,
    })
}

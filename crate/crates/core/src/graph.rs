//! Simple undirected graphs in compressed adjacency form.
//!
//! Vertices are dense ids `0..n`. Every vertex owns a strictly ascending
//! slice of neighbor ids inside one shared target array; `offsets[v]..offsets[v + 1]`
//! delimits the slice of `v`. Both directions of every edge are stored.

use std::io::{BufRead, Write};

use log::warn;

use crate::error::{Error, Result};

/// Immutable simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

/// A graph together with what ingestion had to drop to make it simple.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// One classified line of the edge-list text format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Line {
    Skip,
    Header(usize),
    Edge(usize, usize),
}

pub(crate) fn parse_line(text: &str, line: usize) -> Result<Line> {
    let trimmed = text.trim();
    if trimmed.is_empty() || trimmed.starts_with('%') {
        return Ok(Line::Skip);
    }
    if let Some(comment) = trimmed.strip_prefix('#') {
        let comment = comment.trim();
        if let Some(count) = comment.strip_prefix("n=") {
            let n = count.trim().parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid vertex-count header {trimmed:?}"),
            })?;
            return Ok(Line::Header(n));
        }
        return Ok(Line::Skip);
    }
    let mut tokens = trimmed.split_whitespace();
    let mut vertex = || -> Result<usize> {
        let token = tokens.next().ok_or_else(|| Error::Parse {
            line,
            message: "expected two vertex ids".to_string(),
        })?;
        token.parse::<usize>().map_err(|_| Error::Parse {
            line,
            message: format!("invalid vertex id {token:?}"),
        })
    };
    let u = vertex()?;
    let v = vertex()?;
    if u > u32::MAX as usize || v > u32::MAX as usize {
        return Err(Error::Parse {
            line,
            message: "vertex id exceeds 32 bits".to_string(),
        });
    }
    Ok(Line::Edge(u, v))
}

impl Graph {
    /// Builds a graph on `n` vertices, dropping self-loops and repeated edges.
    ///
    /// Returns the graph and the (self-loop, duplicate) drop counts.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Self, usize, usize)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "{n} vertices exceed 32-bit ids"
            )));
        }
        let mut pairs = Vec::new();
        let mut loops = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                loops += 1;
                continue;
            }
            pairs.push((u.min(v) as u32, u.max(v) as u32));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        let duplicates = before - pairs.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * pairs.len()];
        // Pairs are sorted by (low, high), so each list fills in ascending order:
        // a vertex first receives its lower neighbors (as the high end), then its higher ones.
        for &(u, v) in &pairs {
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
        }
        let graph = Graph { offsets, targets };
        debug_assert!(graph.is_valid());
        Ok((graph, loops, duplicates))
    }

    /// Vertex count.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Undirected edge count.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Position of `v`'s first neighbor in the flat adjacency array.
    pub(crate) fn offset(&self, v: usize) -> usize {
        self.offsets[v]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    /// Each undirected edge once, as `(low, high)`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Adjacency-matrix entry `A[i][j]`, by binary search in `i`'s list.
    pub fn has_edge(&self, i: usize, j: usize) -> Result<bool> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        Ok(self.neighbors(i).binary_search(&(j as u32)).is_ok())
    }

    /// Checks every structural invariant. Used by tests and debug builds.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        let sorted = (0..n).all(|v| {
            let list = self.neighbors(v);
            list.windows(2).all(|w| w[0] < w[1])
                && list.iter().all(|&w| (w as usize) < n && w as usize != v)
        });
        let symmetric = (0..n).all(|v| {
            self.neighbors(v).iter().all(|&w| {
                self.neighbors(w as usize)
                    .binary_search(&(v as u32))
                    .is_ok()
            })
        });
        sorted && symmetric && self.degrees().sum::<usize>() == 2 * self.m()
    }

    /// Writes the graph as an edge list with an explicit vertex-count header.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# n={}", self.n())?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Reads an edge list.
///
/// Lines starting with `#` or `%` are comments, except a `# n=<count>` header
/// which fixes the vertex universe. Otherwise `n` is one more than the largest id.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut header = None;
    let mut edges = Vec::new();
    let mut max_id = None;
    for (index, text) in reader.lines().enumerate() {
        let text = text?;
        match parse_line(&text, index + 1)? {
            Line::Skip => {}
            Line::Header(n) => header = Some(n),
            Line::Edge(u, v) => {
                max_id = max_id.max(Some(u.max(v)));
                edges.push((u, v));
            }
        }
    }
    let Some(max_id) = max_id else {
        return Err(Error::EmptyInput);
    };
    let n = match header {
        Some(n) if n <= max_id => {
            return Err(Error::VertexOutOfRange { vertex: max_id, n });
        }
        Some(n) => n,
        None => max_id + 1,
    };
    let (graph, self_loops_dropped, duplicates_dropped) = Graph::from_edges(n, edges)?;
    if self_loops_dropped > 0 {
        warn!("dropped {self_loops_dropped} self-loop(s)");
    }
    if duplicates_dropped > 0 {
        warn!("dropped {duplicates_dropped} duplicate edge(s)");
    }
    Ok(LoadedGraph {
        graph,
        self_loops_dropped,
        duplicates_dropped,
    })
}

/// Loads an edge-list file from disk.
pub fn load_edge_list_file(path: impl AsRef<std::path::Path>) -> Result<LoadedGraph> {
    let file = std::fs::File::open(path)?;
    load_edge_list(std::io::BufReader::new(file))
}

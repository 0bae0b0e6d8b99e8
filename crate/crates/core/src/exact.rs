//! Exact triangle counts by sorted-adjacency intersection.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::Graph;

/// Above this vertex count the cubic triple enumeration cross-check is skipped.
const TRIPLE_CHECK_MAX_N: usize = 50;

/// Exact global, per-vertex and per-edge triangle counts of one graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleProfile {
    /// Total number of triangles.
    pub total: u64,
    /// Triangles incident to each vertex.
    pub per_vertex: Vec<u64>,
    edges: Vec<(u32, u32)>,
    per_edge: Vec<u64>,
}

impl TriangleProfile {
    /// Triangles containing `{i, j}`; zero for non-edges.
    pub fn edge(&self, i: usize, j: usize) -> u64 {
        let key = (i.min(j) as u32, i.max(j) as u32);
        self.edges
            .binary_search(&key)
            .map(|pos| self.per_edge[pos])
            .unwrap_or(0)
    }

    /// `((low, high), count)` for every edge, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.edges
            .iter()
            .zip(&self.per_edge)
            .map(|(&(u, v), &c)| ((u as usize, v as usize), c))
    }

    /// Largest per-vertex count.
    pub fn max_vertex(&self) -> u64 {
        self.per_vertex.iter().copied().max().unwrap_or(0)
    }

    /// Largest per-edge count.
    pub fn max_edge(&self) -> u64 {
        self.per_edge.iter().copied().max().unwrap_or(0)
    }

    /// True when the three counting identities hold exactly.
    pub fn is_consistent(&self, g: &Graph) -> bool {
        let vertex_sum: u64 = self.per_vertex.iter().sum();
        let mut edge_sums = vec![0u64; g.n()];
        for ((u, v), c) in self.edges() {
            edge_sums[u] += c;
            edge_sums[v] += c;
        }
        let non_edges_zero = self
            .edges()
            .all(|((u, v), _)| g.has_edge(u, v).unwrap_or(false));
        vertex_sum == 3 * self.total
            && edge_sums
                .iter()
                .zip(&self.per_vertex)
                .all(|(&s, &d)| s == 2 * d)
            && non_edges_zero
    }
}

/// Size of the intersection of two ascending lists.
pub(crate) fn intersection_size(a: &[u32], b: &[u32]) -> u64 {
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}

/// Triangles containing `{i, j}`: `|N(i) ∩ N(j)|` for an edge, zero otherwise.
pub fn local_edge_count(g: &Graph, i: usize, j: usize) -> Result<u64> {
    if !g.has_edge(i, j)? {
        return Ok(0);
    }
    Ok(intersection_size(g.neighbors(i), g.neighbors(j)))
}

/// Counts every triangle of `g` exactly.
pub fn count_exact(g: &Graph) -> TriangleProfile {
    let rows: Vec<Vec<((u32, u32), u64)>> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            g.neighbors(u)
                .iter()
                .filter(|&&v| v as usize > u)
                .map(|&v| {
                    let c = intersection_size(g.neighbors(u), g.neighbors(v as usize));
                    ((u as u32, v), c)
                })
                .collect()
        })
        .collect();

    let mut edges = Vec::with_capacity(g.m());
    let mut per_edge = Vec::with_capacity(g.m());
    let mut per_vertex = vec![0u64; g.n()];
    for (key, c) in rows.into_iter().flatten() {
        per_vertex[key.0 as usize] += c;
        per_vertex[key.1 as usize] += c;
        edges.push(key);
        per_edge.push(c);
    }
    for d in &mut per_vertex {
        *d /= 2;
    }
    let total = per_vertex.iter().sum::<u64>() / 3;
    if g.n() <= TRIPLE_CHECK_MAX_N {
        assert_eq!(
            total,
            count_by_triples(g),
            "intersection count disagrees with triple enumeration"
        );
    }
    TriangleProfile {
        total,
        per_vertex,
        edges,
        per_edge,
    }
}

/// Counts triangles by testing every vertex triple. Cubic; for small graphs only.
pub fn count_by_triples(g: &Graph) -> u64 {
    let n = g.n();
    let adjacent = |a: usize, b: usize| g.neighbors(a).binary_search(&(b as u32)).is_ok();
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !adjacent(a, b) {
                continue;
            }
            for c in b + 1..n {
                if adjacent(a, c) && adjacent(b, c) {
                    count += 1;
                }
            }
        }
    }
    count
}

//! Shared fixtures and brute-force oracles for the integration tests.
//!
//! The oracles work on a dense adjacency matrix and never call into the
//! library's counting or variance code.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricount::Graph;

pub fn k3() -> Graph {
    Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap().0
}

pub fn k4() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
        .unwrap()
        .0
}

pub fn paw() -> Graph {
    Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
        .unwrap()
        .0
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap().0
}

/// A random graph with `n ≤ max_n` and edge probability in `[0.2, 0.5]`.
pub fn random_small(max_n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let n = rng.gen_range(3..=max_n);
    let p = rng.gen_range(0.2..=0.5);
    gnp(n, p, seed)
}

/// Sparse random graph: each vertex proposes `per_vertex` random partners.
pub fn sparse(n: usize, per_vertex: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * per_vertex);
    for u in 0..n {
        for _ in 0..per_vertex {
            edges.push((u, rng.gen_range(0..n)));
        }
    }
    Graph::from_edges(n, edges).unwrap().0
}

/// Dense adjacency matrix with the triangle sums spelled out.
pub struct Dense {
    pub n: usize,
    a: Vec<Vec<u64>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut a = vec![vec![0u64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for &j in g.neighbors(i) {
                row[j as usize] = 1;
            }
        }
        Dense { n, a }
    }

    /// `Σ_d A_di A_ij A_jd`.
    pub fn edge(&self, i: usize, j: usize) -> u64 {
        (0..self.n)
            .map(|d| self.a[d][i] * self.a[i][j] * self.a[j][d])
            .sum()
    }

    /// `½ Σ_j Σ_d A_di A_ij A_jd`.
    pub fn vertex(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.edge(i, j)).sum::<u64>() / 2
    }

    /// `Tr(A³) / 6`.
    pub fn total(&self) -> u64 {
        let mut trace = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                trace += self.edge(i, j);
            }
        }
        trace / 6
    }

    /// Number of vertex triples that are pairwise adjacent.
    pub fn triples(&self) -> u64 {
        let mut count = 0;
        for x in 0..self.n {
            for y in x + 1..self.n {
                for z in y + 1..self.n {
                    count += self.a[x][y] * self.a[x][z] * self.a[y][z];
                }
            }
        }
        count
    }

    /// `(1/36) Σ_i Σ_j Δ_{i,j}² / (p_i q_{j|i}) − Δ²` for arbitrary `p` and `q`.
    pub fn trial_variance(&self, p: impl Fn(usize) -> f64, q: impl Fn(usize, usize) -> f64) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let d = self.edge(i, j) as f64;
                if d > 0.0 {
                    sum += d * d / (p(i) * q(i, j));
                }
            }
        }
        let total = self.total() as f64;
        sum / 36.0 - total * total
    }
}

/// `|a − b| ≤ tol · max(|a|, |b|, floor)`.
pub fn close(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(floor)
}

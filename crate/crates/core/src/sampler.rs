//! The five two-stage sampling strategies.
//!
//! A trial first picks a vertex `i` with probability `p_i`, then a partner
//! `j` with probability `q_{j|i}`. All probabilities here are ratios of
//! integers and are kept as exact [`Probability`] values so the importance
//! weight of a trial can be formed with a single rounding.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{intersection_size, TriangleProfile};
use crate::graph::Graph;
use crate::rng::TrialRng;

/// Which `(p, q)` pair a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SamplerKind {
    /// `p_i = Δ_i / 3Δ`, `q_{j|i} = Δ_{i,j} / 2Δ_i`. Needs the exact profile.
    #[serde(rename = "optimal")]
    Optimal,
    /// `p_i = 1/n`, `q_{j|i} = Δ_{i,j} / 2Δ_i`.
    #[serde(rename = "qopt-uniform")]
    QOptUniform,
    /// `p_i = deg(i)/2m`, `q_{j|i} = Δ_{i,j} / 2Δ_i`.
    #[serde(rename = "qopt-degree")]
    QOptDegree,
    /// `p_i = 1/n`, `q_{j|i} = 1/deg(i)` over neighbors.
    #[serde(rename = "edge-uniform")]
    EdgeUniform,
    /// `p_i = deg(i)/2m`, `q_{j|i} = 1/deg(i)` over neighbors.
    #[serde(rename = "edge-degree")]
    EdgeDegree,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 5] = [
        SamplerKind::Optimal,
        SamplerKind::QOptUniform,
        SamplerKind::QOptDegree,
        SamplerKind::EdgeUniform,
        SamplerKind::EdgeDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Optimal => "optimal",
            SamplerKind::QOptUniform => "qopt-uniform",
            SamplerKind::QOptDegree => "qopt-degree",
            SamplerKind::EdgeUniform => "edge-uniform",
            SamplerKind::EdgeDegree => "edge-degree",
        }
    }

    fn degree_weighted(self) -> bool {
        matches!(self, SamplerKind::QOptDegree | SamplerKind::EdgeDegree)
    }

    fn q_optimal(self) -> bool {
        matches!(self, SamplerKind::QOptUniform | SamplerKind::QOptDegree)
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SamplerKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SamplerKind::ALL.iter().map(|k| k.name()).collect();
                Error::InvalidArgument(format!(
                    "unknown sampler {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// An exact probability `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Probability {
    num: u64,
    den: u64,
}

impl Probability {
    pub const ZERO: Probability = Probability { num: 0, den: 1 };
    pub const ONE: Probability = Probability { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0 && num <= den, "invalid probability {num}/{den}");
        Probability { num, den }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// Cumulative integer weights with binary-search lookup.
#[derive(Clone, Debug, Default)]
pub struct CumulativeTable {
    cumulative: Vec<u64>,
}

impl CumulativeTable {
    pub fn from_weights<I: IntoIterator<Item = u64>>(weights: I) -> Self {
        let mut running = 0u64;
        let cumulative = weights
            .into_iter()
            .map(|w| {
                running += w;
                running
            })
            .collect();
        CumulativeTable { cumulative }
    }

    pub fn total(&self) -> u64 {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Index owning the point `u ∈ [0, total)`; zero-weight entries are never returned.
    pub fn locate(&self, u: u64) -> usize {
        self.cumulative.partition_point(|&c| c <= u)
    }

    /// Draws an index proportional to its weight, or `None` when all weights are zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let total = self.total();
        (total > 0).then(|| self.locate(rng.gen_range(0..total)))
    }
}

/// Draws from weights given as a slice without building a table.
///
/// Uses the same point-location rule as [`CumulativeTable`], so both give the
/// same index for the same generator state.
pub(crate) fn sample_proportional<R: Rng + ?Sized>(
    weights: &[u64],
    total: u64,
    rng: &mut R,
) -> Option<usize> {
    if total == 0 {
        return None;
    }
    let u = rng.gen_range(0..total);
    let mut running = 0;
    weights.iter().position(|&w| {
        running += w;
        running > u
    })
}

/// Result of one two-stage draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialDraw {
    pub i: usize,
    pub j: Option<usize>,
    pub p_i: Probability,
    pub q_j_given_i: Probability,
    /// The selected `i` admits no partner; the trial contributes zero.
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
enum VertexRule {
    Uniform,
    Weighted(CumulativeTable),
}

#[derive(Clone, Debug)]
struct OptimalTables {
    total: u64,
    per_vertex: Vec<u64>,
    /// Per-edge counts aligned with the graph's flat adjacency array.
    slot_counts: Vec<u64>,
}

/// A built sampling strategy for one graph.
#[derive(Clone, Debug)]
pub struct Sampler {
    kind: SamplerKind,
    n: usize,
    m: usize,
    vertex_rule: VertexRule,
    optimal: Option<OptimalTables>,
}

impl Sampler {
    /// Precomputes what `kind` needs. `profile` is required for [`SamplerKind::Optimal`].
    pub fn build(g: &Graph, kind: SamplerKind, profile: Option<&TriangleProfile>) -> Result<Self> {
        if g.n() == 0 {
            return Err(Error::InvalidArgument("graph has no vertices".into()));
        }
        if kind.degree_weighted() && g.m() == 0 {
            return Err(Error::UndefinedProbabilities(format!(
                "{kind} selects vertices by degree but the graph has no edges"
            )));
        }
        let mut optimal = None;
        let vertex_rule = match kind {
            SamplerKind::Optimal => {
                let profile = profile
                    .filter(|p| p.per_vertex.len() == g.n())
                    .ok_or(Error::MissingProfile)?;
                if profile.total == 0 {
                    return Err(Error::UndefinedProbabilities(
                        "optimal sampling divides by the triangle count, which is zero".into(),
                    ));
                }
                let slot_counts = (0..g.n())
                    .flat_map(|i| {
                        g.neighbors(i)
                            .iter()
                            .map(move |&j| profile.edge(i, j as usize))
                    })
                    .collect();
                optimal = Some(OptimalTables {
                    total: profile.total,
                    per_vertex: profile.per_vertex.clone(),
                    slot_counts,
                });
                VertexRule::Weighted(CumulativeTable::from_weights(
                    profile.per_vertex.iter().copied(),
                ))
            }
            SamplerKind::QOptDegree | SamplerKind::EdgeDegree => {
                VertexRule::Weighted(CumulativeTable::from_weights(g.degrees().map(|d| d as u64)))
            }
            SamplerKind::QOptUniform | SamplerKind::EdgeUniform => VertexRule::Uniform,
        };
        Ok(Sampler {
            kind,
            n: g.n(),
            m: g.m(),
            vertex_rule,
            optimal,
        })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    /// First-stage probability `p_i`.
    pub fn p(&self, g: &Graph, i: usize) -> Probability {
        match self.kind {
            SamplerKind::Optimal => {
                let t = self.optimal.as_ref().expect("optimal tables");
                Probability::new(t.per_vertex[i], 3 * t.total)
            }
            SamplerKind::QOptUniform | SamplerKind::EdgeUniform => {
                Probability::new(1, self.n as u64)
            }
            SamplerKind::QOptDegree | SamplerKind::EdgeDegree => {
                Probability::new(g.degree(i) as u64, 2 * self.m as u64)
            }
        }
    }

    /// Second-stage probabilities over the neighbors of `i`, in neighbor order.
    ///
    /// Every kind puts zero mass outside `N(i)`. Returns an empty row when `i`
    /// is degenerate for this kind.
    pub fn q_row(&self, g: &Graph, i: usize) -> Vec<(usize, Probability)> {
        let neighbors = g.neighbors(i);
        match self.kind {
            SamplerKind::EdgeUniform | SamplerKind::EdgeDegree => {
                let deg = neighbors.len() as u64;
                neighbors
                    .iter()
                    .map(|&j| (j as usize, Probability::new(1, deg)))
                    .collect()
            }
            SamplerKind::QOptUniform | SamplerKind::QOptDegree | SamplerKind::Optimal => {
                let counts = self.partner_counts(g, i);
                let twice_local: u64 = counts.iter().sum();
                if twice_local == 0 {
                    return Vec::new();
                }
                neighbors
                    .iter()
                    .zip(counts)
                    .map(|(&j, c)| (j as usize, Probability::new(c, twice_local)))
                    .collect()
            }
        }
    }

    /// Second-stage probability `q_{j|i}`.
    pub fn q(&self, g: &Graph, i: usize, j: usize) -> Probability {
        self.q_row(g, i)
            .into_iter()
            .find(|&(v, _)| v == j)
            .map(|(_, q)| q)
            .unwrap_or(Probability::ZERO)
    }

    /// `Δ_{i,j}` for every neighbor `j` of `i`, in neighbor order.
    fn partner_counts(&self, g: &Graph, i: usize) -> Vec<u64> {
        match &self.optimal {
            Some(t) => {
                let start = g.offset(i);
                t.slot_counts[start..start + g.degree(i)].to_vec()
            }
            None => g
                .neighbors(i)
                .iter()
                .map(|&j| intersection_size(g.neighbors(i), g.neighbors(j as usize)))
                .collect(),
        }
    }

    fn draw_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.vertex_rule {
            VertexRule::Uniform => rng.gen_range(0..self.n),
            VertexRule::Weighted(table) => table.sample(rng).expect("positive total weight"),
        }
    }

    /// One two-stage draw using separate generators for each stage.
    pub fn draw_with<R1, R2>(
        &self,
        g: &Graph,
        vertex_rng: &mut R1,
        neighbor_rng: &mut R2,
    ) -> TrialDraw
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        let i = self.draw_vertex(vertex_rng);
        let p_i = self.p(g, i);
        let degenerate = TrialDraw {
            i,
            j: None,
            p_i,
            q_j_given_i: Probability::ZERO,
            degenerate: true,
        };
        let neighbors = g.neighbors(i);
        if neighbors.is_empty() {
            return degenerate;
        }
        if self.kind.q_optimal() || self.kind == SamplerKind::Optimal {
            let counts = self.partner_counts(g, i);
            let twice_local: u64 = counts.iter().sum();
            match sample_proportional(&counts, twice_local, neighbor_rng) {
                None => degenerate,
                Some(slot) => TrialDraw {
                    i,
                    j: Some(neighbors[slot] as usize),
                    p_i,
                    q_j_given_i: Probability::new(counts[slot], twice_local),
                    degenerate: false,
                },
            }
        } else {
            let slot = neighbor_rng.gen_range(0..neighbors.len());
            TrialDraw {
                i,
                j: Some(neighbors[slot] as usize),
                p_i,
                q_j_given_i: Probability::new(1, neighbors.len() as u64),
                degenerate: false,
            }
        }
    }

    /// One two-stage draw from a trial's generator pair.
    pub fn draw(&self, g: &Graph, rng: &mut TrialRng) -> TrialDraw {
        self.draw_with(g, &mut rng.vertex, &mut rng.neighbor)
    }
}

//! Closed-form estimator variances and Chernoff sample-size plans.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::TriangleProfile;
use crate::graph::Graph;
use crate::sampler::{Sampler, SamplerKind};

/// Both variance routes for one sampler at one trial count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub sampler: SamplerKind,
    pub s: u64,
    /// Specialized closed form for `sampler`.
    pub analytical_variance: f64,
    /// The generic double sum over the sampling support.
    pub generic_variance: f64,
}

fn check_trials(s: u64) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidArgument(
            "trial count must be at least 1".into(),
        ));
    }
    Ok(s as f64)
}

/// `Δ_{i,j}² / (p_i q_{j|i})` as an exact ratio, rounded once.
fn support_term(delta: u64, p: crate::sampler::Probability, q: crate::sampler::Probability) -> f64 {
    let exact = (|| {
        let num = (delta as u128)
            .checked_mul(delta as u128)?
            .checked_mul(p.denominator() as u128)?
            .checked_mul(q.denominator() as u128)?;
        let den = (p.numerator() as u128).checked_mul(q.numerator() as u128)?;
        let g = num.gcd(&den);
        const EXACT: u128 = 1 << 53;
        let (num, den) = (num / g, den / g);
        (num <= EXACT && den <= EXACT).then(|| num as f64 / den as f64)
    })();
    exact.unwrap_or_else(|| (delta * delta) as f64 / (p.value() * q.value()))
}

/// `Var(β) = (1/36s) Σ_i Σ_j Δ_{i,j}² / (p_i q_{j|i}) − Δ²/s`, summed term by term.
///
/// Probabilities come from the sampler's own accessors; the profile supplies
/// only the per-edge counts and `Δ`.
pub fn variance_generic(
    g: &Graph,
    profile: &TriangleProfile,
    kind: SamplerKind,
    s: u64,
) -> Result<f64> {
    let s = check_trials(s)?;
    let sampler = Sampler::build(g, kind, Some(profile))?;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for i in 0..g.n() {
        let p = sampler.p(g, i);
        let row = sampler.q_row(g, i);
        for (slot, &j) in g.neighbors(i).iter().enumerate() {
            let j = j as usize;
            let delta = profile.edge(i, j);
            if delta == 0 {
                continue;
            }
            let q = row
                .get(slot)
                .map(|&(_, q)| q)
                .unwrap_or(crate::sampler::Probability::ZERO);
            if p.is_zero() || q.is_zero() {
                return Err(Error::SupportViolation { i, j });
            }
            let term = support_term(delta, p, q);
            let t = sum + term;
            comp += if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
            sum = t;
        }
    }
    let total = profile.total as f64;
    Ok(((sum + comp) / 36.0 - total * total) / s)
}

/// The specialized variance formula for `kind`; zero for the optimal sampler.
pub fn variance_closed_form(
    g: &Graph,
    profile: &TriangleProfile,
    kind: SamplerKind,
    s: u64,
) -> Result<f64> {
    let s = check_trials(s)?;
    let n = g.n() as f64;
    let m = g.m() as f64;
    let total = profile.total as f64;
    let total_sq = total * total;
    let sq = |x: u64| (x as f64) * (x as f64);
    let value = match kind {
        SamplerKind::Optimal => return Ok(0.0),
        SamplerKind::QOptDegree => {
            if g.m() == 0 {
                return Err(Error::UndefinedProbabilities(
                    "degree-weighted selection on an edgeless graph".into(),
                ));
            }
            let sum: f64 = (0..g.n())
                .filter(|&i| g.degree(i) > 0)
                .map(|i| sq(profile.per_vertex[i]) / g.degree(i) as f64)
                .sum();
            2.0 * m / 9.0 * sum - total_sq
        }
        SamplerKind::QOptUniform => {
            let sum: f64 = profile.per_vertex.iter().map(|&d| sq(d)).sum();
            n / 9.0 * sum - total_sq
        }
        SamplerKind::EdgeUniform => {
            let mut per_vertex_sq = vec![0.0f64; g.n()];
            for ((u, v), c) in profile.edges() {
                per_vertex_sq[u] += sq(c);
                per_vertex_sq[v] += sq(c);
            }
            let sum: f64 = per_vertex_sq
                .iter()
                .enumerate()
                .map(|(i, s)| g.degree(i) as f64 * s)
                .sum();
            n / 36.0 * sum - total_sq
        }
        SamplerKind::EdgeDegree => {
            if g.m() == 0 {
                return Err(Error::UndefinedProbabilities(
                    "degree-weighted selection on an edgeless graph".into(),
                ));
            }
            // Each unordered edge appears twice in the double sum.
            let sum: f64 = profile.edges().map(|(_, c)| 2.0 * sq(c)).sum();
            m / 18.0 * sum - total_sq
        }
    };
    Ok(value / s)
}

/// Evaluates both variance routes.
pub fn variance_report(
    g: &Graph,
    profile: &TriangleProfile,
    kind: SamplerKind,
    s: u64,
) -> Result<VarianceReport> {
    Ok(VarianceReport {
        sampler: kind,
        s,
        analytical_variance: variance_closed_form(g, profile, kind, s)?,
        generic_variance: variance_generic(g, profile, kind, s)?,
    })
}

/// Whether local counts are bounded per vertex or per edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Vertex,
    Edge,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Vertex => "vertex",
            BoundKind::Edge => "edge",
        })
    }
}

/// Where a plan's upper bound came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    Supplied,
    OracleDerived,
}

/// A trial count guaranteeing a one-sided relative error `epsilon` with
/// failure probability at most `n^-c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffPlan {
    pub epsilon: f64,
    pub c: f64,
    pub bound_kind: BoundKind,
    /// Vertex count entering the `ln n` term.
    pub n: u64,
    pub upper_bound: f64,
    pub upper_bound_source: BoundSource,
    /// `Δ/n` for vertex bounds, `Δ/m` for edge bounds.
    pub average: f64,
    pub s: u64,
}

/// Smallest `s` with `exp(−ε² s · average / (2 · upper_bound)) ≤ n^{−c}`.
pub fn chernoff_sample_size(
    epsilon: f64,
    c: f64,
    n: u64,
    upper_bound: f64,
    average: f64,
) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "c must be positive, got {c}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "the failure probability n^-c needs n ≥ 2".into(),
        ));
    }
    if average == 0.0 {
        return Err(Error::TriangleFree);
    }
    if !(average > 0.0 && upper_bound >= average && upper_bound.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need upper_bound ≥ average > 0, got upper_bound = {upper_bound}, average = {average}"
        )));
    }
    let s = (2.0 * c * (upper_bound / average) * (n as f64).ln() / (epsilon * epsilon)).ceil();
    Ok((s as u64).max(1))
}

/// Builds a plan from an exact profile.
///
/// The average always comes from the profile. The upper bound is the largest
/// observed local count unless one is supplied, in which case it must not be
/// smaller than that maximum.
pub fn plan_from_profile(
    g: &Graph,
    profile: &TriangleProfile,
    epsilon: f64,
    c: f64,
    bound_kind: BoundKind,
    upper_bound: Option<f64>,
) -> Result<ChernoffPlan> {
    let (observed, units) = match bound_kind {
        BoundKind::Vertex => (profile.max_vertex(), g.n()),
        BoundKind::Edge => (profile.max_edge(), g.m()),
    };
    if profile.total == 0 {
        return Err(Error::TriangleFree);
    }
    let average = profile.total as f64 / units as f64;
    let (upper_bound, upper_bound_source) = match upper_bound {
        Some(b) if b < observed as f64 => {
            return Err(Error::BoundViolation {
                bound: b,
                observed: observed as f64,
            })
        }
        Some(b) => (b, BoundSource::Supplied),
        None => (observed as f64, BoundSource::OracleDerived),
    };
    let s = chernoff_sample_size(epsilon, c, g.n() as u64, upper_bound, average)?;
    Ok(ChernoffPlan {
        epsilon,
        c,
        bound_kind,
        n: g.n() as u64,
        upper_bound,
        upper_bound_source,
        average,
        s,
    })
}

/// Normalizer turning a trial value into a `[0, 1]` statistic:
/// `n · Δ̃^v` for vertex bounds, `m · Δ̃^e` for edge bounds.
pub fn trial_scale(bound_kind: BoundKind, n: usize, m: usize, upper_bound: f64) -> f64 {
    match bound_kind {
        BoundKind::Vertex => n as f64 * upper_bound,
        BoundKind::Edge => m as f64 * upper_bound,
    }
}

/// `X_t = β_t / scale`. A value above one means the bound behind `scale` was not a bound.
pub fn scaled_trial_statistic(beta_t: f64, scale: f64) -> Result<f64> {
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let x = beta_t / scale;
    if x > 1.0 {
        return Err(Error::BoundViolation {
            bound: scale,
            observed: beta_t,
        });
    }
    Ok(x)
}

/// Recovers the triangle estimate `(scale / s) Σ X_t`.
pub fn rescale_statistics(xs: &[f64], scale: f64) -> f64 {
    scale * xs.iter().sum::<f64>() / xs.len() as f64
}

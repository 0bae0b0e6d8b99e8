//! Monte Carlo triangle estimation: `s` independent importance-weighted trials.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{count_exact, local_edge_count};
use crate::graph::Graph;
use crate::rng::TrialRng;
use crate::sampler::{Probability, Sampler, SamplerKind, TrialDraw};

/// Trials per reduction block. Blocks are reduced in index order whether or
/// not they were computed in parallel, so results never depend on threading.
const BLOCK: u64 = 4096;

/// `delta / (6 · p · q)` with one final rounding when the exact ratio fits.
pub fn importance_weight(delta: u64, p: Probability, q: Probability) -> f64 {
    if delta == 0 {
        return 0.0;
    }
    let exact = (|| {
        let num = (delta as u128)
            .checked_mul(p.denominator() as u128)?
            .checked_mul(q.denominator() as u128)?;
        let den = 6u128
            .checked_mul(p.numerator() as u128)?
            .checked_mul(q.numerator() as u128)?;
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        const EXACT: u128 = 1 << 53;
        (num <= EXACT && den <= EXACT).then(|| num as f64 / den as f64)
    })();
    exact.unwrap_or_else(|| delta as f64 / (6.0 * p.value() * q.value()))
}

/// The single-trial estimate `β_t` of a draw.
pub fn trial_value(g: &Graph, draw: &TrialDraw) -> Result<f64> {
    let Some(j) = draw.j.filter(|_| !draw.degenerate) else {
        return Ok(0.0);
    };
    let delta = local_edge_count(g, draw.i, j)?;
    if delta > 0 && (draw.p_i.is_zero() || draw.q_j_given_i.is_zero()) {
        return Err(Error::SupportViolation { i: draw.i, j });
    }
    Ok(importance_weight(delta, draw.p_i, draw.q_j_given_i))
}

/// Streaming first and second moments.
///
/// Sums use Neumaier compensation; the spread uses Welford updates so the
/// variance stays accurate when values are large and nearly equal.
#[derive(Clone, Debug, Default)]
pub(crate) struct Moments {
    count: u64,
    sum: f64,
    sum_comp: f64,
    sum_sq: f64,
    sum_sq_comp: f64,
    mean: f64,
    m2: f64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        neumaier(&mut self.sum, &mut self.sum_comp, x);
        neumaier(&mut self.sum_sq, &mut self.sum_sq_comp, x * x);
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub(crate) fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        let delta = other.mean - self.mean;
        self.mean += delta * nb / total;
        self.m2 += other.m2 + delta * delta * na * nb / total;
        self.count += other.count;
        neumaier(&mut self.sum, &mut self.sum_comp, other.sum);
        neumaier(&mut self.sum, &mut self.sum_comp, other.sum_comp);
        neumaier(&mut self.sum_sq, &mut self.sum_sq_comp, other.sum_sq);
        neumaier(&mut self.sum_sq, &mut self.sum_sq_comp, other.sum_sq_comp);
    }

    pub(crate) fn into_estimate(
        self,
        sampler: SamplerKind,
        seed: u64,
        values: Option<Vec<f64>>,
    ) -> Estimate {
        let trials = self.count;
        let sum_beta = self.sum + self.sum_comp;
        let trial_variance = if trials > 1 {
            (self.m2 / (trials - 1) as f64).max(0.0)
        } else {
            0.0
        };
        Estimate {
            value: sum_beta / trials as f64,
            trials,
            sum_beta,
            sum_beta_sq: self.sum_sq + self.sum_sq_comp,
            trial_variance,
            empirical_variance: trial_variance / trials as f64,
            sampler,
            seed,
            values,
        }
    }
}

/// Result of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Average of the trial values.
    pub value: f64,
    pub trials: u64,
    pub sum_beta: f64,
    pub sum_beta_sq: f64,
    /// Unbiased sample variance of a single trial value (zero when `trials == 1`).
    pub trial_variance: f64,
    /// `trial_variance / trials`: the estimated variance of `value`.
    pub empirical_variance: f64,
    pub sampler: SamplerKind,
    pub seed: u64,
    /// Per-trial values, kept only on request.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub values: Option<Vec<f64>>,
}

/// Execution knobs that never change the result.
#[derive(Clone, Copy, Debug, Default)]
pub struct EstimateOptions {
    /// Run trial blocks on the rayon pool.
    pub parallel: bool,
    /// Keep every `β_t` in [`Estimate::values`].
    pub retain_values: bool,
}

/// Reduces trial values in trial order with the same block structure as [`estimate_with`].
pub(crate) fn reduce_blocked(values: &[f64]) -> Moments {
    let mut total = Moments::default();
    for chunk in values.chunks(BLOCK as usize) {
        let mut block = Moments::default();
        chunk.iter().for_each(|&x| block.push(x));
        total.merge(&block);
    }
    total
}

fn run_block(
    g: &Graph,
    sampler: &Sampler,
    seed: u64,
    range: std::ops::Range<u64>,
    retain: bool,
) -> Result<(Moments, Vec<f64>)> {
    let mut moments = Moments::default();
    let mut values = Vec::new();
    for t in range {
        let draw = sampler.draw(g, &mut TrialRng::new(seed, t));
        let beta = trial_value(g, &draw)?;
        moments.push(beta);
        if retain {
            values.push(beta);
        }
    }
    Ok((moments, values))
}

/// Runs `s` trials of a prebuilt sampler. Trial `t` uses substream `t` of `seed`.
pub fn estimate_with(
    g: &Graph,
    sampler: &Sampler,
    s: u64,
    seed: u64,
    options: EstimateOptions,
) -> Result<Estimate> {
    if s == 0 {
        return Err(Error::InvalidArgument(
            "trial count must be at least 1".into(),
        ));
    }
    let blocks: Vec<_> = (0..s.div_ceil(BLOCK))
        .map(|b| b * BLOCK..((b + 1) * BLOCK).min(s))
        .collect();
    let retain = options.retain_values;
    let results: Vec<(Moments, Vec<f64>)> = if options.parallel {
        blocks
            .into_par_iter()
            .map(|r| run_block(g, sampler, seed, r, retain))
            .collect::<Result<_>>()?
    } else {
        blocks
            .into_iter()
            .map(|r| run_block(g, sampler, seed, r, retain))
            .collect::<Result<_>>()?
    };
    let mut total = Moments::default();
    let mut values = retain.then(|| Vec::with_capacity(s as usize));
    for (moments, block_values) in results {
        total.merge(&moments);
        if let Some(v) = values.as_mut() {
            v.extend(block_values);
        }
    }
    Ok(total.into_estimate(sampler.kind(), seed, values))
}

/// Builds the sampler (computing the exact profile when `kind` needs it) and runs `s` trials.
pub fn estimate(g: &Graph, kind: SamplerKind, s: u64, seed: u64) -> Result<Estimate> {
    let profile = (kind == SamplerKind::Optimal).then(|| count_exact(g));
    let sampler = Sampler::build(g, kind, profile.as_ref())?;
    estimate_with(g, &sampler, s, seed, EstimateOptions::default())
}

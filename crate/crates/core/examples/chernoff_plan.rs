//! Plans a trial count from a tail bound and checks how often it delivers.
//!
//! ```text
//! cargo run --release --example chernoff_plan -- 0.1
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricount::{
    chernoff_sample_size, count_exact, estimate_with, plan_from_profile, BoundKind,
    EstimateOptions, Graph, Sampler, SamplerKind,
};

fn main() -> anyhow::Result<()> {
    let epsilon: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(0.1);

    // Ratio 2 on a thousand vertices.
    for eps in [0.1, 0.2] {
        println!(
            "ε = {eps}: s = {}",
            chernoff_sample_size(eps, 1.0, 1000, 2.0, 1.0)?
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 500;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(0.08))
        .collect();
    let g = Graph::from_edges(n, edges)?.0;
    let profile = count_exact(&g);

    for bound in [BoundKind::Vertex, BoundKind::Edge] {
        let plan = plan_from_profile(&g, &profile, epsilon, 1.0, bound, None)?;
        let kind = match bound {
            BoundKind::Vertex => SamplerKind::QOptUniform,
            BoundKind::Edge => SamplerKind::EdgeDegree,
        };
        let sampler = Sampler::build(&g, kind, None)?;
        let truth = profile.total as f64;
        let reps = 50;
        let hits = (0..reps)
            .filter(|&r| {
                let est = estimate_with(
                    &g,
                    &sampler,
                    plan.s,
                    r,
                    EstimateOptions {
                        parallel: true,
                        retain_values: false,
                    },
                );
                est.map(|e| ((e.value - truth) / truth).abs() <= epsilon)
                    .unwrap_or(false)
            })
            .count();
        println!(
            "{bound:?} bound {} over average {:.3}: s = {}, {kind} within ε in {hits}/{reps} runs",
            plan.upper_bound, plan.average, plan.s
        );
    }
    Ok(())
}

//! Runs all five samplers on one graph and compares them with the exact count.
//!
//! ```text
//! cargo run --release --example estimate_samplers -- 20000
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricount::{count_exact, estimate_with, EstimateOptions, Graph, Sampler, SamplerKind};

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p));
    Graph::from_edges(n, edges.collect::<Vec<_>>()).unwrap().0
}

fn main() -> anyhow::Result<()> {
    let s: u64 = std::env::args()
        .nth(1)
        .map(|a| a.parse())
        .transpose()?
        .unwrap_or(20_000);
    let g = gnp(300, 0.05, 1);
    let profile = count_exact(&g);
    println!("G(300, 0.05): m = {}, triangles = {}", g.m(), profile.total);
    println!(
        "{:<14} {:>12} {:>10} {:>14}",
        "sampler", "estimate", "rel.err", "var(estimate)"
    );

    let options = EstimateOptions {
        parallel: true,
        retain_values: false,
    };
    for kind in SamplerKind::ALL {
        let sampler = Sampler::build(&g, kind, Some(&profile))?;
        let est = estimate_with(&g, &sampler, s, 42, options)?;
        let err = (est.value - profile.total as f64) / profile.total as f64;
        println!(
            "{:<14} {:>12.2} {:>10.4} {:>14.4}",
            kind, est.value, err, est.empirical_variance
        );
    }
    Ok(())
}

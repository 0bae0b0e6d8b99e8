//! Closed-form trial variances next to the generic sum and a Monte Carlo check.
//!
//! ```text
//! cargo run --release --example variance_analysis
//! ```

use tricount::{
    count_exact, estimate_with, load_edge_list_file, variance_report, EstimateOptions, Sampler,
    SamplerKind,
};

fn main() -> anyhow::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/paw.edges");
    let g = load_edge_list_file(path)?.graph;
    let profile = count_exact(&g);
    let trials = 200_000;

    println!(
        "{:<14} {:>12} {:>12} {:>12}",
        "sampler", "closed form", "generic", "sampled"
    );
    for kind in SamplerKind::ALL {
        let report = variance_report(&g, &profile, kind, 1)?;
        let sampler = Sampler::build(&g, kind, Some(&profile))?;
        let est = estimate_with(
            &g,
            &sampler,
            trials,
            9,
            EstimateOptions {
                parallel: true,
                retain_values: false,
            },
        )?;
        println!(
            "{:<14} {:>12.6} {:>12.6} {:>12.6}",
            kind, report.analytical_variance, report.generic_variance, est.trial_variance
        );
    }
    Ok(())
}

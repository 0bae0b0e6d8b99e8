//! Error and timing across a grid of trial counts, printed as TSV.
//!
//! ```text
//! cargo run --release --example benchmark_grid -- data/paw.edges
//! ```

use std::path::PathBuf;

use tricount::report::{cmd_bench, Format};
use tricount::SamplerKind;

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/paw.edges")));
    let report = cmd_bench(
        &path,
        &SamplerKind::ALL,
        &[10, 100, 1_000, 10_000],
        50,
        1,
        false,
    )?;
    print!("{}", report.render(Format::Tsv));
    Ok(())
}

//! The two-pass streaming estimator over a file, with the in-memory result for comparison.
//!
//! ```text
//! cargo run --release --example streaming_two_pass -- data/k4.edges 1000
//! ```

use tricount::{
    estimate, load_edge_list_file, run_stream, FileEdgeStream, SamplerKind, StreamOptions,
};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/k4.edges").to_string());
    let s: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(1000);
    let seed = 3;

    let mut source = FileEdgeStream::open(&path)?;
    let out = run_stream(&mut source, s, seed, None, StreamOptions::default())?;
    println!(
        "streamed: estimate {:.4} after {} passes, {} bytes of state ({}-byte counters)",
        out.estimate.value,
        out.passes_used,
        out.peak_state_bytes,
        out.state.counter_width()
    );
    for t in out.trials.iter().take(5) {
        println!(
            "  trial at vertex {} partner {:?}: {:.4}",
            t.vertex, t.partner, t.value
        );
    }

    let g = load_edge_list_file(&path)?.graph;
    let memory = estimate(&g, SamplerKind::QOptUniform, s, seed)?;
    println!(
        "in memory: estimate {:.4} (identical: {})",
        memory.value,
        memory.value == out.estimate.value
    );
    Ok(())
}

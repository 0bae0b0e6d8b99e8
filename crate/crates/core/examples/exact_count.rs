//! Exact global, per-vertex and per-edge triangle counts.
//!
//! ```text
//! cargo run --example exact_count -- data/paw.edges
//! ```

use std::path::PathBuf;

use tricount::{count_exact, load_edge_list_file};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/paw.edges")));
    let loaded = load_edge_list_file(&path)?;
    let g = &loaded.graph;
    println!("{}: n = {}, m = {}", path.display(), g.n(), g.m());
    if loaded.self_loops_dropped + loaded.duplicates_dropped > 0 {
        println!(
            "dropped {} self-loops and {} duplicate edges",
            loaded.self_loops_dropped, loaded.duplicates_dropped
        );
    }

    let profile = count_exact(g);
    println!("triangles: {}", profile.total);
    for (i, t) in profile
        .per_vertex
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > 0)
        .take(10)
    {
        println!("  vertex {i}: {t}");
    }
    for ((u, v), t) in profile.edges().filter(|&(_, t)| t > 0).take(10) {
        println!("  edge {u}-{v}: {t}");
    }
    Ok(())
}

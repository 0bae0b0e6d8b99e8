//! Randomized triangle counting.
//!
//! Every estimator here picks a vertex `i` with probability `p_i`, a partner
//! `j` with probability `q_{j|i}`, and scores the trial as
//! `Δ_{i,j} / (6 p_i q_{j|i})`, where `Δ_{i,j}` counts the triangles on the
//! edge `{i, j}`. The average over independent trials is an unbiased estimate
//! of the triangle count for any valid choice of `p` and `q`; the choice only
//! moves the variance and the per-trial cost.
//!
//! * [`graph`]: simple undirected graphs and edge-list ingestion.
//! * [`exact`]: exact global, per-vertex and per-edge counts.
//! * [`sampler`]: the five `(p, q)` strategies.
//! * [`estimator`]: the Monte Carlo loop.
//! * [`analytics`]: closed-form variances and Chernoff sample sizes.
//! * [`stream`]: the two-pass streaming variant.
//! * [`report`]: the command implementations behind the `tricount` binary.

pub mod analytics;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod graph;
pub mod report;
pub mod rng;
pub mod sampler;
pub mod stream;

pub use analytics::{
    chernoff_sample_size, plan_from_profile, scaled_trial_statistic, variance_closed_form,
    variance_generic, variance_report, BoundKind, ChernoffPlan, VarianceReport,
};
pub use error::{Error, Result};
pub use estimator::{estimate, estimate_with, trial_value, Estimate, EstimateOptions};
pub use exact::{count_exact, local_edge_count, TriangleProfile};
pub use graph::{load_edge_list, load_edge_list_file, Graph, LoadedGraph};
pub use rng::TrialRng;
pub use sampler::{Probability, Sampler, SamplerKind, TrialDraw};
pub use stream::{
    run_stream, EdgeStreamSource, FileEdgeStream, MemoryEdgeStream, StreamOptions, StreamState,
};

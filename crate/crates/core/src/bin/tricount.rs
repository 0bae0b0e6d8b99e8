use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tricount::analytics::BoundKind;
use tricount::report::{self, Format, PlanInput, RunReport};
use tricount::SamplerKind;

#[derive(Parser)]
#[command(
    name = "tricount",
    version,
    about = "Exact and randomized triangle counting"
)]
struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bound {
    Vertex,
    Edge,
}

#[derive(Subcommand)]
enum Command {
    /// Count triangles exactly.
    Exact {
        file: PathBuf,
        /// Also print per-vertex and per-edge counts.
        #[arg(long)]
        profile: bool,
    },
    /// Estimate the triangle count by sampling.
    Estimate {
        file: PathBuf,
        #[arg(long, value_parser = parse_sampler)]
        sampler: SamplerKind,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run trials sequentially.
        #[arg(long)]
        deterministic: bool,
    },
    /// Closed-form and generic estimator variances.
    Variance {
        file: PathBuf,
        /// Omit to report every sampler that applies.
        #[arg(long, value_parser = parse_sampler)]
        sampler: Option<SamplerKind>,
        #[arg(long, default_value_t = 1)]
        samples: u64,
    },
    /// Chernoff sample-size plan.
    Plan {
        /// Edge list to derive the average (and default bound) from.
        file: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = Bound::Vertex)]
        bound: Bound,
        #[arg(long)]
        upper_bound: Option<f64>,
        /// Vertex count, when no file is given.
        #[arg(long)]
        n: Option<u64>,
        /// Average local count (Δ/n or Δ/m), when no file is given.
        #[arg(long)]
        average: Option<f64>,
    },
    /// Two-pass streaming estimate; FILE may be `-` for standard input.
    Stream {
        file: PathBuf,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Known vertex count; saves the counting pass.
        #[arg(long)]
        n: Option<usize>,
        /// Reject any repeated edge, not only those at sampled vertices.
        #[arg(long)]
        strict: bool,
    },
    /// Error and variance over a grid of samplers and trial counts.
    Bench {
        file: PathBuf,
        /// Comma-separated sampler names; all by default.
        #[arg(long, value_delimiter = ',', value_parser = parse_sampler)]
        sampler: Vec<SamplerKind>,
        /// Comma-separated trial counts.
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
        samples: Vec<u64>,
        #[arg(long, default_value_t = 100)]
        repetitions: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        deterministic: bool,
    },
}

fn parse_sampler(s: &str) -> Result<SamplerKind, String> {
    s.parse().map_err(|e: tricount::Error| e.to_string())
}

fn run(command: Command) -> anyhow::Result<RunReport> {
    let report = match command {
        Command::Exact { file, profile } => report::cmd_exact(&file, profile)?,
        Command::Estimate {
            file,
            sampler,
            samples,
            seed,
            deterministic,
        } => report::cmd_estimate(&file, sampler, samples, seed, deterministic)?,
        Command::Variance {
            file,
            sampler,
            samples,
        } => report::cmd_variance(&file, sampler, samples)?,
        Command::Plan {
            file,
            epsilon,
            c,
            bound,
            upper_bound,
            n,
            average,
        } => {
            let bound = match bound {
                Bound::Vertex => BoundKind::Vertex,
                Bound::Edge => BoundKind::Edge,
            };
            let input = match (&file, n, upper_bound, average) {
                (Some(path), None, _, None) => PlanInput::File { path, upper_bound },
                (None, Some(n), Some(upper_bound), Some(average)) => PlanInput::Params {
                    n,
                    upper_bound,
                    average,
                },
                _ => anyhow::bail!(
                    "plan needs either FILE, or all of --n, --upper-bound and --average"
                ),
            };
            report::cmd_plan(epsilon, c, bound, input)?
        }
        Command::Stream {
            file,
            samples,
            seed,
            n,
            strict,
        } => report::cmd_stream(&file, samples, seed, n, strict)?,
        Command::Bench {
            file,
            sampler,
            samples,
            repetitions,
            seed,
            deterministic,
        } => {
            let kinds = if sampler.is_empty() {
                SamplerKind::ALL.to_vec()
            } else {
                sampler
            };
            report::cmd_bench(&file, &kinds, &samples, repetitions, seed, deterministic)?
        }
    };
    Ok(report)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Tsv => Format::Tsv,
    };
    match run(cli.command) {
        Ok(report) => {
            println!("{}", report.render(format).trim_end());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

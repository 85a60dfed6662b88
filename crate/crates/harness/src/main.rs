use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use moead_core::{Algorithm, EngineParams, Family, Problem, ProblemSpec};
use moead_harness::{
    metric_config, read_archive, run_experiment, run_trial, score_archive, write_archive, write_trace,
    ExperimentConfig, TrialJob, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(name = "moead", version, about = "MOEA/D, MOEA/D-AWA and MOEA/D-AV experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full experiment grid from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run one trial with default parameters.
    Single {
        #[arg(long)]
        problem: Family,
        #[arg(long)]
        algo: Algorithm,
        #[arg(long)]
        vectors: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        evals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = moead_core::metrics::DEFAULT_ENTROPY_GRID)]
        entropy_grid: usize,
    },
    /// Re-score an archive dump.
    Score {
        #[arg(long)]
        uea: PathBuf,
        #[arg(long)]
        problem: Family,
        /// Lattice divisions H; the reference point is 1 + 1/H.
        #[arg(long = "hv-h")]
        hv_h: usize,
        #[arg(long, default_value_t = moead_core::metrics::DEFAULT_ENTROPY_GRID)]
        entropy_grid: usize,
    },
    /// Print or write an analytic Pareto-front sample as CSV.
    Fronts {
        #[arg(long)]
        problem: Family,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run { config } => {
            let config = ExperimentConfig::load(&config)?;
            let records = run_experiment(&config)?;
            println!("{} runs written to {}", records.len(), config.out_dir.display());
        }
        Command::Single { problem, algo, vectors, evals, seed, out, entropy_grid } => {
            let metrics = metric_config(problem, vectors, entropy_grid)?;
            let job = TrialJob { problem, algorithm: algo, init_vectors: vectors, trial: 0, seed };
            let (record, state) = run_trial(&job, &EngineParams::default(), evals, &metrics)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let stem = job.stem();
            write_trace(&out.join(format!("{stem}.trace.csv")), &record.trace)?;
            write_archive(&out.join(format!("{stem}.uea.csv")), &state.archive)?;
            println!("{}", serde_json::to_string_pretty(&record)?);
        }
        Command::Score { uea, problem, hv_h, entropy_grid } => {
            let spec = ProblemSpec::<f64>::new(problem);
            if hv_h == 0 {
                bail!("--hv-h must be at least 1");
            }
            let archive = read_archive(&uea)?;
            if archive.is_empty() {
                bail!("{} holds no solutions", uea.display());
            }
            if archive.entries()[0].f.len() != spec.num_objectives() {
                bail!("{} does not have {} objectives", uea.display(), spec.num_objectives());
            }
            let metrics = moead_core::MetricConfig::for_problem(&spec, hv_h, entropy_grid)?;
            println!("{}", serde_json::to_string_pretty(&score_archive(&archive, &metrics)?)?);
        }
        Command::Fronts { problem, count, out } => {
            let spec = ProblemSpec::<f64>::new(problem);
            let front = spec.true_front_sample(count)?;
            let m = spec.num_objectives();
            let mut text = (1..=m).map(|k| format!("f{k}")).collect::<Vec<_>>().join(",");
            text.push('\n');
            for f in &front {
                text.push_str(&f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                text.push('\n');
            }
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
        }
    }
    Ok(())
}


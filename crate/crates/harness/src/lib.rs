//! Seeded experiment grids over the `moead-core` algorithms.
//!
//! A grid is problems × algorithms × initial vector counts × trials. Every run
//! writes a trace CSV and a dump of its final external archive; the grid as a
//! whole writes `summary.json` and `trials.csv` into the output directory.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use moead_core::{
    divisions_for_count, hypervolume, sld_weights, AdaptationParams, Algorithm, DeleteRule,
    EngineParams, Family, MetricConfig, Problem, ProblemSpec, Run, RunState, StagnationParams,
    TraceRow, UnboundedArchive, VariationParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_BUDGET: usize = 75_000;
pub const DEFAULT_TRIALS: usize = 21;
pub const WORKERS_ENV: &str = "MOEAD_WORKERS";

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] moead_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// DE and mutation settings as they appear in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationConfig {
    pub scale_factor: f64,
    pub crossover_rate: f64,
    pub distribution_index: f64,
    /// `null` means `1/n`.
    pub mutation_probability: Option<f64>,
    pub neighborhood_probability: f64,
    pub max_replacements: usize,
}

impl Default for VariationConfig {
    fn default() -> Self {
        let v = VariationParams::<f64>::default();
        Self {
            scale_factor: v.scale_factor,
            crossover_rate: v.crossover_rate,
            distribution_index: v.distribution_index,
            mutation_probability: v.mutation_probability,
            neighborhood_probability: v.neighborhood_probability,
            max_replacements: v.max_replacements,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AwaConfig {
    pub rate_update: f64,
    pub rate_evol: f64,
    pub period: usize,
}

impl Default for AwaConfig {
    fn default() -> Self {
        let a = AdaptationParams::<f64>::default();
        Self {
            rate_update: a.awa_rate_update,
            rate_evol: a.awa_rate_evol,
            period: a.awa_period,
        }
    }
}

fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_epsilon() -> f64 {
    AdaptationParams::<f64>::default().epsilon
}
fn default_entropy_grid() -> usize {
    moead_core::metrics::DEFAULT_ENTROPY_GRID
}
fn default_neighborhood() -> usize {
    moead_core::decomposition::DEFAULT_NEIGHBORHOOD
}

/// One experiment grid. `delta`, `F_frac` and `ratio` have no defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problems: Vec<Family>,
    pub algorithms: Vec<Algorithm>,
    pub vector_counts: Vec<usize>,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    pub delta: usize,
    #[serde(rename = "F_frac")]
    pub f_frac: f64,
    pub ratio: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub variation: VariationConfig,
    #[serde(default)]
    pub awa: AwaConfig,
    #[serde(default)]
    pub av_delete_rule: DeleteRule,
    #[serde(default = "default_neighborhood")]
    pub neighborhood_size: usize,
    #[serde(default = "default_entropy_grid")]
    pub entropy_grid: usize,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.problems.is_empty() || self.algorithms.is_empty() || self.vector_counts.is_empty() {
            return bad("problems, algorithms and vector_counts must be non-empty".into());
        }
        if self.trials == 0 || self.trials >= TRIAL_STRIDE as usize {
            return bad(format!("trials must be in 1..{TRIAL_STRIDE}, got {}", self.trials));
        }
        for &family in &self.problems {
            let m = family.num_objectives();
            for &count in &self.vector_counts {
                if count as u64 >= COUNT_STRIDE || divisions_for_count(m, count).is_none() {
                    return bad(format!("{count} vectors is not a simplex-lattice size for {family} (m = {m})"));
                }
                if self.budget < count {
                    return bad(format!("budget {} is below the initial population {count}", self.budget));
                }
            }
        }
        if self.entropy_grid == 0 {
            return bad("entropy_grid must be >= 1".into());
        }
        self.engine_params().validate()?;
        Ok(())
    }

    pub fn engine_params(&self) -> EngineParams<f64> {
        let v = &self.variation;
        EngineParams {
            variation: VariationParams {
                scale_factor: v.scale_factor,
                crossover_rate: v.crossover_rate,
                distribution_index: v.distribution_index,
                mutation_probability: v.mutation_probability,
                neighborhood_probability: v.neighborhood_probability,
                max_replacements: v.max_replacements,
            },
            neighborhood_size: self.neighborhood_size,
            stagnation: StagnationParams {
                generation_gap: self.delta,
                fraction: self.f_frac,
            },
            adaptation: AdaptationParams {
                ratio: self.ratio,
                epsilon: self.epsilon,
                awa_rate_update: self.awa.rate_update,
                awa_rate_evol: self.awa.rate_evol,
                awa_period: self.awa.period,
            },
            delete_rule: self.av_delete_rule,
        }
    }

    /// Every run of the grid in problem, algorithm, count, trial order.
    pub fn jobs(&self) -> Vec<TrialJob> {
        let mut jobs = Vec::new();
        for &problem in &self.problems {
            for &algorithm in &self.algorithms {
                for &init_vectors in &self.vector_counts {
                    for trial in 0..self.trials {
                        jobs.push(TrialJob {
                            problem,
                            algorithm,
                            init_vectors,
                            trial,
                            seed: trial_seed(self.base_seed, problem, algorithm, init_vectors, trial),
                        });
                    }
                }
            }
        }
        jobs
    }
}

const TRIAL_STRIDE: u64 = 100_000;
const COUNT_STRIDE: u64 = 1_000_000;

/// Distinct for every grid cell and trial as long as counts stay below one
/// million and trials below one hundred thousand.
pub fn trial_seed(base: u64, problem: Family, algorithm: Algorithm, init_vectors: usize, trial: usize) -> u64 {
    let cell = (problem.ordinal() as u64) * 4 + algorithm.ordinal() as u64;
    let offset = (cell * COUNT_STRIDE + init_vectors as u64) * TRIAL_STRIDE + trial as u64;
    base.wrapping_add(offset)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialJob {
    pub problem: Family,
    pub algorithm: Algorithm,
    pub init_vectors: usize,
    pub trial: usize,
    pub seed: u64,
}

impl TrialJob {
    /// File stem shared by the trace and archive dumps.
    pub fn stem(&self) -> String {
        format!("{}_{}_{}_t{}", self.problem, self.algorithm, self.init_vectors, self.trial)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: Family,
    pub algorithm: Algorithm,
    pub init_vectors: usize,
    pub trial: usize,
    pub seed: u64,
    /// Against the reference point `1 + 1/H`.
    pub hypervolume: f64,
    /// Against the all-ones reference point.
    pub hypervolume_unit: f64,
    pub igd: f64,
    pub entropy: f64,
    pub n_fe: usize,
    pub generations: usize,
    pub final_vectors: usize,
    pub uea_size: usize,
    #[serde(skip)]
    pub trace: Vec<TraceRow<f64>>,
}

/// Scores for one archive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArchiveScores {
    pub hypervolume: f64,
    pub hypervolume_unit: f64,
    pub igd: f64,
    pub entropy: f64,
}

pub fn metric_config(problem: Family, init_vectors: usize, entropy_grid: usize) -> Result<MetricConfig<f64>> {
    let spec = ProblemSpec::new(problem);
    let h = divisions_for_count(spec.num_objectives(), init_vectors)
        .ok_or_else(|| HarnessError::Config(format!("{init_vectors} vectors is not a lattice size for {problem}")))?;
    Ok(MetricConfig::for_problem(&spec, h, entropy_grid)?)
}

pub fn score_archive(archive: &UnboundedArchive<f64>, metrics: &MetricConfig<f64>) -> Result<ArchiveScores> {
    let front = archive.objective_vectors();
    let s = metrics.score(&front)?;
    let unit = vec![1.0; metrics.hv_reference.len()];
    Ok(ArchiveScores {
        hypervolume: s.hypervolume,
        hypervolume_unit: hypervolume(&front, &unit)?,
        igd: s.igd,
        entropy: s.entropy,
    })
}

/// Runs one trial and scores its final archive. Writes nothing.
pub fn run_trial(
    job: &TrialJob,
    params: &EngineParams<f64>,
    budget: usize,
    metrics: &MetricConfig<f64>,
) -> Result<(RunRecord, RunState<f64>)> {
    let spec = ProblemSpec::new(job.problem);
    let m = spec.num_objectives();
    let h = divisions_for_count(m, job.init_vectors)
        .ok_or_else(|| HarnessError::Config(format!("{} vectors is not a lattice size", job.init_vectors)))?;
    let weights = sld_weights(m, h)?;
    let state = Run::new(&spec, job.algorithm, weights, params.clone(), budget, job.seed)?.run()?;
    let scores = score_archive(&state.archive, metrics)?;
    let record = RunRecord {
        problem: job.problem,
        algorithm: job.algorithm,
        init_vectors: job.init_vectors,
        trial: job.trial,
        seed: job.seed,
        hypervolume: scores.hypervolume,
        hypervolume_unit: scores.hypervolume_unit,
        igd: scores.igd,
        entropy: scores.entropy,
        n_fe: state.n_fe,
        generations: state.gen,
        final_vectors: state.pop.len(),
        uea_size: state.archive.len(),
        trace: state.trace.clone(),
    };
    Ok((record, state))
}

pub fn write_trace(path: &Path, rows: &[TraceRow<f64>]) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut emit = || -> std::io::Result<()> {
        writeln!(w, "{}", TraceRow::<f64>::CSV_HEADER)?;
        for row in rows {
            writeln!(w, "{}", row.to_csv())?;
        }
        w.flush()
    };
    emit().map_err(io_err(path))
}

pub fn write_archive(path: &Path, archive: &UnboundedArchive<f64>) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    archive.write_csv(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

pub fn read_archive(path: &Path) -> Result<UnboundedArchive<f64>> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    Ok(UnboundedArchive::read_csv(std::io::BufReader::new(file))?)
}

/// Number of worker threads: `MOEAD_WORKERS` if set, else the machine's parallelism.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(HarnessError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Runs `f` over `items` on a bounded pool, keeping input order.
pub fn parallel_map<I, O, F>(items: &[I], f: F) -> Result<Vec<O>>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    pool.install(|| items.par_iter().map(f).collect())
}

fn check_writable(dir: &Path) -> Result<()> {
    let runs = dir.join("runs");
    fs::create_dir_all(&runs).map_err(io_err(&runs))?;
    let probe = dir.join(".write-check");
    fs::write(&probe, b"").map_err(io_err(&probe))?;
    fs::remove_file(&probe).map_err(io_err(&probe))
}

/// Executes the whole grid, writing per-run dumps as trials finish and the
/// summary once all of them are done. Records come back in grid order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    check_writable(&config.out_dir)?;
    let params = config.engine_params();

    let mut metrics = BTreeMap::new();
    for &problem in &config.problems {
        for &count in &config.vector_counts {
            metrics.insert((problem, count), metric_config(problem, count, config.entropy_grid)?);
        }
    }

    let runs = config.out_dir.join("runs");
    let records = parallel_map(&config.jobs(), |job| {
        let (record, state) = run_trial(job, &params, config.budget, &metrics[&(job.problem, job.init_vectors)])?;
        let stem = job.stem();
        write_trace(&runs.join(format!("{stem}.trace.csv")), &record.trace)?;
        write_archive(&runs.join(format!("{stem}.uea.csv")), &state.archive)?;
        Ok(record)
    })?;

    let Aggregate { cells, scenarios } = aggregate(&records)?;
    let summary = Summary {
        config: config.clone(),
        cells,
        scenarios,
        trials: records.clone(),
    };
    let path = config.out_dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary)?;
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    write_trials_csv(&config.out_dir.join("trials.csv"), &records)?;
    Ok(records)
}

pub fn write_trials_csv(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut out = String::from(
        "problem,algorithm,init_vectors,trial,seed,hypervolume,hypervolume_unit,igd,entropy,n_fe,generations,final_vectors,uea_size\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.problem,
            r.algorithm,
            r.init_vectors,
            r.trial,
            r.seed,
            r.hypervolume,
            r.hypervolume_unit,
            r.igd,
            r.entropy,
            r.n_fe,
            r.generations,
            r.final_vectors,
            r.uea_size
        ));
    }
    fs::write(path, out).map_err(io_err(path))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation; zero for a single value.
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub problem: Family,
    pub algorithm: Algorithm,
    pub init_vectors: usize,
    pub trials: usize,
    pub hypervolume: Stat,
    pub hypervolume_unit: Stat,
    pub igd: Stat,
    pub entropy: Stat,
    pub final_vectors: Stat,
}

/// Best and worst initial vector counts for one problem and algorithm, by mean HV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub problem: Family,
    pub algorithm: Algorithm,
    pub best_vectors: usize,
    pub best: CellSummary,
    pub worst_vectors: usize,
    pub worst: CellSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub cells: Vec<CellSummary>,
    pub scenarios: Vec<ScenarioSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub cells: Vec<CellSummary>,
    pub scenarios: Vec<ScenarioSummary>,
    pub trials: Vec<RunRecord>,
}

/// Per-cell means and sample deviations, plus best/worst scenarios. Cells and
/// scenarios keep the order in which they first appear in `records`.
pub fn aggregate(records: &[RunRecord]) -> Result<Aggregate> {
    if records.is_empty() {
        return Err(HarnessError::Config("nothing to aggregate".into()));
    }
    let mut order: Vec<(Family, Algorithm, usize)> = Vec::new();
    for r in records {
        let key = (r.problem, r.algorithm, r.init_vectors);
        if !order.contains(&key) {
            order.push(key);
        }
    }
    let cells: Vec<CellSummary> = order
        .iter()
        .map(|&(problem, algorithm, init_vectors)| {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| (r.problem, r.algorithm, r.init_vectors) == (problem, algorithm, init_vectors))
                .collect();
            let stat = |get: fn(&RunRecord) -> f64| Stat::of(&group.iter().map(|r| get(r)).collect::<Vec<_>>());
            CellSummary {
                problem,
                algorithm,
                init_vectors,
                trials: group.len(),
                hypervolume: stat(|r| r.hypervolume),
                hypervolume_unit: stat(|r| r.hypervolume_unit),
                igd: stat(|r| r.igd),
                entropy: stat(|r| r.entropy),
                final_vectors: stat(|r| r.final_vectors as f64),
            }
        })
        .collect();

    let mut pairs: Vec<(Family, Algorithm)> = Vec::new();
    for c in &cells {
        if !pairs.contains(&(c.problem, c.algorithm)) {
            pairs.push((c.problem, c.algorithm));
        }
    }
    let scenarios = pairs
        .into_iter()
        .map(|(problem, algorithm)| {
            let group: Vec<&CellSummary> =
                cells.iter().filter(|c| c.problem == problem && c.algorithm == algorithm).collect();
            let mut best = group[0];
            let mut worst = group[0];
            for &c in &group[1..] {
                if c.hypervolume.mean > best.hypervolume.mean {
                    best = c;
                }
                if c.hypervolume.mean < worst.hypervolume.mean {
                    worst = c;
                }
            }
            ScenarioSummary {
                problem,
                algorithm,
                best_vectors: best.init_vectors,
                best: best.clone(),
                worst_vectors: worst.init_vectors,
                worst: worst.clone(),
            }
        })
        .collect();
    Ok(Aggregate { cells, scenarios })
}

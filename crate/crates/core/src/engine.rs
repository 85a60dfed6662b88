//! Generation loops for MOEA/D-DE, MOEA/D-AWA and MOEA/D-AV.
//!
//! A generation is one pass over every current sub-problem, so a generation
//! costs exactly `|pop|` evaluations. The budget is checked between
//! generations and the last one may overshoot it by less than `|pop|`.

use std::fmt;
use std::str::FromStr;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::archive::UnboundedArchive;
use crate::decomposition::{IdealPoint, NeighborhoodMatrix, WeightVector, DEFAULT_NEIGHBORHOOD};
use crate::error::{Error, Result};
use crate::pareto::{DecisionVector, Individual};
use crate::problems::Problem;
use crate::scalar::Scalar;
use crate::stagnation::{CrTracker, StagnationParams, CONSOLIDATION_LEVEL};
use crate::variation::{de_offspring, neighborhood_replacement, select_mating_pool, VariationParams};
use crate::weight_adaptation::{
    add_vectors_awa, add_vectors_uniform, awa_adjust, delete_vectors, AdaptationParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Fixed weight vectors.
    Moead,
    /// Periodic relocation of crowded weight vectors.
    Awa,
    /// Adaptive number of weight vectors.
    Av,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Moead, Algorithm::Awa, Algorithm::Av];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Moead => "moead",
            Algorithm::Awa => "awa",
            Algorithm::Av => "av",
        }
    }

    pub fn ordinal(self) -> usize {
        match self {
            Algorithm::Moead => 0,
            Algorithm::Awa => 1,
            Algorithm::Av => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "moead" | "moead-de" => Ok(Algorithm::Moead),
            "awa" | "moead-awa" => Ok(Algorithm::Awa),
            "av" | "moead-av" => Ok(Algorithm::Av),
            _ => Err(Error::InvalidParameter(format!("unknown algorithm `{s}`"))),
        }
    }
}

/// When MOEA/D-AV deletes vectors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeleteRule {
    /// Delete whenever CR ≤ 0.5; with CR > 0.5 add only if `U* > U_thresh`.
    #[default]
    Pseudocode,
    /// Once `U_thresh` exists, add if `U* > U_thresh` and delete otherwise.
    Prose,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineParams<T> {
    pub variation: VariationParams<T>,
    /// Neighborhood size before clipping to the population size.
    pub neighborhood_size: usize,
    pub stagnation: StagnationParams<T>,
    pub adaptation: AdaptationParams<T>,
    pub delete_rule: DeleteRule,
}

impl<T: Scalar> Default for EngineParams<T> {
    fn default() -> Self {
        Self {
            variation: VariationParams::default(),
            neighborhood_size: DEFAULT_NEIGHBORHOOD,
            stagnation: StagnationParams::default(),
            adaptation: AdaptationParams::default(),
            delete_rule: DeleteRule::default(),
        }
    }
}

impl<T: Scalar> EngineParams<T> {
    pub fn validate(&self) -> Result<()> {
        self.variation.validate()?;
        self.stagnation.validate()?;
        self.adaptation.validate()?;
        if self.neighborhood_size == 0 {
            return Err(Error::InvalidParameter("neighborhood_size must be >= 1".into()));
        }
        Ok(())
    }
}

/// One line of the per-generation trace. Generation 0 is the initial population.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<T> {
    pub gen: usize,
    pub n_fe: usize,
    pub pop_size: usize,
    pub cr: Option<T>,
    pub u: Option<T>,
    pub u_star: Option<T>,
    pub u_thresh: Option<T>,
    pub uea_size: usize,
    pub added: usize,
    pub removed: usize,
}

impl<T: Scalar> TraceRow<T> {
    pub const CSV_HEADER: &'static str = "gen,n_fe,pop_size,cr,u,u_star,u_thresh,uea_size";

    /// CSV line matching [`CSV_HEADER`](Self::CSV_HEADER); undefined values are empty.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<T>| v.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.gen,
            self.n_fe,
            self.pop_size,
            opt(self.cr),
            opt(self.u),
            opt(self.u_star),
            opt(self.u_thresh),
            self.uea_size
        )
    }
}

/// Complete state of one run.
#[derive(Debug, Clone)]
pub struct RunState<T> {
    /// Sub-problems; each individual carries its own weight vector.
    pub pop: Vec<Individual<T>>,
    pub neighbors: NeighborhoodMatrix,
    pub ideal: IdealPoint<T>,
    pub archive: UnboundedArchive<T>,
    pub tracker: CrTracker<T>,
    pub n_fe: usize,
    pub budget: usize,
    pub gen: usize,
    pub trace: Vec<TraceRow<T>>,
    rng: ChaCha8Rng,
}

impl<T: Scalar> RunState<T> {
    pub fn weights(&self) -> Vec<&WeightVector<T>> {
        self.pop.iter().map(|ind| &ind.weight).collect()
    }

    fn rebuild_neighbors(&mut self, size: usize) {
        let weights: Vec<&[T]> = self.pop.iter().map(|ind| &ind.weight[..]).collect();
        self.neighbors = NeighborhoodMatrix::build(&weights, size);
    }
}

/// A run in progress. Drive it with [`step`](Self::step) or [`run`](Self::run).
pub struct Run<'p, T, P: ?Sized> {
    problem: &'p P,
    algorithm: Algorithm,
    params: EngineParams<T>,
    state: RunState<T>,
}

impl<'p, T: Scalar, P: Problem<T> + ?Sized> Run<'p, T, P> {
    /// Samples one uniform decision vector per weight, evaluates them against
    /// the budget and records generation 0.
    pub fn new(
        problem: &'p P,
        algorithm: Algorithm,
        init_weights: Vec<WeightVector<T>>,
        params: EngineParams<T>,
        budget: usize,
        seed: u64,
    ) -> Result<Self> {
        params.validate()?;
        if init_weights.is_empty() {
            return Err(Error::EmptyInput("initial weights"));
        }
        let m = problem.num_objectives();
        if let Some(w) = init_weights.iter().find(|w| w.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: w.len() });
        }
        if budget < init_weights.len() {
            return Err(Error::BudgetTooSmall {
                budget,
                population: init_weights.len(),
            });
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bounds = problem.bounds();
        let mut archive = UnboundedArchive::new();
        let mut ideal: Option<IdealPoint<T>> = None;
        let mut pop = Vec::with_capacity(init_weights.len());
        for weight in init_weights {
            let x: Vec<T> = bounds
                .low()
                .iter()
                .zip(bounds.high())
                .map(|(&lo, &hi)| lo + T::lit(rng.gen::<f64>()) * (hi - lo))
                .collect();
            let x = DecisionVector::new(x);
            let f = problem.evaluate(&x)?;
            match ideal.as_mut() {
                Some(z) => {
                    z.update(&f);
                }
                None => ideal = Some(IdealPoint::from_point(&f)),
            }
            archive.insert(x.clone(), f.clone());
            pop.push(Individual { x, f, weight });
        }
        let n_fe = pop.len();
        let mut tracker = CrTracker::new(params.stagnation.clone())?;
        tracker.observe(0, archive.snapshot());

        let mut state = RunState {
            pop,
            neighbors: NeighborhoodMatrix::build::<T, Vec<T>>(&[], 1),
            ideal: ideal.expect("non-empty population"),
            archive,
            tracker,
            n_fe,
            budget,
            gen: 0,
            trace: Vec::new(),
            rng,
        };
        state.rebuild_neighbors(params.neighborhood_size);
        state.trace.push(TraceRow {
            gen: 0,
            n_fe,
            pop_size: state.pop.len(),
            cr: None,
            u: None,
            u_star: None,
            u_thresh: None,
            uea_size: state.archive.len(),
            added: 0,
            removed: 0,
        });
        Ok(Self {
            problem,
            algorithm,
            params,
            state,
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn state(&self) -> &RunState<T> {
        &self.state
    }

    pub fn into_state(self) -> RunState<T> {
        self.state
    }

    pub fn is_finished(&self) -> bool {
        self.state.n_fe >= self.state.budget
    }

    /// Runs generations until the budget is spent.
    pub fn run(mut self) -> Result<RunState<T>> {
        while !self.is_finished() {
            self.step()?;
        }
        Ok(self.state)
    }

    /// Executes one generation followed by the algorithm's adaptation step.
    pub fn step(&mut self) -> Result<&TraceRow<T>> {
        self.evolve()?;
        let st = &mut self.state;
        st.gen += 1;
        let gen = st.gen;

        let cr = st.tracker.observe(gen, st.archive.snapshot());
        let utility = cr.and_then(|_| st.tracker.utility_step(gen).ok());
        let finished = st.n_fe >= st.budget;

        let (mut added, mut removed) = (0, 0);
        match self.algorithm {
            Algorithm::Moead => {}
            Algorithm::Awa => {
                let adapt = &self.params.adaptation;
                let started = T::from_count(st.n_fe) >= adapt.awa_rate_evol * T::from_count(st.budget);
                if !finished && started && gen.is_multiple_of(adapt.awa_period) {
                    let moved = awa_adjust(&mut st.pop, &st.archive, &st.ideal, adapt)?;
                    added = moved;
                    removed = moved;
                }
            }
            Algorithm::Av => {
                if let (Some(cr), false) = (cr, finished) {
                    (added, removed) = adapt_vector_count(st, &self.params, gen, cr, utility.and_then(|u| u.u_star))?;
                }
            }
        }
        if added > 0 || removed > 0 {
            st.rebuild_neighbors(self.params.neighborhood_size);
        }

        st.trace.push(TraceRow {
            gen,
            n_fe: st.n_fe,
            pop_size: st.pop.len(),
            cr,
            u: utility.map(|u| u.u),
            u_star: utility.and_then(|u| u.u_star),
            u_thresh: st.tracker.u_thresh(),
            uea_size: st.archive.len(),
            added,
            removed,
        });
        Ok(st.trace.last().expect("row just pushed"))
    }

    /// One offspring per sub-problem: mate, evaluate, update ideal point and
    /// archive, then replace within the mating pool.
    fn evolve(&mut self) -> Result<()> {
        let st = &mut self.state;
        let vp = &self.params.variation;
        let bounds = self.problem.bounds();
        let n = st.pop.len();
        for i in 0..n {
            let pool = if n >= 3 {
                select_mating_pool(i, &st.neighbors, n, vp.neighborhood_probability, &mut st.rng)?
            } else {
                (0..n).collect()
            };
            let (a, b) = pick_parents(i, &pool, n, &mut st.rng);
            let target = &st.pop[i].x;
            let child = de_offspring(target, target, &st.pop[a].x, &st.pop[b].x, vp, bounds, &mut st.rng);
            let f = self.problem.evaluate(&child)?;
            st.n_fe += 1;
            st.ideal.update(&f);
            st.archive.insert(child.clone(), f.clone());
            neighborhood_replacement(&child, &f, &pool, &mut st.pop, &st.ideal, vp.max_replacements, &mut st.rng);
        }
        Ok(())
    }
}

/// Two distinct donors other than `i`, from the pool when it has enough
/// members, else from the whole population. Populations under three draw with
/// replacement.
fn pick_parents<R: Rng + ?Sized>(i: usize, pool: &[usize], n: usize, rng: &mut R) -> (usize, usize) {
    let from_pool: Vec<usize> = pool.iter().copied().filter(|&k| k != i).collect();
    let candidates = if from_pool.len() >= 2 {
        from_pool
    } else if n >= 3 {
        (0..n).filter(|&k| k != i).collect()
    } else {
        return (rng.gen_range(0..n), rng.gen_range(0..n));
    };
    let a = rng.gen_range(0..candidates.len());
    let mut b = rng.gen_range(0..candidates.len() - 1);
    if b >= a {
        b += 1;
    }
    (candidates[a], candidates[b])
}

/// MOEA/D-AV vector-count adaptation for a generation with a defined CR.
/// Returns `(added, removed)`.
fn adapt_vector_count<T: Scalar>(
    st: &mut RunState<T>,
    params: &EngineParams<T>,
    gen: usize,
    cr: T,
    u_star: Option<T>,
) -> Result<(usize, usize)> {
    let consolidating = cr > T::lit(CONSOLIDATION_LEVEL);
    if consolidating && st.tracker.u_thresh().is_none() {
        st.tracker.init_thresholds(gen, cr)?;
    }
    let exceeds = match (u_star, st.tracker.u_thresh()) {
        (Some(us), Some(th)) => Some(us > th),
        _ => None,
    };
    let add = match params.delete_rule {
        DeleteRule::Pseudocode => {
            if consolidating {
                exceeds == Some(true)
            } else {
                false
            }
        }
        DeleteRule::Prose => exceeds == Some(true),
    };
    let delete = match params.delete_rule {
        DeleteRule::Pseudocode => !consolidating,
        DeleteRule::Prose => exceeds == Some(false),
    };

    let nav = params.adaptation.vectors_to_change(st.pop.len());
    if add {
        let progress = st.n_fe as f64 / st.budget as f64;
        let r: f64 = st.rng.sample(Open01);
        let added = if progress > r && st.archive.len() >= 2 {
            add_vectors_awa(&st.archive, &mut st.pop, nav, &st.ideal, &params.adaptation)?
        } else {
            add_vectors_uniform(&st.archive, &mut st.pop, nav, &st.ideal, &mut st.rng)?
        };
        Ok((added, 0))
    } else if delete {
        Ok((0, delete_vectors(&mut st.pop, nav, &mut st.rng)))
    } else {
        Ok((0, 0))
    }
}

/// MOEA/D-DE with a fixed weight-vector set.
pub fn run_moead<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    init_weights: Vec<WeightVector<T>>,
    params: &EngineParams<T>,
    budget: usize,
    seed: u64,
) -> Result<RunState<T>> {
    Run::new(problem, Algorithm::Moead, init_weights, params.clone(), budget, seed)?.run()
}

/// MOEA/D-DE plus periodic AWA relocation once `awa_rate_evol` of the budget is spent.
pub fn run_moead_awa<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    init_weights: Vec<WeightVector<T>>,
    params: &EngineParams<T>,
    budget: usize,
    seed: u64,
) -> Result<RunState<T>> {
    Run::new(problem, Algorithm::Awa, init_weights, params.clone(), budget, seed)?.run()
}

/// MOEA/D-DE with a Consolidation-Ratio-driven number of weight vectors.
pub fn run_moead_av<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    init_weights: Vec<WeightVector<T>>,
    params: &EngineParams<T>,
    budget: usize,
    seed: u64,
) -> Result<RunState<T>> {
    Run::new(problem, Algorithm::Av, init_weights, params.clone(), budget, seed)?.run()
}

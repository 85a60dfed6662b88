//! Decomposition-based multi-objective evolutionary optimization.
//!
//! Three generation loops share one set of operators:
//!
//! * [`Algorithm::Moead`]: MOEA/D-DE with a fixed weight-vector set;
//! * [`Algorithm::Awa`]: MOEA/D-AWA, which periodically relocates the most
//!   crowded sub-problems toward sparse regions of the archive;
//! * [`Algorithm::Av`]: MOEA/D-AV, which grows or shrinks the number of weight
//!   vectors, deciding *when* from the Consolidation Ratio of the external archive
//!   and *where* from archive sparsity or random directions.
//!
//! Every run records all non-dominated solutions it ever evaluates in an
//! [`UnboundedArchive`]; the [`metrics`] module scores that archive.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases
//! below name the double-precision instantiations.
//!
//! ```
//! use moead_core::{run_moead_av, sld_weights, EngineParams, Family, ProblemSpec};
//!
//! let problem = ProblemSpec::<f64>::new(Family::Zdt1);
//! let weights = sld_weights(2, 9).unwrap();
//! let state = run_moead_av(&problem, weights, &EngineParams::default(), 2_000, 7).unwrap();
//! assert!(state.n_fe >= 2_000);
//! assert!(!state.archive.is_empty());
//! ```

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archive;
pub mod decomposition;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod pareto;
pub mod problems;
pub mod scalar;
pub mod stagnation;
pub mod variation;
pub mod weight_adaptation;

pub use archive::{ArchiveEntry, ArchiveSnapshot, UnboundedArchive};
pub use decomposition::{
    divisions_for_count, sld_count, sld_points, sld_weights, tchebycheff, IdealPoint,
    NeighborhoodMatrix, WeightVector,
};
pub use engine::{
    run_moead, run_moead_av, run_moead_awa, Algorithm, DeleteRule, EngineParams, Run, RunState,
    TraceRow,
};
pub use error::{Error, Result};
pub use metrics::{coverage_entropy, hv_reference_for, hypervolume, igd, MetricConfig, Scores};
pub use pareto::{dominates, nondominated_filter, Bounds, DecisionVector, Individual, ObjectiveVector};
pub use problems::{Family, Problem, ProblemSpec};
pub use scalar::Scalar;
pub use stagnation::{consolidation_ratio, CrTracker, StagnationParams, Utility};
pub use variation::{
    de_offspring, neighborhood_replacement, polynomial_mutation, repair_bounds,
    select_mating_pool, VariationParams,
};
pub use weight_adaptation::{
    add_vectors_awa, add_vectors_uniform, awa_adjust, delete_vectors, sparse_vector,
    sparsity_levels, AdaptationParams,
};

pub type ObjectiveVector64 = ObjectiveVector<f64>;
pub type DecisionVector64 = DecisionVector<f64>;
pub type WeightVector64 = WeightVector<f64>;
pub type Individual64 = Individual<f64>;
pub type Archive64 = UnboundedArchive<f64>;
pub type ProblemSpec64 = ProblemSpec<f64>;
pub type EngineParams64 = EngineParams<f64>;
pub type RunState64 = RunState<f64>;
pub type TraceRow64 = TraceRow<f64>;
pub type MetricConfig64 = MetricConfig<f64>;

pub type ObjectiveVector32 = ObjectiveVector<f32>;
pub type Archive32 = UnboundedArchive<f32>;
pub type ProblemSpec32 = ProblemSpec<f32>;
pub type EngineParams32 = EngineParams<f32>;
pub type RunState32 = RunState<f32>;

//! Single machine total weighted tardiness: model, neighborhoods,
//! best-improvement hillclimbing and variable neighborhood descent,
//! exhaustive oracles, optima enumeration and precedence-entropy analysis.
//!
//! All types are generic over the integer [`Scalar`]; the aliases at the
//! crate root fix it to [`Cost`] (`i64`).
//!
//! ```
//! use smtwt::{evaluate, hillclimb, EvalCounter, Instance, Operator, Permutation};
//!
//! let inst = Instance::new(vec![3, 2, 1], vec![2, 1, 3], vec![2, 4, 3]).unwrap();
//! let start = Permutation::identity(3);
//! assert_eq!(evaluate(&start, &inst).unwrap(), 12);
//!
//! let run = hillclimb(&inst, Operator::Exchange, &start, &mut EvalCounter::new()).unwrap();
//! assert!(run.final_cost <= 12);
//! ```

pub mod analysis;
pub mod error;
pub mod exact;
pub mod io;
pub mod model;
pub mod neighborhood;
pub mod num;
pub mod report;
pub mod search;

pub use analysis::{
    aggregate, deviation, entropy, precedence_counts, subsample, Deviation, DifficultyReport,
    PrecedenceCounts, SolutionPool,
};
pub use error::{Error, Result};
pub use exact::{
    brute_force, collect_optima_by_search, enumerate_optima, enumerate_optima_with, PruningBound,
};
pub use io::{
    generate, generate_grid, generate_set, orlib_grid_cell, parse_orlib, write_orlib,
    GeneratorConfig, Provenance,
};
pub use model::{decode, evaluate, InstanceMeta, Permutation};
pub use neighborhood::{apply, best_move, enumerate_moves, EvalCounter, Operator};
pub use num::Scalar;
pub use search::{
    find_improving_move, hillclimb, multistart, random_permutation, run_restarts, vnd, Algorithm,
    AlgorithmConfig,
};

/// Default scalar for times, weights and objective values.
pub type Cost = i64;

pub type Instance = model::Instance<Cost>;
pub type Schedule = model::Schedule<Cost>;
pub type Move = neighborhood::Move<Cost>;
pub type RunRecord = search::RunRecord<Cost>;
pub type RunStats = search::RunStats<Cost>;
pub type OptimaSet = exact::OptimaSet<Cost>;
pub type BenchmarkSet = io::BenchmarkSet<Cost>;
pub type BestKnownRegistry = io::BestKnownRegistry<Cost>;
pub type OptimaSummary = report::OptimaSummary<Cost>;

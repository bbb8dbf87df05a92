//! Best-improvement descent, variable neighborhood descent over an ordered
//! operator list, and the multi-restart protocol.

use crate::analysis::{deviation, Deviation};
use crate::error::{Error, Result};
use crate::model::{evaluate, evaluate_seq, Instance, Permutation};
use crate::neighborhood::{
    apply, apply_in_place, best_move_with, enumerate_moves, EvalCounter, Move, Operator, ScanBuffer,
};
use crate::num::Scalar;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Descent strategy: a single operator, or an ordered operator list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Hillclimb(Operator),
    Vnd(Vec<Operator>),
}

impl Algorithm {
    /// EX, FSH, BSH.
    pub fn vns1() -> Self {
        Algorithm::Vnd(vec![
            Operator::Exchange,
            Operator::ForwardShift,
            Operator::BackwardShift,
        ])
    }

    /// BSH, FSH, EX.
    pub fn vns2() -> Self {
        Algorithm::Vnd(vec![
            Operator::BackwardShift,
            Operator::ForwardShift,
            Operator::Exchange,
        ])
    }

    pub fn operators(&self) -> &[Operator] {
        match self {
            Algorithm::Hillclimb(op) => std::slice::from_ref(op),
            Algorithm::Vnd(order) => order,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Algorithm::Vnd(order) = self {
            if order.is_empty() {
                return Err(Error::InvalidConfig("empty operator list".into()));
            }
            for (k, op) in order.iter().enumerate() {
                if order[..k].contains(op) {
                    return Err(Error::InvalidConfig(format!("operator {op} listed twice")));
                }
            }
        }
        Ok(())
    }
}

/// `hillclimb:<OP>` or `vnd:<OP>,<OP>,...`.
impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Hillclimb(op) => write!(f, "hillclimb:{op}"),
            Algorithm::Vnd(order) => {
                f.write_str("vnd:")?;
                for (k, op) in order.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{op}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, ops) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("algorithm {s:?} is not kind:operators")))?;
        let algorithm = match kind {
            "hillclimb" => Algorithm::Hillclimb(ops.parse()?),
            "vnd" => Algorithm::Vnd(
                ops.split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<Operator>>>()?,
            ),
            other => {
                return Err(Error::Parse(format!(
                    "unknown algorithm {other:?}, expected hillclimb or vnd"
                )))
            }
        };
        algorithm.validate()?;
        Ok(algorithm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub algorithm: Algorithm,
    pub restarts: usize,
    pub seed: u64,
    /// Abort a run with [`Error::IterationCap`] after this many accepted moves.
    pub iteration_cap: Option<u64>,
}

impl AlgorithmConfig {
    pub fn new(algorithm: Algorithm, restarts: usize, seed: u64) -> Self {
        Self {
            algorithm,
            restarts,
            seed,
            iteration_cap: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be positive".into()));
        }
        self.algorithm.validate()
    }
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        Self::new(Algorithm::vns2(), 100, 0)
    }
}

/// Result of one descent from one start permutation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RunRecord<T> {
    pub run_index: usize,
    /// Seed of the restart protocol; with `run_index` it reproduces the start.
    pub seed: u64,
    pub start_cost: T,
    pub final_perm: Permutation,
    pub final_cost: T,
    pub evaluations: u64,
    pub iterations: u64,
}

/// RNG stream of one restart: `seed` selects the key, `run_index` the stream.
pub fn run_rng(seed: u64, run_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index as u64);
    rng
}

/// Uniformly random permutation of `n` jobs (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut seq: Vec<usize> = (0..n).collect();
    seq.shuffle(rng);
    Permutation::from_vec_unchecked(seq)
}

/// Best-improvement descent with a single operator until no strictly
/// improving move remains.
pub fn hillclimb<T: Scalar>(
    inst: &Instance<T>,
    op: Operator,
    start: &Permutation,
    counter: &mut EvalCounter,
) -> Result<RunRecord<T>> {
    descend(inst, &[op], start, counter, None)
}

/// Variable neighborhood descent: scan operator `k` (starting with the
/// first), apply its best improving move and return to the first operator,
/// or advance to the next operator when `k` finds none. Stops once every
/// operator has failed in turn.
pub fn vnd<T: Scalar>(
    inst: &Instance<T>,
    order: &[Operator],
    start: &Permutation,
    counter: &mut EvalCounter,
) -> Result<RunRecord<T>> {
    descend(inst, order, start, counter, None)
}

/// Shared descent loop; a one-operator order is plain hillclimbing.
///
/// The starting solution's own evaluation is counted once.
pub fn descend<T: Scalar>(
    inst: &Instance<T>,
    order: &[Operator],
    start: &Permutation,
    counter: &mut EvalCounter,
    iteration_cap: Option<u64>,
) -> Result<RunRecord<T>> {
    if order.is_empty() {
        return Err(Error::InvalidConfig("empty operator list".into()));
    }
    let before = counter.count();
    let start_cost = evaluate(start, inst)?;
    counter.add(1);

    let mut seq = start.as_slice().to_vec();
    let mut cost = start_cost;
    let mut buffer = ScanBuffer::new();
    let mut iterations = 0_u64;
    let mut k = 0;
    while k < order.len() {
        match best_move_with(&seq, inst, order[k], counter, &mut buffer) {
            Some(mv) => {
                let delta = mv.delta.expect("scan moves carry a delta");
                apply_in_place(mv.op, mv.i, mv.j, &mut seq);
                cost = cost + delta;
                debug_assert_eq!(cost, evaluate_seq(&seq, inst), "delta drift after {mv}");
                iterations += 1;
                if iteration_cap.is_some_and(|cap| iterations > cap) {
                    return Err(Error::IterationCap(iteration_cap.unwrap_or_default()));
                }
                k = 0;
            }
            None => k += 1,
        }
    }

    Ok(RunRecord {
        run_index: 0,
        seed: 0,
        start_cost,
        final_perm: Permutation::from_vec_unchecked(seq),
        final_cost: cost,
        evaluations: counter.count() - before,
        iterations,
    })
}

/// One restart of `cfg`: random start from the run's stream, then descent.
pub fn run_once<T: Scalar>(
    inst: &Instance<T>,
    cfg: &AlgorithmConfig,
    run_index: usize,
) -> Result<RunRecord<T>> {
    let mut rng = run_rng(cfg.seed, run_index);
    let start = random_permutation(inst.n(), &mut rng);
    let mut counter = EvalCounter::new();
    let mut record = descend(
        inst,
        cfg.algorithm.operators(),
        &start,
        &mut counter,
        cfg.iteration_cap,
    )?;
    record.run_index = run_index;
    record.seed = cfg.seed;
    Ok(record)
}

/// All `cfg.restarts` runs, in run-index order. Runs execute on the rayon
/// pool; the result does not depend on its size.
pub fn run_restarts<T: Scalar>(inst: &Instance<T>, cfg: &AlgorithmConfig) -> Result<Vec<RunRecord<T>>> {
    cfg.validate()?;
    (0..cfg.restarts)
        .into_par_iter()
        .map(|run| run_once(inst, cfg, run))
        .collect()
}

/// Per-instance summary of a multi-restart experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RunStats<T> {
    pub instance: String,
    pub n: usize,
    pub rdd: Option<f64>,
    pub tf: Option<f64>,
    pub algorithm: String,
    pub restarts: usize,
    pub best_cost: T,
    pub best_known: Option<T>,
    /// `best_cost == best_known`; empty without a reference value.
    pub solved: Option<bool>,
    pub mean_cost: f64,
    pub mean_evaluations: f64,
    pub mean_iterations: f64,
    /// Mean percent deviation over runs where it is defined.
    pub mean_deviation: Option<f64>,
    /// Runs with a positive cost on an instance whose reference value is 0.
    pub zero_best_misses: usize,
    /// Runs that beat the reference value.
    pub new_best_alerts: usize,
}

impl<T: Scalar> RunStats<T> {
    pub fn summarize(
        inst: &Instance<T>,
        algorithm: &Algorithm,
        records: &[RunRecord<T>],
        best_known: Option<T>,
    ) -> Result<Self> {
        let best = records
            .iter()
            .map(|r| r.final_cost)
            .min()
            .ok_or_else(|| Error::InvalidConfig("no runs to summarize".into()))?;
        let count = records.len() as f64;
        let mean = |f: &dyn Fn(&RunRecord<T>) -> f64| records.iter().map(f).sum::<f64>() / count;

        let mut deviations = Vec::with_capacity(records.len());
        let mut zero_best_misses = 0;
        let mut new_best_alerts = 0;
        if let Some(reference) = best_known {
            for r in records {
                match deviation(r.final_cost, reference) {
                    Ok(Deviation::Percent(pct)) => deviations.push(pct),
                    Ok(Deviation::ZeroBestMiss) => zero_best_misses += 1,
                    Err(Error::NewBest { .. }) => new_best_alerts += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        let mean_deviation = (!deviations.is_empty())
            .then(|| deviations.iter().sum::<f64>() / deviations.len() as f64);

        Ok(Self {
            instance: inst.meta().label.clone().unwrap_or_default(),
            n: inst.n(),
            rdd: inst.meta().rdd,
            tf: inst.meta().tf,
            algorithm: algorithm.to_string(),
            restarts: records.len(),
            best_cost: best,
            best_known,
            solved: best_known.map(|b| best == b),
            mean_cost: mean(&|r| r.final_cost.as_f64()),
            mean_evaluations: mean(&|r| r.evaluations as f64),
            mean_iterations: mean(&|r| r.iterations as f64),
            mean_deviation,
            zero_best_misses,
            new_best_alerts,
        })
    }
}

/// Runs the restart protocol and summarizes it against an optional
/// reference value.
pub fn multistart<T: Scalar>(
    inst: &Instance<T>,
    cfg: &AlgorithmConfig,
    best_known: Option<T>,
) -> Result<RunStats<T>> {
    let records = run_restarts(inst, cfg)?;
    RunStats::summarize(inst, &cfg.algorithm, &records, best_known)
}

/// Searches the listed neighborhoods of `perm` for a strictly improving
/// move by full re-evaluation of every neighbor. `None` certifies a local
/// optimum.
///
/// This deliberately shares no code with the incremental scan.
pub fn find_improving_move<T: Scalar>(
    inst: &Instance<T>,
    perm: &Permutation,
    operators: &[Operator],
) -> Result<Option<Move<T>>> {
    let cost = evaluate(perm, inst)?;
    for &op in operators {
        for mut mv in enumerate_moves::<T>(op, perm.len()) {
            let neighbor = apply(&mv, perm)?;
            let neighbor_cost = evaluate(&neighbor, inst)?;
            if neighbor_cost < cost {
                mv.delta = Some(neighbor_cost - cost);
                return Ok(Some(mv));
            }
        }
    }
    Ok(None)
}

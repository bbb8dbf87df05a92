//! Exhaustive oracles for small instances and enumeration of distinct
//! optimal sequences.

use crate::error::{Error, Result};
use crate::model::{Instance, Permutation};
use crate::num::Scalar;
use crate::search::{run_restarts, AlgorithmConfig};
use std::collections::BTreeSet;

/// Largest instance [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_JOBS: usize = 12;

/// Distinct permutations whose objective equals `optimum`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimaSet<T> {
    pub optimum: T,
    pub members: BTreeSet<Permutation>,
    /// More members exist than `cap`.
    pub truncated: bool,
    pub cap: usize,
    /// A sequence strictly cheaper than `optimum`, if one was met. Its
    /// presence means `optimum` was not optimal.
    pub better: Option<(T, Permutation)>,
}

impl<T: Scalar> OptimaSet<T> {
    fn new(optimum: T, cap: usize) -> Self {
        Self {
            optimum,
            members: BTreeSet::new(),
            truncated: false,
            cap,
            better: None,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Adds a member; returns `false` once the set is full and a new
    /// distinct member was refused.
    fn offer(&mut self, perm: Permutation) -> bool {
        if self.members.contains(&perm) {
            return true;
        }
        if self.members.len() >= self.cap {
            self.truncated = true;
            return false;
        }
        self.members.insert(perm);
        true
    }

    fn note_better(&mut self, cost: T, perm: &Permutation) {
        if self.better.as_ref().is_none_or(|(c, _)| cost < *c) {
            self.better = Some((cost, perm.clone()));
        }
    }

    /// One permutation per line, space-separated 1-based job indices.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for perm in &self.members {
            out.push_str(&perm.to_string());
            out.push('\n');
        }
        out
    }
}

/// Lower bound used to cut prefixes during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PruningBound {
    /// Visit all `n!` leaves.
    None,
    /// Weighted tardiness of the scheduled prefix.
    Prefix,
    /// Prefix cost plus, for every unscheduled job, the tardiness it would
    /// have if it were scheduled next.
    #[default]
    PrefixAndRemaining,
}

struct Dfs<'a, T> {
    inst: &'a Instance<T>,
    bound: PruningBound,
    seq: Vec<usize>,
    used: Vec<bool>,
}

impl<'a, T: Scalar> Dfs<'a, T> {
    fn new(inst: &'a Instance<T>, bound: PruningBound) -> Self {
        Self {
            inst,
            bound,
            seq: Vec::with_capacity(inst.n()),
            used: vec![false; inst.n()],
        }
    }

    fn lower_bound(&self, clock: T, cost: T) -> T {
        match self.bound {
            PruningBound::None => T::min_value(),
            PruningBound::Prefix => cost,
            PruningBound::PrefixAndRemaining => {
                let p = self.inst.processing_times();
                let mut lb = cost;
                for (job, &used) in self.used.iter().enumerate() {
                    if !used {
                        lb = lb + self.inst.cost_at(job, clock + p[job]);
                    }
                }
                lb
            }
        }
    }

    /// Depth-first over prefixes in lexicographic order. `visit` is called
    /// for every complete sequence not cut by `limit`; it returns the new
    /// limit, or `None` to stop.
    #[allow(clippy::needless_range_loop)]
    fn run<F>(&mut self, clock: T, cost: T, limit: T, visit: &mut F) -> Option<T>
    where
        F: FnMut(&[usize], T) -> Option<T>,
    {
        let n = self.inst.n();
        if self.seq.len() == n {
            return visit(&self.seq, cost);
        }
        let mut limit = limit;
        let p = self.inst.processing_times();
        for job in 0..n {
            if self.used[job] {
                continue;
            }
            let next_clock = clock + p[job];
            let next_cost = cost + self.inst.cost_at(job, next_clock);
            self.used[job] = true;
            self.seq.push(job);
            if self.bound == PruningBound::None || self.lower_bound(next_clock, next_cost) <= limit {
                match self.run(next_clock, next_cost, limit, visit) {
                    Some(l) => limit = l,
                    None => {
                        self.seq.pop();
                        self.used[job] = false;
                        return None;
                    }
                }
            }
            self.seq.pop();
            self.used[job] = false;
        }
        Some(limit)
    }
}

/// Exact optimum over all `n!` sequences and the lexicographically first
/// sequence attaining it. Refuses more than [`BRUTE_FORCE_MAX_JOBS`] jobs.
pub fn brute_force<T: Scalar>(inst: &Instance<T>) -> Result<(T, Permutation)> {
    if inst.n() > BRUTE_FORCE_MAX_JOBS {
        return Err(Error::TooLarge {
            n: inst.n(),
            max: BRUTE_FORCE_MAX_JOBS,
        });
    }
    let mut best: Option<(T, Vec<usize>)> = None;
    let mut dfs = Dfs::new(inst, PruningBound::PrefixAndRemaining);
    dfs.run(T::zero(), T::zero(), T::max_value(), &mut |seq, cost| {
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, seq.to_vec()));
        }
        // only strictly better completions are of interest from here on
        let b = best.as_ref().map(|(b, _)| *b).unwrap_or_else(T::max_value);
        Some(b - T::one())
    });
    let (cost, seq) = best.expect("at least one sequence exists");
    Ok((cost, Permutation::from_vec_unchecked(seq)))
}

/// All sequences with objective exactly `optimum`, up to `cap`, using the
/// default pruning bound.
pub fn enumerate_optima<T: Scalar>(inst: &Instance<T>, optimum: T, cap: usize) -> Result<OptimaSet<T>> {
    enumerate_optima_with(inst, optimum, cap, PruningBound::default())
}

/// Like [`enumerate_optima`] with an explicit pruning bound. Every bound
/// returns the same set; they differ only in the number of nodes visited.
pub fn enumerate_optima_with<T: Scalar>(
    inst: &Instance<T>,
    optimum: T,
    cap: usize,
    bound: PruningBound,
) -> Result<OptimaSet<T>> {
    if cap == 0 {
        return Err(Error::ZeroCap);
    }
    let mut set = OptimaSet::new(optimum, cap);
    let mut dfs = Dfs::new(inst, bound);
    dfs.run(T::zero(), T::zero(), optimum, &mut |seq, cost| {
        if cost == optimum {
            if !set.offer(Permutation::from_vec_unchecked(seq.to_vec())) {
                return None;
            }
        } else if cost < optimum {
            set.note_better(cost, &Permutation::from_vec_unchecked(seq.to_vec()));
        }
        Some(optimum)
    });
    Ok(set)
}

/// Distinct local optima reached by the restarts of `cfg` whose cost equals
/// `optimum`, up to `cap`. A subset of the true optimal set.
pub fn collect_optima_by_search<T: Scalar>(
    inst: &Instance<T>,
    optimum: T,
    cfg: &AlgorithmConfig,
    cap: usize,
) -> Result<OptimaSet<T>> {
    if cap == 0 {
        return Err(Error::ZeroCap);
    }
    let mut set = OptimaSet::new(optimum, cap);
    for record in run_restarts(inst, cfg)? {
        if record.final_cost == optimum {
            if !set.offer(record.final_perm) {
                break;
            }
        } else if record.final_cost < optimum {
            set.note_better(record.final_cost, &record.final_perm);
        }
    }
    Ok(set)
}

//! Solution-pool entropy, deviation from reference values, and solved-count
//! aggregation over the RDD/TF generator grid.

use crate::error::{Error, Result};
use crate::model::Permutation;
use crate::num::Scalar;
use crate::search::RunStats;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// A non-empty pool of permutations over the same number of jobs.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPool {
    n: usize,
    perms: Vec<Permutation>,
}

impl SolutionPool {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        let n = perms.first().ok_or(Error::EmptyPool)?.len();
        if let Some(bad) = perms.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch {
                perm: bad.len(),
                instance: n,
            });
        }
        Ok(Self { n, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pool size.
    pub fn mu(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

/// `count(j, k)` is the number of pool members in which job `j` precedes job `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecedenceCounts {
    n: usize,
    mu: usize,
    omega: Vec<u64>,
}

impl PrecedenceCounts {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Jobs are 0-based.
    #[inline]
    pub fn count(&self, j: usize, k: usize) -> u64 {
        self.omega[j * self.n + k]
    }
}

pub fn precedence_counts(pool: &SolutionPool) -> PrecedenceCounts {
    let n = pool.n();
    let mut omega = vec![0_u64; n * n];
    for perm in pool.perms() {
        let seq = perm.as_slice();
        for (a, &j) in seq.iter().enumerate() {
            for &k in &seq[a + 1..] {
                omega[j * n + k] += 1;
            }
        }
    }
    PrecedenceCounts {
        n,
        mu: pool.mu(),
        omega,
    }
}

/// Precedence entropy of a pool, in `[0, 1]`.
///
/// For every ordered pair of distinct jobs with precedence frequency
/// `q = count(j, k) / mu` the pair term is `-q log q / log sqrt(2)`
/// (`0 log 0 = 0`); the result is the mean over all `n(n-1)` ordered pairs.
/// Identical pools give 0, pools where every pair is split evenly give 1.
pub fn entropy(pool: &SolutionPool) -> Result<f64> {
    entropy_from_counts(&precedence_counts(pool))
}

pub fn entropy_from_counts(counts: &PrecedenceCounts) -> Result<f64> {
    let n = counts.n();
    if n < 2 {
        return Err(Error::TooFewJobs(n));
    }
    let mu = counts.mu() as f64;
    // log_sqrt2(q) = 2 log2(q); base 2 keeps q = 1/2 exact
    let mut total = 0.0;
    for j in 0..n {
        for k in 0..n {
            if j == k {
                continue;
            }
            let omega = counts.count(j, k);
            if omega > 0 {
                let q = omega as f64 / mu;
                total -= 2.0 * q * q.log2();
            }
        }
    }
    Ok(total / (n * (n - 1)) as f64)
}

/// `k` distinct members chosen uniformly at random, or all of them when
/// there are at most `k`. Deterministic in `seed`.
pub fn subsample<'a, I>(members: I, k: usize, seed: u64) -> Vec<Permutation>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    let all: Vec<&Permutation> = members.into_iter().collect();
    if all.len() <= k {
        return all.into_iter().cloned().collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, all.len(), k).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| all[i].clone()).collect()
}

/// Relative gap to a reference value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deviation {
    Percent(f64),
    /// Reference value is 0 but the found cost is positive; no percentage exists.
    ZeroBestMiss,
}

/// `100 (found - best) / best`, `0` when both are zero.
///
/// A cost below the reference is reported as [`Error::NewBest`] rather than
/// a negative deviation.
pub fn deviation<T: Scalar>(found: T, best: T) -> Result<Deviation> {
    if found < best {
        return Err(Error::NewBest {
            found: found.to_i128().unwrap_or_default(),
            best: best.to_i128().unwrap_or_default(),
        });
    }
    if best.is_zero() {
        return Ok(if found.is_zero() {
            Deviation::Percent(0.0)
        } else {
            Deviation::ZeroBestMiss
        });
    }
    Ok(Deviation::Percent(
        100.0 * (found - best).as_f64() / best.as_f64(),
    ))
}

/// One cell of an RDD x TF grid.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CellSummary {
    pub instances: usize,
    pub solved: usize,
    /// Mean of the per-instance mean deviations that are defined.
    pub mean_deviation: Option<f64>,
}

/// Per-instance line of a [`DifficultyReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDifficulty {
    pub instance: String,
    pub n: usize,
    pub rdd: f64,
    pub tf: f64,
    pub solved: bool,
    pub mean_deviation: Option<f64>,
}

/// Solved counts and deviations on the RDD x TF grid for one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct DifficultyReport {
    pub algorithm: String,
    /// Row axis, ascending.
    pub rdd_values: Vec<f64>,
    /// Column axis, ascending.
    pub tf_values: Vec<f64>,
    /// `cells[r][t]` for `rdd_values[r]`, `tf_values[t]`.
    pub cells: Vec<Vec<CellSummary>>,
    pub instances: Vec<InstanceDifficulty>,
}

impl DifficultyReport {
    pub fn cell(&self, rdd: f64, tf: f64) -> Option<&CellSummary> {
        let r = self.rdd_values.iter().position(|&v| grid_key(v) == grid_key(rdd))?;
        let t = self.tf_values.iter().position(|&v| grid_key(v) == grid_key(tf))?;
        Some(&self.cells[r][t])
    }

    pub fn total_solved(&self) -> usize {
        self.cells.iter().flatten().map(|c| c.solved).sum()
    }
}

/// Grid parameters compared at 1e-6 resolution.
fn grid_key(value: f64) -> i64 {
    (value * 1e6).round() as i64
}

/// Builds the RDD x TF grid for stats of one algorithm. Every entry needs
/// RDD/TF metadata and a reference value.
pub fn aggregate<T: Scalar>(stats: &[RunStats<T>]) -> Result<DifficultyReport> {
    let algorithm = stats.first().map(|s| s.algorithm.clone()).unwrap_or_default();
    let mut instances = Vec::with_capacity(stats.len());
    for s in stats {
        let (Some(rdd), Some(tf)) = (s.rdd, s.tf) else {
            return Err(Error::MissingMetadata(s.instance.clone()));
        };
        let solved = s.solved.ok_or_else(|| {
            Error::MissingMetadata(format!("{} (no reference value)", s.instance))
        })?;
        instances.push(InstanceDifficulty {
            instance: s.instance.clone(),
            n: s.n,
            rdd,
            tf,
            solved,
            mean_deviation: s.mean_deviation,
        });
    }

    let axis = |f: fn(&InstanceDifficulty) -> f64| {
        let mut keys: BTreeMap<i64, f64> = BTreeMap::new();
        for inst in &instances {
            keys.entry(grid_key(f(inst))).or_insert(f(inst));
        }
        keys.into_values().collect::<Vec<_>>()
    };
    let rdd_values = axis(|i| i.rdd);
    let tf_values = axis(|i| i.tf);

    let mut cells = vec![vec![CellSummary::default(); tf_values.len()]; rdd_values.len()];
    let mut deviation_sums = vec![vec![(0.0, 0usize); tf_values.len()]; rdd_values.len()];
    for inst in &instances {
        let r = rdd_values.iter().position(|&v| grid_key(v) == grid_key(inst.rdd)).unwrap();
        let t = tf_values.iter().position(|&v| grid_key(v) == grid_key(inst.tf)).unwrap();
        let cell = &mut cells[r][t];
        cell.instances += 1;
        cell.solved += usize::from(inst.solved);
        if let Some(dev) = inst.mean_deviation {
            deviation_sums[r][t].0 += dev;
            deviation_sums[r][t].1 += 1;
        }
    }
    for (row, sums) in cells.iter_mut().zip(&deviation_sums) {
        for (cell, &(sum, count)) in row.iter_mut().zip(sums) {
            cell.mean_deviation = (count > 0).then(|| sum / count as f64);
        }
    }

    Ok(DifficultyReport {
        algorithm,
        rdd_values,
        tf_values,
        cells,
        instances,
    })
}

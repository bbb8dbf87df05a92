//! Problem data, job sequences and the sequence-to-schedule decoding.
//!
//! A sequence is decoded into the active schedule without idle time: the
//! first job starts at 0 and every later job starts when its predecessor
//! completes. Because the objective is regular this loses no optimal
//! solution, so search operates on [`Permutation`]s only.

use crate::error::{Error, Result};
use crate::num::{weighted_tardiness, Scalar};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Optional provenance of an instance: generator parameters and a label.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub rdd: Option<f64>,
    pub tf: Option<f64>,
    pub label: Option<String>,
}

/// `n` jobs with processing times, weights and due dates.
///
/// Due dates may be negative. Processing times and weights are at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    processing: Vec<T>,
    weights: Vec<T>,
    due_dates: Vec<T>,
    meta: InstanceMeta,
}

impl<T: Scalar> Instance<T> {
    pub fn new(processing: Vec<T>, weights: Vec<T>, due_dates: Vec<T>) -> Result<Self> {
        let n = processing.len();
        if n == 0 {
            return Err(Error::InvalidInstance("instance has no jobs".into()));
        }
        if weights.len() != n || due_dates.len() != n {
            return Err(Error::InvalidInstance(format!(
                "array lengths differ: {} processing times, {} weights, {} due dates",
                n,
                weights.len(),
                due_dates.len()
            )));
        }
        if let Some(j) = processing.iter().position(|&p| p < T::one()) {
            return Err(Error::InvalidInstance(format!(
                "processing time of job {} is {}, must be at least 1",
                j + 1,
                processing[j]
            )));
        }
        if let Some(j) = weights.iter().position(|&w| w < T::one()) {
            return Err(Error::InvalidInstance(format!(
                "weight of job {} is {}, must be at least 1",
                j + 1,
                weights[j]
            )));
        }
        check_cost_range(&processing, &weights, &due_dates)?;
        Ok(Self {
            processing,
            weights,
            due_dates,
            meta: InstanceMeta::default(),
        })
    }

    pub fn with_meta(mut self, meta: InstanceMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn meta(&self) -> &InstanceMeta {
        &self.meta
    }

    pub fn meta_mut(&mut self) -> &mut InstanceMeta {
        &mut self.meta
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.processing.len()
    }

    #[inline]
    pub fn processing_times(&self) -> &[T] {
        &self.processing
    }

    #[inline]
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn due_dates(&self) -> &[T] {
        &self.due_dates
    }

    /// `P`, the sum of all processing times (the makespan of every active schedule).
    pub fn total_processing_time(&self) -> T {
        self.processing.iter().copied().sum()
    }

    #[inline(always)]
    pub(crate) fn cost_at(&self, job: usize, completion: T) -> T {
        weighted_tardiness(self.weights[job], completion, self.due_dates[job])
    }
}

/// Rejects instances whose largest possible objective overflows `T`.
///
/// Every completion time is at most `P`, so the objective is bounded by
/// `sum_j w_j * max(P - d_j, 0)`.
fn check_cost_range<T: Scalar>(processing: &[T], weights: &[T], due_dates: &[T]) -> Result<()> {
    let overflow = || Error::InvalidInstance("objective range overflows the scalar type".into());
    let total = processing
        .iter()
        .try_fold(T::zero(), |acc, &p| acc.checked_add(&p))
        .ok_or_else(overflow)?;
    let mut bound = T::zero();
    for (&w, &d) in weights.iter().zip(due_dates) {
        let late = total.checked_sub(&d).ok_or_else(overflow)?;
        if late > T::zero() {
            let term = w.checked_mul(&late).ok_or_else(overflow)?;
            bound = bound.checked_add(&term).ok_or_else(overflow)?;
        }
    }
    Ok(())
}

/// A processing sequence: `seq[k]` is the job processed in position `k`.
///
/// Jobs and positions are 0-based internally. External formats use 1-based
/// job indices; see [`Permutation::from_one_based`] and
/// [`Permutation::to_one_based`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    seq: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            seq: (0..n).collect(),
        }
    }

    pub fn from_zero_based(seq: Vec<usize>) -> Result<Self> {
        let n = seq.len();
        let mut seen = vec![false; n];
        for &job in &seq {
            if job >= n {
                return Err(Error::InvalidPermutation(format!(
                    "job index {} out of range for {} jobs",
                    job + 1,
                    n
                )));
            }
            if std::mem::replace(&mut seen[job], true) {
                return Err(Error::InvalidPermutation(format!(
                    "job {} appears more than once",
                    job + 1
                )));
            }
        }
        Ok(Self { seq })
    }

    pub fn from_one_based(seq: &[usize]) -> Result<Self> {
        let zero_based = seq
            .iter()
            .map(|&job| {
                job.checked_sub(1).ok_or_else(|| {
                    Error::InvalidPermutation("job index 0 in a 1-based sequence".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_zero_based(zero_based)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.seq.iter().map(|&job| job + 1).collect()
    }

    /// Trusted constructor for sequences produced by this crate.
    pub(crate) fn from_vec_unchecked(seq: Vec<usize>) -> Self {
        debug_assert!(Self::from_zero_based(seq.clone()).is_ok());
        Self { seq }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.seq
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.seq
    }

    /// `positions()[job]` is the position of `job` in the sequence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.seq.len()];
        for (k, &job) in self.seq.iter().enumerate() {
            pos[job] = k;
        }
        pos
    }
}

/// Space-separated 1-based job indices.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, job) in self.seq.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", job + 1)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let jobs = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("not a job index: {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&jobs)
    }
}

/// Serialized as a list of 1-based job indices.
impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.seq.iter().map(|&job| job + 1))
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let jobs = Vec::<usize>::deserialize(deserializer)?;
        Self::from_one_based(&jobs).map_err(serde::de::Error::custom)
    }
}

/// Start, completion and tardiness per job (indexed by job, not position).
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    pub start: Vec<T>,
    pub completion: Vec<T>,
    pub tardiness: Vec<T>,
    pub twt: T,
}

fn check_dimensions<T: Scalar>(perm: &Permutation, inst: &Instance<T>) -> Result<()> {
    if perm.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            perm: perm.len(),
            instance: inst.n(),
        });
    }
    Ok(())
}

/// Decodes `perm` into its active schedule.
pub fn decode<T: Scalar>(perm: &Permutation, inst: &Instance<T>) -> Result<Schedule<T>> {
    check_dimensions(perm, inst)?;
    let n = inst.n();
    let mut start = vec![T::zero(); n];
    let mut completion = vec![T::zero(); n];
    let mut tardiness = vec![T::zero(); n];
    let mut twt = T::zero();
    let mut clock = T::zero();
    for &job in perm.as_slice() {
        start[job] = clock;
        clock = clock + inst.processing_times()[job];
        completion[job] = clock;
        let late = clock - inst.due_dates()[job];
        tardiness[job] = late.max(T::zero());
        twt = twt + inst.weights()[job] * tardiness[job];
    }
    Ok(Schedule {
        start,
        completion,
        tardiness,
        twt,
    })
}

/// Total weighted tardiness of the active schedule of `perm`.
pub fn evaluate<T: Scalar>(perm: &Permutation, inst: &Instance<T>) -> Result<T> {
    check_dimensions(perm, inst)?;
    Ok(evaluate_seq(perm.as_slice(), inst))
}

#[inline]
pub(crate) fn evaluate_seq<T: Scalar>(seq: &[usize], inst: &Instance<T>) -> T {
    let p = inst.processing_times();
    let mut clock = T::zero();
    let mut twt = T::zero();
    for &job in seq {
        clock = clock + p[job];
        twt = twt + inst.cost_at(job, clock);
    }
    twt
}

/// Completion time of the job in each position.
pub(crate) fn completion_by_position<T: Scalar>(seq: &[usize], inst: &Instance<T>, out: &mut Vec<T>) {
    let p = inst.processing_times();
    out.clear();
    let mut clock = T::zero();
    for &job in seq {
        clock = clock + p[job];
        out.push(clock);
    }
}

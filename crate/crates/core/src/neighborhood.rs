//! Exchange, forward-shift and backward-shift neighborhoods with
//! best-improvement scanning.
//!
//! Positions are 0-based in this module; `Display` on [`Move`] prints them
//! 1-based. Every scan evaluates all `n(n-1)/2` moves of one operator and
//! counts each as one objective evaluation, however the delta is computed.

use crate::error::{Error, Result};
use crate::model::{completion_by_position, Instance, Permutation};
use crate::num::Scalar;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operator {
    /// `EX`: swap the jobs at positions `i` and `j`.
    Exchange,
    /// `FSH`: remove the job at `i`, reinsert it at `j > i`.
    ForwardShift,
    /// `BSH`: remove the job at `j`, reinsert it at `i < j`.
    BackwardShift,
}

impl Operator {
    pub const ALL: [Operator; 3] = [
        Operator::Exchange,
        Operator::ForwardShift,
        Operator::BackwardShift,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Operator::Exchange => "EX",
            Operator::ForwardShift => "FSH",
            Operator::BackwardShift => "BSH",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Operator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "EX" => Ok(Operator::Exchange),
            "FSH" => Ok(Operator::ForwardShift),
            "BSH" => Ok(Operator::BackwardShift),
            other => Err(Error::Parse(format!(
                "unknown operator {other:?}, expected EX, FSH or BSH"
            ))),
        }
    }
}

/// One neighborhood move on positions `i < j`, optionally with its cost delta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move<T> {
    pub op: Operator,
    pub i: usize,
    pub j: usize,
    pub delta: Option<T>,
}

impl<T> Move<T> {
    pub fn new(op: Operator, i: usize, j: usize) -> Self {
        Self {
            op,
            i,
            j,
            delta: None,
        }
    }

    /// Move on 1-based positions.
    pub fn one_based(op: Operator, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 {
            return Err(Error::InvalidMove { i, j, n: 0 });
        }
        Ok(Self::new(op, i - 1, j - 1))
    }
}

impl<T: fmt::Display> fmt::Display for Move<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.op, self.i + 1, self.j + 1)?;
        if let Some(delta) = &self.delta {
            write!(f, " delta={delta}")?;
        }
        Ok(())
    }
}

/// Number of objective evaluations performed so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct EvalCounter(u64);

impl EvalCounter {
    pub fn new() -> Self {
        Self(0)
    }

    #[inline]
    pub fn add(&mut self, evaluations: u64) {
        self.0 += evaluations;
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.0
    }
}

/// `n(n-1)/2`, the size of every neighborhood.
#[inline]
pub fn neighborhood_size(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Applies `mv` to `perm`, returning the neighbor.
pub fn apply<T>(mv: &Move<T>, perm: &Permutation) -> Result<Permutation> {
    let n = perm.len();
    if mv.i >= mv.j || mv.j >= n {
        return Err(Error::InvalidMove {
            i: mv.i + 1,
            j: mv.j + 1,
            n,
        });
    }
    let mut out = perm.clone();
    apply_in_place(mv.op, mv.i, mv.j, out.as_mut_slice());
    Ok(out)
}

#[inline]
pub(crate) fn apply_in_place(op: Operator, i: usize, j: usize, seq: &mut [usize]) {
    match op {
        Operator::Exchange => seq.swap(i, j),
        Operator::ForwardShift => seq[i..=j].rotate_left(1),
        Operator::BackwardShift => seq[i..=j].rotate_right(1),
    }
}

/// All moves of `op` for `n` positions in lexicographic `(i, j)` order.
///
/// This order is the tie-breaking order of [`best_move`].
pub fn enumerate_moves<T>(op: Operator, n: usize) -> Vec<Move<T>> {
    let mut moves = Vec::with_capacity(neighborhood_size(n) as usize);
    for i in 0..n {
        for j in i + 1..n {
            moves.push(Move::new(op, i, j));
        }
    }
    moves
}

/// Reusable buffers for neighborhood scans.
#[derive(Debug, Clone, Default)]
pub struct ScanBuffer<T> {
    completion: Vec<T>,
}

impl<T: Scalar> ScanBuffer<T> {
    pub fn new() -> Self {
        Self {
            completion: Vec::new(),
        }
    }
}

/// Best strictly improving move of `op`, ties going to the first move in
/// enumeration order. Adds `n(n-1)/2` to `counter`.
pub fn best_move<T: Scalar>(
    perm: &Permutation,
    inst: &Instance<T>,
    op: Operator,
    counter: &mut EvalCounter,
) -> Result<Option<Move<T>>> {
    if perm.len() != inst.n() {
        return Err(Error::DimensionMismatch {
            perm: perm.len(),
            instance: inst.n(),
        });
    }
    let mut buffer = ScanBuffer::new();
    Ok(best_move_with(perm.as_slice(), inst, op, counter, &mut buffer))
}

/// Candidate tracker with lexicographic tie-breaking independent of the
/// order in which moves are visited.
struct Best<T> {
    delta: T,
    i: usize,
    j: usize,
}

impl<T: Scalar> Best<T> {
    #[inline(always)]
    fn offer(slot: &mut Option<Best<T>>, delta: T, i: usize, j: usize) {
        if delta >= T::zero() {
            return;
        }
        match slot {
            Some(b) if delta > b.delta || (delta == b.delta && (i, j) > (b.i, b.j)) => {}
            _ => *slot = Some(Best { delta, i, j }),
        }
    }
}

pub(crate) fn best_move_with<T: Scalar>(
    seq: &[usize],
    inst: &Instance<T>,
    op: Operator,
    counter: &mut EvalCounter,
    buffer: &mut ScanBuffer<T>,
) -> Option<Move<T>> {
    let n = seq.len();
    counter.add(neighborhood_size(n));
    if n < 2 {
        return None;
    }
    completion_by_position(seq, inst, &mut buffer.completion);
    let c = &buffer.completion;
    let p = inst.processing_times();
    let mut best: Option<Best<T>> = None;

    match op {
        Operator::Exchange => {
            // Swapping a (at i) and b (at j) shifts everything strictly between
            // them by p_b - p_a; the rest of the sequence is unaffected.
            for i in 0..n {
                let a = seq[i];
                let start_i = c[i] - p[a];
                let cost_a_before = inst.cost_at(a, c[i]);
                for j in i + 1..n {
                    let b = seq[j];
                    let shift = p[b] - p[a];
                    let mut delta = inst.cost_at(b, start_i + p[b]) - cost_a_before
                        + inst.cost_at(a, c[j])
                        - inst.cost_at(b, c[j]);
                    if shift != T::zero() {
                        for k in i + 1..j {
                            let job = seq[k];
                            delta = delta + inst.cost_at(job, c[k] + shift) - inst.cost_at(job, c[k]);
                        }
                    }
                    Best::offer(&mut best, delta, i, j);
                }
            }
        }
        Operator::ForwardShift => {
            // a leaves position i; each job up to j moves earlier by p_a and a
            // completes where the job at j did.
            for i in 0..n {
                let a = seq[i];
                let cost_a_before = inst.cost_at(a, c[i]);
                let mut shifted = T::zero();
                for j in i + 1..n {
                    let job = seq[j];
                    shifted = shifted + inst.cost_at(job, c[j] - p[a]) - inst.cost_at(job, c[j]);
                    let delta = shifted + inst.cost_at(a, c[j]) - cost_a_before;
                    Best::offer(&mut best, delta, i, j);
                }
            }
        }
        Operator::BackwardShift => {
            // b leaves position j and starts where the job at i did; jobs from
            // i to j-1 move later by p_b.
            for j in 1..n {
                let b = seq[j];
                let cost_b_before = inst.cost_at(b, c[j]);
                let mut shifted = T::zero();
                for i in (0..j).rev() {
                    let job = seq[i];
                    shifted = shifted + inst.cost_at(job, c[i] + p[b]) - inst.cost_at(job, c[i]);
                    let start_i = c[i] - p[job];
                    let delta = shifted + inst.cost_at(b, start_i + p[b]) - cost_b_before;
                    Best::offer(&mut best, delta, i, j);
                }
            }
        }
    }

    best.map(|b| Move {
        op,
        i: b.i,
        j: b.j,
        delta: Some(b.delta),
    })
}

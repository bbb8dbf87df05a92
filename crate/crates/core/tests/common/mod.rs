#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smtwt::{GeneratorConfig, Instance};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                rec(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Textbook objective, written independently of the library.
pub fn direct_twt(seq: &[usize], p: &[i64], w: &[i64], d: &[i64]) -> i64 {
    let mut t = 0;
    let mut total = 0;
    for &j in seq {
        t += p[j];
        total += w[j] * (t - d[j]).max(0);
    }
    total
}

pub fn twt_of(seq: &[usize], inst: &Instance) -> i64 {
    direct_twt(seq, inst.processing_times(), inst.weights(), inst.due_dates())
}

/// Small instance with short jobs so that ties and zero deltas are common.
pub fn small_instance(rng: &mut ChaCha8Rng, n: usize) -> Instance {
    let p: Vec<i64> = (0..n).map(|_| rng.random_range(1..=9)).collect();
    let w: Vec<i64> = (0..n).map(|_| rng.random_range(1..=5)).collect();
    let total: i64 = p.iter().sum();
    let d: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=total)).collect();
    Instance::new(p, w, d).unwrap()
}

/// Generator instance with a random grid cell.
pub fn grid_instance(seed: u64, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = smtwt::io::GRID_LEVELS;
    let rdd = levels[rng.random_range(0..levels.len())];
    let tf = levels[rng.random_range(0..levels.len())];
    smtwt::generate(&GeneratorConfig::new(n, rdd, tf, seed)).unwrap()
}

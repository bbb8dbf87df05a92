mod common;

use common::{grid_instance, permutations, small_instance, twt_of};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smtwt::{
    brute_force, collect_optima_by_search, enumerate_optima, enumerate_optima_with, Algorithm, AlgorithmConfig,
    Instance, Permutation, PruningBound,
};
use std::collections::BTreeSet;

fn optimal_set(inst: &Instance) -> (i64, BTreeSet<Permutation>) {
    let all = permutations(inst.n());
    let best = all.iter().map(|s| twt_of(s, inst)).min().unwrap();
    let set = all
        .into_iter()
        .filter(|s| twt_of(s, inst) == best)
        .map(|s| Permutation::from_zero_based(s).unwrap())
        .collect();
    (best, set)
}

#[test]
fn brute_force_finds_the_first_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in 1..=7 {
        for _ in 0..5 {
            let inst = small_instance(&mut rng, n);
            let (best, set) = optimal_set(&inst);
            let (cost, perm) = brute_force(&inst).unwrap();
            assert_eq!(cost, best);
            assert_eq!(&perm, set.first().unwrap());
        }
    }
}

#[test]
fn every_pruning_bound_returns_the_full_optimal_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut instances: Vec<Instance> = (0..12).map(|k| small_instance(&mut rng, 3 + k % 5)).collect();
    instances.extend((0..4).map(|s| grid_instance(s, 8)));
    for inst in instances {
        let (best, expected) = optimal_set(&inst);
        for bound in [PruningBound::None, PruningBound::Prefix, PruningBound::PrefixAndRemaining] {
            let got = enumerate_optima_with(&inst, best, 1_000_000, bound).unwrap();
            assert_eq!(got.members, expected, "{bound:?}");
            assert!(!got.truncated && got.better.is_none());
        }
    }
}

#[test]
fn search_collects_a_subset() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for k in 0..6 {
        let inst = small_instance(&mut rng, 7);
        let (best, _) = brute_force(&inst).unwrap();
        let all = enumerate_optima(&inst, best, 1_000_000).unwrap();
        let cfg = AlgorithmConfig::new(Algorithm::vns2(), 50, k);
        let found = collect_optima_by_search(&inst, best, &cfg, 1_000_000).unwrap();
        assert!(found.members.is_subset(&all.members));
        assert!(found.better.is_none());
    }
}

#[test]
fn unique_optimum_gives_at_most_one_member() {
    // Strictly increasing due dates, all tight: the EDD order is the only optimum.
    let inst = Instance::new(vec![1, 1, 1, 1], vec![5, 5, 5, 5], vec![1, 2, 3, 4]).unwrap();
    let (best, set) = optimal_set(&inst);
    assert_eq!((best, set.len()), (0, 1));
    let cfg = AlgorithmConfig::new(Algorithm::vns1(), 30, 0);
    assert!(collect_optima_by_search(&inst, best, &cfg, 100).unwrap().len() <= 1);
}

mod common;

use common::{direct_twt, permutations, small_instance, twt_of};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smtwt::{decode, evaluate, Instance, Permutation};

#[test]
fn evaluate_matches_direct_formula_on_every_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=7 {
        let inst = small_instance(&mut rng, n);
        for seq in permutations(n) {
            let perm = Permutation::from_zero_based(seq.clone()).unwrap();
            assert_eq!(evaluate(&perm, &inst).unwrap(), twt_of(&seq, &inst));
        }
    }
}

#[test]
fn decoded_schedule_is_active() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 1..=9 {
        let inst = small_instance(&mut rng, n);
        let perm = Permutation::from_zero_based((0..n).rev().collect()).unwrap();
        let s = decode(&perm, &inst).unwrap();
        let mut clock = 0;
        for &j in perm.as_slice() {
            assert_eq!(s.start[j], clock);
            clock += inst.processing_times()[j];
            assert_eq!(s.completion[j], clock);
            assert_eq!(s.tardiness[j], (clock - inst.due_dates()[j]).max(0));
        }
        assert_eq!(s.twt, evaluate(&perm, &inst).unwrap());
    }
}

fn instance_and_perm() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>, Vec<usize>)> {
    (1usize..12).prop_flat_map(|n| {
        (
            prop::collection::vec(1i64..50, n),
            prop::collection::vec(1i64..10, n),
            prop::collection::vec(-20i64..300, n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
        )
    })
}

proptest! {
    #[test]
    fn inserted_idle_time_never_helps(
        (p, w, d, seq) in instance_and_perm(),
        gaps in prop::collection::vec(0i64..20, 12),
    ) {
        let inst = Instance::new(p.clone(), w.clone(), d.clone()).unwrap();
        let perm = Permutation::from_zero_based(seq.clone()).unwrap();
        let mut t = 0;
        let mut delayed = 0;
        for (k, &j) in seq.iter().enumerate() {
            t += gaps[k] + p[j];
            delayed += w[j] * (t - d[j]).max(0);
        }
        prop_assert!(delayed >= evaluate(&perm, &inst).unwrap());
        prop_assert_eq!(evaluate(&perm, &inst).unwrap(), direct_twt(&seq, &p, &w, &d));
    }

    #[test]
    fn permutation_text_round_trip(seq in (1usize..30).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let perm = Permutation::from_zero_based(seq).unwrap();
        let back: Permutation = perm.to_string().parse().unwrap();
        prop_assert_eq!(&back, &perm);
        prop_assert_eq!(Permutation::from_one_based(&perm.to_one_based()).unwrap(), perm);
    }

    #[test]
    fn non_permutations_are_rejected(mut seq in prop::collection::vec(0usize..6, 2..6)) {
        seq[0] = seq[1];
        prop_assert!(Permutation::from_zero_based(seq).is_err());
    }
}

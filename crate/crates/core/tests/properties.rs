use proptest::prelude::*;

use recruit_core::analysis::performance_ratio;
use recruit_core::equilibrium::{solve_full, solve_with, Retention, SolveOptions};
use recruit_core::game::{fixed_p_prob, tullock_prob};
use recruit_core::montecarlo::{simulate, SimulateOptions};
use recruit_core::persist::{read_table, write_table};
use recruit_core::{CompetitionRule, Exact, GameSpec, Number, Quality, Scalar};

fn exact_quality() -> impl Strategy<Value = Quality> {
    (2i64..40).prop_flat_map(|d| (1..d, Just(d))).prop_map(|(n, d)| Quality::ratio(n, d).unwrap())
}

fn rule() -> impl Strategy<Value = CompetitionRule> {
    prop_oneof![
        Just(CompetitionRule::Tullock),
        (1i64..10).prop_map(|n| CompetitionRule::fixed_p(Number::ratio(n, 20)).unwrap()),
    ]
}

fn exact_game(max_k: u32) -> impl Strategy<Value = GameSpec> {
    (0..=max_k, exact_quality(), 1u64..6, 1u64..6, rule())
        .prop_map(|(k, q, x1, x2, rule)| GameSpec::new(k, q, x1, x2, rule).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exactly_one_strong_hire_per_round(spec in exact_game(10)) {
        let t = solve_full::<Exact>(&spec).unwrap();
        let root_sum = spec.x1() + spec.x2();
        let mut count = 0u128;
        for (key, _) in t.states() {
            prop_assert_eq!(key.x1 + key.x2, root_sum + u64::from(spec.k() - key.remaining));
            count += 1;
        }
        let k = u128::from(spec.k());
        prop_assert_eq!(count, (k + 1) * (k + 2) / 2);
    }

    #[test]
    fn lower_player_keeps_its_guarantee(spec in exact_game(12)) {
        let t = solve_full::<Exact>(&spec).unwrap();
        let q = spec.q().value::<Exact>().unwrap();
        for (key, v) in t.states() {
            let floor = Exact::from_u64(u64::from(key.remaining)) * q.clone();
            let (higher, lower) = if key.x1 >= key.x2 { (&v.u1, &v.u2) } else { (&v.u2, &v.u1) };
            prop_assert!(*lower >= floor, "{:?}", key);
            prop_assert!(higher >= lower, "{:?}", key);
        }
    }

    #[test]
    fn short_circuit_changes_nothing(spec in exact_game(12)) {
        let plain = solve_with::<Exact>(&spec, &SolveOptions::full()).unwrap();
        let fast = solve_with::<Exact>(&spec, &SolveOptions { short_circuit: true, ..SolveOptions::full() }).unwrap();
        prop_assert!(plain.states().eq(fast.states()));
    }

    #[test]
    fn float_tracks_exact(spec in exact_game(30)) {
        let e = solve_full::<Exact>(&spec).unwrap();
        let f = solve_full::<f64>(&spec).unwrap();
        for ((ke, ve), (kf, vf)) in e.states().zip(f.states()) {
            prop_assert_eq!(ke, kf);
            for (a, b) in [(ve.u1.to_f64(), vf.u1), (ve.u2.to_f64(), vf.u2)] {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{:?}: {} vs {}", ke, a, b);
            }
        }
    }

    #[test]
    fn ratio_between_lower_bounds_and_one(k in 1u32..120, q in 0.01f64..0.99) {
        let t = solve_with::<f64>(&GameSpec::tullock(k, Quality::decimal(q).unwrap()), &SolveOptions::default()).unwrap();
        let r = performance_ratio(&t).unwrap().ratio;
        prop_assert!(r >= 2.0 * q / (1.0 + q) - 1e-9);
        prop_assert!(r >= 2.0 / 3.0 - 1e-9);
        prop_assert!(r <= 1.0 + 1e-9);
    }

    #[test]
    fn contest_probabilities_are_complementary(x1 in 0u64..500, x2 in 1u64..500, n in 1i64..10) {
        let a: Exact = tullock_prob(x1, x2).unwrap();
        let b: Exact = tullock_prob(x2, x1).unwrap();
        prop_assert_eq!(a + b, <Exact as Scalar>::one());
        let p = Exact::ratio(n as u64, 20);
        if x1 != x2 {
            let a: Exact = fixed_p_prob(&p, x1, x2).unwrap();
            let b: Exact = fixed_p_prob(&p, x2, x1).unwrap();
            prop_assert_eq!(a + b, <Exact as Scalar>::one());
        }
    }

    #[test]
    fn table_files_round_trip(spec in exact_game(10), float in any::<bool>(), full in any::<bool>()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.ndjson");
        let opts = SolveOptions { retention: if full { Retention::Full } else { Retention::RootOnly }, ..Default::default() };
        fn trip<S: Scalar>(spec: &GameSpec, opts: &SolveOptions, path: &std::path::Path) -> (Vec<u8>, Vec<u8>) {
            let t = solve_with::<S>(spec, opts).unwrap();
            write_table(&t, std::fs::File::create(path).unwrap()).unwrap();
            let first = std::fs::read(path).unwrap();
            let back: recruit_core::equilibrium::EquilibriumTable<S> = read_table(first.as_slice()).unwrap();
            let mut second = Vec::new();
            write_table(&back, &mut second).unwrap();
            (first, second)
        }
        let (a, b) = if float { trip::<f64>(&spec, &opts, &path) } else { trip::<Exact>(&spec, &opts, &path) };
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn simulation_is_a_function_of_the_seed(k in 1u32..40, q in 0.05f64..0.95, seed in any::<u64>()) {
        let t = solve_full::<f64>(&GameSpec::tullock(k, Quality::decimal(q).unwrap())).unwrap();
        let opts = SimulateOptions { trials: 500, master_seed: seed, keep_trajectories: true, ..Default::default() };
        let a = simulate(&t, &opts).unwrap();
        let b = simulate(&t, &opts).unwrap();
        prop_assert_eq!(serde_json::to_string(&a.stats).unwrap(), serde_json::to_string(&b.stats).unwrap());
        for traj in a.trajectories.unwrap() {
            let mut stopped = false;
            for (sum, r) in (3..).zip(&traj.rounds) {
                prop_assert_eq!(r.x1_after + r.x2_after, sum);
                if stopped {
                    prop_assert!(r.profile != "++");
                }
                stopped |= r.profile != "++";
            }
        }
    }
}

use recruit_core::analysis::{limit_ratio, performance_ratio, r_hat, sweep, SweepConfig};
use recruit_core::equilibrium::solve_full;
use recruit_core::montecarlo::{simulate, SimulateOptions};
use recruit_core::{GameSpec, NumericMode, Quality};

#[test]
fn limit_ratio_minimum() {
    let (mut best_q, mut best) = (0.0, f64::INFINITY);
    for i in 1..50_000 {
        let q = i as f64 / 100_000.0;
        let v = limit_ratio(q).unwrap();
        if v < best {
            (best_q, best) = (q, v);
        }
    }
    assert!((best_q - (1.5f64.sqrt() - 1.0)).abs() < 1e-3, "{best_q}");
    assert!((best - 2.0 / (1.0 + 1.5f64.sqrt())).abs() < 1e-4, "{best}");
    assert!((best - 0.898).abs() < 1e-3);
}

#[test]
fn r_hat_caps_at_one_half() {
    assert_eq!(r_hat(0.2247), 0.2247);
    assert_eq!(r_hat(0.8), 0.5);
}

#[test]
fn ratio_column_approaches_the_limit() {
    let config = SweepConfig {
        ks: vec![100, 400, 1600, 6400],
        qs: vec![Quality::decimal(0.2247).unwrap()],
        ps: vec![],
        start: (1, 1),
        mode: NumericMode::Float,
    };
    let rows = sweep(&config).unwrap().rows;
    let limit = limit_ratio(0.2247).unwrap();
    let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio - limit).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!((rows[3].ratio - 0.8990).abs() <= 0.05);
}

#[test]
fn welfare_is_calibrated_across_a_grid() {
    let mut inside = 0;
    let mut total = 0;
    for k in [1u32, 2, 3, 5, 8, 13, 21, 34, 50] {
        for q in [0.1, 0.2247, 0.4, 0.6, 0.9] {
            let table = solve_full::<f64>(&GameSpec::tullock(k, Quality::decimal(q).unwrap())).unwrap();
            let exact = performance_ratio(&table).unwrap().welfare;
            let opts = SimulateOptions { trials: 100_000, master_seed: u64::from(k) * 1000 + (q * 1e4) as u64, ..Default::default() };
            let s = simulate(&table, &opts).unwrap().stats;
            assert_eq!(s.exact_welfare, exact);
            total += 1;
            // Deterministic games have zero spread and must match exactly.
            if (s.mean_welfare - exact).abs() <= 4.0 * s.welfare_std_error + 1e-9 {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.99 * total as f64, "{inside}/{total}");
}

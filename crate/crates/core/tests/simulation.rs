use regime::communication::{
    critical_alpha, opposition_expected_payoff, regime_expected_payoff,
};
use regime::model::aggregate_attack;
use regime::numerics::std_normal_cdf;
use regime::simulate::{
    run_replication, run_replication_with_alpha, run_simulation, run_simulation_with_threads,
    SimConfig,
};
use regime::{Communication, ModelParams};

fn config(n: u64, reps: u64, seed: u64) -> SimConfig {
    SimConfig {
        theta: 0.5,
        comm: Communication::NONE,
        x_hat: 0.0,
        n_citizens: n,
        n_replications: reps,
        seed,
        params: ModelParams::new(1.0, 0.5, 1.0, 1.0).unwrap(),
    }
}

#[test]
fn report_is_independent_of_thread_count() {
    let cfg = config(5_000, 64, 11);
    let base = run_simulation(&cfg).unwrap();
    for threads in [1, 2, 3] {
        assert_eq!(run_simulation_with_threads(&cfg, threads).unwrap(), base);
    }
}

#[test]
fn pinned_attack_converges_to_continuum() {
    let alpha = 0.3;
    let cfg = config(1_000_000, 1, 0);
    let expected = aggregate_attack(cfg.theta, cfg.x_hat, alpha, &cfg.params);
    let p = (expected - alpha) / (1.0 - alpha);
    let se = ((1.0 - alpha) * p * (1.0 - p) / cfg.n_citizens as f64).sqrt();
    let within = (0..100)
        .filter(|&seed| {
            let r = run_replication_with_alpha(&SimConfig { seed, ..cfg }, 0, alpha).unwrap();
            (r.outcome.attack_mass - expected).abs() <= 4.0 * se
        })
        .count();
    assert!(within >= 95, "{within} of 100 within 4 SE");

    // The gap shrinks as the population grows.
    let mean_gap = |n: u64| {
        (0..40)
            .map(|seed| {
                let c = SimConfig { seed, ..config(n, 1, 0) };
                (run_replication_with_alpha(&c, 0, alpha).unwrap().outcome.attack_mass - expected).abs()
            })
            .sum::<f64>()
            / 40.0
    };
    assert!(mean_gap(1_000) > mean_gap(100_000));
}

#[test]
fn collapse_iff_alpha_above_critical_share() {
    let cfg = config(100_000, 4_000, 3);
    let n = cfg.n_citizens as f64;
    let critical = critical_alpha(cfg.theta, cfg.x_hat, &cfg.params).unwrap().unclamped;
    let p = std_normal_cdf(cfg.params.signal_gap(cfg.x_hat, cfg.theta)).unwrap();
    // Rounding of the partisan count plus sampling noise in the strategic
    // share, mapped into partisan-share units.
    let band = 1.0 / n + 5.0 * (p * (1.0 - p) / n).sqrt() / (1.0 - p);
    let mut checked = 0;
    for i in 0..cfg.n_replications {
        let r = run_replication(&cfg, i);
        if (r.alpha - critical).abs() > band {
            checked += 1;
            assert_eq!(r.outcome.collapsed, r.alpha >= critical, "alpha = {}", r.alpha);
        }
    }
    assert!(checked > 3_900);
}

#[test]
fn mean_payoffs_match_expected_payoffs() {
    let cfg = SimConfig {
        comm: Communication::new(0.1, 0.2).unwrap(),
        ..config(10_000, 4_000, 5)
    };
    let report = run_simulation(&cfg).unwrap();
    let (y, z) = (cfg.comm.y, cfg.comm.z);
    let opposition = opposition_expected_payoff(cfg.theta, y, z, cfg.x_hat, &cfg.params).unwrap();
    let regime = regime_expected_payoff(cfg.theta, y, z, cfg.x_hat, &cfg.params).unwrap();
    let se = report.std_errors;
    assert!((report.mean_opposition_payoff - opposition).abs() <= 4.0 * se.opposition_payoff);
    assert!((report.mean_regime_payoff - regime).abs() <= 4.0 * se.regime_payoff);
}

#[test]
fn strong_and_weak_regimes() {
    let strong = run_simulation(&SimConfig { theta: 2.0, ..config(2_000, 200, 1) }).unwrap();
    assert_eq!(strong.collapse_frequency, 0.0);
    let weak = run_simulation(&SimConfig { theta: -0.5, ..config(2_000, 200, 1) }).unwrap();
    assert_eq!(weak.collapse_frequency, 1.0);
}

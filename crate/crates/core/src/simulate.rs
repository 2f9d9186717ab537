//! Finite-population Monte Carlo replay of the game.
//!
//! One replication draws the partisan share, assigns `floor(alpha * n)`
//! partisans who always attack, draws a private signal for every other
//! citizen, and lets the regime defend or abandon after seeing the attack.
//!
//! Each replication owns a ChaCha8 stream selected by its index, so results
//! do not depend on evaluation order or on the number of worker threads.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::communication::{collapse_probability, opposition_expected_payoff, regime_expected_payoff};
use crate::error::{Error, Result};
use crate::model::{
    check_share, effective_threshold, opposition_realized_payoff, regime_realized_payoff,
    AttackOutcome, Communication, ModelParams, RegimeDecision,
};
use crate::numerics::{cdf_unchecked, quantile_unchecked};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub theta: f64,
    pub comm: Communication,
    /// Naive signal cutoff: a strategic citizen attacks iff `x_i <= x_hat`.
    pub x_hat: f64,
    pub n_citizens: u64,
    pub n_replications: u64,
    pub seed: u64,
    pub params: ModelParams,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        Communication::new(self.comm.y, self.comm.z)?;
        for (name, value) in [("theta", self.theta), ("x_hat", self.x_hat)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        for (name, value) in [("n", self.n_citizens), ("reps", self.n_replications)] {
            if value == 0 {
                return Err(Error::InvalidParameter {
                    name,
                    value: 0.0,
                    reason: "must be at least 1",
                });
            }
        }
        Ok(())
    }

    /// Cutoff in fundamental space after both efforts are applied.
    pub fn effective_threshold(&self) -> f64 {
        effective_threshold(self.x_hat, self.comm)
    }
}

/// Everything one replication produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub index: u64,
    pub alpha: f64,
    pub partisans: u64,
    pub strategic_attackers: u64,
    pub outcome: AttackOutcome,
}

impl Replication {
    pub fn regime_payoff(&self, cfg: &SimConfig) -> f64 {
        let decision = RegimeDecision::optimal(cfg.theta, self.outcome.attack_mass);
        regime_realized_payoff(cfg.theta, self.outcome.attack_mass, cfg.comm.y, decision)
    }

    pub fn opposition_payoff(&self, cfg: &SimConfig) -> f64 {
        opposition_realized_payoff(self.outcome.collapsed, cfg.comm.z, &cfg.params)
    }
}

fn replication_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
#[inline]
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((rng.next_u64() >> 11) as f64 + 0.5) * SCALE
}

fn replicate(cfg: &SimConfig, index: u64, pinned_alpha: Option<f64>) -> Replication {
    let mut rng = replication_rng(cfg.seed, index);
    let drawn = open_unit(&mut rng);
    let alpha = pinned_alpha.unwrap_or(drawn);

    let n = cfg.n_citizens;
    let partisans = ((alpha * n as f64).floor() as u64).min(n);
    let noise_scale = 1.0 / cfg.params.sqrt_beta();
    let signal_mean = cfg.theta + cfg.comm.y - cfg.comm.z;
    let mut strategic_attackers = 0u64;
    for _ in partisans..n {
        let signal = signal_mean + noise_scale * quantile_unchecked(open_unit(&mut rng));
        if signal <= cfg.x_hat {
            strategic_attackers += 1;
        }
    }
    let attack_mass = (partisans + strategic_attackers) as f64 / n as f64;
    Replication {
        index,
        alpha,
        partisans,
        strategic_attackers,
        outcome: AttackOutcome::new(cfg.theta, attack_mass),
    }
}

/// Runs replication `index`; deterministic in `(seed, index)`.
pub fn run_replication(cfg: &SimConfig, index: u64) -> Replication {
    replicate(cfg, index, None)
}

/// Test hook: same stream as [`run_replication`] but with the partisan
/// share forced to `alpha`.
pub fn run_replication_with_alpha(cfg: &SimConfig, index: u64, alpha: f64) -> Result<Replication> {
    check_share("alpha", alpha)?;
    Ok(replicate(cfg, index, Some(alpha)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub attack: f64,
    pub collapse: f64,
    pub regime_payoff: f64,
    pub opposition_payoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub mean_attack: f64,
    pub collapse_frequency: f64,
    pub mean_regime_payoff: f64,
    pub mean_opposition_payoff: f64,
    pub std_errors: StdErrors,
    pub seed_used: u64,
    pub n_citizens: u64,
    pub n_replications: u64,
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Mean and standard error of the mean (sample std / sqrt n).
fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

pub fn summarize(cfg: &SimConfig, replications: &[Replication]) -> SimReport {
    let column = |f: &dyn Fn(&Replication) -> f64| replications.iter().map(f).collect::<Vec<_>>();
    let (mean_attack, se_attack) = mean_and_se(&column(&|r| r.outcome.attack_mass));
    let (collapse_frequency, se_collapse) =
        mean_and_se(&column(&|r| if r.outcome.collapsed { 1.0 } else { 0.0 }));
    let (mean_regime_payoff, se_regime) = mean_and_se(&column(&|r| r.regime_payoff(cfg)));
    let (mean_opposition_payoff, se_opposition) =
        mean_and_se(&column(&|r| r.opposition_payoff(cfg)));
    SimReport {
        mean_attack,
        collapse_frequency,
        mean_regime_payoff,
        mean_opposition_payoff,
        std_errors: StdErrors {
            attack: se_attack,
            collapse: se_collapse,
            regime_payoff: se_regime,
            opposition_payoff: se_opposition,
        },
        seed_used: cfg.seed,
        n_citizens: cfg.n_citizens,
        n_replications: cfg.n_replications,
    }
}

/// Runs all replications on the current rayon pool and aggregates them in
/// index order.
pub fn run_simulation(cfg: &SimConfig) -> Result<SimReport> {
    cfg.validate()?;
    let replications: Vec<Replication> = (0..cfg.n_replications)
        .into_par_iter()
        .map(|i| run_replication(cfg, i))
        .collect();
    Ok(summarize(cfg, &replications))
}

/// [`run_simulation`] on a dedicated pool with `threads` workers.
pub fn run_simulation_with_threads(cfg: &SimConfig, threads: usize) -> Result<SimReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|_| Error::InvalidParameter {
            name: "threads",
            value: threads as f64,
            reason: "could not start worker pool",
        })?;
    pool.install(|| run_simulation(cfg))
}

/// Continuum counterparts of the simulated statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticComparison {
    /// `E[A] = (1 + Phi(g)) / 2` over `alpha ~ U[0, 1]`.
    pub mean_attack: f64,
    pub collapse_probability: f64,
    pub regime_payoff: f64,
    pub opposition_payoff: f64,
}

pub fn analytic_comparison(cfg: &SimConfig) -> Result<AnalyticComparison> {
    cfg.validate()?;
    let x_star = cfg.effective_threshold();
    let strategic = cdf_unchecked(cfg.params.signal_gap(x_star, cfg.theta));
    let (y, z) = (cfg.comm.y, cfg.comm.z);
    Ok(AnalyticComparison {
        mean_attack: 0.5 * (1.0 + strategic),
        collapse_probability: collapse_probability(cfg.theta, x_star, &cfg.params)?,
        regime_payoff: regime_expected_payoff(cfg.theta, y, z, cfg.x_hat, &cfg.params)?,
        opposition_payoff: opposition_expected_payoff(cfg.theta, y, z, cfg.x_hat, &cfg.params)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapsePoint {
    pub theta: f64,
    pub empirical: f64,
    pub std_error: f64,
    pub analytic: f64,
}

/// Empirical collapse frequency next to `1 - alpha*(theta)` on a grid of
/// regime strengths. Every grid point reuses the template's seed.
pub fn estimate_collapse_curve(grid: &[f64], template: &SimConfig) -> Result<Vec<CollapsePoint>> {
    grid.iter()
        .map(|&theta| {
            let cfg = SimConfig { theta, ..*template };
            let report = run_simulation(&cfg)?;
            Ok(CollapsePoint {
                theta,
                empirical: report.collapse_frequency,
                std_error: report.std_errors.collapse,
                analytic: collapse_probability(theta, cfg.effective_threshold(), &cfg.params)?,
            })
        })
        .collect()
}

//! One function per subcommand, each producing an [`OutputEnvelope`].

use regime::benchmark::{
    dtheta_dalpha, solve_benchmark_closed, solve_benchmark_numeric, theta_curve_slope,
};
use regime::communication::{
    best_response_y, best_response_z, critical_alpha, solve_equilibrium_general,
    solve_equilibrium_half, BestResponse, CommunicationEquilibrium, ResponseRegion,
};
use regime::simulate::{analytic_comparison, run_simulation, run_simulation_with_threads, SimConfig};
use regime::{Communication, ModelParams};
use serde_json::Value;

use crate::args::{ModelArgs, SimArgs, Side};
use crate::config::Resolver;
use crate::error::{CliError, Result};
use crate::output::{count, num, text, OutputEnvelope};

pub const DEFAULT_THETA: f64 = 0.5;
pub const DEFAULT_N: u64 = 10_000;
pub const DEFAULT_REPS: u64 = 1_000;

/// Resolves the model flags. `--B` and `--B-over-psi` are alternatives; a
/// flag of either kind overrides both config keys.
pub fn resolve_model(m: &ModelArgs, r: &Resolver) -> Result<ModelParams> {
    let c = r.real("c", m.c, 0.5)?;
    let beta = r.real("beta", m.beta, 1.0)?;
    let psi = r.real("psi", m.psi, 1.0)?;
    let (benefit, ratio) = match (m.benefit, m.ratio) {
        (Some(b), _) => (Some(b), None),
        (None, Some(k)) => (None, Some(k)),
        (None, None) => {
            let b = r.file.real("B")?;
            let k = r.file.real("B-over-psi")?;
            if b.is_some() && k.is_some() {
                return Err(CliError::Config("give either `B` or `B-over-psi`, not both".into()));
            }
            (b, k)
        }
    };
    let benefit = match (benefit, ratio) {
        (_, Some(k)) => k * psi,
        (b, None) => b.unwrap_or(1.0),
    };
    ModelParams::new(beta, c, benefit, psi).map_err(CliError::from_validation)
}

pub fn echo_model(env: &mut OutputEnvelope, p: &ModelParams) {
    env.input("c", num(p.cost_c))
        .input("beta", num(p.beta))
        .input("B", num(p.benefit_b))
        .input("psi", num(p.psi))
        .input("B_over_psi", num(p.benefit_cost_ratio()));
}

/// Simulation settings that do not include the regime strength.
pub struct SimSettings {
    pub template: SimConfig,
    pub threads: Option<usize>,
}

pub fn resolve_sim(s: &SimArgs, theta: f64, params: ModelParams, r: &Resolver) -> Result<SimSettings> {
    let seed = r
        .count_opt("seed", s.seed)?
        .ok_or_else(|| CliError::Usage("--seed is required".into()))?;
    let y = r.real("y", s.y, 0.0)?;
    let z = r.real("z", s.z, 0.0)?;
    let comm = Communication::new(y, z).map_err(CliError::from_validation)?;
    let template = SimConfig {
        theta,
        comm,
        x_hat: r.real("x-hat", s.x_hat, 0.0)?,
        n_citizens: r.count("n", s.n, DEFAULT_N)?,
        n_replications: r.count("reps", s.reps, DEFAULT_REPS)?,
        seed,
        params,
    };
    template.validate().map_err(CliError::from_validation)?;
    let threads = match r.count_opt("threads", s.threads)? {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => Some(t as usize),
        None => None,
    };
    Ok(SimSettings { template, threads })
}

pub fn echo_sim(env: &mut OutputEnvelope, cfg: &SimConfig) {
    echo_model(env, &cfg.params);
    env.input("theta", num(cfg.theta))
        .input("x-hat", num(cfg.x_hat))
        .input("y", num(cfg.comm.y))
        .input("z", num(cfg.comm.z))
        .input("n", count(cfg.n_citizens))
        .input("reps", count(cfg.n_replications))
        .input("seed", count(cfg.seed));
}

pub fn benchmark(alpha: f64, params: &ModelParams) -> Result<OutputEnvelope> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Usage(format!("--alpha must lie in [0, 1], got {alpha}")));
    }
    let eq = solve_benchmark_closed(alpha, params)?;
    let numeric = solve_benchmark_numeric(alpha, params)?;
    let residuals = eq.residuals(params);
    let slope = theta_curve_slope(eq.x_star, eq.theta_star, alpha, params);

    let mut env = OutputEnvelope::new(
        "benchmark",
        &["alpha", "c", "beta", "x_star", "theta_star", "curve_slope", "dtheta_dalpha"],
    );
    env.input("alpha", num(alpha))
        .input("c", num(params.cost_c))
        .input("beta", num(params.beta));
    env.push_row(vec![
        ("alpha", num(alpha)),
        ("c", num(params.cost_c)),
        ("beta", num(params.beta)),
        ("x_star", num(eq.x_star)),
        ("theta_star", num(eq.theta_star)),
        ("curve_slope", num(slope)),
        ("dtheta_dalpha", num(dtheta_dalpha(&eq, params))),
    ]);
    let root = numeric.equilibrium;
    env.diagnostic("residual_citizen", num(residuals.citizen))
        .diagnostic("residual_regime", num(residuals.regime))
        .diagnostic(
            "numeric_max_abs_diff",
            num((root.theta_star - eq.theta_star).abs().max((root.x_star - eq.x_star).abs())),
        )
        .diagnostic("numeric_iterations", count(numeric.iterations as u64));
    Ok(env)
}

pub const EQUILIBRIUM_COLUMNS: [&str; 12] = [
    "alpha_star",
    "theta_star",
    "x_star",
    "y_star",
    "z_star",
    "residual_theta",
    "residual_effort_gap",
    "residual_propaganda",
    "residual_counter_propaganda",
    "residual_cutoff",
    "residual_signal_identity",
    "max_residual",
];

/// Closed form at `c = 1/2` (cross-checked against the quadratic), the
/// quadratic otherwise.
pub fn solve_routed(params: &ModelParams) -> Result<(CommunicationEquilibrium, Vec<(&'static str, Value)>)> {
    if params.cost_c == 0.5 {
        let eq = solve_equilibrium_half(params)?;
        let general = solve_equilibrium_general(params)?;
        Ok((
            eq,
            vec![
                ("route", text("closed-form")),
                ("quadratic_roots", Value::from(general.roots.map(num).to_vec())),
                ("cross_check_max_abs_diff", num(eq.max_abs_difference(&general.equilibrium))),
            ],
        ))
    } else {
        let general = solve_equilibrium_general(params)?;
        Ok((
            general.equilibrium,
            vec![
                ("route", text("quadratic")),
                ("quadratic_roots", Value::from(general.roots.map(num).to_vec())),
            ],
        ))
    }
}

pub fn equilibrium(params: &ModelParams) -> Result<OutputEnvelope> {
    let (eq, notes) = solve_routed(params)?;
    let residuals = eq.residuals(params)?;
    let mut env = OutputEnvelope::new("equilibrium", &EQUILIBRIUM_COLUMNS);
    echo_model(&mut env, params);
    let mut row = vec![
        ("alpha_star", num(eq.alpha_star)),
        ("theta_star", num(eq.theta_star)),
        ("x_star", num(eq.x_star)),
        ("y_star", num(eq.y_star)),
        ("z_star", num(eq.z_star)),
    ];
    for (i, (_, value)) in residuals.as_array().iter().enumerate() {
        row.push((EQUILIBRIUM_COLUMNS[5 + i], num(*value)));
    }
    row.push(("max_residual", num(residuals.max_abs())));
    env.push_row(row);
    for (k, v) in notes {
        env.diagnostic(k, v);
    }
    env.diagnostic("max_residual", num(residuals.max_abs()));
    Ok(env)
}

pub fn region_name(region: ResponseRegion) -> &'static str {
    match region {
        ResponseRegion::Dominance => "dominance",
        ResponseRegion::SureCollapse => "sure-collapse",
        ResponseRegion::Interior => "interior",
    }
}

pub fn best_response(
    side: Side,
    theta: f64,
    x_star: f64,
    alpha_star: Option<f64>,
    params: &ModelParams,
) -> Result<OutputEnvelope> {
    let response: BestResponse = match side {
        Side::Opposition => best_response_z(theta, x_star, params)?,
        Side::Regime => {
            let alpha = match alpha_star {
                Some(a) => a,
                None if (0.0..=1.0).contains(&theta) => critical_alpha(theta, x_star, params)?.clamped,
                None => 0.0,
            };
            if !(0.0..=1.0).contains(&alpha) {
                return Err(CliError::Usage(format!("--alpha-star must lie in [0, 1], got {alpha}")));
            }
            best_response_y(theta, x_star, alpha, params)?
        }
    };
    let note = match response.region {
        ResponseRegion::Dominance => "dominance region: the outcome does not depend on effort",
        ResponseRegion::SureCollapse => "collapse is certain: effort has no marginal value",
        ResponseRegion::Interior => "",
    };
    let mut env = OutputEnvelope::new(
        "best-response",
        &["side", "theta", "x_star", "level", "critical_alpha", "region", "note"],
    );
    echo_model(&mut env, params);
    let side_name = match side {
        Side::Regime => "regime",
        Side::Opposition => "opposition",
    };
    env.input("side", text(side_name))
        .input("theta", num(theta))
        .input("x-star", num(x_star));
    if let Some(a) = alpha_star {
        env.input("alpha-star", num(a));
    }
    env.push_row(vec![
        ("side", text(side_name)),
        ("theta", num(theta)),
        ("x_star", num(x_star)),
        ("level", num(response.level)),
        ("critical_alpha", num(response.critical_alpha)),
        ("region", text(region_name(response.region))),
        ("note", text(note)),
    ]);
    Ok(env)
}

pub fn simulate(settings: &SimSettings) -> Result<OutputEnvelope> {
    let cfg = &settings.template;
    let report = match settings.threads {
        Some(t) => run_simulation_with_threads(cfg, t)?,
        None => run_simulation(cfg)?,
    };
    let analytic = analytic_comparison(cfg)?;
    let mut env = OutputEnvelope::new("simulate", &["statistic", "value", "std_error", "analytic"]);
    echo_sim(&mut env, cfg);
    let se = report.std_errors;
    let stats = [
        ("mean_attack", report.mean_attack, se.attack, analytic.mean_attack),
        ("collapse_frequency", report.collapse_frequency, se.collapse, analytic.collapse_probability),
        ("regime_payoff", report.mean_regime_payoff, se.regime_payoff, analytic.regime_payoff),
        (
            "opposition_payoff",
            report.mean_opposition_payoff,
            se.opposition_payoff,
            analytic.opposition_payoff,
        ),
    ];
    let mut worst_z: f64 = 0.0;
    for (name, value, std_error, reference) in stats {
        if std_error > 0.0 {
            worst_z = worst_z.max((value - reference).abs() / std_error);
        }
        env.push_row(vec![
            ("statistic", text(name)),
            ("value", num(value)),
            ("std_error", num(std_error)),
            ("analytic", num(reference)),
        ]);
    }
    env.diagnostic("seed_used", count(report.seed_used))
        .diagnostic("effective_threshold", num(cfg.effective_threshold()))
        .diagnostic("max_abs_z_score", num(worst_z));
    Ok(env)
}

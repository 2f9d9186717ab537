//! One-parameter grids over the benchmark, the communication equilibrium or
//! the simulated collapse curve.

use regime::benchmark::{dtheta_dalpha, solve_benchmark_closed, theta_curve_slope};
use regime::simulate::{run_simulation, run_simulation_with_threads, SimConfig};
use regime::communication::collapse_probability;
use regime::ModelParams;
use serde_json::{Map, Value};

use crate::args::{SweepParameter, SweepTarget};
use crate::commands::{echo_model, solve_routed};
use crate::error::{CliError, Result};
use crate::output::{count, num, text, OutputEnvelope};

/// Label placed in the swept column of the trailing monotonicity row.
pub const MONOTONICITY_ROW: &str = "monotonicity";

#[derive(Debug, Clone, Copy)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub lo: f64,
    pub hi: f64,
    pub steps: u64,
    pub fixed: ModelParams,
}

impl SweepSpec {
    pub fn new(
        parameter: SweepParameter,
        lo: f64,
        hi: f64,
        steps: u64,
        fixed: ModelParams,
    ) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(CliError::Usage(format!("need finite --lo < --hi, got [{lo}, {hi}]")));
        }
        if steps < 2 {
            return Err(CliError::Usage("--steps must be at least 2".into()));
        }
        let name = parameter.name();
        let inside = |v: f64| match parameter {
            SweepParameter::Alpha => (0.0..=1.0).contains(&v),
            SweepParameter::C => v > 0.0 && v < 1.0,
            SweepParameter::Beta | SweepParameter::B | SweepParameter::Psi | SweepParameter::BOverPsi => {
                v > 0.0
            }
            SweepParameter::Theta => true,
        };
        for v in [lo, hi] {
            if !inside(v) {
                return Err(CliError::Usage(format!("{name} = {v} is outside its domain")));
            }
        }
        Ok(Self {
            parameter,
            lo,
            hi,
            steps,
            fixed,
        })
    }

    pub fn grid(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }

    /// Model parameters at one grid value.
    pub fn params_at(&self, v: f64) -> regime::Result<ModelParams> {
        let mut p = self.fixed;
        match self.parameter {
            SweepParameter::C => p.cost_c = v,
            SweepParameter::Beta => p.beta = v,
            SweepParameter::B => p.benefit_b = v,
            SweepParameter::Psi => p.psi = v,
            SweepParameter::BOverPsi => p.benefit_b = v * p.psi,
            SweepParameter::Alpha | SweepParameter::Theta => {}
        }
        p.validate()?;
        Ok(p)
    }
}

/// Values held fixed that are not model parameters.
#[derive(Debug, Clone, Copy)]
pub struct SweepContext {
    pub alpha: f64,
    /// Required for collapse-curve sweeps.
    pub sim: Option<SimConfig>,
    pub threads: Option<usize>,
}

pub struct SweepOutcome {
    pub envelope: OutputEnvelope,
    pub failed_rows: usize,
}

fn supported(target: SweepTarget, parameter: SweepParameter) -> bool {
    use SweepParameter::*;
    match target {
        SweepTarget::Benchmark => matches!(parameter, Alpha | C | Beta),
        SweepTarget::Equilibrium => matches!(parameter, C | Beta | B | Psi | BOverPsi),
        SweepTarget::CollapseCurve => matches!(parameter, Theta | Beta),
    }
}

fn target_name(target: SweepTarget) -> &'static str {
    match target {
        SweepTarget::Benchmark => "benchmark",
        SweepTarget::Equilibrium => "equilibrium",
        SweepTarget::CollapseCurve => "collapse-curve",
    }
}

fn output_columns(target: SweepTarget) -> &'static [&'static str] {
    match target {
        SweepTarget::Benchmark => &["x_star", "theta_star", "curve_slope", "dtheta_dalpha"],
        SweepTarget::Equilibrium => {
            &["alpha_star", "theta_star", "x_star", "y_star", "z_star", "max_residual"]
        }
        SweepTarget::CollapseCurve => &["empirical", "std_error", "analytic"],
    }
}

type Cells = Vec<(&'static str, f64)>;

fn solve_point(spec: &SweepSpec, target: SweepTarget, ctx: &SweepContext, v: f64) -> Result<Cells> {
    let params = spec.params_at(v)?;
    match target {
        SweepTarget::Benchmark => {
            let alpha = if spec.parameter == SweepParameter::Alpha { v } else { ctx.alpha };
            let eq = solve_benchmark_closed(alpha, &params)?;
            Ok(vec![
                ("x_star", eq.x_star),
                ("theta_star", eq.theta_star),
                ("curve_slope", theta_curve_slope(eq.x_star, eq.theta_star, alpha, &params)),
                ("dtheta_dalpha", dtheta_dalpha(&eq, &params)),
            ])
        }
        SweepTarget::Equilibrium => {
            let (eq, _) = solve_routed(&params)?;
            Ok(vec![
                ("alpha_star", eq.alpha_star),
                ("theta_star", eq.theta_star),
                ("x_star", eq.x_star),
                ("y_star", eq.y_star),
                ("z_star", eq.z_star),
                ("max_residual", eq.residuals(&params)?.max_abs()),
            ])
        }
        SweepTarget::CollapseCurve => {
            let template = ctx
                .sim
                .ok_or_else(|| CliError::Usage("collapse-curve sweeps need --seed".into()))?;
            let theta = if spec.parameter == SweepParameter::Theta { v } else { template.theta };
            let cfg = SimConfig { theta, params, ..template };
            let report = match ctx.threads {
                Some(t) => run_simulation_with_threads(&cfg, t)?,
                None => run_simulation(&cfg)?,
            };
            Ok(vec![
                ("empirical", report.collapse_frequency),
                ("std_error", report.std_errors.collapse),
                ("analytic", collapse_probability(theta, cfg.effective_threshold(), &params)?),
            ])
        }
    }
}

/// Direction of a column over consecutive successful rows. Steps within a
/// relative `1e-12` count as flat.
pub fn monotonicity(values: &[f64]) -> &'static str {
    if values.len() < 2 {
        return "n/a";
    }
    let (mut up, mut down, mut flat) = (0, 0, 0);
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= 1e-12 * w[0].abs().max(w[1].abs()).max(1.0) {
            flat += 1;
        } else if d > 0.0 {
            up += 1;
        } else {
            down += 1;
        }
    }
    match (up > 0, down > 0, flat > 0) {
        (true, false, false) => "increasing",
        (false, true, false) => "decreasing",
        (false, false, true) => "constant",
        (true, false, true) => "nondecreasing",
        (false, true, true) => "nonincreasing",
        _ => "mixed",
    }
}

pub fn sweep(spec: &SweepSpec, target: SweepTarget, ctx: &SweepContext) -> Result<SweepOutcome> {
    if !supported(target, spec.parameter) {
        return Err(CliError::Usage(format!(
            "{} cannot be swept for target {}",
            spec.parameter.name(),
            target_name(target)
        )));
    }
    if target == SweepTarget::CollapseCurve && ctx.sim.is_none() {
        return Err(CliError::Usage("collapse-curve sweeps need --seed".into()));
    }
    let swept = spec.parameter.name();
    let outputs = output_columns(target);
    let mut columns: Vec<&str> = vec![swept];
    columns.extend_from_slice(outputs);
    columns.push("status");

    let mut env = OutputEnvelope::new("sweep", &columns);
    echo_model(&mut env, &spec.fixed);
    env.input("parameter", text(swept))
        .input("lo", num(spec.lo))
        .input("hi", num(spec.hi))
        .input("steps", count(spec.steps))
        .input("target", text(target_name(target)));
    match target {
        SweepTarget::Benchmark => {
            env.input("alpha", num(ctx.alpha));
        }
        SweepTarget::CollapseCurve => {
            if let Some(sim) = &ctx.sim {
                crate::commands::echo_sim(&mut env, sim);
            }
        }
        SweepTarget::Equilibrium => {}
    }

    let mut series: Vec<Vec<f64>> = vec![Vec::new(); outputs.len() + 1];
    let mut failures = Vec::new();
    for v in spec.grid() {
        match solve_point(spec, target, ctx, v) {
            Ok(cells) => {
                series[0].push(v);
                let mut row = vec![(swept, num(v))];
                for (i, (name, value)) in cells.into_iter().enumerate() {
                    series[i + 1].push(value);
                    row.push((name, num(value)));
                }
                row.push(("status", text("ok")));
                env.push_row(row);
            }
            Err(err) => {
                let message = err.to_string();
                failures.push(Value::String(format!("{swept} = {v}: {message}")));
                env.push_row(vec![(swept, num(v)), ("status", text(format!("error: {message}")))]);
            }
        }
    }

    let mut summary = Map::new();
    let mut trailer = vec![(swept, text(MONOTONICITY_ROW))];
    for (i, name) in outputs.iter().enumerate() {
        let direction = monotonicity(&series[i + 1]);
        summary.insert((*name).to_owned(), text(direction));
        trailer.push((name, text(direction)));
    }
    trailer.push(("status", text("")));
    env.push_row(trailer);
    let failed_rows = failures.len();
    env.diagnostic("monotonicity", Value::Object(summary))
        .diagnostic("failed_rows", count(failed_rows as u64));
    if !failures.is_empty() {
        env.diagnostic("failures", Value::Array(failures));
    }
    Ok(SweepOutcome {
        envelope: env,
        failed_rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(b: f64) -> ModelParams {
        ModelParams::new(1.0, 0.5, b, 1.0).unwrap()
    }

    fn ctx() -> SweepContext {
        SweepContext { alpha: 0.0, sim: None, threads: None }
    }

    fn direction(out: &SweepOutcome, col: &str) -> String {
        out.envelope.diagnostics["monotonicity"][col].as_str().unwrap().to_owned()
    }

    #[test]
    fn grid_hits_both_endpoints() {
        let spec = SweepSpec::new(SweepParameter::Beta, 0.5, 8.0, 7, half(1.0)).unwrap();
        let g = spec.grid();
        assert_eq!(g.len(), 7);
        assert_eq!((g[0], g[6]), (0.5, 8.0));
    }

    #[test]
    fn invalid_specs() {
        assert!(SweepSpec::new(SweepParameter::C, 0.0, 0.5, 5, half(1.0)).is_err());
        assert!(SweepSpec::new(SweepParameter::Beta, 2.0, 1.0, 5, half(1.0)).is_err());
        assert!(SweepSpec::new(SweepParameter::Beta, 1.0, 2.0, 1, half(1.0)).is_err());
        let spec = SweepSpec::new(SweepParameter::Theta, 0.0, 1.0, 3, half(1.0)).unwrap();
        assert!(sweep(&spec, SweepTarget::Benchmark, &ctx()).is_err());
        assert!(sweep(&spec, SweepTarget::CollapseCurve, &ctx()).is_err());
    }

    #[test]
    fn benchmark_alpha_sweep() {
        let spec = SweepSpec::new(SweepParameter::Alpha, 0.0, 1.0, 11, half(1.0)).unwrap();
        let out = sweep(&spec, SweepTarget::Benchmark, &ctx()).unwrap();
        assert_eq!(out.failed_rows, 0);
        assert_eq!(direction(&out, "theta_star"), "increasing");
        for row in &out.envelope.rows[..11] {
            assert!((row["dtheta_dalpha"].as_f64().unwrap() - 0.5).abs() < 1e-12);
        }
        assert_eq!(out.envelope.rows[11]["alpha"], MONOTONICITY_ROW);
    }

    #[test]
    fn equilibrium_sweeps() {
        let spec = SweepSpec::new(SweepParameter::BOverPsi, 0.1, 5.0, 12, half(1.0)).unwrap();
        let out = sweep(&spec, SweepTarget::Equilibrium, &ctx()).unwrap();
        for col in ["y_star", "z_star", "x_star", "theta_star"] {
            assert_eq!(direction(&out, col), "increasing", "{col}");
        }
        let spec = SweepSpec::new(SweepParameter::Beta, 0.5, 8.0, 12, half(0.5)).unwrap();
        let out = sweep(&spec, SweepTarget::Equilibrium, &ctx()).unwrap();
        assert_eq!(direction(&out, "y_star"), "increasing");
        assert_eq!(direction(&out, "theta_star"), "constant");
    }

    #[test]
    fn failures_are_recorded_per_row() {
        // Below one half a small precision leaves no interior root.
        let fixed = ModelParams::new(1.0, 0.4, 0.5, 1.0).unwrap();
        let spec = SweepSpec::new(SweepParameter::Beta, 0.5, 4.0, 8, fixed).unwrap();
        let out = sweep(&spec, SweepTarget::Equilibrium, &ctx()).unwrap();
        assert!(out.failed_rows > 0 && out.failed_rows < 8);
        assert_eq!(out.envelope.rows.len(), 9);
    }

    #[test]
    fn monotonicity_labels() {
        assert_eq!(monotonicity(&[1.0, 2.0, 3.0]), "increasing");
        assert_eq!(monotonicity(&[3.0, 2.0]), "decreasing");
        assert_eq!(monotonicity(&[0.5, 0.5, 0.5 + 1e-17]), "constant");
        assert_eq!(monotonicity(&[1.0, 1.0, 2.0]), "nondecreasing");
        assert_eq!(monotonicity(&[1.0, 2.0, 1.0]), "mixed");
        assert_eq!(monotonicity(&[1.0]), "n/a");
    }
}

//! No-communication equilibrium: the citizen cutoff `x*` and the collapse
//! threshold `theta*` for a known partisan share.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{aggregate_attack, check_share, ModelParams};
use crate::numerics::{cdf_unchecked, find_root, pdf_unchecked, std_normal_quantile, Bracket, Root};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkEquilibrium {
    pub alpha: f64,
    pub x_star: f64,
    pub theta_star: f64,
}

/// Residuals of the two indifference conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkResiduals {
    /// `Phi(sqrt(beta)(theta* - x*)) - c`
    pub citizen: f64,
    /// `theta* - alpha - (1 - alpha) Phi(sqrt(beta)(x* - theta*))`
    pub regime: f64,
}

impl BenchmarkResiduals {
    pub fn max_abs(&self) -> f64 {
        self.citizen.abs().max(self.regime.abs())
    }
}

impl BenchmarkEquilibrium {
    pub fn residuals(&self, params: &ModelParams) -> BenchmarkResiduals {
        BenchmarkResiduals {
            citizen: cdf_unchecked(params.signal_gap(self.theta_star, self.x_star)) - params.cost_c,
            regime: self.theta_star
                - aggregate_attack(self.theta_star, self.x_star, self.alpha, params),
        }
    }
}

/// Equilibrium from a numerical solve, with the root finder's effort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericBenchmark {
    pub equilibrium: BenchmarkEquilibrium,
    pub iterations: usize,
}

/// Closed form: `theta* = alpha + (1 - alpha)(1 - c)` and
/// `x* = theta* - Phi^{-1}(c) / sqrt(beta)`.
pub fn solve_benchmark_closed(alpha: f64, params: &ModelParams) -> Result<BenchmarkEquilibrium> {
    check_share("alpha", alpha)?;
    let c = params.cost_c;
    let theta_star = alpha + (1.0 - alpha) * (1.0 - c);
    let x_star = theta_star - std_normal_quantile(c)? / params.sqrt_beta();
    Ok(BenchmarkEquilibrium {
        alpha,
        x_star,
        theta_star,
    })
}

/// Default bracket `[alpha - 1, alpha + 2]` for the collapse threshold.
pub fn default_theta_bracket(alpha: f64) -> Result<Bracket> {
    Ok(Bracket::new(alpha - 1.0, alpha + 2.0)?)
}

/// Root-finding route: along the citizen line the regime condition reads
/// `g(theta) = theta - alpha - (1 - alpha) Phi(-Phi^{-1}(c)) = 0`.
pub fn solve_benchmark_numeric(alpha: f64, params: &ModelParams) -> Result<NumericBenchmark> {
    solve_benchmark_numeric_in(alpha, params, default_theta_bracket(alpha)?)
}

pub fn solve_benchmark_numeric_in(
    alpha: f64,
    params: &ModelParams,
    bracket: Bracket,
) -> Result<NumericBenchmark> {
    check_share("alpha", alpha)?;
    let quantile = std_normal_quantile(params.cost_c)?;
    let line_offset = quantile / params.sqrt_beta();
    let g = |theta: f64| {
        let x = theta - line_offset;
        theta - aggregate_attack(theta, x, alpha, params)
    };
    let Root { value, iterations, .. } = find_root(g, bracket, &params.numerics)?;
    Ok(NumericBenchmark {
        equilibrium: BenchmarkEquilibrium {
            alpha,
            x_star: value - line_offset,
            theta_star: value,
        },
        iterations,
    })
}

/// Regime strength at which the realized attack equals the strength for a
/// fixed citizen cutoff: the root of `theta - A(theta; x*, alpha)`.
///
/// The left side is strictly increasing in `theta`, so the root is unique
/// and always lies in `[alpha, 1]`.
pub fn regime_indifference_theta(x_star: f64, alpha: f64, params: &ModelParams) -> Result<Root> {
    check_share("alpha", alpha)?;
    let bracket = Bracket::new(alpha - 1.0, 2.0)?;
    Ok(find_root(
        |theta| theta - aggregate_attack(theta, x_star, alpha, params),
        bracket,
        &params.numerics,
    )?)
}

/// Intersection of the regime-indifference curve with the citizen line,
/// found by an outer root search over `x*` within `x_bracket`.
///
/// Each outer evaluation solves the regime condition for `theta` at the
/// trial cutoff, so this route never uses the closed-form substitution.
pub fn solve_benchmark_intersection(
    alpha: f64,
    params: &ModelParams,
    x_bracket: Bracket,
) -> Result<NumericBenchmark> {
    check_share("alpha", alpha)?;
    let line_offset = std_normal_quantile(params.cost_c)? / params.sqrt_beta();
    let gap = |x: f64| match regime_indifference_theta(x, alpha, params) {
        Ok(root) => root.value - x - line_offset,
        Err(_) => f64::NAN,
    };
    let root = find_root(gap, x_bracket, &params.numerics)?;
    let theta_star = regime_indifference_theta(root.value, alpha, params)?.value;
    Ok(NumericBenchmark {
        equilibrium: BenchmarkEquilibrium {
            alpha,
            x_star: root.value,
            theta_star,
        },
        iterations: root.iterations,
    })
}

/// Slope `d theta* / d x*` of the regime-indifference curve; always in `[0, 1)`.
pub fn theta_curve_slope(x_star: f64, theta_star: f64, alpha: f64, params: &ModelParams) -> f64 {
    let k = params.sqrt_beta() * (1.0 - alpha) * pdf_unchecked(params.signal_gap(x_star, theta_star));
    k / (1.0 + k)
}

/// `d theta* / d alpha = d x* / d alpha = 1 - Phi(sqrt(beta)(x* - theta*))`.
pub fn dtheta_dalpha(eq: &BenchmarkEquilibrium, params: &ModelParams) -> f64 {
    // 1 - Phi(u) evaluated as Phi(-u).
    cdf_unchecked(-params.signal_gap(eq.x_star, eq.theta_star))
}

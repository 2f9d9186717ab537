//! Costly two-sided communication: the critical partisan mass, expected
//! payoffs of the regime and the opposition, point best responses, and the
//! equilibrium at the collapse threshold.
//!
//! Every evaluator takes the effective citizen cutoff `x*` (or the naive
//! cutoff `x_hat` together with the efforts that shift it) explicitly. The
//! cutoff is held fixed across the partisan share when integrating, so the
//! density factor in the propaganda condition is constant in `alpha`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    aggregate_attack, check_share, counter_cost, effective_threshold, propaganda_cost,
    Communication, ModelParams,
};
use crate::numerics::{
    cdf_unchecked, derivative_central, find_root, integrate, pdf_unchecked, std_normal_quantile,
    Bracket, NumericError,
};

/// Complements `1 - Phi` below this are treated as zero.
pub const DEGENERATE_COMPLEMENT: f64 = 1e-300;

/// Critical partisan share at which the realized attack equals `theta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalAlpha {
    /// Collapse probability is `1 - clamped`.
    pub clamped: f64,
    /// Raw ratio; negative exactly when `theta` is below the lower bound
    /// and above one when `theta > 1`.
    pub unclamped: f64,
}

fn complement_or_degenerate(theta: f64, x_star: f64, params: &ModelParams) -> Result<f64> {
    let complement = cdf_unchecked(-params.signal_gap(x_star, theta));
    if complement < DEGENERATE_COMPLEMENT {
        return Err(Error::DegenerateDenominator {
            theta,
            x_star,
            complement,
        });
    }
    Ok(complement)
}

/// `alpha*(theta) = (theta - Phi(g)) / (1 - Phi(g))` with
/// `g = sqrt(beta)(x* - theta)`.
pub fn critical_alpha(theta: f64, x_star: f64, params: &ModelParams) -> Result<CriticalAlpha> {
    let complement = complement_or_degenerate(theta, x_star, params)?;
    // theta - Phi(g) = (theta - 1) + (1 - Phi(g)); exact at theta = 1.
    let unclamped = 1.0 + (theta - 1.0) / complement;
    Ok(CriticalAlpha {
        clamped: unclamped.clamp(0.0, 1.0),
        unclamped,
    })
}

/// Derivative of the unclamped critical share with respect to the cutoff,
/// `-sqrt(beta)(1 - theta) phi(g) / (1 - Phi(g))^2`.
pub fn dalpha_dx_star(theta: f64, x_star: f64, params: &ModelParams) -> Result<f64> {
    let complement = complement_or_degenerate(theta, x_star, params)?;
    let density = pdf_unchecked(params.signal_gap(x_star, theta));
    Ok(-params.sqrt_beta() * (1.0 - theta) * density / (complement * complement))
}

/// Unique fixed point of `theta = Phi(sqrt(beta)(x* - theta))`: below it the
/// regime falls even without partisans.
///
/// The right side maps into `(0, 1)` and is strictly decreasing in `theta`,
/// so the root is searched on `[0, 1]`.
pub fn lower_theta(x_star: f64, params: &ModelParams) -> Result<f64> {
    if !x_star.is_finite() {
        return Err(NumericError::Domain {
            what: "citizen cutoff",
            value: x_star,
        }
        .into());
    }
    let root = find_root(
        |theta| theta - cdf_unchecked(params.signal_gap(x_star, theta)),
        Bracket::new(0.0, 1.0)?,
        &params.numerics,
    )?;
    Ok(root.value)
}

/// `theta <= lower_theta(x*)`, decided by the sign of `theta - Phi(g)`
/// without a root search.
fn collapse_is_sure(theta: f64, x_star: f64, params: &ModelParams) -> bool {
    theta <= cdf_unchecked(params.signal_gap(x_star, theta))
}

/// Opposition's expected payoff before the partisan share is drawn:
/// `B` below the lower bound, `B (1 - alpha*)` on `(lower, 1]`, zero
/// above one, minus the effort cost.
pub fn opposition_expected_payoff(
    theta: f64,
    y: f64,
    z: f64,
    x_hat: f64,
    params: &ModelParams,
) -> Result<f64> {
    let x_star = effective_threshold(x_hat, Communication::new(y, z)?);
    let gross = if theta > 1.0 {
        0.0
    } else if collapse_is_sure(theta, x_star, params) {
        params.benefit_b
    } else {
        params.benefit_b * (1.0 - critical_alpha(theta, x_star, params)?.clamped)
    };
    Ok(gross - counter_cost(z, params))
}

/// Probability of collapse when `alpha ~ U[0, 1]`: one below the lower
/// bound, `1 - alpha*` on `(lower, 1]`, zero above one.
pub fn collapse_probability(theta: f64, x_star: f64, params: &ModelParams) -> Result<f64> {
    if theta > 1.0 {
        Ok(0.0)
    } else if collapse_is_sure(theta, x_star, params) {
        Ok(1.0)
    } else {
        Ok(1.0 - critical_alpha(theta, x_star, params)?.clamped)
    }
}

/// Partisan shares in `[0, upper)` leave the regime standing.
fn survival_upper_limit(theta: f64, x_star: f64, params: &ModelParams) -> Result<f64> {
    if theta > 1.0 {
        Ok(1.0)
    } else if collapse_is_sure(theta, x_star, params) {
        Ok(0.0)
    } else {
        Ok(critical_alpha(theta, x_star, params)?.clamped)
    }
}

/// Regime's expected payoff: the margin `theta - A(alpha)` integrated over
/// the surviving partisan shares, minus the cost of propaganda.
pub fn regime_expected_payoff(
    theta: f64,
    y: f64,
    z: f64,
    x_hat: f64,
    params: &ModelParams,
) -> Result<f64> {
    let x_star = effective_threshold(x_hat, Communication::new(y, z)?);
    let upper = survival_upper_limit(theta, x_star, params)?;
    let margin = integrate(
        |alpha| theta - aggregate_attack(theta, x_star, alpha, params),
        0.0,
        upper,
        &params.numerics,
    )?;
    Ok(margin - propaganda_cost(y))
}

/// Where a best response was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseRegion {
    /// `theta` outside `[0, 1]`: the outcome does not depend on effort.
    Dominance,
    /// `theta` at or below the lower bound: collapse is certain.
    SureCollapse,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub theta: f64,
    pub level: f64,
    pub critical_alpha: f64,
    pub region: ResponseRegion,
}

fn dominance_response(theta: f64) -> Option<BestResponse> {
    if (0.0..=1.0).contains(&theta) {
        return None;
    }
    Some(BestResponse {
        theta,
        level: 0.0,
        critical_alpha: if theta > 1.0 { 1.0 } else { 0.0 },
        region: ResponseRegion::Dominance,
    })
}

/// Opposition effort solving `-psi z - B d alpha*/dz = 0`:
/// `(B / psi) sqrt(beta) (1 - theta) phi(g) / (1 - Phi(g))^2`, where `x*` is
/// the effective cutoff at the candidate effort.
pub fn best_response_z(theta: f64, x_star: f64, params: &ModelParams) -> Result<BestResponse> {
    if let Some(r) = dominance_response(theta) {
        return Ok(r);
    }
    let alpha = critical_alpha(theta, x_star, params)?;
    if alpha.unclamped <= 0.0 {
        return Ok(BestResponse {
            theta,
            level: 0.0,
            critical_alpha: 0.0,
            region: ResponseRegion::SureCollapse,
        });
    }
    let marginal = -dalpha_dx_star(theta, x_star, params)?;
    Ok(BestResponse {
        theta,
        level: params.benefit_cost_ratio() * marginal,
        critical_alpha: alpha.clamped,
        region: ResponseRegion::Interior,
    })
}

/// `sqrt(beta) * integral_0^{alpha*} (1 - a) phi(g) da` by quadrature.
pub fn propaganda_integral_form(
    theta: f64,
    x_star: f64,
    alpha_star: f64,
    params: &ModelParams,
) -> Result<f64> {
    check_share("alpha*", alpha_star)?;
    let density = pdf_unchecked(params.signal_gap(x_star, theta));
    let integral = integrate(
        |a| (1.0 - a) * density,
        0.0,
        alpha_star,
        &params.numerics,
    )?;
    Ok(params.sqrt_beta() * integral)
}

/// Regime propaganda `sqrt(beta) phi(g) alpha* (1 - alpha*/2)`.
pub fn best_response_y(
    theta: f64,
    x_star: f64,
    alpha_star: f64,
    params: &ModelParams,
) -> Result<BestResponse> {
    check_share("alpha*", alpha_star)?;
    if let Some(r) = dominance_response(theta) {
        return Ok(r);
    }
    let density = pdf_unchecked(params.signal_gap(x_star, theta));
    let level = params.sqrt_beta() * density * alpha_star * (1.0 - 0.5 * alpha_star);
    debug_assert!({
        let quad = propaganda_integral_form(theta, x_star, alpha_star, params)?;
        (quad - level).abs() <= 1e-9 * level.abs().max(1.0)
    });
    Ok(BestResponse {
        theta,
        level,
        critical_alpha: alpha_star,
        region: if alpha_star > 0.0 {
            ResponseRegion::Interior
        } else {
            ResponseRegion::SureCollapse
        },
    })
}

/// Equilibrium efforts and thresholds evaluated at the collapse threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunicationEquilibrium {
    pub alpha_star: f64,
    pub theta_star: f64,
    pub x_star: f64,
    pub y_star: f64,
    pub z_star: f64,
}

/// Deviations from the equilibrium relations; all should vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResiduals {
    /// `theta* - alpha* - (1 - alpha*)(1 - c)`
    pub theta: f64,
    /// `z* - y* - Phi^{-1}(c) / sqrt(beta)`
    pub effort_gap: f64,
    /// `y* - sqrt(beta) phi(q) alpha* (1 - alpha*/2)`
    pub propaganda: f64,
    /// `z* - (B/psi) sqrt(beta) (1 - alpha*) phi(q) / c`
    pub counter_propaganda: f64,
    /// `x* - theta* - y* + z*`
    pub cutoff: f64,
    /// `sqrt(beta)(x* - theta*) + Phi^{-1}(c)`
    pub signal_identity: f64,
}

impl EquilibriumResiduals {
    pub fn as_array(&self) -> [(&'static str, f64); 6] {
        [
            ("theta", self.theta),
            ("effort_gap", self.effort_gap),
            ("propaganda", self.propaganda),
            ("counter_propaganda", self.counter_propaganda),
            ("cutoff", self.cutoff),
            ("signal_identity", self.signal_identity),
        ]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }
}

impl CommunicationEquilibrium {
    /// Builds the equilibrium fields from a critical partisan mass using the
    /// relations that hold at the collapse threshold.
    pub fn from_alpha(alpha_star: f64, params: &ModelParams) -> Result<Self> {
        let c = params.cost_c;
        let q = std_normal_quantile(c)?;
        let density = pdf_unchecked(q);
        let sqrt_beta = params.sqrt_beta();
        let theta_star = alpha_star + (1.0 - alpha_star) * (1.0 - c);
        let y_star = sqrt_beta * density * alpha_star * (1.0 - 0.5 * alpha_star);
        let z_star = params.benefit_cost_ratio() * sqrt_beta * (1.0 - alpha_star) * density / c;
        Ok(Self {
            alpha_star,
            theta_star,
            x_star: theta_star + y_star - z_star,
            y_star,
            z_star,
        })
    }

    pub fn residuals(&self, params: &ModelParams) -> Result<EquilibriumResiduals> {
        let c = params.cost_c;
        let q = std_normal_quantile(c)?;
        let density = pdf_unchecked(q);
        let sqrt_beta = params.sqrt_beta();
        let a = self.alpha_star;
        Ok(EquilibriumResiduals {
            theta: self.theta_star - a - (1.0 - a) * (1.0 - c),
            effort_gap: self.z_star - self.y_star - q / sqrt_beta,
            propaganda: self.y_star - sqrt_beta * density * a * (1.0 - 0.5 * a),
            counter_propaganda: self.z_star
                - params.benefit_cost_ratio() * sqrt_beta * (1.0 - a) * density / c,
            cutoff: self.x_star - self.theta_star - self.y_star + self.z_star,
            signal_identity: params.signal_gap(self.x_star, self.theta_star) + q,
        })
    }

    /// Naive signal cutoff that produces `x*` once both efforts are applied.
    pub fn naive_cutoff(&self) -> f64 {
        self.x_star + self.y_star - self.z_star
    }

    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        [
            self.alpha_star - other.alpha_star,
            self.theta_star - other.theta_star,
            self.x_star - other.x_star,
            self.y_star - other.y_star,
            self.z_star - other.z_star,
        ]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolution {
    pub equilibrium: CommunicationEquilibrium,
    /// Both roots of the partisan-mass quadratic, ascending.
    pub roots: [f64; 2],
}

/// Roots of `a^2 - 2(1 + B/(psi c)) a - 2 q/(beta phi(q)) + 2B/(psi c) = 0`
/// with `q = Phi^{-1}(c)`, ascending.
pub fn alpha_quadratic_roots(params: &ModelParams) -> Result<[f64; 2]> {
    let c = params.cost_c;
    let q = std_normal_quantile(c)?;
    let k = params.benefit_b / (params.psi * c);
    let half_linear = 1.0 + k;
    let constant = 2.0 * k - 2.0 * q / (params.beta * pdf_unchecked(q));
    let discriminant = half_linear * half_linear - constant;
    if discriminant < 0.0 {
        return Err(Error::ComplexRoots { discriminant });
    }
    // Larger root first; the smaller follows from the product of roots.
    let large = half_linear + discriminant.sqrt();
    let small = constant / large;
    Ok([small, large])
}

/// Equilibrium for any attack cost via the partisan-mass quadratic. The
/// root inside `[0, 1]` is selected; zero or two admissible roots are errors.
pub fn solve_equilibrium_general(params: &ModelParams) -> Result<GeneralSolution> {
    params.validate()?;
    let roots = alpha_quadratic_roots(params)?;
    let admissible: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|r| (0.0..=1.0).contains(r))
        .collect();
    let alpha_star = match admissible.as_slice() {
        [one] => *one,
        [] => return Err(Error::NoInteriorEquilibrium { roots }),
        _ => return Err(Error::AmbiguousEquilibrium { roots }),
    };
    let equilibrium = CommunicationEquilibrium::from_alpha(alpha_star, params)?;
    debug_assert!(equilibrium.residuals(params)?.effort_gap.abs() < 1e-8);
    Ok(GeneralSolution { equilibrium, roots })
}

/// Closed form at `c = 1/2` with `r = 2B/psi`:
/// `alpha* = 1 + r - sqrt(1 + r^2)`, `theta* = x* = 1 + B/psi - sqrt(1 + r^2)/2`,
/// `y* = z* = (B/psi) sqrt(2 beta / pi) (sqrt(1 + r^2) - r)`.
pub fn solve_equilibrium_half(params: &ModelParams) -> Result<CommunicationEquilibrium> {
    params.validate()?;
    if params.cost_c != 0.5 {
        return Err(Error::InvalidParameter {
            name: "c",
            value: params.cost_c,
            reason: "closed form requires c = 1/2",
        });
    }
    let ratio = params.benefit_cost_ratio();
    let r = 2.0 * ratio;
    // sqrt(1 + r^2) - r without cancellation.
    let excess = 1.0 / ((1.0 + r * r).sqrt() + r);
    let theta_star = 1.0 - 0.5 * excess;
    let effort = ratio * (2.0 * params.beta / PI).sqrt() * excess;
    Ok(CommunicationEquilibrium {
        alpha_star: 1.0 - excess,
        theta_star,
        x_star: theta_star,
        y_star: effort,
        z_star: effort,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StaticsParameter {
    Beta,
    /// `B / psi`, varied through `B` with `psi` held fixed.
    BenefitCostRatio,
}

/// Central-difference derivatives of the closed-form equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparativeStatics {
    pub parameter: StaticsParameter,
    pub at: f64,
    pub d_alpha: f64,
    pub d_theta: f64,
    pub d_x: f64,
    pub d_y: f64,
    pub d_z: f64,
}

impl ComparativeStatics {
    /// Signs required by the comparative statics of the closed form: both
    /// efforts rise with precision; efforts and both thresholds rise with
    /// the benefit-cost ratio.
    pub fn signs_hold(&self) -> bool {
        match self.parameter {
            StaticsParameter::Beta => self.d_y > 0.0 && self.d_z > 0.0,
            StaticsParameter::BenefitCostRatio => {
                self.d_y > 0.0 && self.d_z > 0.0 && self.d_x > 0.0 && self.d_theta > 0.0
            }
        }
    }
}

pub fn comparative_statics_check(
    params: &ModelParams,
    which: StaticsParameter,
) -> Result<ComparativeStatics> {
    // Validates c = 1/2 up front.
    solve_equilibrium_half(params)?;
    let at = match which {
        StaticsParameter::Beta => params.beta,
        StaticsParameter::BenefitCostRatio => params.benefit_cost_ratio(),
    };
    let solve_at = |v: f64| -> Option<CommunicationEquilibrium> {
        let mut p = *params;
        match which {
            StaticsParameter::Beta => p.beta = v,
            StaticsParameter::BenefitCostRatio => p.benefit_b = v * params.psi,
        }
        solve_equilibrium_half(&p).ok()
    };
    let d = |field: fn(&CommunicationEquilibrium) -> f64| {
        derivative_central(
            |v| solve_at(v).map_or(f64::NAN, |eq| field(&eq)),
            at,
            &params.numerics,
        )
    };
    Ok(ComparativeStatics {
        parameter: which,
        at,
        d_alpha: d(|e| e.alpha_star)?,
        d_theta: d(|e| e.theta_star)?,
        d_x: d(|e| e.x_star)?,
        d_y: d(|e| e.y_star)?,
        d_z: d(|e| e.z_star)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::derivative_central;

    fn params(beta: f64, c: f64, b: f64, psi: f64) -> ModelParams {
        ModelParams::new(beta, c, b, psi).unwrap()
    }

    fn unit() -> ModelParams {
        params(1.0, 0.5, 1.0, 1.0)
    }

    // 40-digit references (mpmath) for theta = 0.5, x* = 0, beta = 1.
    const ALPHA_REF: f64 = 0.276_894_946_576_341;
    const Z_REF: f64 = 0.368_176_482_710_941_5;
    const Y_REF: f64 = 0.083_988_542_704_414_36;
    const REGIME_REF: f64 = 0.026_507_493_992_921_306;
    const LOWER_REF: f64 = 0.359_580_452_052_064_5;

    #[test]
    fn critical_alpha_examples() {
        let p = unit();
        let a = critical_alpha(1.0, 0.3, &p).unwrap();
        assert_eq!(a.clamped, 1.0);
        assert_eq!(a.unclamped, 1.0);

        let a = critical_alpha(0.5, 0.0, &p).unwrap();
        assert!((a.clamped - ALPHA_REF).abs() < 1e-14);

        // Bisection in alpha on A(theta; x*, alpha) = theta.
        let root = find_root(
            |alpha| aggregate_attack(0.5, 0.0, alpha, &p) - 0.5,
            Bracket::new(0.0, 1.0).unwrap(),
            &p.numerics,
        )
        .unwrap();
        assert!((root.value - a.clamped).abs() < 1e-11);
    }

    #[test]
    fn critical_alpha_vanishes_on_lower_bound() {
        let p = params(2.0, 0.5, 1.0, 1.0);
        let x = 0.2;
        let lower = lower_theta(x, &p).unwrap();
        let a = critical_alpha(lower, x, &p).unwrap();
        assert!(a.unclamped.abs() < 1e-11);
        assert!(critical_alpha(lower - 0.01, x, &p).unwrap().unclamped < 0.0);
        assert_eq!(critical_alpha(lower - 0.01, x, &p).unwrap().clamped, 0.0);
        assert!(critical_alpha(lower + 0.01, x, &p).unwrap().unclamped > 0.0);
    }

    #[test]
    fn critical_alpha_degenerate_denominator() {
        let err = critical_alpha(0.5, 60.0, &unit()).unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator { .. }));
    }

    #[test]
    fn lower_theta_examples() {
        for beta in [0.5, 1.0, 7.0] {
            let v = lower_theta(0.5, &params(beta, 0.5, 1.0, 1.0)).unwrap();
            assert!((v - 0.5).abs() < 1e-12);
        }
        assert!((lower_theta(0.0, &unit()).unwrap() - LOWER_REF).abs() < 1e-11);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..40 {
            let x = -2.0 + 0.1 * i as f64;
            let v = lower_theta(x, &unit()).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn dalpha_dx_matches_finite_difference() {
        let p = params(2.0, 0.5, 1.0, 1.0);
        for (theta, x) in [(0.5, 0.0), (0.8, 0.9), (0.3, -0.4)] {
            let analytic = dalpha_dx_star(theta, x, &p).unwrap();
            let fd = derivative_central(
                |xs| critical_alpha(theta, xs, &p).unwrap().unclamped,
                x,
                &p.numerics,
            )
            .unwrap();
            assert!((analytic - fd).abs() < 1e-6, "{analytic} vs {fd}");
        }
    }

    #[test]
    fn opposition_payoff_examples() {
        let p = unit();
        assert_eq!(opposition_expected_payoff(2.0, 0.0, 0.0, 0.3, &p).unwrap(), 0.0);
        assert_eq!(opposition_expected_payoff(0.1, 0.0, 0.0, 0.0, &p).unwrap(), 1.0);
        let v = opposition_expected_payoff(0.5, 0.0, 0.0, 0.0, &p).unwrap();
        assert!((v - (1.0 - ALPHA_REF)).abs() < 1e-14);
    }

    #[test]
    fn opposition_payoff_continuous_at_boundaries() {
        let p = params(1.5, 0.5, 0.8, 2.0);
        let x_hat = 0.2;
        let lower = lower_theta(x_hat, &p).unwrap();
        let eps = 1e-10;
        let f = |t| opposition_expected_payoff(t, 0.0, 0.1, x_hat - 0.1, &p).unwrap();
        assert!((f(lower - eps) - f(lower + eps)).abs() < 1e-8);
        assert!((f(1.0 - eps) - f(1.0 + eps)).abs() < 1e-8);
    }

    #[test]
    fn regime_payoff_examples() {
        let p = unit();
        // Sure collapse: nothing to integrate.
        let v = regime_expected_payoff(0.1, 0.3, 0.0, 0.3, &p).unwrap();
        assert!((v + 0.045).abs() < 1e-15);
        let v = regime_expected_payoff(1.0, 0.0, 0.0, -40.0, &p).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = regime_expected_payoff(0.5, 0.0, 0.0, 0.0, &p).unwrap();
        assert!((v - REGIME_REF).abs() < 1e-12);
        // Closed antiderivative of the linear integrand:
        // (theta - P) a* - (1 - P) a*^2 / 2.
        let big_p = cdf_unchecked(-0.5);
        let closed = (0.5 - big_p) * ALPHA_REF - (1.0 - big_p) * ALPHA_REF * ALPHA_REF / 2.0;
        assert!((v - closed).abs() < 1e-12);
    }

    #[test]
    fn best_response_z_examples() {
        let p = unit();
        assert_eq!(best_response_z(1.0, 0.3, &p).unwrap().level, 0.0);
        let r = best_response_z(1.5, 0.3, &p).unwrap();
        assert_eq!((r.level, r.region), (0.0, ResponseRegion::Dominance));
        let r = best_response_z(0.5, 0.0, &p).unwrap();
        assert!((r.level - Z_REF).abs() < 1e-13);
        assert_eq!(r.region, ResponseRegion::Interior);
        let r = best_response_z(0.2, 0.0, &p).unwrap();
        assert_eq!(r.region, ResponseRegion::SureCollapse);
    }

    #[test]
    fn best_response_z_satisfies_foc() {
        let p = unit();
        let z = best_response_z(0.5, 0.0, &p).unwrap().level;
        // Hold the effective cutoff at 0 when z = z_br.
        let x_hat = -z;
        let d = derivative_central(
            |zz| opposition_expected_payoff(0.5, 0.0, zz, x_hat, &p).unwrap(),
            z,
            &p.numerics,
        )
        .unwrap();
        assert!(d.abs() < 1e-6, "{d}");
    }

    #[test]
    fn best_response_y_examples() {
        let p = unit();
        assert_eq!(best_response_y(0.5, 0.0, 0.0, &p).unwrap().level, 0.0);
        let r = best_response_y(0.4, 0.4, 1.0, &p).unwrap();
        assert!((r.level - 0.5 * crate::numerics::FRAC_1_SQRT_2PI).abs() < 1e-15);
        let r = best_response_y(0.5, 0.0, ALPHA_REF, &p).unwrap();
        assert!((r.level - Y_REF).abs() < 1e-13);
        let quad = propaganda_integral_form(0.5, 0.0, ALPHA_REF, &p).unwrap();
        assert!((quad - r.level).abs() < 1e-14);
        assert_eq!(best_response_y(-0.5, 0.0, 0.3, &p).unwrap().level, 0.0);
        assert!(best_response_y(0.5, 0.0, 1.2, &p).is_err());
    }

    #[test]
    fn half_cost_closed_form() {
        let eq = solve_equilibrium_half(&params(1.0, 0.5, 0.5, 1.0)).unwrap();
        let s2 = 2f64.sqrt();
        assert!((eq.alpha_star - (2.0 - s2)).abs() < 1e-15);
        assert!((eq.theta_star - (1.5 - s2 / 2.0)).abs() < 1e-15);
        assert!((eq.y_star - 0.165_247_303_146_323_6).abs() < 1e-15);
        assert_eq!(eq.y_star, eq.z_star);
        assert_eq!(eq.x_star, eq.theta_star);

        let eq = solve_equilibrium_half(&params(1.0, 0.5, 1e-300, 1.0)).unwrap();
        assert_eq!(eq.alpha_star, 0.0);
        assert_eq!(eq.theta_star, 0.5);
        assert!(eq.y_star.abs() < 1e-299);

        // r = 1000: sqrt(1 + r^2) - r ~ 1/(2r), so the efforts approach
        // (r/2) sqrt(2 beta/pi) / (2r) = sqrt(2 beta/pi) / 4.
        let p = params(1.0, 0.5, 500.0, 1.0);
        let eq = solve_equilibrium_half(&p).unwrap();
        assert!((eq.alpha_star - 1.0).abs() < 1e-3);
        assert!((eq.theta_star - 1.0).abs() < 1e-3);
        assert!((eq.y_star - 0.25 * (2.0 / PI).sqrt()).abs() < 1e-5);
        assert!(eq.residuals(&p).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn half_cost_requires_half() {
        assert!(matches!(
            solve_equilibrium_half(&params(1.0, 0.4, 0.5, 1.0)),
            Err(Error::InvalidParameter { name: "c", .. })
        ));
    }

    #[test]
    fn general_matches_half() {
        let p = params(1.0, 0.5, 0.5, 1.0);
        let general = solve_equilibrium_general(&p).unwrap();
        let half = solve_equilibrium_half(&p).unwrap();
        assert!(general.equilibrium.max_abs_difference(&half) < 1e-14);
        assert!(general.roots[1] > 1.0);
    }

    #[test]
    fn general_vanishing_benefit() {
        let p = params(1.0, 0.5, 1e-12, 1.0);
        let eq = solve_equilibrium_general(&p).unwrap().equilibrium;
        assert!(eq.alpha_star.abs() < 1e-11);
        assert!((eq.theta_star - 0.5).abs() < 1e-11);
        assert!(eq.y_star.abs() < 1e-11 && eq.z_star.abs() < 1e-11);
    }

    #[test]
    fn general_residuals_off_half() {
        let p = params(4.0, 0.4, 0.5, 1.0);
        let sol = solve_equilibrium_general(&p).unwrap();
        assert!(sol.equilibrium.residuals(&p).unwrap().max_abs() <= 1e-10);
        // 30-digit roots: 0.755135078167779369..., 3.744864921832220491...
        assert!((sol.roots[0] - 0.755_135_078_167_779_4).abs() < 1e-12);
        assert!((sol.roots[1] - 3.744_864_921_832_220_5).abs() < 1e-12);
        let q = std_normal_quantile(0.4).unwrap();
        let k = 0.5 / 0.4;
        let a = sol.equilibrium.alpha_star;
        let poly = a * a - 2.0 * (1.0 + k) * a - 2.0 * q / (4.0 * pdf_unchecked(q)) + 2.0 * k;
        assert!(poly.abs() < 1e-12);
    }

    #[test]
    fn general_below_half_needs_precise_signals() {
        // With c < 1/2 the small root stays in [0, 1] only when
        // beta >= -2 q / phi(q); at c = 0.4, beta = 1 both roots exceed one.
        match solve_equilibrium_general(&params(1.0, 0.4, 0.5, 1.0)) {
            Err(Error::NoInteriorEquilibrium { roots }) => {
                assert!((roots[0] - 1.131_525_799_091_546_2).abs() < 1e-12);
                assert!((roots[1] - 3.368_474_200_908_453_6).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn general_reports_missing_root() {
        // High attack cost with a weak opposition pushes the small root below zero.
        let p = params(1.0, 0.9, 0.01, 1.0);
        match solve_equilibrium_general(&p) {
            Err(Error::NoInteriorEquilibrium { roots }) => assert!(roots[0] < 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn general_reports_complex_roots() {
        // Low cost and imprecise signals make the discriminant negative.
        let p = params(0.05, 0.05, 0.01, 1.0);
        assert!(matches!(
            solve_equilibrium_general(&p),
            Err(Error::ComplexRoots { .. })
        ));
    }

    #[test]
    fn comparative_statics_examples() {
        let p = params(1.0, 0.5, 0.5, 1.0);
        let beta = comparative_statics_check(&p, StaticsParameter::Beta).unwrap();
        // y* is proportional to sqrt(beta): dy/dbeta = y*/(2 beta).
        assert!((beta.d_y - 0.082_623_651_573_161_8).abs() < 1e-8);
        assert!(beta.d_theta.abs() < 1e-9);
        assert!(beta.signs_hold());

        let ratio = comparative_statics_check(&p, StaticsParameter::BenefitCostRatio).unwrap();
        // d theta*/d(B/psi) = 1 - r/sqrt(1 + r^2) at r = 1.
        assert!((ratio.d_theta - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-8);
        assert!(ratio.signs_hold());

        assert!(comparative_statics_check(&params(1.0, 0.3, 0.5, 1.0), StaticsParameter::Beta).is_err());
    }
}

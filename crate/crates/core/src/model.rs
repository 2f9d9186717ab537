//! Primitives of the regime-change game: parameters, communication, payoffs
//! and the aggregate-attack map under naive signal interpretation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cdf_unchecked, NumericConfig};

/// Primitive constants of the game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Precision of citizens' private signals.
    pub beta: f64,
    /// Cost of attacking, in `(0, 1)`.
    pub cost_c: f64,
    /// Opposition's gross benefit from regime collapse.
    pub benefit_b: f64,
    /// Scale of the opposition's quadratic effort cost.
    pub psi: f64,
    pub numerics: NumericConfig,
}

impl ModelParams {
    pub fn new(beta: f64, cost_c: f64, benefit_b: f64, psi: f64) -> Result<Self> {
        let params = Self {
            beta,
            cost_c,
            benefit_b,
            psi,
            numerics: NumericConfig::default(),
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_numerics(mut self, numerics: NumericConfig) -> Result<Self> {
        numerics.validate()?;
        self.numerics = numerics;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, value: f64, ok: bool, reason| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value, reason })
            }
        };
        check("beta", self.beta, self.beta > 0.0, "must be positive")?;
        check(
            "c",
            self.cost_c,
            self.cost_c > 0.0 && self.cost_c < 1.0,
            "must lie strictly between 0 and 1",
        )?;
        check("B", self.benefit_b, self.benefit_b > 0.0, "must be positive")?;
        check("psi", self.psi, self.psi > 0.0, "must be positive")?;
        self.numerics.validate()?;
        Ok(())
    }

    pub fn sqrt_beta(&self) -> f64 {
        self.beta.sqrt()
    }

    pub fn benefit_cost_ratio(&self) -> f64 {
        self.benefit_b / self.psi
    }

    /// Standardized distance `sqrt(beta) (x* - theta)` between the citizen
    /// cutoff and the fundamental.
    pub fn signal_gap(&self, x_star: f64, theta: f64) -> f64 {
        self.sqrt_beta() * (x_star - theta)
    }
}

/// Propaganda `y` chosen by the regime and counter-propaganda `z` chosen by
/// the opposition. Both shift the mean of every citizen's signal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Communication {
    pub y: f64,
    pub z: f64,
}

impl Communication {
    pub const NONE: Communication = Communication { y: 0.0, z: 0.0 };

    pub fn new(y: f64, z: f64) -> Result<Self> {
        for (name, value) in [("y", y), ("z", z)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite",
                });
            }
        }
        Ok(Self { y, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub theta: f64,
    pub alpha: f64,
}

impl GameState {
    pub fn new(theta: f64, alpha: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must be finite",
            });
        }
        check_share("alpha", alpha)?;
        Ok(Self { theta, alpha })
    }
}

pub(crate) fn check_share(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}

/// Resolution of the measure-zero tie `A == theta`.
///
/// The regime defends when `theta >= A` and the regime counts as collapsed
/// for citizens and the opposition when `A >= theta`, so on a tie both hold.
pub struct TieRule;

impl TieRule {
    pub fn defends(theta: f64, attack: f64) -> bool {
        theta >= attack
    }

    pub fn collapsed(theta: f64, attack: f64) -> bool {
        attack >= theta
    }
}

/// The regime's defend/abandon choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeDecision {
    Abandon,
    Defend,
}

impl RegimeDecision {
    pub fn indicator(self) -> f64 {
        match self {
            RegimeDecision::Abandon => 0.0,
            RegimeDecision::Defend => 1.0,
        }
    }

    /// Best reply after the attack is observed.
    pub fn optimal(theta: f64, attack: f64) -> Self {
        if TieRule::defends(theta, attack) {
            RegimeDecision::Defend
        } else {
            RegimeDecision::Abandon
        }
    }
}

impl TryFrom<u8> for RegimeDecision {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(RegimeDecision::Abandon),
            1 => Ok(RegimeDecision::Defend),
            other => Err(Error::InvalidParameter {
                name: "D",
                value: f64::from(other),
                reason: "regime decision must be 0 or 1",
            }),
        }
    }
}

/// Realized attack and its consequences for one state of the world.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub attack_mass: f64,
    pub regime_defends: bool,
    pub collapsed: bool,
}

impl AttackOutcome {
    pub fn new(theta: f64, attack_mass: f64) -> Self {
        Self {
            attack_mass,
            regime_defends: TieRule::defends(theta, attack_mass),
            collapsed: TieRule::collapsed(theta, attack_mass),
        }
    }
}

/// `y^2 / 2`.
pub fn propaganda_cost(y: f64) -> f64 {
    0.5 * y * y
}

/// `psi z^2 / 2`.
pub fn counter_cost(z: f64, params: &ModelParams) -> f64 {
    0.5 * params.psi * z * z
}

/// Cutoff in fundamental space implied by the naive signal cutoff `x_hat`:
/// citizens attack when `theta + y - z + eps <= x_hat`, i.e. when
/// `theta + eps <= x_hat - y + z`.
pub fn effective_threshold(x_hat: f64, comm: Communication) -> f64 {
    x_hat - comm.y + comm.z
}

/// `alpha + (1 - alpha) Phi(sqrt(beta) (x* - theta))`.
pub fn aggregate_attack(theta: f64, x_star: f64, alpha: f64, params: &ModelParams) -> f64 {
    debug_assert!((0.0..=1.0).contains(&alpha));
    let strategic = cdf_unchecked(params.signal_gap(x_star, theta));
    alpha + (1.0 - alpha) * strategic
}

pub fn regime_realized_payoff(theta: f64, attack: f64, y: f64, decision: RegimeDecision) -> f64 {
    decision.indicator() * (theta - attack) - propaganda_cost(y)
}

pub fn citizen_realized_payoff(attacked: bool, collapsed: bool, params: &ModelParams) -> f64 {
    if attacked {
        (if collapsed { 1.0 } else { 0.0 }) - params.cost_c
    } else {
        0.0
    }
}

pub fn opposition_realized_payoff(collapsed: bool, z: f64, params: &ModelParams) -> f64 {
    (if collapsed { params.benefit_b } else { 0.0 }) - counter_cost(z, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(beta: f64, c: f64, b: f64, psi: f64) -> ModelParams {
        ModelParams::new(beta, c, b, psi).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(ModelParams::new(1.0, 0.5, 1.0, 1.0).is_ok());
        assert!(ModelParams::new(0.0, 0.5, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 1.0, -1.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.5, 1.0, 1.0).is_err());
        assert!(GameState::new(0.3, 1.2).is_err());
        assert!(Communication::new(f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn cost_examples() {
        let p = params(1.0, 0.5, 1.0, 1.0);
        assert_eq!(propaganda_cost(0.0), 0.0);
        assert_eq!(propaganda_cost(2.0), 2.0);
        assert_eq!(propaganda_cost(-1.5), 1.125);
        assert_eq!(counter_cost(0.0, &p), 0.0);
        assert_eq!(counter_cost(2.0, &p), 2.0);
        assert_eq!(counter_cost(1.0, &params(1.0, 0.5, 1.0, 3.0)), 1.5);
    }

    #[test]
    fn effective_threshold_examples() {
        assert_eq!(effective_threshold(0.5, Communication::NONE), 0.5);
        assert!((effective_threshold(0.5, Communication { y: 0.2, z: 0.0 }) - 0.3).abs() < 1e-15);
        assert_eq!(effective_threshold(0.5, Communication { y: 0.2, z: 0.2 }), 0.5);
    }

    #[test]
    fn aggregate_attack_examples() {
        let p = params(1.0, 0.5, 1.0, 1.0);
        assert_eq!(aggregate_attack(7.3, 0.1, 1.0, &p), 1.0);
        let p4 = params(4.0, 0.5, 1.0, 1.0);
        assert_eq!(aggregate_attack(0.4, 0.4, 0.3, &p4), 0.3 + 0.7 * 0.5);
        // Phi(-0.5) to 40 digits: 0.3085375387259868963622953893916622601164
        assert!((aggregate_attack(0.5, 0.0, 0.0, &p) - 0.308_537_538_725_986_9).abs() < 1e-15);
    }

    #[test]
    fn regime_payoff_examples() {
        let v = regime_realized_payoff(0.8, 0.3, 0.0, RegimeDecision::Defend);
        assert!((v - 0.5).abs() < 1e-15);
        let v = regime_realized_payoff(0.2, 0.3, 0.4, RegimeDecision::Abandon);
        assert!((v + 0.08).abs() < 1e-15);
        // At the kink both decisions pay the same.
        let (a, y) = (0.37, 0.2);
        assert_eq!(
            regime_realized_payoff(a, a, y, RegimeDecision::Defend),
            regime_realized_payoff(a, a, y, RegimeDecision::Abandon)
        );
    }

    #[test]
    fn regime_decision_from_integer() {
        assert_eq!(RegimeDecision::try_from(0).unwrap(), RegimeDecision::Abandon);
        assert_eq!(RegimeDecision::try_from(1).unwrap(), RegimeDecision::Defend);
        assert!(matches!(
            RegimeDecision::try_from(2),
            Err(Error::InvalidParameter { name: "D", .. })
        ));
    }

    #[test]
    fn citizen_and_opposition_payoffs() {
        let p = params(1.0, 0.5, 1.0, 1.0);
        assert_eq!(citizen_realized_payoff(false, true, &p), 0.0);
        let p3 = params(1.0, 0.3, 1.0, 1.0);
        assert!((citizen_realized_payoff(true, true, &p3) - 0.7).abs() < 1e-15);
        assert!((citizen_realized_payoff(true, false, &p3) + 0.3).abs() < 1e-15);

        assert_eq!(opposition_realized_payoff(true, 0.0, &params(1.0, 0.5, 2.0, 1.0)), 2.0);
        assert_eq!(opposition_realized_payoff(false, 1.0, &params(1.0, 0.5, 2.0, 1.0)), -0.5);
        assert_eq!(opposition_realized_payoff(true, 1.0, &params(1.0, 0.5, 2.0, 4.0)), 0.0);
    }

    #[test]
    fn outcome_tie_convention() {
        let o = AttackOutcome::new(0.4, 0.4);
        assert!(o.collapsed && o.regime_defends);
        let o = AttackOutcome::new(0.5, 0.4);
        assert!(!o.collapsed && o.regime_defends);
        let o = AttackOutcome::new(0.3, 0.4);
        assert!(o.collapsed && !o.regime_defends);
    }

    proptest! {
        #[test]
        fn aggregate_attack_monotone(
            theta in -2.0f64..3.0,
            x in -2.0f64..3.0,
            alpha in 0.0f64..0.99,
            d in 1e-3f64..0.5,
            beta in 0.1f64..10.0,
        ) {
            let p = params(beta, 0.5, 1.0, 1.0);
            let base = aggregate_attack(theta, x, alpha, &p);
            prop_assert!(base >= alpha && base <= 1.0);
            prop_assert!(aggregate_attack(theta, x, (alpha + d).min(1.0), &p) >= base);
            prop_assert!(aggregate_attack(theta, x + d, alpha, &p) >= base);
            prop_assert!(aggregate_attack(theta + d, x, alpha, &p) <= base);
            prop_assert_eq!(aggregate_attack(theta, x, 1.0, &p), 1.0);
            prop_assert_eq!(aggregate_attack(theta, x, 0.0, &p), cdf_unchecked(p.signal_gap(x, theta)));
        }

        #[test]
        fn optimal_decision_maximizes_payoff(theta in -1.0f64..2.0, attack in 0.0f64..1.0, y in -2.0f64..2.0) {
            let best = regime_realized_payoff(theta, attack, y, RegimeDecision::optimal(theta, attack));
            for d in [RegimeDecision::Abandon, RegimeDecision::Defend] {
                prop_assert!(best >= regime_realized_payoff(theta, attack, y, d));
            }
        }

        #[test]
        fn propaganda_shifts_threshold_one_for_one(
            x_hat in -5.0f64..5.0, y in -3.0f64..3.0, z in -3.0f64..3.0, delta in -2.0f64..2.0,
        ) {
            let base = effective_threshold(x_hat, Communication { y, z });
            let shifted = effective_threshold(x_hat, Communication { y: y + delta, z });
            prop_assert!((base - shifted - delta).abs() < 1e-12);
        }
    }
}

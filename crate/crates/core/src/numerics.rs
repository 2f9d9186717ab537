//! Special functions and small numerical kernels shared by every solver.
//!
//! Everything here is a pure function of its inputs. The standard normal
//! CDF is built on `erfc`, the quantile on Wichura's AS241 rational
//! approximation polished by a Newton step, the root finder is a
//! bisection-safeguarded secant, and quadrature is a composite 64-point
//! Gauss-Legendre rule with panel doubling.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `1 / sqrt(2 pi)`.
#[allow(clippy::excessive_precision)]
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868_5;

/// Nodes per Gauss-Legendre panel.
pub const GAUSS_LEGENDRE_ORDER: usize = 64;

/// Upper bound on panel doublings performed by [`integrate`].
const MAX_PANEL_DOUBLINGS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("{what} outside its domain: {value}")]
    Domain { what: &'static str, value: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("no convergence after {iterations} iterations (best iterate {best}, residual {residual})")]
    Convergence {
        best: f64,
        residual: f64,
        iterations: usize,
    },
    #[error("non-finite function value at {at}")]
    Evaluation { at: f64 },
}

/// Tolerances shared by the root finder, quadrature and finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Relative step for central differences.
    pub fd_step: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_iter: 200,
            fd_step: 1e-6,
        }
    }
}

impl NumericConfig {
    pub fn validate(&self) -> Result<(), NumericError> {
        let positive = |what, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(NumericError::Domain { what, value: v })
            }
        };
        positive("abs_tol", self.abs_tol)?;
        positive("rel_tol", self.rel_tol)?;
        positive("fd_step", self.fd_step)?;
        if self.max_iter == 0 {
            return Err(NumericError::Domain {
                what: "max_iter",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// A search interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericError> {
        if !lo.is_finite() {
            return Err(NumericError::Domain { what: "bracket lo", value: lo });
        }
        if !hi.is_finite() || hi <= lo {
            return Err(NumericError::Domain { what: "bracket hi", value: hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn require_finite(what: &'static str, value: f64) -> Result<f64, NumericError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(NumericError::Domain { what, value })
    }
}

/// Standard normal density.
pub fn std_normal_pdf(u: f64) -> Result<f64, NumericError> {
    let u = require_finite("pdf argument", u)?;
    Ok(pdf_unchecked(u))
}

/// Standard normal CDF, `0.5 * erfc(-u / sqrt 2)`.
///
/// Absolute error is below 1e-14 everywhere and the lower tail keeps full
/// relative precision because the complement is never formed.
pub fn std_normal_cdf(u: f64) -> Result<f64, NumericError> {
    let u = require_finite("cdf argument", u)?;
    Ok(cdf_unchecked(u))
}

#[inline]
pub(crate) fn pdf_unchecked(u: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * u * u).exp()
}

#[inline]
pub(crate) fn cdf_unchecked(u: f64) -> f64 {
    0.5 * libm::erfc(-u * FRAC_1_SQRT_2)
}

/// Inverse of the standard normal CDF.
///
/// AS241 gives roughly 16 digits on its own; one Newton step against
/// [`std_normal_cdf`] ties the result to the CDF used everywhere else so
/// that `|Phi(u) - p| <= 1e-12` holds on the whole open interval.
pub fn std_normal_quantile(p: f64) -> Result<f64, NumericError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(NumericError::Domain {
            what: "quantile probability",
            value: p,
        });
    }
    Ok(quantile_unchecked(p))
}

#[inline]
pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    let u = as241(p);
    let density = pdf_unchecked(u);
    if density > 0.0 {
        let step = (cdf_unchecked(u) - p) / density;
        if step.is_finite() {
            return u - step;
        }
    }
    u
}

#[allow(clippy::excessive_precision)]
fn as241(p: f64) -> f64 {
    const A: [f64; 8] = [
        3.3871328727963666080e0,
        1.3314166789178437745e+2,
        1.9715909503065514427e+3,
        1.3731693765509461125e+4,
        4.5921953931549871457e+4,
        6.7265770927008700853e+4,
        3.3430575583588128105e+4,
        2.5090809287301226727e+3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.2313330701600911252e+1,
        6.8718700749205790830e+2,
        5.3941960214247511077e+3,
        2.1213794301586595867e+4,
        3.9307895800092710610e+4,
        2.8729085735721942674e+4,
        5.2264952788528545610e+3,
    ];
    const C: [f64; 8] = [
        1.42343711074968357734e0,
        4.63033784615654529590e0,
        5.76949722146069140550e0,
        3.64784832476320460504e0,
        1.27045825245236838258e0,
        2.41780725177450611770e-1,
        2.27238449892691845833e-2,
        7.74545014278341407640e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.05319162663775882187e0,
        1.67638483018380384940e0,
        6.89767334985100004550e-1,
        1.48103976427480074590e-1,
        1.51986665636164571966e-2,
        5.47593808499534494600e-4,
        1.05075007164441684324e-9,
    ];
    const E: [f64; 8] = [
        6.65790464350110377720e0,
        5.46378491116411436990e0,
        1.78482653991729133580e0,
        2.96560571828504891230e-1,
        2.65321895265761230930e-2,
        1.24266094738807843860e-3,
        2.71155556874348757815e-5,
        2.01033439929228813265e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.99832206555887937690e-1,
        1.36929880922735805310e-1,
        1.48753612908506148525e-2,
        7.86869131145613259100e-4,
        1.84631831751005468180e-5,
        1.42151175831644588870e-7,
        2.04426310338993978564e-15,
    ];

    fn ratio(num: &[f64; 8], den: &[f64; 8], r: f64) -> f64 {
        let horner = |c: &[f64; 8]| c.iter().rev().fold(0.0, |acc, &k| acc * r + k);
        horner(num) / horner(den)
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * ratio(&A, &B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let magnitude = if r <= 5.0 {
        ratio(&C, &D, r - 1.6)
    } else {
        ratio(&E, &F, r - 5.0)
    };
    if q < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

/// Result of a successful root search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds a root of `f` inside `bracket` by secant steps, falling back to
/// bisection whenever the secant point leaves the bracket or the bracket
/// fails to halve over two consecutive steps.
///
/// Terminates when `|f(r)| <= abs_tol` or the bracket width drops below
/// `rel_tol * |r| + abs_tol`. The iteration is fully deterministic.
pub fn find_root<F>(f: F, bracket: Bracket, cfg: &NumericConfig) -> Result<Root, NumericError>
where
    F: Fn(f64) -> f64,
{
    let eval = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericError::Evaluation { at: x })
        }
    };

    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let (mut f_lo, mut f_hi) = (eval(lo)?, eval(hi)?);
    if f_lo == 0.0 {
        return Ok(Root { value: lo, residual: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { value: hi, residual: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(NumericError::Bracket { lo, hi, f_lo, f_hi });
    }

    // Secant state: the two most recent iterates.
    let (mut prev, mut f_prev) = (lo, f_lo);
    let (mut cur, mut f_cur) = (hi, f_hi);
    let mut width_two_ago = f64::INFINITY;
    let mut width_one_ago = hi - lo;

    for iteration in 1..=cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        let secant = if f_cur != f_prev {
            cur - f_cur * (cur - prev) / (f_cur - f_prev)
        } else {
            f64::NAN
        };
        let stalled = (hi - lo) > 0.5 * width_two_ago;
        let candidate = if secant.is_finite() && secant > lo && secant < hi && !stalled {
            secant
        } else {
            mid
        };

        let f_candidate = eval(candidate)?;
        prev = cur;
        f_prev = f_cur;
        cur = candidate;
        f_cur = f_candidate;

        if f_candidate == 0.0 || f_candidate.abs() <= cfg.abs_tol {
            return Ok(Root {
                value: candidate,
                residual: f_candidate,
                iterations: iteration,
            });
        }
        if f_candidate.signum() == f_lo.signum() {
            lo = candidate;
            f_lo = f_candidate;
        } else {
            hi = candidate;
            f_hi = f_candidate;
        }

        width_two_ago = width_one_ago;
        width_one_ago = hi - lo;

        let best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
        if hi - lo <= cfg.rel_tol * best.0.abs() + cfg.abs_tol {
            return Ok(Root {
                value: best.0,
                residual: best.1,
                iterations: iteration,
            });
        }
    }

    let best = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    Err(NumericError::Convergence {
        best: best.0,
        residual: best.1,
        iterations: cfg.max_iter,
    })
}

struct GaussLegendre {
    nodes: [f64; GAUSS_LEGENDRE_ORDER],
    weights: [f64; GAUSS_LEGENDRE_ORDER],
}

fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_LEGENDRE_ORDER;
        let mut nodes = [0.0; GAUSS_LEGENDRE_ORDER];
        let mut weights = [0.0; GAUSS_LEGENDRE_ORDER];
        for i in 0..n / 2 {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Three-term recurrence for P_n(x) and its derivative.
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    })
}

fn composite_rule<F>(f: &F, lo: f64, hi: f64, panels: usize) -> Result<f64, NumericError>
where
    F: Fn(f64) -> f64,
{
    let rule = gauss_legendre();
    let width = (hi - lo) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for panel in 0..panels {
        let center = lo + (panel as f64 + 0.5) * width;
        let mut sum = 0.0;
        for (node, weight) in rule.nodes.iter().zip(rule.weights.iter()) {
            let x = center + half * node;
            let v = f(x);
            if !v.is_finite() {
                return Err(NumericError::Evaluation { at: x });
            }
            sum += weight * v;
        }
        total += half * sum;
    }
    Ok(total)
}

/// Integrates `f` over `[lo, hi]` with a composite 64-point Gauss-Legendre
/// rule, doubling the panel count until successive estimates agree to
/// `max(abs_tol, rel_tol * |result|)`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &NumericConfig) -> Result<f64, NumericError>
where
    F: Fn(f64) -> f64,
{
    require_finite("integration lower limit", lo)?;
    require_finite("integration upper limit", hi)?;
    if lo > hi {
        return Err(NumericError::Domain {
            what: "integration interval (lo > hi)",
            value: lo - hi,
        });
    }
    if lo == hi {
        return Ok(0.0);
    }
    let mut panels = 1;
    let mut coarse = composite_rule(&f, lo, hi, panels)?;
    for _ in 0..MAX_PANEL_DOUBLINGS {
        panels *= 2;
        let fine = composite_rule(&f, lo, hi, panels)?;
        if (fine - coarse).abs() <= cfg.abs_tol.max(cfg.rel_tol * fine.abs()) {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(NumericError::Convergence {
        best: coarse,
        residual: f64::NAN,
        iterations: MAX_PANEL_DOUBLINGS as usize,
    })
}

/// Central difference `(f(a + h) - f(a - h)) / 2h` with
/// `h = fd_step * max(1, |a|)`.
pub fn derivative_central<F>(f: F, at: f64, cfg: &NumericConfig) -> Result<f64, NumericError>
where
    F: Fn(f64) -> f64,
{
    require_finite("differentiation point", at)?;
    let h = cfg.fd_step * at.abs().max(1.0);
    let (up, down) = (at + h, at - h);
    let f_up = f(up);
    if !f_up.is_finite() {
        return Err(NumericError::Evaluation { at: up });
    }
    let f_down = f(down);
    if !f_down.is_finite() {
        return Err(NumericError::Evaluation { at: down });
    }
    Ok((f_up - f_down) / (up - down))
}

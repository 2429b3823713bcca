//! Integration over `(0, ∞)` and the integrands of Oberhettinger's formula and
//! of both theorem left-hand sides.
//!
//! The integrator uses the exp-sinh map `x = exp(π/2 · sinh t)`, which sends
//! `(0, ∞)` to the whole line and turns both power singularities at the origin
//! and algebraic decay at infinity into double-exponential decay in `t`. The
//! trapezoidal rule on the mapped integrand is refined by halving the step;
//! the difference between successive levels is the error estimate.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::kbessel::{eval_gmk_bessel, BesselParams};
use crate::kgamma::log_classical_gamma;

/// Outcome of a semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err_estimate: f64,
    pub evaluations: usize,
    /// `abs_err_estimate ≤ tol · |value|` was reached within the budget.
    pub converged: bool,
}

const INITIAL_STEP: f64 = 0.5;
const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
/// Keeps `|ln x| ≤ 700` so that nodes stay inside the double range.
const T_LIMIT: f64 = 6.7;
const NEGLIGIBLE: f64 = 1e-20;

fn node(t: f64) -> (f64, f64) {
    let s = FRAC_PI_2 * t.sinh();
    let x = s.exp();
    (x, FRAC_PI_2 * t.cosh() * x)
}

/// Weighted integrand at `t`; `None` once the node leaves the usable range.
fn weighted<F>(f: &mut F, t: f64, evaluations: &mut usize) -> Result<Option<f64>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (x, w) = node(t);
    if x == 0.0 || !x.is_finite() || !w.is_finite() {
        return Ok(None);
    }
    *evaluations += 1;
    let v = w * f(x)?;
    if v.is_finite() {
        Ok(Some(v))
    } else if t.abs() > 3.0 {
        Ok(None)
    } else {
        Err(Error::NonFiniteIntegrand { x })
    }
}

/// Walks outward from `t = 0` in steps of `direction · INITIAL_STEP` until the
/// weighted integrand is negligible twice in a row. Returns the last `t` used.
fn scan<F>(
    f: &mut F,
    direction: f64,
    sum: &mut CompensatedSum,
    evaluations: &mut usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut quiet = 0;
    let mut last = 0.0;
    let mut j = 1;
    loop {
        let t = direction * j as f64 * INITIAL_STEP;
        if t.abs() > T_LIMIT {
            return Ok(last);
        }
        let Some(v) = weighted(f, t, evaluations)? else {
            return Ok(last);
        };
        sum.add(v);
        last = t;
        if v.abs() <= NEGLIGIBLE * sum.value().abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(last);
            }
        } else {
            quiet = 0;
        }
        j += 1;
    }
}

/// `∫₀^∞ f(x) dx` for a fallible integrand.
///
/// `tol` is relative: the result is flagged converged when the level-to-level
/// difference is at most `tol · |value|`. `budget` caps integrand evaluations.
pub fn try_integrate_semi_infinite<F>(mut f: F, tol: f64, budget: usize) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut evaluations = 0;
    let mut sum = CompensatedSum::new();
    if let Some(v) = weighted(&mut f, 0.0, &mut evaluations)? {
        sum.add(v);
    }
    let right = scan(&mut f, 1.0, &mut sum, &mut evaluations)?;
    let left = scan(&mut f, -1.0, &mut sum, &mut evaluations)?;

    let mut h = INITIAL_STEP;
    let mut estimate = h * sum.value();
    let mut error = f64::INFINITY;

    for level in 1..=MAX_LEVEL {
        h /= 2.0;
        let first = (left / h).ceil() as i64;
        let last = (right / h).floor() as i64;
        let new_nodes = ((last - first) / 2 + 1).max(0) as usize;
        if evaluations + new_nodes > budget {
            break;
        }
        for i in first..=last {
            if i.rem_euclid(2) == 0 {
                continue;
            }
            if let Some(v) = weighted(&mut f, i as f64 * h, &mut evaluations)? {
                sum.add(v);
            }
        }
        let refined = h * sum.value();
        error = (refined - estimate).abs();
        estimate = refined;
        if level >= MIN_LEVEL && error <= tol * estimate.abs() {
            return Ok(QuadResult {
                value: estimate,
                abs_err_estimate: error,
                evaluations,
                converged: true,
            });
        }
    }

    Ok(QuadResult {
        value: estimate,
        abs_err_estimate: error,
        evaluations,
        converged: false,
    })
}

/// `∫₀^∞ f(x) dx` for an infallible integrand. A non-finite integrand value in
/// the interior yields a NaN result flagged as not converged.
pub fn integrate_semi_infinite<F>(mut f: F, tol: f64, budget: usize) -> QuadResult
where
    F: FnMut(f64) -> f64,
{
    match try_integrate_semi_infinite(|x| Ok(f(x)), tol, budget) {
        Ok(r) => r,
        Err(_) => QuadResult {
            value: f64::NAN,
            abs_err_estimate: f64::INFINITY,
            evaluations: 0,
            converged: false,
        },
    }
}

/// Default integrand-evaluation budget.
pub const DEFAULT_BUDGET: usize = 100_000;

/// `x + a + √(x² + 2ax)`.
pub fn phi(x: f64, a: f64) -> f64 {
    x + a + x.sqrt() * (x + 2.0 * a).sqrt()
}

/// Exponents and shift of Oberhettinger's integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObParams {
    pub mu: f64,
    pub lam: f64,
    pub a: f64,
}

impl ObParams {
    pub fn new(mu: f64, lam: f64, a: f64) -> Result<Self> {
        let p = ObParams { mu, lam, a };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        if !(self.mu > 0.0 && self.mu < self.lam && self.lam.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need 0 < mu < lambda, got mu = {}, lambda = {}",
                self.mu, self.lam
            )));
        }
        Ok(())
    }
}

/// `ln` of `2λ a^{-λ} (a/2)^μ Γ(2μ) Γ(λ-μ) / Γ(1+λ+μ)`.
pub(crate) fn log_oberhettinger(mu: f64, lam: f64, a: f64) -> Result<f64> {
    ObParams::new(mu, lam, a)?;
    Ok((2.0 * lam).ln() - lam * a.ln()
        + mu * (a / 2.0).ln()
        + log_classical_gamma(2.0 * mu)?
        + log_classical_gamma(lam - mu)?
        - log_classical_gamma(1.0 + lam + mu)?)
}

/// Closed form of `∫₀^∞ x^{μ-1} φ(x, a)^{-λ} dx`.
pub fn oberhettinger_closed_form(p: &ObParams) -> Result<f64> {
    Ok(log_oberhettinger(p.mu, p.lam, p.a)?.exp())
}

fn kernel(x: f64, mu: f64, lam: f64, a: f64) -> f64 {
    ((mu - 1.0) * x.ln() - lam * phi(x, a).ln()).exp()
}

/// Quadrature of `∫₀^∞ x^{μ-1} φ(x, a)^{-λ} dx`.
pub fn oberhettinger_lhs(p: &ObParams, tol: f64) -> Result<QuadResult> {
    p.validate()?;
    Ok(integrate_semi_infinite(
        |x| kernel(x, p.mu, p.lam, p.a),
        tol,
        DEFAULT_BUDGET,
    ))
}

/// The scalar part `(μ, λ, a, y)` of a theorem evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremPoint {
    pub mu: f64,
    pub lam: f64,
    pub a: f64,
    pub y: f64,
}

/// Accuracy controls for series evaluated inside integrands and sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesControl {
    pub tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: 1e-13,
            max_terms: 400,
        }
    }
}

impl TheoremPoint {
    fn check_common(&self, bp: &BesselParams) -> Result<()> {
        bp.validate()?;
        let finite = [self.mu, self.lam, self.a, self.y]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams(
                "mu, lambda, a, y must be finite".into(),
            ));
        }
        if self.a <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "a must be positive, got {}",
                self.a
            )));
        }
        if self.y < 0.0 {
            return Err(Error::InvalidParams(format!(
                "y must be nonnegative, got {}",
                self.y
            )));
        }
        Ok(())
    }

    /// Term-wise condition of the first theorem: `λ + ν > μ > 0`.
    pub fn check_theorem1(&self, bp: &BesselParams) -> Result<()> {
        self.check_common(bp)?;
        if !(self.mu > 0.0) {
            return Err(Error::InvalidParams(format!(
                "precondition mu > 0 fails (mu = {})",
                self.mu
            )));
        }
        if !(self.lam + bp.nu > self.mu) {
            return Err(Error::InvalidParams(format!(
                "precondition lambda + nu > mu fails ({} + {} <= {})",
                self.lam, bp.nu, self.mu
            )));
        }
        Ok(())
    }

    /// Term-wise condition of the second theorem: `μ + ν > 0` and `λ > μ`.
    pub fn check_theorem2(&self, bp: &BesselParams) -> Result<()> {
        self.check_common(bp)?;
        if !(self.mu + bp.nu > 0.0) {
            return Err(Error::InvalidParams(format!(
                "precondition mu + nu > 0 fails ({} + {})",
                self.mu, bp.nu
            )));
        }
        if !(self.lam > self.mu) {
            return Err(Error::InvalidParams(format!(
                "precondition lambda > mu fails ({} <= {})",
                self.lam, self.mu
            )));
        }
        Ok(())
    }
}

fn bessel_at(bp: &BesselParams, arg: f64, x: f64, series: SeriesControl) -> Result<f64> {
    let r = eval_gmk_bessel(bp, arg, series.tol, series.max_terms)?;
    if !r.converged {
        return Err(Error::InnerSeries {
            x,
            terms: r.terms_used,
        });
    }
    Ok(r.value)
}

/// `∫₀^∞ x^{μ-1} φ^{-λ} J(y / φ) dx` with `φ = φ(x, a)`.
pub fn theorem1_lhs(
    bp: &BesselParams,
    pt: &TheoremPoint,
    tol: f64,
    series: SeriesControl,
) -> Result<QuadResult> {
    pt.check_theorem1(bp)?;
    try_integrate_semi_infinite(
        |x| {
            let ph = phi(x, pt.a);
            let j = bessel_at(bp, pt.y / ph, x, series)?;
            Ok(kernel(x, pt.mu, pt.lam, pt.a) * j)
        },
        tol,
        DEFAULT_BUDGET,
    )
}

/// `∫₀^∞ x^{μ-1} φ^{-λ} J(x y / φ) dx` with `φ = φ(x, a)`.
pub fn theorem2_lhs(
    bp: &BesselParams,
    pt: &TheoremPoint,
    tol: f64,
    series: SeriesControl,
) -> Result<QuadResult> {
    pt.check_theorem2(bp)?;
    try_integrate_semi_infinite(
        |x| {
            let ph = phi(x, pt.a);
            let j = bessel_at(bp, x * pt.y / ph, x, series)?;
            Ok(kernel(x, pt.mu, pt.lam, pt.a) * j)
        },
        tol,
        DEFAULT_BUDGET,
    )
}

//! Shared machinery for power series evaluated through term ratios.
//!
//! A series is described by its first term and the ratio `t_{n+1} / t_n`.
//! Terms are carried as a double-double mantissa with a separate binary
//! exponent, so individual terms may leave the double range while the sum
//! stays representable. Partial sums use compensated double-double
//! accumulation.
//!
//! Truncation: after adding `t_n` the driver looks at `ρ`, an upper bound on
//! every later ratio `|t_{m+1} / t_m|`, `m ≥ n`. With `ρ < 1` the tail obeys
//! `Σ_{m>n} |t_m| ≤ |t_{n+1}| / (1 - ρ)`, and summation stops once that bound
//! drops below `tol · |S_n|`.

use serde::{Deserialize, Serialize};

use crate::compensated::{ldexp, CompensatedSum, TwoFloat};
use crate::error::{Error, Result};

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Number of terms added into `value` (at least one).
    pub terms_used: usize,
    /// Absolute bound on the neglected tail.
    pub tail_estimate: f64,
    /// `tail_estimate ≤ tol · |value|` was reached before the term budget ran out.
    pub converged: bool,
}

/// `mantissa · 2^exponent`, with the mantissa kept near unit magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTerm {
    mantissa: TwoFloat,
    exponent: i32,
}

const RENORM_THRESHOLD: i32 = 256;

impl ScaledTerm {
    pub const ZERO: ScaledTerm = ScaledTerm {
        mantissa: TwoFloat::ZERO,
        exponent: 0,
    };

    pub fn from_two(mantissa: TwoFloat) -> Self {
        ScaledTerm {
            mantissa,
            exponent: 0,
        }
        .renormalized()
    }

    pub fn from_f64(x: f64) -> Self {
        Self::from_two(TwoFloat::from(x))
    }

    /// Builds `sign · exp(ln_abs)` without overflow for any finite `ln_abs`.
    pub fn from_log(ln_abs: f64, sign: f64) -> Self {
        if sign == 0.0 || ln_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        let log2 = ln_abs / std::f64::consts::LN_2;
        let exponent = log2.floor();
        let frac = ln_abs - exponent * std::f64::consts::LN_2;
        ScaledTerm {
            mantissa: TwoFloat::from(sign.signum() * frac.exp()),
            exponent: exponent as i32,
        }
    }

    /// Prefers the direct value when it is a normal double, else the log form.
    pub fn from_direct_or_log(direct: f64, ln_abs: impl FnOnce() -> f64, sign: f64) -> Self {
        if direct.is_normal() || direct == 0.0 {
            Self::from_f64(direct)
        } else {
            Self::from_log(ln_abs(), sign)
        }
    }

    fn renormalized(mut self) -> Self {
        let hi = self.mantissa.hi();
        if hi != 0.0 && hi.is_finite() {
            let e = hi.abs().log2().floor() as i32;
            if e.abs() > RENORM_THRESHOLD {
                self.mantissa = self.mantissa.scale_pow2(-e);
                self.exponent += e;
            }
        }
        self
    }

    pub fn is_zero(self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn scale(self, factor: TwoFloat) -> Self {
        ScaledTerm {
            mantissa: self.mantissa * factor,
            exponent: self.exponent,
        }
        .renormalized()
    }

    pub fn mul_term(self, other: ScaledTerm) -> Self {
        ScaledTerm {
            mantissa: self.mantissa * other.mantissa,
            exponent: self.exponent + other.exponent,
        }
        .renormalized()
    }

    /// Value in ordinary double-double range (may overflow to infinity).
    pub fn to_two(self) -> TwoFloat {
        self.mantissa.scale_pow2(self.exponent)
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa.to_f64(), self.exponent)
    }

    pub fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }

    /// `ln |t|` and sign, valid even when the value is not representable.
    pub fn ln_abs(self) -> (f64, f64) {
        let m = self.mantissa.to_f64();
        if m == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        (
            m.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2,
            m.signum(),
        )
    }

    /// `self / other` as a double, computed without leaving the scaled form.
    pub fn ratio_to(self, other: ScaledTerm) -> f64 {
        let m = self.mantissa.to_f64() / other.mantissa.to_f64();
        ldexp(m, self.exponent - other.exponent)
    }
}

/// A series given by its first term and successive term ratios.
pub trait TermSeries {
    /// Short label used in error messages.
    fn context(&self) -> &'static str;

    fn first_term(&self) -> Result<ScaledTerm>;

    /// `t_{n+1} / t_n`.
    fn ratio(&self, n: usize) -> Result<TwoFloat>;

    /// Upper bound on `|t_{m+1} / t_m|` for all `m ≥ n`, when one is available.
    ///
    /// `observed` is `|t_{n+1} / t_n|`, `previous` the same quantity one step
    /// earlier. The default accepts the observed ratio once ratios have
    /// started to decrease, which holds eventually for every series in this
    /// crate because their denominators grow faster than their numerators.
    fn ratio_bound(&self, _n: usize, observed: f64, previous: Option<f64>) -> Option<f64> {
        match previous {
            Some(p) if observed <= p => Some(observed),
            _ => None,
        }
    }
}

/// Sums `series` until the certified tail drops below `tol · |S|`.
pub fn sum_series<S: TermSeries + ?Sized>(
    series: &S,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "series tolerance must be positive, got {tol}"
        )));
    }
    if max_terms == 0 {
        return Err(Error::InvalidParams("max_terms must be at least 1".into()));
    }

    let mut term = series.first_term()?;
    let mut sum = CompensatedSum::new();
    let mut previous = None;
    let mut tail_estimate = f64::INFINITY;

    for n in 0..max_terms {
        let contribution = term.to_two();
        if !contribution.is_finite() {
            return Err(Error::NonFinite {
                context: series.context(),
                term: n,
            });
        }
        sum.add_two(contribution);
        let partial = sum.value();

        if term.is_zero() {
            // every later term carries this factor
            return Ok(SeriesResult {
                value: partial,
                terms_used: n + 1,
                tail_estimate: 0.0,
                converged: true,
            });
        }

        let ratio = series.ratio(n)?;
        if !ratio.is_finite() {
            return Err(Error::NonFinite {
                context: series.context(),
                term: n + 1,
            });
        }
        let next = term.scale(ratio);
        if next.is_zero() {
            return Ok(SeriesResult {
                value: partial,
                terms_used: n + 1,
                tail_estimate: 0.0,
                converged: true,
            });
        }

        let observed = ratio.to_f64().abs();
        if let Some(rho) = series.ratio_bound(n, observed, previous) {
            if rho < 1.0 {
                tail_estimate = next.abs_f64() / (1.0 - rho);
                if tail_estimate <= tol * partial.abs() {
                    return Ok(SeriesResult {
                        value: partial,
                        terms_used: n + 1,
                        tail_estimate,
                        converged: true,
                    });
                }
            }
        }
        previous = Some(observed);
        term = next;
    }

    Ok(SeriesResult {
        value: sum.value(),
        terms_used: max_terms,
        tail_estimate,
        converged: false,
    })
}

/// The first `count` terms produced by the ratio recurrence.
pub fn series_terms<S: TermSeries + ?Sized>(series: &S, count: usize) -> Result<Vec<ScaledTerm>> {
    let mut terms = Vec::with_capacity(count);
    if count == 0 {
        return Ok(terms);
    }
    let mut term = series.first_term()?;
    terms.push(term);
    for n in 0..count.saturating_sub(1) {
        term = term.scale(series.ratio(n)?);
        terms.push(term);
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Exponential(f64);

    impl TermSeries for Exponential {
        fn context(&self) -> &'static str {
            "exp"
        }
        fn first_term(&self) -> Result<ScaledTerm> {
            Ok(ScaledTerm::from_f64(1.0))
        }
        fn ratio(&self, n: usize) -> Result<TwoFloat> {
            Ok(TwoFloat::from(self.0) / (n as f64 + 1.0))
        }
    }

    struct Geometric(f64);

    impl TermSeries for Geometric {
        fn context(&self) -> &'static str {
            "geometric"
        }
        fn first_term(&self) -> Result<ScaledTerm> {
            Ok(ScaledTerm::from_f64(1.0))
        }
        fn ratio(&self, _n: usize) -> Result<TwoFloat> {
            Ok(TwoFloat::from(self.0))
        }
    }

    #[test]
    fn exponential_series() {
        let r = sum_series(&Exponential(1.0), 1e-15, 100).unwrap();
        assert!(r.converged);
        assert!((r.value - std::f64::consts::E).abs() < 4e-16);
        let r = sum_series(&Exponential(-20.0), 1e-15, 200).unwrap();
        assert!(((r.value - (-20f64).exp()) / (-20f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn tail_bound_is_respected_for_geometric() {
        let r = sum_series(&Geometric(0.5), 1e-12, 200).unwrap();
        assert!(r.converged);
        let err = (r.value - 2.0).abs();
        assert!(err <= r.tail_estimate);
        assert!(r.tail_estimate <= 1e-12 * r.value);
    }

    #[test]
    fn divergent_ratio_never_converges() {
        let r = sum_series(&Geometric(1.5), 1e-12, 30).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 30);
    }

    #[test]
    fn scaled_terms_survive_extreme_exponents() {
        let big = ScaledTerm::from_log(2000.0, -1.0);
        let small = ScaledTerm::from_log(-1990.0, 1.0);
        let prod = big.mul_term(small);
        assert!((prod.to_f64() + 10f64.exp()).abs() < 1e-10 * 10f64.exp());
        let (ln, sign) = big.ln_abs();
        assert_eq!(sign, -1.0);
        assert!((ln - 2000.0).abs() < 1e-12);
        assert!(
            ((big.ratio_to(ScaledTerm::from_log(1998.0, 1.0))) + 2f64.exp()).abs()
                < 1e-11 * 2f64.exp()
        );
    }

    #[test]
    fn rejects_bad_controls() {
        assert!(sum_series(&Geometric(0.5), 0.0, 10).is_err());
        assert!(sum_series(&Geometric(0.5), 1e-10, 0).is_err());
    }
}

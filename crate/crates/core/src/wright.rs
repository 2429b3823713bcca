//! Generalized Wright functions `pΨq`, their k-deformation, and `pFq`.
//!
//! ```text
//! pΨq(z) = Σ_n Π Γ(a_i + α_i n) / Π Γ(b_j + β_j n) · z^n / n!
//! ```
//!
//! The k-variant replaces every Γ by Γ_k with a common scale. Construction
//! rejects specs whose margin `Σβ_j − Σα_i` is at most −1 and specs that would
//! put a Γ argument on the nonpositive axis for some `n ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::compensated::TwoFloat;
use crate::error::{Error, Result};
use crate::kgamma::{k_gamma, k_gamma_ratio_two, log_k_gamma, pochhammer_product, KScale};
use crate::series::{series_terms, sum_series, ScaledTerm, SeriesResult, TermSeries};

/// A `(parameter, weight)` pair.
pub type WrightPair = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WrightSpec {
    upper: Vec<WrightPair>,
    lower: Vec<WrightPair>,
    k_scale: f64,
}

/// `Σβ_j − Σα_i`.
pub fn convergence_margin(upper: &[WrightPair], lower: &[WrightPair]) -> f64 {
    lower.iter().map(|p| p.1).sum::<f64>() - upper.iter().map(|p| p.1).sum::<f64>()
}

fn check_pairs(pairs: &[WrightPair], side: &str) -> Result<()> {
    for &(a, alpha) in pairs {
        if !a.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidParams(format!(
                "{side} pair ({a}, {alpha}) is not finite"
            )));
        }
        if a <= 0.0 || alpha < 0.0 {
            return Err(Error::InvalidParams(format!(
                "{side} pair ({a}, {alpha}) puts a Gamma argument on the nonpositive axis"
            )));
        }
    }
    Ok(())
}

impl WrightSpec {
    /// Classical spec (`k = 1`).
    pub fn new(upper: Vec<WrightPair>, lower: Vec<WrightPair>) -> Result<Self> {
        Self::with_k(upper, lower, KScale::ONE)
    }

    pub fn with_k(upper: Vec<WrightPair>, lower: Vec<WrightPair>, k: KScale) -> Result<Self> {
        let margin = convergence_margin(&upper, &lower);
        if !(margin > -1.0) {
            return Err(Error::InvalidParams(format!(
                "convergence margin {margin} must exceed -1"
            )));
        }
        Self::unchecked(upper, lower, k)
    }

    /// Skips the margin guard; the caller is responsible for the radius of
    /// convergence.
    fn unchecked(upper: Vec<WrightPair>, lower: Vec<WrightPair>, k: KScale) -> Result<Self> {
        check_pairs(&upper, "upper")?;
        check_pairs(&lower, "lower")?;
        Ok(WrightSpec {
            upper,
            lower,
            k_scale: k.get(),
        })
    }

    pub fn upper(&self) -> &[WrightPair] {
        &self.upper
    }

    pub fn lower(&self) -> &[WrightPair] {
        &self.lower
    }

    pub fn k_scale(&self) -> KScale {
        KScale::new(self.k_scale).expect("validated k-scale")
    }

    pub fn convergence_margin(&self) -> f64 {
        convergence_margin(&self.upper, &self.lower)
    }
}

/// Ψ-series with an optional constant prefactor.
pub(crate) struct WrightSeries<'a> {
    spec: &'a WrightSpec,
    z: f64,
    prefactor: ScaledTerm,
}

impl<'a> WrightSeries<'a> {
    pub(crate) fn new(spec: &'a WrightSpec, z: f64) -> Self {
        WrightSeries {
            spec,
            z,
            prefactor: ScaledTerm::from_f64(1.0),
        }
    }

    pub(crate) fn with_prefactor(mut self, prefactor: ScaledTerm) -> Self {
        self.prefactor = prefactor;
        self
    }

    fn gamma_quotient(&self) -> Result<ScaledTerm> {
        let k = self.spec.k_scale();
        let mut direct = TwoFloat::ONE;
        let mut representable = true;
        for &(a, _) in &self.spec.upper {
            match k_gamma(a, k) {
                Ok(g) if g.is_normal() => direct = direct * g,
                _ => representable = false,
            }
        }
        for &(b, _) in &self.spec.lower {
            match k_gamma(b, k) {
                Ok(g) if g.is_normal() => direct = direct / g,
                _ => representable = false,
            }
        }
        if representable && direct.is_finite() && direct.hi().is_normal() {
            return Ok(ScaledTerm::from_two(direct));
        }
        let mut log = 0.0;
        for &(a, _) in &self.spec.upper {
            log += log_k_gamma(a, k)?;
        }
        for &(b, _) in &self.spec.lower {
            log -= log_k_gamma(b, k)?;
        }
        Ok(ScaledTerm::from_log(log, 1.0))
    }
}

impl TermSeries for WrightSeries<'_> {
    fn context(&self) -> &'static str {
        "Wright"
    }

    fn first_term(&self) -> Result<ScaledTerm> {
        Ok(self.gamma_quotient()?.mul_term(self.prefactor))
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        let k = self.spec.k_scale();
        let nf = n as f64;
        let mut ratio = TwoFloat::from(self.z) / (nf + 1.0);
        for &(a, alpha) in &self.spec.upper {
            let arg = TwoFloat::product(alpha, nf) + a;
            ratio = ratio * k_gamma_ratio_two(arg, alpha, k)?;
        }
        for &(b, beta) in &self.spec.lower {
            let arg = TwoFloat::product(beta, nf) + b;
            ratio = ratio / k_gamma_ratio_two(arg, beta, k)?;
        }
        Ok(ratio)
    }
}

/// Classical `pΨq(z)`; the spec must have `k = 1`.
pub fn eval_wright(s: &WrightSpec, z: f64, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if s.k_scale != 1.0 {
        return Err(Error::InvalidParams(format!(
            "eval_wright needs k = 1, got {}; use eval_k_wright",
            s.k_scale
        )));
    }
    eval_k_wright(s, z, tol, max_terms)
}

/// `Σ Π Γ_k(a_i + α_i n) / Π Γ_k(b_j + β_j n) · z^n / n!`.
pub fn eval_k_wright(s: &WrightSpec, z: f64, tol: f64, max_terms: usize) -> Result<SeriesResult> {
    if !z.is_finite() {
        return Err(Error::InvalidParams(format!(
            "argument must be finite, got {z}"
        )));
    }
    sum_series(&WrightSeries::new(s, z), tol, max_terms)
}

pub(crate) fn wright_terms(series: &WrightSeries<'_>, count: usize) -> Result<Vec<ScaledTerm>> {
    series_terms(series, count)
}

/// Rising factorial `(λ)_n = λ (λ+1) ... (λ+n-1)`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    pochhammer_product(TwoFloat::from(x), n, 1.0).to_f64()
}

struct HypergeometricSeries<'a> {
    upper: &'a [f64],
    lower: &'a [f64],
    z: f64,
}

impl TermSeries for HypergeometricSeries<'_> {
    fn context(&self) -> &'static str {
        "hypergeometric"
    }

    fn first_term(&self) -> Result<ScaledTerm> {
        Ok(ScaledTerm::from_f64(1.0))
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        let nf = n as f64;
        let mut ratio = TwoFloat::from(self.z) / (nf + 1.0);
        for &a in self.upper {
            ratio = ratio * TwoFloat::sum(a, nf);
        }
        for &b in self.lower {
            ratio = ratio / TwoFloat::sum(b, nf);
        }
        Ok(ratio)
    }

    /// Pairs each numerator `a + m` with a denominator `d + m` (lower
    /// parameters first, then `m + 1` from `n!`). Each quotient is monotone in
    /// `m` with limit 1, so it is bounded by the larger of its value at `m = n`
    /// and 1; unpaired denominators only shrink.
    fn ratio_bound(&self, n: usize, observed: f64, previous: Option<f64>) -> Option<f64> {
        let nf = n as f64;
        let shifted_positive = self.upper.iter().chain(self.lower).all(|&x| x + nf > 0.0);
        if !shifted_positive {
            return match previous {
                Some(p) if observed <= p => Some(observed),
                _ => None,
            };
        }
        let denominators: Vec<f64> = self
            .lower
            .iter()
            .map(|&b| b + nf)
            .chain(std::iter::once(nf + 1.0))
            .collect();
        let mut bound = self.z.abs();
        for (i, d) in denominators.iter().enumerate() {
            match self.upper.get(i) {
                Some(&a) => bound *= ((a + nf) / d).max(1.0),
                None => bound /= d,
            }
        }
        Some(bound)
    }
}

/// `pFq(a; b; z) = Σ Π (a_i)_n / Π (b_j)_n · z^n / n!` for `p ≤ q`, or
/// `p = q + 1` with `|z| < 1`.
pub fn eval_pfq(
    upper: &[f64],
    lower: &[f64],
    z: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    let (p, q) = (upper.len(), lower.len());
    if !z.is_finite() || upper.iter().chain(lower).any(|x| !x.is_finite()) {
        return Err(Error::InvalidParams("pFq parameters must be finite".into()));
    }
    if p > q + 1 || (p == q + 1 && z.abs() >= 1.0) {
        return Err(Error::InvalidParams(format!(
            "{p}F{q} diverges at z = {z}; need p <= q, or p = q + 1 with |z| < 1"
        )));
    }
    if let Some(b) = lower.iter().find(|&&b| b <= 0.0 && b.fract() == 0.0) {
        return Err(Error::InvalidParams(format!(
            "lower parameter {b} is a nonpositive integer"
        )));
    }
    sum_series(&HypergeometricSeries { upper, lower, z }, tol, max_terms)
}

/// Relative discrepancy between `pΨq` with unit weights and
/// `Π Γ(a_i) / Π Γ(b_j) · pFq`.
///
/// The case `p = q + 1` (margin exactly −1) is evaluated inside the unit disc,
/// where both series converge.
pub fn wright_pfq_reduction_check(upper: &[f64], lower: &[f64], z: f64) -> Result<f64> {
    const TOL: f64 = 1e-16;
    const MAX_TERMS: usize = 5000;

    let pairs = |xs: &[f64]| xs.iter().map(|&x| (x, 1.0)).collect::<Vec<_>>();
    let spec = if upper.len() == lower.len() + 1 && z.abs() < 1.0 {
        WrightSpec::unchecked(pairs(upper), pairs(lower), KScale::ONE)?
    } else {
        WrightSpec::new(pairs(upper), pairs(lower))?
    };
    let psi = sum_series(&WrightSeries::new(&spec, z), TOL, MAX_TERMS)?;
    let f = eval_pfq(upper, lower, z, TOL, MAX_TERMS)?;

    let mut scale = TwoFloat::ONE;
    for &a in upper {
        scale = scale * k_gamma(a, KScale::ONE)?;
    }
    for &b in lower {
        scale = scale / k_gamma(b, KScale::ONE)?;
    }
    let reduced = scale.to_f64() * f.value;
    if psi.value == reduced {
        return Ok(0.0);
    }
    Ok(((psi.value - reduced) / reduced).abs())
}

//! Generalized modified k-Bessel function of the first kind
//!
//! ```text
//! J_{k,ν}^{c,γ,λ₁}(z) = Σ_n c^n (γ)_{n,k} / Γ_k(λ₁ n + ν + (b+1)/2) · (z/2)^{ν+2n} / (n!)²
//! ```
//!
//! and the base k-Bessel series
//!
//! ```text
//! J_{k,ν}^{(γ),(λ)}(z) = Σ_n (γ)_{n,k} / Γ_k(λ n + ν + 1) · (-1)^n (z/2)^n / (n!)²
//! ```
//!
//! whose argument power is the first power of `z/2`.

use serde::{Deserialize, Serialize};

use crate::compensated::TwoFloat;
use crate::error::{domain, Error, Result};
use crate::kgamma::{
    k_gamma, k_gamma_ratio_two, log_classical_gamma, log_k_gamma, log_k_pochhammer, KScale,
};
use crate::series::{series_terms, sum_series, ScaledTerm, SeriesResult, TermSeries};

/// Parameters `(k, ν, γ, λ₁, c, b)` of the generalized modified k-Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    pub k: f64,
    pub nu: f64,
    pub gamma: f64,
    pub lambda1: f64,
    pub c: f64,
    pub b: f64,
}

impl BesselParams {
    pub fn new(k: f64, nu: f64, gamma: f64, lambda1: f64, c: f64, b: f64) -> Result<Self> {
        let p = BesselParams {
            k,
            nu,
            gamma,
            lambda1,
            c,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    /// `k = λ₁ = γ = b = 1`: with `c = -1` the series is Bessel `J_ν`, with
    /// `c = 1` the modified Bessel `I_ν`.
    pub fn classical(nu: f64, c: f64) -> Result<Self> {
        Self::new(1.0, nu, 1.0, 1.0, c, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("k", self.k),
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("lambda1", self.lambda1),
            ("c", self.c),
            ("b", self.b),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "{name} must be finite, got {v}"
            )));
        }
        if self.k <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "k must be positive, got {}",
                self.k
            )));
        }
        if self.lambda1 <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda1 must be positive, got {}",
                self.lambda1
            )));
        }
        if self.nu < 0.0 {
            return Err(Error::InvalidParams(format!(
                "nu must be nonnegative, got {}",
                self.nu
            )));
        }
        if self.gamma_base() <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "nu + (b+1)/2 must be positive, got {}",
                self.gamma_base()
            )));
        }
        Ok(())
    }

    pub fn k_scale(&self) -> KScale {
        KScale::new(self.k).expect("validated k")
    }

    /// `ν + (b+1)/2`, the Γ_k argument of the leading term.
    pub fn gamma_base(&self) -> f64 {
        self.nu + (self.b + 1.0) / 2.0
    }

    fn gamma_argument(&self, n: usize) -> TwoFloat {
        TwoFloat::product(self.lambda1, n as f64) + self.nu + (self.b + 1.0) / 2.0
    }

    /// Ratio of consecutive coefficients without the argument power:
    /// `c (γ + n k) / ((n+1)² R_n)`, `R_n = Γ_k(a_{n+1}) / Γ_k(a_n)`.
    pub(crate) fn coefficient_ratio(&self, n: usize) -> Result<TwoFloat> {
        let pochhammer_step = TwoFloat::product(n as f64, self.k) + self.gamma;
        let m = n as f64 + 1.0;
        let r_n = k_gamma_ratio_two(self.gamma_argument(n), self.lambda1, self.k_scale())?;
        Ok(pochhammer_step * self.c / (r_n * (m * m)))
    }

    /// `1 / Γ_k(ν + (b+1)/2)` as a scaled term.
    pub(crate) fn leading_coefficient(&self) -> Result<ScaledTerm> {
        let base = self.gamma_base();
        let direct = k_gamma(base, self.k_scale())
            .map(|g| 1.0 / g)
            .unwrap_or(0.0);
        let log = log_k_gamma(base, self.k_scale())?;
        Ok(ScaledTerm::from_direct_or_log(direct, || -log, 1.0))
    }
}

/// `(z/2)^p` as a scaled term; `0^0 = 1`.
pub(crate) fn half_power(z: f64, p: f64) -> ScaledTerm {
    if z == 0.0 {
        return if p == 0.0 {
            ScaledTerm::from_f64(1.0)
        } else {
            ScaledTerm::ZERO
        };
    }
    let half = z / 2.0;
    ScaledTerm::from_direct_or_log(half.powf(p), || p * half.ln(), 1.0)
}

struct GmkSeries<'a> {
    params: &'a BesselParams,
    z: f64,
}

impl TermSeries for GmkSeries<'_> {
    fn context(&self) -> &'static str {
        "generalized modified k-Bessel"
    }

    fn first_term(&self) -> Result<ScaledTerm> {
        Ok(half_power(self.z, self.params.nu).mul_term(self.params.leading_coefficient()?))
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        let half = TwoFloat::from(self.z / 2.0);
        Ok(self.params.coefficient_ratio(n)? * half.square())
    }
}

fn check_z(z: f64) -> Result<()> {
    if z.is_nan() || z < 0.0 {
        Err(domain(
            "eval_gmk_bessel",
            format!("z must be nonnegative, got {z}"),
        ))
    } else {
        Ok(())
    }
}

/// Truncated series for `J_{k,ν}^{c,γ,λ₁}(z)`, `z ≥ 0`.
pub fn eval_gmk_bessel(
    p: &BesselParams,
    z: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    p.validate()?;
    check_z(z)?;
    sum_series(&GmkSeries { params: p, z }, tol, max_terms)
}

/// Terms `t_0 .. t_{count-1}` of the generalized series as produced by the
/// evaluator's ratio recurrence.
pub fn gmk_bessel_terms(p: &BesselParams, z: f64, count: usize) -> Result<Vec<f64>> {
    p.validate()?;
    check_z(z)?;
    Ok(series_terms(&GmkSeries { params: p, z }, count)?
        .into_iter()
        .map(|t| t.to_f64())
        .collect())
}

/// `(ln |t_n|, sign)` of the n-th generalized series term from the closed term
/// formula, independent of the recurrence.
pub fn gmk_bessel_log_term(p: &BesselParams, n: u32, z: f64) -> Result<(f64, f64)> {
    p.validate()?;
    check_z(z)?;
    let k = p.k_scale();
    let nf = n as f64;
    let (poch_log, poch_sign) = log_k_pochhammer(p.gamma, n, k);
    let c_sign = if n % 2 == 1 { p.c.signum() } else { 1.0 };
    let c_log = if n == 0 { 0.0 } else { nf * p.c.abs().ln() };
    let power = p.nu + 2.0 * nf;
    let z_log = if z == 0.0 && power == 0.0 {
        0.0
    } else {
        power * (z / 2.0).ln()
    };
    let log = c_log + poch_log + z_log
        - log_k_gamma(p.lambda1 * nf + p.gamma_base(), k)?
        - 2.0 * log_classical_gamma(nf + 1.0)?;
    Ok((log, c_sign * poch_sign))
}

/// The recurrence ratio `t_{n+1} / t_n = c (γ + n k) (z/2)² / ((n+1)² R_n)`.
pub fn gmk_bessel_term_ratio(p: &BesselParams, n: usize, z: f64) -> Result<f64> {
    p.validate()?;
    let half = TwoFloat::from(z / 2.0);
    Ok((p.coefficient_ratio(n)? * half.square()).to_f64())
}

struct KBesselFirstSeries {
    k: KScale,
    nu: f64,
    gamma: f64,
    lambda: f64,
    z: f64,
}

impl TermSeries for KBesselFirstSeries {
    fn context(&self) -> &'static str {
        "k-Bessel first kind"
    }

    fn first_term(&self) -> Result<ScaledTerm> {
        let base = self.nu + 1.0;
        let direct = k_gamma(base, self.k).map(|g| 1.0 / g).unwrap_or(0.0);
        let log = log_k_gamma(base, self.k)?;
        Ok(ScaledTerm::from_direct_or_log(direct, || -log, 1.0))
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        let step = TwoFloat::product(n as f64, self.k.get()) + self.gamma;
        let arg = TwoFloat::product(self.lambda, n as f64) + self.nu + 1.0;
        let r_n = k_gamma_ratio_two(arg, self.lambda, self.k)?;
        let m = n as f64 + 1.0;
        Ok(-(step * (self.z / 2.0)) / (r_n * (m * m)))
    }
}

/// Truncated series for the k-Bessel function of the first kind, with the
/// `(z/2)^n` argument power.
pub fn eval_k_bessel_first(
    k: KScale,
    nu: f64,
    gamma: f64,
    lambda: f64,
    z: f64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParams(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if !(nu + 1.0 > 0.0) || !gamma.is_finite() || !z.is_finite() {
        return Err(Error::InvalidParams(format!(
            "need nu + 1 > 0 and finite gamma, z (nu = {nu}, gamma = {gamma}, z = {z})"
        )));
    }
    sum_series(
        &KBesselFirstSeries {
            k,
            nu,
            gamma,
            lambda,
            z,
        },
        tol,
        max_terms,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn vanishes_at_origin_for_positive_order() {
        let p = BesselParams::new(2.0, 1.0, 1.5, 2.0, 1.0, 2.0).unwrap();
        let r = eval_gmk_bessel(&p, 0.0, 1e-12, 400).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
        assert_eq!(r.terms_used, 1);
    }

    #[test]
    fn zero_order_at_origin_is_leading_coefficient() {
        let p = BesselParams::new(2.0, 0.0, 1.5, 2.0, 1.0, 2.0).unwrap();
        let r = eval_gmk_bessel(&p, 0.0, 1e-12, 400).unwrap();
        let expect = 1.0 / k_gamma(1.5, KScale::new(2.0).unwrap()).unwrap();
        assert!(rel(r.value, expect) < 1e-15);
    }

    #[test]
    fn classical_j0_and_i1() {
        let p = BesselParams::classical(0.0, -1.0).unwrap();
        let r = eval_gmk_bessel(&p, 2.0, 1e-15, 400).unwrap();
        assert!(rel(r.value, 0.223_890_779_141_235_668_05) < 1e-14);
        let p = BesselParams::classical(1.0, 1.0).unwrap();
        let r = eval_gmk_bessel(&p, 1.0, 1e-15, 400).unwrap();
        assert!(rel(r.value, 0.565_159_103_992_485_027_21) < 1e-14);
    }

    #[test]
    fn c_zero_keeps_only_leading_term() {
        let p = BesselParams::new(2.0, 0.7, 1.5, 1.0, 0.0, 2.0).unwrap();
        let z = 1.3f64;
        let r = eval_gmk_bessel(&p, z, 1e-12, 400).unwrap();
        let expect = (z / 2.0).powf(0.7) / k_gamma(0.7 + 1.5, KScale::new(2.0).unwrap()).unwrap();
        assert_eq!(r.terms_used, 1);
        assert!(rel(r.value, expect) < 1e-15);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(BesselParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(BesselParams::new(1.0, 1.0, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(BesselParams::new(1.0, -0.5, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(BesselParams::new(1.0, 0.0, 1.0, 1.0, 1.0, -1.0).is_err());
        assert!(BesselParams::new(1.0, f64::NAN, 1.0, 1.0, 1.0, 1.0).is_err());
        let p = BesselParams::classical(1.0, -1.0).unwrap();
        assert!(eval_gmk_bessel(&p, -1.0, 1e-12, 100).is_err());
    }

    #[test]
    fn negative_integer_gamma_terminates() {
        // (−2)_{n,1} vanishes for n ≥ 3: a polynomial in z
        let p = BesselParams::new(1.0, 0.0, -2.0, 1.0, 1.0, 1.0).unwrap();
        let z = 3.0f64;
        let r = eval_gmk_bessel(&p, z, 1e-14, 400).unwrap();
        let q = (z / 2.0).powi(2);
        let expect = 1.0 + (-2.0) * q / 1.0 + (-2.0 * -1.0) * q * q / (4.0 * 2.0);
        assert!(r.converged);
        assert!(rel(r.value, expect) < 1e-15);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn recurrence_matches_closed_term_formula() {
        let cases = [
            BesselParams::new(1.0, 0.5, 1.0, 1.0, -1.0, 1.0).unwrap(),
            BesselParams::new(2.0, 1.0, 1.5, 2.0, 1.0, 2.0).unwrap(),
            BesselParams::new(0.5, 0.25, 0.3, 1.5, -2.0, 0.0).unwrap(),
            BesselParams::new(3.0, 2.0, 4.0, 0.7, 0.5, 3.0).unwrap(),
        ];
        for p in &cases {
            let z = 3.0;
            let terms = gmk_bessel_terms(p, z, 101).unwrap();
            for (n, &t) in terms.iter().enumerate() {
                let (log, sign) = gmk_bessel_log_term(p, n as u32, z).unwrap();
                let direct = sign * log.exp();
                if direct == 0.0 {
                    continue;
                }
                assert!(rel(t, direct) < 1e-12, "{p:?} n = {n}: {t} vs {direct}");
            }
        }
    }

    #[test]
    fn term_ratio_matches_terms() {
        let p = BesselParams::new(2.0, 1.0, 1.5, 1.0, 1.0, 2.0).unwrap();
        let terms = gmk_bessel_terms(&p, 1.7, 5).unwrap();
        for n in 0..4 {
            let r = gmk_bessel_term_ratio(&p, n, 1.7).unwrap();
            assert!(rel(terms[n + 1] / terms[n], r) < 1e-14);
        }
    }

    #[test]
    fn first_kind_examples() {
        let k1 = KScale::ONE;
        let r = eval_k_bessel_first(k1, 0.0, 1.0, 1.0, 0.0, 1e-14, 100).unwrap();
        assert_eq!(r.value, 1.0);
        let k2 = KScale::new(2.0).unwrap();
        let r = eval_k_bessel_first(k2, 1.3, 0.4, 1.0, 0.0, 1e-14, 100).unwrap();
        assert!(rel(r.value, 1.0 / k_gamma(2.3, k2).unwrap()) < 1e-15);

        // (1)_{n,1} / Γ(n+1) = 1 leaves Σ (−1)^n / (n!)² at z/2 = 1
        let r = eval_k_bessel_first(k1, 0.0, 1.0, 1.0, 2.0, 1e-15, 100).unwrap();
        assert!(rel(r.value, 0.223_890_779_141_235_668_05) < 1e-14);

        let r = eval_k_bessel_first(k2, 1.0, 2.0, 1.0, 1.0, 1e-15, 200).unwrap();
        assert!(r.converged);
        assert!(rel(r.value, 0.412_581_073_082_860_997_68) < 1e-14);
    }

    #[test]
    fn large_argument_terms_stay_finite() {
        let p = BesselParams::new(1.0, 0.5, 1.0, 2.0, 1.0, 1.0).unwrap();
        let r = eval_gmk_bessel(&p, 60.0, 1e-12, 400).unwrap();
        assert!(r.converged);
        assert!(r.value.is_finite() && r.value > 0.0);
    }
}

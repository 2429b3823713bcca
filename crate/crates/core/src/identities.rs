//! Right-hand sides of the two integral theorems and the verification harness.
//!
//! Two closed forms are evaluated for each theorem:
//!
//! * the canonical form, obtained by applying Oberhettinger's formula to each
//!   term of the Bessel series. It equals the left-hand side by term-wise
//!   integration and is the reference the quadrature is judged against;
//! * the printed k-Wright form, evaluated verbatim and compared against the
//!   canonical one.
//!
//! [`verify`] runs quadrature and both right-hand sides and condenses the
//! comparison into an [`IdentityReport`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::compensated::{CompensatedSum, TwoFloat};
use crate::error::{Error, Result};
use crate::kbessel::{eval_gmk_bessel, half_power, BesselParams};
use crate::kgamma::{classical_gamma, log_classical_gamma};
use crate::quadrature::{
    log_oberhettinger, oberhettinger_closed_form, oberhettinger_lhs, theorem1_lhs, theorem2_lhs,
    ObParams, QuadResult, SeriesControl, TheoremPoint,
};
use crate::series::{series_terms, sum_series, ScaledTerm, SeriesResult, TermSeries};
use crate::wright::{wright_terms, WrightSeries, WrightSpec};

/// Number of leading terms compared in the printed-form diagnostics.
pub const DIAGNOSTIC_TERMS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    Oberhettinger,
    Theorem1,
    Theorem2,
    Corollary1,
    Corollary2,
    Corollary3,
    Corollary4,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::Oberhettinger,
        IdentityId::Theorem1,
        IdentityId::Theorem2,
        IdentityId::Corollary1,
        IdentityId::Corollary2,
        IdentityId::Corollary3,
        IdentityId::Corollary4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Oberhettinger => "oberhettinger",
            IdentityId::Theorem1 => "theorem1",
            IdentityId::Theorem2 => "theorem2",
            IdentityId::Corollary1 => "corollary1",
            IdentityId::Corollary2 => "corollary2",
            IdentityId::Corollary3 => "corollary3",
            IdentityId::Corollary4 => "corollary4",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown identity '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Match,
    /// The left-hand side agrees with the canonical series but not with the
    /// printed form.
    CanonicalOnly,
    Mismatch,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::CanonicalOnly => "canonical_only",
            Verdict::Mismatch => "mismatch",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// All ten scalar parameters of an identity evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub k: f64,
    pub nu: f64,
    pub gamma: f64,
    pub lambda1: f64,
    pub c: f64,
    pub b: f64,
    pub mu: f64,
    pub lam: f64,
    pub a: f64,
    pub y: f64,
}

impl Default for IdentityParams {
    fn default() -> Self {
        IdentityParams {
            k: 1.0,
            nu: 1.0,
            gamma: 1.0,
            lambda1: 1.0,
            c: -1.0,
            b: 1.0,
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        }
    }
}

impl IdentityParams {
    pub fn bessel(&self) -> Result<BesselParams> {
        BesselParams::new(self.k, self.nu, self.gamma, self.lambda1, self.c, self.b)
    }

    pub fn point(&self) -> TheoremPoint {
        TheoremPoint {
            mu: self.mu,
            lam: self.lam,
            a: self.a,
            y: self.y,
        }
    }

    pub fn oberhettinger(&self) -> Result<ObParams> {
        ObParams::new(self.mu, self.lam, self.a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative quadrature tolerance.
    pub quad: f64,
    /// Relative series truncation tolerance.
    pub series: f64,
    /// Relative agreement required between left- and right-hand sides.
    #[serde(rename = "match")]
    pub match_: f64,
    pub max_terms: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            quad: 1e-8,
            series: 1e-10,
            match_: 1e-5,
            max_terms: 400,
        }
    }
}

impl Tolerances {
    fn series_control(&self) -> SeriesControl {
        SeriesControl {
            tol: self.series,
            max_terms: self.max_terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub params: IdentityParams,
    pub lhs: Option<f64>,
    pub rhs_canonical: Option<f64>,
    pub rhs_paper: Option<f64>,
    pub rel_diff_canonical: Option<f64>,
    pub rel_diff_paper: Option<f64>,
    pub verdict: Verdict,
    pub tolerances: Tolerances,
    pub diagnostics: String,
    /// Printed-form term over canonical term for the first few `n`.
    pub paper_term_ratios: Option<Vec<Option<f64>>>,
    pub quad_evals: usize,
    pub series_terms: usize,
}

/// `|a − b| / |b|`, zero when the two agree exactly.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

#[derive(Clone, Copy)]
enum Coefficients<'a> {
    Generalized(&'a BesselParams),
    /// `(−1)^n / (n! Γ(n + ν + 1))`, the classical Bessel `J_ν` coefficients.
    ClassicalJ {
        nu: f64,
    },
}

impl Coefficients<'_> {
    fn nu(&self) -> f64 {
        match self {
            Coefficients::Generalized(bp) => bp.nu,
            Coefficients::ClassicalJ { nu } => *nu,
        }
    }

    fn leading(&self) -> Result<ScaledTerm> {
        match self {
            Coefficients::Generalized(bp) => bp.leading_coefficient(),
            Coefficients::ClassicalJ { nu } => {
                Ok(ScaledTerm::from_log(-log_classical_gamma(nu + 1.0)?, 1.0))
            }
        }
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        match self {
            Coefficients::Generalized(bp) => bp.coefficient_ratio(n),
            Coefficients::ClassicalJ { nu } => {
                let m = n as f64 + 1.0;
                Ok(-(TwoFloat::ONE / (TwoFloat::sum(m, *nu) * m)))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Theorem {
    First,
    Second,
}

/// Σ over n of the Oberhettinger image of each Bessel series term.
struct CanonicalSeries<'a> {
    coefficients: Coefficients<'a>,
    pt: TheoremPoint,
    theorem: Theorem,
}

impl TermSeries for CanonicalSeries<'_> {
    fn context(&self) -> &'static str {
        match self.theorem {
            Theorem::First => "first theorem canonical series",
            Theorem::Second => "second theorem canonical series",
        }
    }

    fn first_term(&self) -> Result<ScaledTerm> {
        let nu = self.coefficients.nu();
        let (mu0, lam0) = match self.theorem {
            Theorem::First => (self.pt.mu, self.pt.lam + nu),
            Theorem::Second => (self.pt.mu + nu, self.pt.lam + nu),
        };
        let ob = ScaledTerm::from_log(log_oberhettinger(mu0, lam0, self.pt.a)?, 1.0);
        Ok(half_power(self.pt.y, nu)
            .mul_term(self.coefficients.leading()?)
            .mul_term(ob))
    }

    fn ratio(&self, n: usize) -> Result<TwoFloat> {
        let nu = self.coefficients.nu();
        let pt = &self.pt;
        let two_n = 2.0 * n as f64;
        let big_l = TwoFloat::from(pt.lam) + nu + two_n;
        let half_y = TwoFloat::from(pt.y / 2.0);
        let base = self.coefficients.ratio(n)? * half_y.square() * ((big_l + 2.0) / big_l);
        let ob = match self.theorem {
            Theorem::First => {
                let a_sq = TwoFloat::product(pt.a, pt.a);
                let l_minus = big_l - TwoFloat::from(pt.mu);
                let l_plus = big_l + pt.mu;
                (l_minus * (l_minus + 1.0)) / ((l_plus + 1.0) * (l_plus + 2.0) * a_sq)
            }
            Theorem::Second => {
                let big_m = TwoFloat::from(pt.mu) + nu + two_n;
                let two_m = big_m * 2.0;
                let sum = big_l + big_m;
                let num = two_m * (two_m + 1.0) * (two_m + 2.0) * (two_m + 3.0);
                let den = (sum + 1.0) * (sum + 2.0) * (sum + 3.0) * (sum + 4.0);
                num / den / 4.0
            }
        };
        Ok(base * ob)
    }
}

fn canonical_series<'a>(
    coefficients: Coefficients<'a>,
    pt: &TheoremPoint,
    theorem: Theorem,
) -> CanonicalSeries<'a> {
    CanonicalSeries {
        coefficients,
        pt: *pt,
        theorem,
    }
}

/// Canonical right-hand side of the first theorem.
pub fn theorem1_rhs_canonical(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    pt.check_theorem1(bp)?;
    let s = canonical_series(Coefficients::Generalized(bp), pt, Theorem::First);
    sum_series(&s, series.tol, series.max_terms)
}

/// Canonical right-hand side of the second theorem.
pub fn theorem2_rhs_canonical(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    pt.check_theorem2(bp)?;
    let s = canonical_series(Coefficients::Generalized(bp), pt, Theorem::Second);
    sum_series(&s, series.tol, series.max_terms)
}

/// Canonical series with classical `J_ν` coefficients in place of the
/// generalized ones (`k = λ₁ = γ = b = 1`, `c = −1`), built independently of
/// [`BesselParams`].
pub fn classical_theorem_rhs(
    nu: f64,
    pt: &TheoremPoint,
    second: bool,
    series: SeriesControl,
) -> Result<SeriesResult> {
    let theorem = if second {
        Theorem::Second
    } else {
        Theorem::First
    };
    let s = canonical_series(Coefficients::ClassicalJ { nu }, pt, theorem);
    sum_series(&s, series.tol, series.max_terms)
}

/// `ln` of a positive prefactor `2^{e2} a^{ea} y^{ν} k^{ek} · gamma_part`.
#[allow(clippy::too_many_arguments)]
fn prefactor(
    exp2: f64,
    a: f64,
    exp_a: f64,
    y: f64,
    nu: f64,
    k: f64,
    exp_k: f64,
    log_gamma: f64,
) -> ScaledTerm {
    let y_part = if y == 0.0 {
        if nu == 0.0 {
            0.0
        } else {
            return ScaledTerm::ZERO;
        }
    } else {
        nu * y.ln()
    };
    let log = exp2 * std::f64::consts::LN_2 + exp_a * a.ln() + y_part + exp_k * k.ln() + log_gamma;
    ScaledTerm::from_log(log, 1.0)
}

struct PrintedForm {
    spec: WrightSpec,
    z: f64,
    prefactor: ScaledTerm,
}

impl PrintedForm {
    fn series(&self) -> WrightSeries<'_> {
        WrightSeries::new(&self.spec, self.z).with_prefactor(self.prefactor)
    }

    fn sum(&self, series: SeriesControl) -> Result<SeriesResult> {
        sum_series(&self.series(), series.tol, series.max_terms)
    }
}

fn theorem1_printed_form(bp: &BesselParams, pt: &TheoremPoint) -> Result<PrintedForm> {
    pt.check_theorem1(bp)?;
    let (k, nu, lam, mu, a, y) = (bp.k, bp.nu, pt.lam, pt.mu, pt.a, pt.y);
    let spec = WrightSpec::with_k(
        vec![(lam + nu + k, 2.0), (k * (nu + lam - mu), 2.0 * k)],
        vec![
            (bp.gamma_base(), bp.lambda1),
            (k * (1.0 + lam + nu + mu), 2.0 * k),
            (lam + nu, 2.0),
        ],
        bp.k_scale(),
    )?;
    Ok(PrintedForm {
        spec,
        z: bp.c * y * y / (4.0 * a * a),
        prefactor: prefactor(
            1.0 - nu - mu,
            a,
            mu - lam - nu,
            y,
            nu,
            k,
            -2.0 * mu,
            log_classical_gamma(2.0 * mu)?,
        ),
    })
}

fn theorem2_printed_form(bp: &BesselParams, pt: &TheoremPoint) -> Result<PrintedForm> {
    pt.check_theorem2(bp)?;
    let (k, nu, lam, mu, a, y) = (bp.k, bp.nu, pt.lam, pt.mu, pt.a, pt.y);
    let spec = WrightSpec::with_k(
        vec![(k * (2.0 * mu + 2.0 * nu), 4.0 * k), (nu + lam + k, 2.0)],
        vec![
            (nu + 1.0, bp.lambda1),
            (nu + lam, 2.0),
            (k * (1.0 + lam + mu + 2.0 * nu), 4.0 * k),
        ],
        bp.k_scale(),
    )?;
    Ok(PrintedForm {
        spec,
        z: bp.c * y * y / 4.0,
        prefactor: prefactor(
            1.0 - 2.0 * nu - mu,
            a,
            mu - lam,
            y,
            nu,
            k,
            1.0 + lam - mu,
            log_classical_gamma(lam - mu)?,
        ),
    })
}

fn require_unit_k_lambda1(bp: &BesselParams, which: &str) -> Result<()> {
    if bp.k != 1.0 || bp.lambda1 != 1.0 {
        return Err(Error::InvalidParams(format!(
            "{which} requires k = lambda1 = 1 (got k = {}, lambda1 = {})",
            bp.k, bp.lambda1
        )));
    }
    Ok(())
}

fn corollary1_form(bp: &BesselParams, pt: &TheoremPoint) -> Result<PrintedForm> {
    require_unit_k_lambda1(bp, "corollary1")?;
    pt.check_theorem1(bp)?;
    let (nu, lam, mu, a, y) = (bp.nu, pt.lam, pt.mu, pt.a, pt.y);
    let spec = WrightSpec::new(
        vec![(1.0 + lam + nu, 2.0), (nu + lam - mu, 2.0)],
        vec![
            (bp.gamma_base(), bp.lambda1),
            (1.0 + lam + nu + mu, 2.0),
            (lam + nu, 2.0),
        ],
    )?;
    Ok(PrintedForm {
        spec,
        z: -bp.c * y * y / (4.0 * a * a),
        prefactor: prefactor(
            1.0 - nu - mu,
            a,
            mu - lam - nu,
            y,
            nu,
            1.0,
            0.0,
            log_classical_gamma(2.0 * mu)?,
        ),
    })
}

fn corollary3_form(bp: &BesselParams, pt: &TheoremPoint) -> Result<PrintedForm> {
    require_unit_k_lambda1(bp, "corollary3")?;
    pt.check_theorem2(bp)?;
    let (nu, lam, mu, a, y) = (bp.nu, pt.lam, pt.mu, pt.a, pt.y);
    let spec = WrightSpec::new(
        vec![(2.0 * mu + 2.0 * nu, 4.0), (nu + lam + 1.0, 2.0)],
        vec![
            (bp.gamma_base(), bp.lambda1),
            (nu + lam, 2.0),
            (1.0 + lam + mu + 2.0 * nu, 4.0),
        ],
    )?;
    Ok(PrintedForm {
        spec,
        z: bp.c * y * y / 4.0,
        prefactor: prefactor(
            1.0 - 2.0 * nu - mu,
            a,
            mu - lam,
            y,
            nu,
            1.0,
            0.0,
            log_classical_gamma(lam - mu)?,
        ),
    })
}

/// The first theorem's right-hand side exactly as printed, a k-Wright series
/// at `c y² / (4a²)`.
pub fn theorem1_rhs_paper(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    theorem1_printed_form(bp, pt)?.sum(series)
}

/// The second theorem's right-hand side exactly as printed, a k-Wright series
/// at `c y² / 4` with lower row `(ν+1, λ₁)`.
pub fn theorem2_rhs_paper(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    theorem2_printed_form(bp, pt)?.sum(series)
}

/// The classical `₂Ψ₃` expression of the first corollary (`k = λ₁ = 1`,
/// argument `−c y² / (4a²)`).
pub fn corollary1_rhs(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    corollary1_form(bp, pt)?.sum(series)
}

/// The classical `₂Ψ₃` expression of the third corollary as printed
/// (argument `c y² / 4`, lower row `(ν + (b+1)/2, λ₁)`).
pub fn corollary3_rhs(
    bp: &BesselParams,
    pt: &TheoremPoint,
    series: SeriesControl,
) -> Result<SeriesResult> {
    corollary3_form(bp, pt)?.sum(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesselKind {
    BesselJ,
    BesselI,
}

/// Classical `Σ (±1)^n (z/2)^{ν+2n} / (n! Γ(n+ν+1))`, summed in double-double.
pub fn classical_bessel(kind: BesselKind, nu: f64, z: f64) -> Result<f64> {
    if !(nu >= 0.0) || !(z >= 0.0) || !z.is_finite() {
        return Err(Error::InvalidParams(format!(
            "classical Bessel needs nu >= 0, z >= 0 (nu = {nu}, z = {z})"
        )));
    }
    let sign = match kind {
        BesselKind::BesselJ => -1.0,
        BesselKind::BesselI => 1.0,
    };
    let leading = if nu == 0.0 { 1.0 } else { (z / 2.0).powf(nu) };
    let mut term = TwoFloat::from(leading) / classical_gamma(nu + 1.0)?;
    let q = TwoFloat::from(z / 2.0).square() * sign;
    let mut sum = CompensatedSum::new();
    for n in 0..2000 {
        sum.add_two(term);
        if term.is_zero() || (n as f64 > z && term.abs().to_f64() <= 1e-34 * sum.value().abs()) {
            return Ok(sum.value());
        }
        let m = n as f64 + 1.0;
        term = term * q / (TwoFloat::product(m, m) + m * nu);
    }
    Err(Error::NonFinite {
        context: "classical Bessel",
        term: 2000,
    })
}

/// Relative gap between the generalized series at `k = λ₁ = γ = b = 1`,
/// `c = ∓1` and the classical Bessel series.
pub fn classical_reduction_check(kind: BesselKind, nu: f64, z: f64) -> Result<f64> {
    let c = match kind {
        BesselKind::BesselJ => -1.0,
        BesselKind::BesselI => 1.0,
    };
    let p = BesselParams::classical(nu, c)?;
    let generalized = eval_gmk_bessel(&p, z, 1e-17, 2000)?;
    let reference = classical_bessel(kind, nu, z)?;
    Ok(rel_diff(generalized.value, reference))
}

/// Checks the parameter requirements of an identity without evaluating it.
pub fn check_preconditions(id: IdentityId, params: &IdentityParams) -> Result<()> {
    match id {
        IdentityId::Oberhettinger => params.oberhettinger().map(|_| ()),
        IdentityId::Theorem1 => params.point().check_theorem1(&params.bessel()?),
        IdentityId::Theorem2 => params.point().check_theorem2(&params.bessel()?),
        IdentityId::Corollary1 | IdentityId::Corollary3 => {
            let bp = negated_c(&params.bessel()?);
            require_unit_k_lambda1(&bp, id.name())?;
            if id == IdentityId::Corollary1 {
                params.point().check_theorem1(&bp)
            } else {
                params.point().check_theorem2(&bp)
            }
        }
        IdentityId::Corollary2 | IdentityId::Corollary4 => {
            let bp = params.bessel()?;
            if bp.k != 1.0 || bp.lambda1 != 1.0 || bp.gamma != 1.0 || bp.b != 1.0 || bp.c != -1.0 {
                return Err(Error::InvalidParams(format!(
                    "{id} requires k = lambda1 = gamma = b = 1 and c = -1"
                )));
            }
            if id == IdentityId::Corollary2 {
                params.point().check_theorem1(&bp)
            } else {
                params.point().check_theorem2(&bp)
            }
        }
    }
}

fn negated_c(bp: &BesselParams) -> BesselParams {
    BesselParams { c: -bp.c, ..*bp }
}

struct Evaluation {
    lhs: QuadResult,
    canonical: SeriesResult,
    paper: Option<SeriesResult>,
    term_ratios: Option<Vec<Option<f64>>>,
    notes: Vec<String>,
}

fn term_ratios(printed: &PrintedForm, canonical: &CanonicalSeries<'_>) -> Result<Vec<Option<f64>>> {
    let p = wright_terms(&printed.series(), DIAGNOSTIC_TERMS)?;
    let c = series_terms(canonical, DIAGNOSTIC_TERMS)?;
    Ok(p.iter()
        .zip(&c)
        .map(|(pt, ct)| {
            (!ct.is_zero())
                .then(|| pt.ratio_to(*ct))
                .filter(|r| r.is_finite())
        })
        .collect())
}

fn evaluate(id: IdentityId, params: &IdentityParams, tol: &Tolerances) -> Result<Evaluation> {
    let control = tol.series_control();
    if id == IdentityId::Oberhettinger {
        let ob = params.oberhettinger()?;
        let lhs = oberhettinger_lhs(&ob, tol.quad)?;
        let closed = oberhettinger_closed_form(&ob)?;
        return Ok(Evaluation {
            lhs,
            canonical: SeriesResult {
                value: closed,
                terms_used: 1,
                tail_estimate: 0.0,
                converged: true,
            },
            paper: None,
            term_ratios: None,
            notes: Vec::new(),
        });
    }

    let given = params.bessel()?;
    let pt = params.point();
    // the corollaries substitute c -> -c into the theorem
    let bp = match id {
        IdentityId::Corollary1 | IdentityId::Corollary3 => negated_c(&given),
        _ => given,
    };
    let theorem = match id {
        IdentityId::Theorem1 | IdentityId::Corollary1 | IdentityId::Corollary2 => Theorem::First,
        _ => Theorem::Second,
    };
    let lhs = match theorem {
        Theorem::First => theorem1_lhs(&bp, &pt, tol.quad, control)?,
        Theorem::Second => theorem2_lhs(&bp, &pt, tol.quad, control)?,
    };
    let canonical_terms = canonical_series(Coefficients::Generalized(&bp), &pt, theorem);
    let canonical = sum_series(&canonical_terms, control.tol, control.max_terms)?;

    let mut notes = Vec::new();
    let (paper, term_ratios) = match id {
        IdentityId::Corollary2 | IdentityId::Corollary4 => {
            let classical = classical_theorem_rhs(bp.nu, &pt, theorem == Theorem::Second, control)?;
            let reach = match theorem {
                Theorem::First => pt.y / pt.a,
                Theorem::Second => pt.y / 2.0,
            };
            if reach > 0.0 {
                let gap = classical_reduction_check(BesselKind::BesselJ, bp.nu, reach)?;
                notes.push(format!("classical J reduction gap at z = {reach}: {gap:e}"));
            }
            (Some(classical), None)
        }
        _ => {
            let form = match id {
                IdentityId::Theorem1 => theorem1_printed_form(&bp, &pt)?,
                IdentityId::Theorem2 => theorem2_printed_form(&bp, &pt)?,
                IdentityId::Corollary1 => corollary1_form(&given, &pt)?,
                _ => corollary3_form(&given, &pt)?,
            };
            let sum = form.sum(control)?;
            let ratios = term_ratios(&form, &canonical_terms)?;
            (Some(sum), Some(ratios))
        }
    };
    Ok(Evaluation {
        lhs,
        canonical,
        paper,
        term_ratios,
        notes,
    })
}

fn inconclusive(
    id: IdentityId,
    params: &IdentityParams,
    tol: &Tolerances,
    diagnostics: String,
) -> IdentityReport {
    IdentityReport {
        identity_id: id,
        params: *params,
        lhs: None,
        rhs_canonical: None,
        rhs_paper: None,
        rel_diff_canonical: None,
        rel_diff_paper: None,
        verdict: Verdict::Inconclusive,
        tolerances: *tol,
        diagnostics,
        paper_term_ratios: None,
        quad_evals: 0,
        series_terms: 0,
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Evaluates one identity at one parameter point.
pub fn verify(id: IdentityId, params: &IdentityParams, tol: &Tolerances) -> IdentityReport {
    if let Err(e) = check_preconditions(id, params) {
        return inconclusive(id, params, tol, format!("precondition rejected: {e}"));
    }
    let eval = match evaluate(id, params, tol) {
        Ok(e) => e,
        Err(e) => return inconclusive(id, params, tol, format!("evaluation failed: {e}")),
    };

    let lhs = eval.lhs.value;
    let canonical = eval.canonical.value;
    let paper = eval.paper.map(|p| p.value);
    let rel_canonical = rel_diff(lhs, canonical);
    let rel_paper = paper.map(|p| rel_diff(lhs, p));

    let mut notes = eval.notes;
    let mut verdict = if !eval.lhs.converged {
        notes.push(format!(
            "quadrature not converged after {} evaluations (error estimate {:e})",
            eval.lhs.evaluations, eval.lhs.abs_err_estimate
        ));
        Verdict::Inconclusive
    } else if !eval.canonical.converged {
        notes.push(format!(
            "canonical series not converged after {} terms",
            eval.canonical.terms_used
        ));
        Verdict::Inconclusive
    } else if eval.paper.is_some_and(|p| !p.converged) {
        notes.push("printed-form series not converged".into());
        Verdict::Inconclusive
    } else if !(rel_canonical <= tol.match_) {
        Verdict::Mismatch
    } else if rel_paper.is_some_and(|r| !(r <= tol.match_)) {
        Verdict::CanonicalOnly
    } else {
        Verdict::Match
    };

    if verdict == Verdict::CanonicalOnly {
        match &eval.term_ratios {
            Some(ratios) => {
                let shown: Vec<String> = ratios
                    .iter()
                    .map(|r| r.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}")))
                    .collect();
                notes.push(format!(
                    "printed/canonical term ratios n=0..: [{}]",
                    shown.join(", ")
                ));
            }
            None => notes.push("printed form differs from the classical route".into()),
        }
    }
    if verdict == Verdict::Mismatch && rel_canonical.is_nan() {
        verdict = Verdict::Inconclusive;
    }

    IdentityReport {
        identity_id: id,
        params: *params,
        lhs: finite(lhs),
        rhs_canonical: finite(canonical),
        rhs_paper: paper.and_then(finite),
        rel_diff_canonical: finite(rel_canonical),
        rel_diff_paper: rel_paper.and_then(finite),
        verdict,
        tolerances: *tol,
        diagnostics: notes.join("; "),
        paper_term_ratios: eval.term_ratios,
        quad_evals: eval.lhs.evaluations,
        series_terms: eval.canonical.terms_used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kgamma::k_gamma;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn ctl() -> SeriesControl {
        SeriesControl {
            tol: 1e-15,
            max_terms: 400,
        }
    }

    #[test]
    fn canonical_collapses_at_c_zero() {
        let bp = BesselParams::new(2.0, 0.5, 1.5, 1.0, 0.0, 2.0).unwrap();
        let pt = TheoremPoint {
            mu: 1.0,
            lam: 2.0,
            a: 1.5,
            y: 0.8,
        };
        let lead = (pt.y / 2.0).powf(bp.nu) / k_gamma(bp.gamma_base(), bp.k_scale()).unwrap();

        let r = theorem1_rhs_canonical(&bp, &pt, ctl()).unwrap();
        assert_eq!(r.terms_used, 1);
        let ob = ObParams::new(pt.mu, pt.lam + bp.nu, pt.a).unwrap();
        assert!(rel(r.value, lead * oberhettinger_closed_form(&ob).unwrap()) < 1e-12);

        let r = theorem2_rhs_canonical(&bp, &pt, ctl()).unwrap();
        assert_eq!(r.terms_used, 1);
        let ob = ObParams::new(pt.mu + bp.nu, pt.lam + bp.nu, pt.a).unwrap();
        assert!(rel(r.value, lead * oberhettinger_closed_form(&ob).unwrap()) < 1e-12);
    }

    #[test]
    fn zero_y_gives_zero() {
        let bp = BesselParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 1.0).unwrap();
        let pt = TheoremPoint {
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            y: 0.0,
        };
        assert_eq!(theorem1_rhs_canonical(&bp, &pt, ctl()).unwrap().value, 0.0);
        assert_eq!(theorem2_rhs_canonical(&bp, &pt, ctl()).unwrap().value, 0.0);
        assert_eq!(theorem1_rhs_paper(&bp, &pt, ctl()).unwrap().value, 0.0);
        assert_eq!(theorem2_rhs_paper(&bp, &pt, ctl()).unwrap().value, 0.0);
    }

    #[test]
    fn canonical_ratio_matches_direct_terms() {
        // direct n-th term: coefficient · (y/2)^{ν+2n} · Oberhettinger(μ, λ+ν+2n, a)
        let bp = BesselParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 1.0).unwrap();
        let pt = TheoremPoint {
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        };
        let s = canonical_series(Coefficients::Generalized(&bp), &pt, Theorem::First);
        let terms = series_terms(&s, 8).unwrap();
        for (n, t) in terms.iter().enumerate() {
            let nf = n as f64;
            let coeff = (-1f64).powi(n as i32)
                / (classical_gamma(nf + 1.0).unwrap() * classical_gamma(nf + 2.0).unwrap());
            let ob = ObParams::new(1.0, 3.0 + 2.0 * nf, 1.0).unwrap();
            let direct =
                coeff * 0.5f64.powf(1.0 + 2.0 * nf) * oberhettinger_closed_form(&ob).unwrap();
            assert!(rel(t.to_f64(), direct) < 1e-12, "n = {n}");
        }

        let pt = TheoremPoint {
            mu: 0.5,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        };
        let s = canonical_series(Coefficients::Generalized(&bp), &pt, Theorem::Second);
        let terms = series_terms(&s, 8).unwrap();
        for (n, t) in terms.iter().enumerate() {
            let nf = n as f64;
            let coeff = (-1f64).powi(n as i32)
                / (classical_gamma(nf + 1.0).unwrap() * classical_gamma(nf + 2.0).unwrap());
            let ob = ObParams::new(1.5 + 2.0 * nf, 3.0 + 2.0 * nf, 1.0).unwrap();
            let direct =
                coeff * 0.5f64.powf(1.0 + 2.0 * nf) * oberhettinger_closed_form(&ob).unwrap();
            assert!(rel(t.to_f64(), direct) < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn corollary1_matches_printed_form_with_negated_c() {
        let bp = BesselParams::new(1.0, 0.5, 1.5, 1.0, 0.7, 2.0).unwrap();
        let pt = TheoremPoint {
            mu: 0.5,
            lam: 1.5,
            a: 2.0,
            y: 0.5,
        };
        let cor = corollary1_rhs(&bp, &pt, ctl()).unwrap();
        let paper = theorem1_rhs_paper(&negated_c(&bp), &pt, ctl()).unwrap();
        assert!(rel(paper.value, cor.value) < 1e-12);
    }

    #[test]
    fn corollary3_matches_printed_form_at_unit_b() {
        // printed argument keeps +c and the printed theorem row (ν+1, λ₁)
        // equals (ν+(b+1)/2, λ₁) only at b = 1
        let bp = BesselParams::new(1.0, 1.0, 1.0, 1.0, -1.0, 1.0).unwrap();
        let pt = TheoremPoint {
            mu: 0.5,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        };
        let cor = corollary3_rhs(&bp, &pt, ctl()).unwrap();
        let paper = theorem2_rhs_paper(&bp, &pt, ctl()).unwrap();
        assert!(rel(paper.value, cor.value) < 1e-12);
    }

    #[test]
    fn corollaries_require_unit_scale() {
        let bp = BesselParams::new(2.0, 1.0, 1.0, 1.0, -1.0, 1.0).unwrap();
        let pt = TheoremPoint {
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        };
        assert!(corollary1_rhs(&bp, &pt, ctl()).is_err());
        assert!(corollary3_rhs(&bp, &pt, ctl()).is_err());
    }

    #[test]
    fn classical_reduction_examples() {
        assert!(classical_reduction_check(BesselKind::BesselJ, 0.0, 2.0).unwrap() <= 1e-12);
        assert!(classical_reduction_check(BesselKind::BesselI, 1.0, 1.0).unwrap() <= 1e-12);
        assert_eq!(
            classical_reduction_check(BesselKind::BesselJ, 0.0, 0.0).unwrap(),
            0.0
        );
        assert_eq!(
            classical_bessel(BesselKind::BesselJ, 0.0, 0.0).unwrap(),
            1.0
        );
        let j0 = classical_bessel(BesselKind::BesselJ, 0.0, 2.0).unwrap();
        assert!(rel(j0, 0.223_890_779_141_235_668_05) < 1e-15);
    }

    #[test]
    fn classical_route_agrees_with_generalized_canonical() {
        let bp = BesselParams::classical(1.0, -1.0).unwrap();
        let pt = TheoremPoint {
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            y: 1.0,
        };
        let g = theorem1_rhs_canonical(&bp, &pt, ctl()).unwrap();
        let c = classical_theorem_rhs(1.0, &pt, false, ctl()).unwrap();
        assert!(rel(g.value, c.value) < 1e-13);
    }

    #[test]
    fn verify_oberhettinger_point() {
        let params = IdentityParams {
            mu: 1.0,
            lam: 2.0,
            a: 1.0,
            ..Default::default()
        };
        let r = verify(IdentityId::Oberhettinger, &params, &Tolerances::default());
        assert_eq!(r.verdict, Verdict::Match);
        assert!(rel(r.lhs.unwrap(), 1.0 / 3.0) < 1e-8);
        assert!(rel(r.rhs_canonical.unwrap(), 1.0 / 3.0) < 1e-14);
        assert!(r.rhs_paper.is_none());
    }

    #[test]
    fn verify_rejects_invalid_point() {
        let params = IdentityParams {
            mu: 5.0,
            lam: 1.0,
            nu: 1.0,
            ..Default::default()
        };
        let r = verify(IdentityId::Theorem1, &params, &Tolerances::default());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.diagnostics.contains("lambda + nu > mu"));
    }

    #[test]
    fn verify_is_deterministic() {
        let params = IdentityParams {
            k: 2.0,
            gamma: 1.5,
            c: 1.0,
            ..Default::default()
        };
        let tol = Tolerances::default();
        let a = verify(IdentityId::Theorem1, &params, &tol);
        let b = verify(IdentityId::Theorem1, &params, &tol);
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert!("theorem3".parse::<IdentityId>().is_err());
    }
}

//! Command-line front end: `eval`, `verify` and `sweep`.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::{
    check_preconditions, verify, IdentityId, IdentityParams, IdentityReport, Tolerances, Verdict,
};
use crate::kbessel::{eval_gmk_bessel, eval_k_bessel_first, BesselParams};
use crate::kgamma::{k_gamma, KScale};
use crate::series::SeriesResult;
use crate::wright::{eval_k_wright, eval_pfq, eval_wright, WrightPair, WrightSpec};

/// Exit status for a converged evaluation or a passing check.
pub const EXIT_OK: i32 = 0;
/// Exit status for a non-converged evaluation or a failing verdict.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for invalid input, I/O problems or evaluation errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "kbessel",
    version,
    about = "Evaluate k-Bessel, k-Gamma and Wright functions and verify integral identities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a single special function.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Verify one identity at one parameter point.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Verify one identity over a parameter grid read from a TOML config.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFunction {
    /// Γ_k(z)
    Kgamma,
    /// k-Bessel function of the first kind (uses --lambda)
    Kbessel,
    /// generalized modified k-Bessel function
    Gmkbessel,
    /// Fox–Wright pΨq
    Wright,
    /// k-Wright (Γ_k in place of Γ)
    Kwright,
    /// generalized hypergeometric pFq
    Pfq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub function: EvalFunction,
    #[arg(long)]
    pub z: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda1: f64,
    #[arg(long, default_value_t = -1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Weight of the k-Bessel function of the first kind.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Upper parameters: `a:alpha,...` for Wright functions, `a,...` for pFq.
    #[arg(long, default_value = "")]
    pub upper: String,
    /// Lower parameters, same syntax as --upper.
    #[arg(long, default_value = "")]
    pub lower: String,
    #[arg(long, default_value_t = 1e-15)]
    pub tol_series: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_terms: usize,
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub tol_quad: Option<f64>,
    #[arg(long)]
    pub tol_series: Option<f64>,
    #[arg(long)]
    pub tol_match: Option<f64>,
    #[arg(long)]
    pub max_terms: Option<usize>,
}

impl ToleranceArgs {
    fn apply(&self, mut tol: Tolerances) -> Tolerances {
        if let Some(v) = self.tol_quad {
            tol.quad = v;
        }
        if let Some(v) = self.tol_series {
            tol.series = v;
        }
        if let Some(v) = self.tol_match {
            tol.match_ = v;
        }
        if let Some(v) = self.max_terms {
            tol.max_terms = v;
        }
        tol
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub identity: IdentityId,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub lam: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl VerifyArgs {
    fn params(&self) -> IdentityParams {
        let d = IdentityParams::default();
        IdentityParams {
            k: self.k.unwrap_or(d.k),
            nu: self.nu.unwrap_or(d.nu),
            gamma: self.gamma.unwrap_or(d.gamma),
            lambda1: self.lambda1.unwrap_or(d.lambda1),
            c: self.c.unwrap_or(d.c),
            b: self.b.unwrap_or(d.b),
            mu: self.mu.unwrap_or(d.mu),
            lam: self.lam.unwrap_or(d.lam),
            a: self.a.unwrap_or(d.a),
            y: self.y.unwrap_or(d.y),
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A sweep configuration. Every parameter is a list; omitted lists default to
/// the single value of [`IdentityParams::default`].
///
/// `lam_offset` is an alternative to `lam` giving `λ = μ + offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub identity: IdentityId,
    pub k: Option<Vec<f64>>,
    pub nu: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub lambda1: Option<Vec<f64>>,
    pub c: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub lam: Option<Vec<f64>>,
    pub lam_offset: Option<Vec<f64>>,
    pub a: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub tol_quad: Option<f64>,
    pub tol_series: Option<f64>,
    pub tol_match: Option<f64>,
    pub max_terms: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: SweepConfig =
            toml::from_str(text).map_err(|e| Error::InvalidParams(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::InvalidParams(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<()> {
        if self.lam.is_some() && self.lam_offset.is_some() {
            return Err(Error::InvalidParams(
                "config: give either lam or lam_offset, not both".into(),
            ));
        }
        for (name, list) in self.lists() {
            if list.is_some_and(|l| l.is_empty()) {
                return Err(Error::InvalidParams(format!(
                    "config: list '{name}' is empty"
                )));
            }
        }
        Ok(())
    }

    fn lists(&self) -> [(&'static str, Option<&Vec<f64>>); 11] {
        [
            ("k", self.k.as_ref()),
            ("nu", self.nu.as_ref()),
            ("gamma", self.gamma.as_ref()),
            ("lambda1", self.lambda1.as_ref()),
            ("c", self.c.as_ref()),
            ("b", self.b.as_ref()),
            ("mu", self.mu.as_ref()),
            ("lam", self.lam.as_ref()),
            ("lam_offset", self.lam_offset.as_ref()),
            ("a", self.a.as_ref()),
            ("y", self.y.as_ref()),
        ]
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            quad: self.tol_quad.unwrap_or(d.quad),
            series: self.tol_series.unwrap_or(d.series),
            match_: self.tol_match.unwrap_or(d.match_),
            max_terms: self.max_terms.unwrap_or(d.max_terms),
        }
    }

    /// Cartesian product in the order k, ν, γ, λ₁, c, b, μ, λ, a, y, the last
    /// index varying fastest.
    pub fn points(&self) -> Vec<IdentityParams> {
        let d = IdentityParams::default();
        let list = |l: &Option<Vec<f64>>, default: f64| l.clone().unwrap_or_else(|| vec![default]);
        let axes = [
            list(&self.k, d.k),
            list(&self.nu, d.nu),
            list(&self.gamma, d.gamma),
            list(&self.lambda1, d.lambda1),
            list(&self.c, d.c),
            list(&self.b, d.b),
            list(&self.mu, d.mu),
            match &self.lam_offset {
                Some(offsets) => offsets.clone(),
                None => list(&self.lam, d.lam),
            },
            list(&self.a, d.a),
            list(&self.y, d.y),
        ];
        let total: usize = axes.iter().map(Vec::len).product();
        let mut points = Vec::with_capacity(total);
        for mut index in 0..total {
            let mut v = [0.0; 10];
            for (slot, axis) in v.iter_mut().zip(&axes).rev() {
                *slot = axis[index % axis.len()];
                index /= axis.len();
            }
            let lam = if self.lam_offset.is_some() {
                v[6] + v[7]
            } else {
                v[7]
            };
            points.push(IdentityParams {
                k: v[0],
                nu: v[1],
                gamma: v[2],
                lambda1: v[3],
                c: v[4],
                b: v[5],
                mu: v[6],
                lam,
                a: v[8],
                y: v[9],
            });
        }
        points
    }
}

/// One output row of `verify` and `sweep`; the field order is the CSV
/// column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub identity: IdentityId,
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
    pub lhs: Option<f64>,
    pub rhs_canonical: Option<f64>,
    pub rhs_paper: Option<f64>,
    pub rel_diff_canonical: Option<f64>,
    pub rel_diff_paper: Option<f64>,
    /// A [`Verdict`] name, or `skipped` for points failing a precondition.
    pub verdict: String,
    pub quad_evals: usize,
    pub series_terms: usize,
}

/// JSON-lines form: the CSV record plus free-text diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonRecord {
    #[serde(flatten)]
    pub record: SweepRecord,
    pub diagnostics: String,
}

pub const SKIPPED: &str = "skipped";

impl SweepRecord {
    fn blank(id: IdentityId, p: &IdentityParams, verdict: &str) -> Self {
        SweepRecord {
            identity: id,
            k: p.k,
            nu: p.nu,
            gamma: p.gamma,
            lambda1: p.lambda1,
            c: p.c,
            b: p.b,
            mu: p.mu,
            lam: p.lam,
            a: p.a,
            y: p.y,
            lhs: None,
            rhs_canonical: None,
            rhs_paper: None,
            rel_diff_canonical: None,
            rel_diff_paper: None,
            verdict: verdict.to_string(),
            quad_evals: 0,
            series_terms: 0,
        }
    }

    pub fn from_report(r: &IdentityReport) -> Self {
        SweepRecord {
            lhs: r.lhs,
            rhs_canonical: r.rhs_canonical,
            rhs_paper: r.rhs_paper,
            rel_diff_canonical: r.rel_diff_canonical,
            rel_diff_paper: r.rel_diff_paper,
            quad_evals: r.quad_evals,
            series_terms: r.series_terms,
            ..Self::blank(r.identity_id, &r.params, r.verdict.name())
        }
    }
}

/// Runs one point: a precondition failure becomes a `skipped` record.
pub fn run_point(id: IdentityId, params: &IdentityParams, tol: &Tolerances) -> JsonRecord {
    if let Err(e) = check_preconditions(id, params) {
        return JsonRecord {
            record: SweepRecord::blank(id, params, SKIPPED),
            diagnostics: format!("skipped: {e}"),
        };
    }
    let report = verify(id, params, tol);
    JsonRecord {
        record: SweepRecord::from_report(&report),
        diagnostics: report.diagnostics,
    }
}

pub fn write_records<W: Write>(out: W, records: &[JsonRecord], format: OutputFormat) -> Result<()> {
    let io_err = |e: &dyn std::fmt::Display| Error::InvalidParams(format!("write failed: {e}"));
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(&r.record).map_err(|e| io_err(&e))?;
            }
            w.flush().map_err(|e| io_err(&e))?;
        }
        OutputFormat::JsonLines => {
            let mut out = io::BufWriter::new(out);
            for r in records {
                let line = serde_json::to_string(r).map_err(|e| io_err(&e))?;
                writeln!(out, "{line}").map_err(|e| io_err(&e))?;
            }
            out.flush().map_err(|e| io_err(&e))?;
        }
    }
    Ok(())
}

pub fn read_json_lines(text: &str) -> Result<Vec<JsonRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            serde_json::from_str(l).map_err(|e| Error::InvalidParams(format!("bad record: {e}")))
        })
        .collect()
}

pub fn read_csv(text: &str) -> Result<Vec<SweepRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::InvalidParams(format!("bad record: {e}"))))
        .collect()
}

fn emit(records: &[JsonRecord], out: Option<&Path>, format: OutputFormat) -> Result<()> {
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| {
                Error::InvalidParams(format!("cannot write {}: {e}", path.display()))
            })?;
            write_records(file, records, format)
        }
        None => write_records(io::stdout().lock(), records, format),
    }
}

/// Verdict counts of a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub matched: usize,
    pub canonical_only: usize,
    pub mismatch: usize,
    pub inconclusive: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn tally(records: &[JsonRecord]) -> Self {
        let mut s = Summary::default();
        for r in records {
            match r.record.verdict.as_str() {
                "match" => s.matched += 1,
                "canonical_only" => s.canonical_only += 1,
                "mismatch" => s.mismatch += 1,
                SKIPPED => s.skipped += 1,
                _ => s.inconclusive += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.matched + self.canonical_only + self.mismatch + self.inconclusive + self.skipped
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "summary: points={} match={} canonical_only={} mismatch={} inconclusive={} skipped={}",
            self.total(),
            self.matched,
            self.canonical_only,
            self.mismatch,
            self.inconclusive,
            self.skipped
        )
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::InvalidParams(format!("'{t}' is not a number")))
        })
        .collect()
}

/// Parses `a:alpha,a:alpha,...`; an empty string is an empty list.
pub fn parse_pairs(s: &str) -> Result<Vec<WrightPair>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (a, alpha) = t
                .split_once(':')
                .ok_or_else(|| Error::InvalidParams(format!("'{t}' is not of the form a:alpha")))?;
            let num = |x: &str| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParams(format!("'{x}' is not a number")))
            };
            Ok((num(a)?, num(alpha)?))
        })
        .collect()
}

fn print_series(r: &SeriesResult) -> i32 {
    println!("value = {}", r.value);
    println!("terms_used = {}", r.terms_used);
    println!("tail_estimate = {:e}", r.tail_estimate);
    println!("converged = {}", r.converged);
    if r.converged {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_eval(args: &EvalArgs) -> Result<i32> {
    let tol = args.tol_series;
    let max = args.max_terms;
    let series = match args.function {
        EvalFunction::Kgamma => {
            let v = k_gamma(args.z, KScale::new(args.k)?)?;
            println!("value = {v}");
            println!("converged = true");
            return Ok(EXIT_OK);
        }
        EvalFunction::Kbessel => eval_k_bessel_first(
            KScale::new(args.k)?,
            args.nu,
            args.gamma,
            args.lambda,
            args.z,
            tol,
            max,
        )?,
        EvalFunction::Gmkbessel => {
            let p = BesselParams::new(args.k, args.nu, args.gamma, args.lambda1, args.c, args.b)?;
            eval_gmk_bessel(&p, args.z, tol, max)?
        }
        EvalFunction::Wright => {
            let s = WrightSpec::new(parse_pairs(&args.upper)?, parse_pairs(&args.lower)?)?;
            eval_wright(&s, args.z, tol, max)?
        }
        EvalFunction::Kwright => {
            let s = WrightSpec::with_k(
                parse_pairs(&args.upper)?,
                parse_pairs(&args.lower)?,
                KScale::new(args.k)?,
            )?;
            eval_k_wright(&s, args.z, tol, max)?
        }
        EvalFunction::Pfq => eval_pfq(
            &parse_list(&args.upper)?,
            &parse_list(&args.lower)?,
            args.z,
            tol,
            max,
        )?,
    };
    Ok(print_series(&series))
}

fn show(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn show_exp(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:e}"))
}

fn describe(record: &JsonRecord) -> String {
    let r = &record.record;
    let mut s = String::new();
    let _ = writeln!(s, "identity: {}", r.identity);
    let _ = writeln!(
        s,
        "params: k={} nu={} gamma={} lambda1={} c={} b={} mu={} lam={} a={} y={}",
        r.k, r.nu, r.gamma, r.lambda1, r.c, r.b, r.mu, r.lam, r.a, r.y
    );
    let _ = writeln!(s, "lhs: {}", show(r.lhs));
    let _ = writeln!(s, "rhs_canonical: {}", show(r.rhs_canonical));
    let _ = writeln!(s, "rhs_paper: {}", show(r.rhs_paper));
    let _ = writeln!(s, "rel_diff_canonical: {}", show_exp(r.rel_diff_canonical));
    let _ = writeln!(s, "rel_diff_paper: {}", show_exp(r.rel_diff_paper));
    let _ = writeln!(s, "quad_evals: {}", r.quad_evals);
    let _ = writeln!(s, "series_terms: {}", r.series_terms);
    let _ = writeln!(s, "verdict: {}", r.verdict);
    if !record.diagnostics.is_empty() {
        let _ = writeln!(s, "diagnostics: {}", record.diagnostics);
    }
    s
}

fn passes(verdict: &str) -> bool {
    verdict == Verdict::Match.name() || verdict == Verdict::CanonicalOnly.name()
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let tol = args.tolerances.apply(Tolerances::default());
    let record = run_point(args.identity, &args.params(), &tol);
    print!("{}", describe(&record));
    if let Some(path) = &args.output.out {
        emit(
            std::slice::from_ref(&record),
            Some(path),
            args.output.format.unwrap_or_default(),
        )?;
    }
    Ok(if passes(&record.record.verdict) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

/// Verifies every grid point of `config`, in parallel, returning records in
/// grid order.
pub fn run_sweep(config: &SweepConfig, tol: &Tolerances) -> Vec<JsonRecord> {
    config
        .points()
        .par_iter()
        .map(|p| run_point(config.identity, p, tol))
        .collect()
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let config = SweepConfig::load(&args.config)?;
    let tol = args.tolerances.apply(config.tolerances());
    let records = run_sweep(&config, &tol);
    for (i, r) in records.iter().enumerate() {
        if r.record.verdict == SKIPPED {
            eprintln!("point {i}: {}", r.diagnostics);
        }
    }
    let out = args.output.out.clone().or_else(|| config.out.clone());
    let format = args.output.format.or(config.format).unwrap_or_default();
    emit(&records, out.as_deref(), format)?;
    let summary = Summary::tally(&records);
    eprintln!("{summary}");
    Ok(if summary.mismatch == 0 {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

/// Runs a parsed command line and returns the process exit status.
pub fn run(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_ERROR
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_parse() {
        assert_eq!(
            parse_pairs("1:2, 3.5:0.5").unwrap(),
            vec![(1.0, 2.0), (3.5, 0.5)]
        );
        assert!(parse_pairs("").unwrap().is_empty());
        assert!(parse_pairs("1;2").is_err());
        assert_eq!(parse_list("1, 2.5").unwrap(), vec![1.0, 2.5]);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let err = SweepConfig::from_toml("identity = \"theorem1\"\nmuu = [1.0]\n").unwrap_err();
        assert!(err.to_string().contains("muu"), "{err}");
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let cfg = SweepConfig::from_toml(
            "identity = \"oberhettinger\"\nmu = [0.5, 1.0]\nlam_offset = [0.5, 1.0]\na = [1.0, 2.0]\n",
        )
        .unwrap();
        let pts = cfg.points();
        assert_eq!(pts.len(), 8);
        let triples: Vec<_> = pts.iter().map(|p| (p.mu, p.lam, p.a)).collect();
        assert_eq!(triples[0], (0.5, 1.0, 1.0));
        assert_eq!(triples[1], (0.5, 1.0, 2.0));
        assert_eq!(triples[2], (0.5, 1.5, 1.0));
        assert_eq!(triples[7], (1.0, 2.0, 2.0));
    }

    #[test]
    fn config_accepts_integer_entries() {
        let cfg =
            SweepConfig::from_toml("identity = \"theorem2\"\nk = [1, 2]\nmu = [0.5]\n").unwrap();
        assert_eq!(cfg.k, Some(vec![1.0, 2.0]));
    }

    #[test]
    fn lam_and_offset_are_exclusive() {
        assert!(SweepConfig::from_toml(
            "identity = \"theorem1\"\nlam = [2.0]\nlam_offset = [1.0]\n"
        )
        .is_err());
        assert!(SweepConfig::from_toml("identity = \"theorem1\"\nmu = []\n").is_err());
    }

    #[test]
    fn invalid_point_is_skipped_with_reason() {
        let p = IdentityParams {
            mu: 5.0,
            lam: 1.0,
            ..Default::default()
        };
        let r = run_point(IdentityId::Theorem1, &p, &Tolerances::default());
        assert_eq!(r.record.verdict, SKIPPED);
        assert!(r.diagnostics.contains("lambda + nu > mu"));
    }
}

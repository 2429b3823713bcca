use std::path::Path;
use std::process::{Command, Output};

use kbessel::cli::{
    read_csv, read_json_lines, run_sweep, write_records, OutputFormat, SweepConfig,
};

fn kbessel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbessel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value_line(o: &Output) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("value = "))
        .expect("value line")
        .parse()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("grid.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn eval_kgamma_at_k() {
    let o = kbessel(&["eval", "kgamma", "--z", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value_line(&o), 1.0);
}

#[test]
fn eval_gmkbessel_classical_j0() {
    let o = kbessel(&["eval", "gmkbessel", "--nu", "0", "--c", "-1", "--z", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_line(&o) - 0.223_890_779_1).abs() < 1e-10);
    assert!(stdout(&o).contains("converged = true"));
}

#[test]
fn eval_wright_rejects_divergent_spec() {
    let o = kbessel(&[
        "eval", "wright", "--upper", "1:2", "--lower", "1:1", "--z", "0.5",
    ]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("convergence margin"));
}

#[test]
fn eval_reports_non_convergence() {
    let o = kbessel(&[
        "eval",
        "pfq",
        "--upper",
        "1",
        "--lower",
        "2",
        "--z",
        "30",
        "--max-terms",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("converged = false"));
}

#[test]
fn eval_pfq_and_kwright() {
    let o = kbessel(&[
        "eval", "pfq", "--upper", "1,1", "--lower", "2", "--z", "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_line(&o) - 2f64.ln() * 2.0).abs() < 1e-14);
    let o = kbessel(&[
        "eval", "kwright", "--k", "2", "--upper", "2:1", "--lower", "2:1", "--z", "1",
    ]);
    assert!((value_line(&o) - std::f64::consts::E).abs() < 1e-14);
}

#[test]
fn verify_oberhettinger_match() {
    let o = kbessel(&[
        "verify",
        "oberhettinger",
        "--mu",
        "1",
        "--lam",
        "2",
        "--a",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict: match"));
    assert!(text.contains("lhs: 0.33333333"));
}

#[test]
fn verify_theorem1_reports_printed_form() {
    let o = kbessel(&[
        "verify", "theorem1", "--k", "2", "--gamma", "1.5", "--c", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rhs_paper: 0."));
    assert!(text.contains("verdict: canonical_only"));
    assert!(text.contains("term ratios"));
}

#[test]
fn verify_invalid_point_is_skipped() {
    let o = kbessel(&["verify", "theorem1", "--mu", "5", "--lam", "1", "--nu", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("verdict: skipped"));
    assert!(text.contains("lambda + nu > mu"));
}

#[test]
fn verify_writes_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = kbessel(&["verify", "corollary2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let records = read_csv(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].verdict, "match");
}

#[test]
fn sweep_small_oberhettinger_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "identity = \"oberhettinger\"\nmu = [0.5, 1.0, 1.5]\nlam = [2.0]\na = [0.5, 1.0, 2.0]\n",
    );
    let out = dir.path().join("out.csv");
    let o = kbessel(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "identity,k,nu,gamma,lambda1,c,b,mu,lam,a,y,lhs,rhs_canonical,rhs_paper,\
         rel_diff_canonical,rel_diff_paper,verdict,quad_evals,series_terms"
    );
    let records = read_csv(&text).unwrap();
    assert_eq!(records.len(), 9);
    assert!(records.iter().all(|r| r.verdict == "match"));
    assert!(stderr(&o).contains("match=9"));
}

#[test]
fn sweep_rejects_unknown_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "identity = \"theorem1\"\nlambda2 = [1.0]\n");
    let o = kbessel(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lambda2"));
}

#[test]
fn sweep_reports_skipped_points() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "identity = \"theorem1\"\nmu = [1.0, 5.0]\nformat = \"json-lines\"\n",
    );
    let o = kbessel(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let records = read_json_lines(&stdout(&o)).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].record.verdict, "match");
    assert_eq!(records[1].record.verdict, "skipped");
    assert!(records[1].diagnostics.contains("lambda + nu > mu"));
    assert!(stderr(&o).contains("skipped=1"));
}

#[test]
fn json_lines_round_trip_is_exact() {
    let config = SweepConfig::from_toml(
        "identity = \"theorem2\"\nk = [1.0, 2.0]\nc = [-1.0, 0.7]\nmu = [0.5, 1.0]\nlam = [2.0]\ny = [0.3, 1.7]\n",
    )
    .unwrap();
    let records = run_sweep(&config, &config.tolerances());
    let mut buf = Vec::new();
    write_records(&mut buf, &records, OutputFormat::JsonLines).unwrap();
    let parsed = read_json_lines(std::str::from_utf8(&buf).unwrap()).unwrap();
    assert_eq!(parsed, records);

    let mut buf = Vec::new();
    write_records(&mut buf, &records, OutputFormat::Csv).unwrap();
    let parsed = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
    let plain: Vec<_> = records.into_iter().map(|r| r.record).collect();
    assert_eq!(parsed, plain);
}

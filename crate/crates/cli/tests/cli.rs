use std::io::Write;
use std::process::{Command, Output};

use hdrel::report::{Verdict, VerificationReport};

fn hdrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdrel")).args(args).output().expect("run hdrel")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_reports(o: &Output) -> Vec<VerificationReport> {
    stdout(o)
        .lines()
        .map(|line| {
            let r: VerificationReport = serde_json::from_str(line).expect("report JSON");
            assert_eq!(serde_json::to_string(&r).unwrap(), line, "JSON round trip");
            assert!(r.numerically_consistent(), "{line}");
            r
        })
        .collect()
}

fn sweep(config: &str, extra: &[&str]) -> Output {
    let mut file = tempfile();
    file.1.write_all(config.as_bytes()).unwrap();
    let path = file.0.to_str().unwrap().to_string();
    let mut args = vec!["sweep", path.as_str()];
    args.extend_from_slice(extra);
    let out = hdrel(&args);
    std::fs::remove_file(&file.0).ok();
    out
}

fn tempfile() -> (std::path::PathBuf, std::fs::File) {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static NEXT: AtomicUsize = AtomicUsize::new(0);
    let path = std::env::temp_dir().join(format!(
        "hdrel-sweep-{}-{}.toml",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    let file = std::fs::File::create(&path).unwrap();
    (path, file)
}

#[test]
fn compute_gauss_sum() {
    let o = hdrel(&["compute", "gauss", "--p", "3", "--f", "1", "--chi-exp", "1", "--psi-shift", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "z3 - z3^2");
}

#[test]
fn compute_unramified_tau() {
    let o = hdrel(&["compute", "tau", "--p", "7", "--cond", "0", "--psi-cond", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn compute_ramified_plancherel() {
    let o = hdrel(&["compute", "plancherel", "--p", "7", "--n", "3", "--chi-cond", "2", "--psi-cond", "0", "--numeric"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q^-2"));
    assert!(lines.next().unwrap().contains("0.020408163265"));
}

#[test]
fn compute_every_target() {
    let padic = ["--p", "7", "--n", "3", "--chi-cond", "3", "--psi-cond", "1"];
    for target in ["tau", "c-invariant", "b-invariant", "epsilon", "gamma", "tilde-gamma", "weil", "lcm", "lcm-det"] {
        let mut args = vec!["compute", target];
        args.extend_from_slice(&padic);
        let o = hdrel(&args);
        assert_eq!(o.status.code(), Some(0), "{target}: {}", stderr(&o));
        assert!(!stdout(&o).trim().is_empty());
    }
    let o = hdrel(&["compute", "quadgauss", "--q", "9"]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        vec!["compute", "gauss", "--f", "1"],
        vec!["compute", "tau", "--p", "7", "--chi-cond", "2", "--chi-exp", "7"],
        vec!["compute", "lcm", "--p", "7", "--n", "4", "--chi-cond", "2"],
        vec!["compute", "gauss", "--q", "12"],
        vec!["verify", "tau-theorem", "--p", "7", "--d", "5", "--chi-cond", "2"],
        vec!["verify", "hd", "--q", "7", "--d", "3", "--chi-at-p", "x"],
    ] {
        let o = hdrel(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn verify_classical_relation_for_all_characters() {
    let o = hdrel(&["verify", "hd", "--q", "7", "--d", "3", "--all-chi"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = parse_reports(&o);
    let exps: Vec<&str> = reports.iter().map(|r| r.param("chi-exp").unwrap()).collect();
    assert_eq!(exps, ["1", "3", "5"]);
    assert!(reports.iter().all(|r| r.verdict == Verdict::Pass));
}

#[test]
fn verify_ramdet_for_all_characters() {
    let o = hdrel(&["verify", "ramdet", "--p", "7", "--n", "3", "--c", "0", "--chi-cond", "2", "--all-chi"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = parse_reports(&o);
    assert_eq!(reports.len(), 36);
    assert!(reports.iter().all(VerificationReport::passed));
}

#[test]
fn unramified_power_is_rejected() {
    let args = ["verify", "mainres", "--which", "1", "--p", "7", "--d", "3", "--chi-cond", "0"];
    let o = hdrel(&args);
    assert_eq!(o.status.code(), Some(2));
    let reports = parse_reports(&o);
    assert_eq!(reports[0].verdict, Verdict::RejectedPrecondition);
    let mut allowed = args.to_vec();
    allowed.push("--allow-reject");
    assert_eq!(hdrel(&allowed).status.code(), Some(0));
}

#[test]
fn verify_every_target() {
    let cases: [&[&str]; 12] = [
        &["hd", "--q", "9", "--d", "4"],
        &["twistprod", "--q", "13", "--d", "4"],
        &["d-and-sign", "--q", "25", "--d", "3"],
        &["tau-theorem", "--p", "7", "--d", "3", "--chi-cond", "3"],
        &["hdtau1", "--p", "7", "--d", "2", "--chi-cond", "1"],
        &["taumult", "--p", "7", "--d", "3", "--chi-cond", "2", "--psi-cond", "-1"],
        &["taufor", "--p", "5", "--chi-cond", "4", "--psi-cond", "1"],
        &["mainres", "--which", "3", "--p", "5", "--chi-cond", "2"],
        &["verifygao", "--p", "7", "--chi-cond", "1", "--chi-exp", "3"],
        &["weild", "--p", "7", "--d", "3", "--psi-cond", "1"],
        &["ramdet", "--p", "7", "--n", "6", "--c", "1", "--chi-cond", "2", "--chi-at-p", "4:1"],
        &["generator-independence", "--p", "13", "--n", "3", "--chi-cond", "1", "--chi-exp", "1"],
    ];
    for case in cases {
        let mut args = vec!["verify"];
        args.extend_from_slice(case);
        let o = hdrel(&args);
        assert_eq!(o.status.code(), Some(0), "{case:?}: {} {}", stdout(&o), stderr(&o));
        let reports = parse_reports(&o);
        assert!(!reports.is_empty() && reports.iter().all(VerificationReport::passed));
    }
}

#[test]
fn table_format() {
    let o = hdrel(&["verify", "hd", "--q", "7", "--d", "3", "--all-chi", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("task"));
    assert_eq!(text.lines().filter(|l| l.starts_with("hd ")).count(), 3);
}

const TAU_SWEEP: &str = r#"
[[sweep]]
task = "tau-theorem"
primes = [5, 7]
chi_conductors = { from = 1, to = 3 }
chi_samples = 2
psi_conductors = [-1, 0, 1]
"#;

#[test]
fn sweep_all_pass_in_order() {
    let o = sweep(TAU_SWEEP, &["--allow-reject"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let reports = parse_reports(&o);
    assert!(reports.iter().all(|r| r.verdict != Verdict::Fail));
    assert!(reports.iter().filter(|r| r.passed()).count() > 20);
    assert!(stderr(&o).contains(&format!("cells: {}", reports.len())));
    let parallel = sweep(TAU_SWEEP, &["--allow-reject", "--jobs", "4"]);
    assert_eq!(stdout(&parallel), stdout(&o));
}

#[test]
fn sweep_self_test_fails_exactly_once() {
    let o = sweep(&format!("seed = 5\n{TAU_SWEEP}"), &["--allow-reject", "--self-test"]);
    assert_eq!(o.status.code(), Some(1));
    let reports = parse_reports(&o);
    assert_eq!(reports.iter().filter(|r| r.verdict == Verdict::Fail).count(), 1);
    assert!(stderr(&o).contains("self-test: perturbed cell"));
}

#[test]
fn sweep_with_empty_axes_has_no_cells() {
    let o = sweep("[[sweep]]\ntask = \"ramdet\"\nprimes = []\n", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("cells: 0"));
}

#[test]
fn malformed_sweep_config_exits_two() {
    for config in ["[[sweep]]\ntask = 3\n", "[[sweep]]\ntask = \"hd\"\nprimes = \"7\"\n", "nonsense ="] {
        assert_eq!(sweep(config, &[]).status.code(), Some(2), "{config}");
    }
    assert_eq!(hdrel(&["sweep", "/nonexistent/sweep.toml"]).status.code(), Some(2));
}

//! Acceptance criteria. Each test prints one `criterion k: PASS|FAIL` line to
//! the real stdout (bypassing libtest capture) and then asserts.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gztoda_cli::report::{without_timings, Record};
use gztoda_cli::{run_eval, run_verify, suites, Config, Report};
use gztoda_core::exact::RatFunc;
use gztoda_core::gzrep::GzRep;
use gztoda_core::verify::{Identity, Mode, Residual, Status};

fn announce(k: u32, what: &str, failures: &[String], took: Duration) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let line = format!("criterion {k}: {verdict} {what} ({:.1} s)\n", took.as_secs_f64());
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(failures.is_empty(), "criterion {k} failed:\n{}", failures.join("\n"));
}

fn config(suites: &[&str], n_max: Option<usize>, mode: Mode) -> Config {
    Config { suites: suites.iter().map(|s| s.to_string()).collect(), n_max, mode, ..Config::default() }
}

fn verify(cfg: &Config) -> Report {
    run_verify(cfg).expect("valid config")
}

fn failed(report: &Report) -> Vec<String> {
    report
        .checks
        .iter()
        .filter(|r| r.outcome.status == Status::Fail)
        .map(|r| format!("{} N={}: {} -- {:?}", r.suite, r.n, r.outcome.name, r.outcome.witness))
        .collect()
}

/// Every non-skipped check is an exact zero, apart from counterexamples
/// that must be rejected.
fn all_exact_zero(report: &Report, fails: &mut Vec<String>) {
    for r in report.checks.iter().filter(|r| r.outcome.status != Status::Skipped && !r.outcome.name.contains("rejected")) {
        if !matches!(r.outcome.residual, Residual::Exact { zero: true, .. }) {
            fails.push(format!("{} N={}: {} is not an exact zero", r.suite, r.n, r.outcome.name));
        }
    }
}

fn batch_time(report: &Report, suite: &str, n: usize) -> Duration {
    let ms = report.checks.iter().find(|r| r.suite == suite && r.n == n).map(|r| r.wall_time_ms).unwrap_or(0.0);
    Duration::from_secs_f64(ms / 1000.0)
}

fn sizes(report: &Report, suite: &str) -> Vec<usize> {
    let mut v: Vec<usize> = report.suite(suite).iter().map(|r| r.n).collect();
    v.dedup();
    v
}

fn float_max<'a>(records: impl Iterator<Item = &'a Record>) -> f64 {
    records
        .filter_map(|r| match r.outcome.residual {
            Residual::Float { value, .. } => Some(value),
            _ => None,
        })
        .fold(0.0, f64::max)
}

fn named<'a>(report: &'a Report, suite: &str, n: usize, prefix: &str) -> Vec<&'a Record> {
    report.checks.iter().filter(|r| r.suite == suite && r.n == n && r.outcome.name.starts_with(prefix)).collect()
}

#[test]
fn criterion_1_gl_table() {
    let t = Instant::now();
    let r = verify(&config(&["glN-relations"], Some(3), Mode::Exact));
    let mut f = failed(&r);
    all_exact_zero(&r, &mut f);
    if sizes(&r, "glN-relations") != vec![2, 3] {
        f.push(format!("sizes run: {:?}", sizes(&r, "glN-relations")));
    }
    // N² choose 2 commutators plus the diagonal ones: at least N⁴/2 entries
    for (n, min) in [(2, 10), (3, 45)] {
        if named(&r, "glN-relations", n, "[E").len() < min {
            f.push(format!("N={n}: only {} commutators", named(&r, "glN-relations", n, "[E").len()));
        }
    }
    if batch_time(&r, "glN-relations", 3) > Duration::from_secs(60) {
        f.push(format!("N=3 took {:?}", batch_time(&r, "glN-relations", 3)));
    }
    announce(1, "gl(N) commutator table exact at N=2,3; N=3 within 1 min", &f, t.elapsed());
}

#[test]
fn criterion_2_casimir() {
    let t = Instant::now();
    let r = verify(&config(&["casimir"], Some(3), Mode::Exact));
    let mut f = failed(&r);
    all_exact_zero(&r, &mut f);
    if sizes(&r, "casimir") != vec![1, 2, 3] {
        f.push(format!("orders run: {:?}", sizes(&r, "casimir")));
    }
    if batch_time(&r, "casimir", 3) > Duration::from_secs(120) {
        f.push(format!("n=3 took {:?}", batch_time(&r, "casimir", 3)));
    }
    announce(2, "Casimir generating function equals prod(lambda - gamma) for n=1..3; n=3 within 2 min", &f, t.elapsed());
}

#[test]
fn criterion_3_whittaker() {
    let t = Instant::now();
    let r = verify(&config(&["whittaker"], Some(4), Mode::Exact));
    let mut f = failed(&r);
    all_exact_zero(&r, &mut f);
    if sizes(&r, "whittaker") != vec![2, 3, 4] {
        f.push(format!("sizes run: {:?}", sizes(&r, "whittaker")));
    }
    announce(3, "Whittaker equations exact at N=2,3,4", &f, t.elapsed());
}

#[test]
fn criterion_4_yangian() {
    let t = Instant::now();
    let r = verify(&config(&["yangian", "rtt", "residue-recovery"], Some(3), Mode::Exact));
    let mut f = failed(&r);
    all_exact_zero(&r, &mut f);
    for n in [2, 3] {
        for prefix in ["[k", "[e", "e modes", "f modes", "A1 closed form", "B1 closed form", "A1 B1 exchange"] {
            if named(&r, "yangian", n, prefix).is_empty() {
                f.push(format!("yangian N={n}: no '{prefix}' checks"));
            }
        }
        if named(&r, "yangian", n, &format!("A{n} closed form")).is_empty() {
            f.push(format!("N={n}: quantum determinant not checked"));
        }
        if named(&r, "residue-recovery", n, "E").len() < n * n {
            f.push(format!("residue recovery N={n}: too few generators"));
        }
    }
    // cubic Serre relations need two adjacent nodes
    for prefix in ["e cubic", "f cubic"] {
        if named(&r, "yangian", 3, prefix).is_empty() {
            f.push(format!("yangian N=3: no '{prefix}' checks"));
        }
    }
    if !r.checks.iter().any(|x| x.outcome.name.contains("a=3") && x.outcome.name.contains("c=3")) {
        f.push("cubic relations do not reach a=c=3".into());
    }
    if named(&r, "rtt", 2, "RTT").len() != 16 {
        f.push("RTT at N=2 is not entrywise (16 entries)".into());
    }
    if named(&r, "rtt", 2, "qdet T").is_empty() {
        f.push("qdet at N=2 missing".into());
    }
    announce(4, "Yangian relations, Serre a,b,c<=3, minors, RTT N=2, qdet N<=3, residue recovery N<=3", &f, t.elapsed());
}

#[test]
fn criterion_5_quantum_group() {
    let t = Instant::now();
    let r = verify(&config(&["uq-relations", "bimodule", "q-whittaker"], Some(3), Mode::Exact));
    let mut f = failed(&r);
    all_exact_zero(&r, &mut f);
    for n in [2, 3] {
        for prefix in ["pi:", "sl-Q:", "sl-P:", "rho:", "rho~:", "[rho("] {
            let suite = if prefix.starts_with("pi") || prefix.starts_with("sl") { "uq-relations" } else { "bimodule" };
            if named(&r, suite, n, prefix).is_empty() {
                f.push(format!("{suite} N={n}: no '{prefix}' checks"));
            }
        }
        let qw = r.suite("q-whittaker");
        let zero = qw.iter().filter(|x| x.n == n && x.outcome.params.get("c'").map(|c| c == "0").unwrap_or(false) && x.outcome.status == Status::Pass).count();
        let other = qw.iter().filter(|x| x.n == n && x.outcome.params.get("c'").map(|c| c != "0").unwrap_or(false) && x.outcome.status == Status::Pass).count();
        if zero < 2 * (n - 1) || other < 2 * (n - 1) {
            f.push(format!("q-whittaker N={n}: {zero} passes with c'=0, {other} with nonzero c'"));
        }
    }
    for prefix in ["sl2 adjoint: [E, F]", "sl2 dual maximal: [E, F]", "sl2 dual simply-connected: [E, F]"] {
        if named(&r, "bimodule", 2, prefix).is_empty() {
            f.push(format!("missing {prefix}"));
        }
    }
    announce(5, "U_q relations, both sl forms, sl(2) explicit forms, bimodule commutators, q-Whittaker at N<=3", &f, t.elapsed());
}

#[test]
fn criterion_6_randomized_concordance() {
    let t = Instant::now();
    let symbolic: Vec<&str> = suites::SUITES.iter().filter(|s| s.symbolic).map(|s| s.name).collect();
    let mut cfg = config(&symbolic, None, Mode::Both);
    cfg.trials = 10;
    cfg.seed = 20261016;
    let r = verify(&cfg);
    let mut f = failed(&r);
    for s in &symbolic {
        let both: Vec<&Record> = r.suite(s).into_iter().filter(|x| x.outcome.exact.is_some() && x.outcome.randomized.is_some()).collect();
        if both.is_empty() {
            f.push(format!("{s}: no check carries both verdicts"));
        }
        for x in both {
            if x.outcome.exact != x.outcome.randomized {
                f.push(format!("{s} N={}: {} verdicts differ", x.n, x.outcome.name));
            }
        }
    }
    // a false identity must be rejected by both
    let rep = GzRep::new(2);
    let lhs = rep.generator(1, 2).unwrap().commutator(&rep.generator(2, 1).unwrap()).unwrap();
    let wrong = rep.generator(1, 1).unwrap().add(&rep.generator(2, 2).unwrap()).unwrap();
    let o = Identity::ops("[E12,E21] = E11 + E22", &lhs, &wrong).judge(Mode::Both, 5, 10);
    if o.exact != Some(false) || o.randomized != Some(false) {
        f.push(format!("false identity: exact {:?}, randomized {:?}", o.exact, o.randomized));
    }
    let s = Identity::scalars("1 = 2", vec!["hbar".into()], RatFunc::one(), RatFunc::from_int(2)).judge(Mode::Both, 5, 10);
    if s.exact != Some(false) || s.randomized != Some(false) {
        f.push("scalar false identity not rejected by both".into());
    }
    announce(6, "Schwartz-Zippel (10 trials) agrees with exact verdicts on every symbolic suite", &f, t.elapsed());
}

#[test]
fn criterion_7_toda() {
    let t = Instant::now();
    let r = verify(&config(&["toda-spectral", "toda-dual"], Some(3), Mode::Exact));
    let mut f = failed(&r);
    let spectral = |n: usize| named(&r, "toda-spectral", n, &format!("A_{n}(lambda)")).into_iter().chain(named(&r, "toda-spectral", n, "h_k"));
    let (r1, r2, r3) = (float_max(spectral(1)), float_max(spectral(2)), float_max(spectral(3)));
    if !(r1 <= 1e-12) {
        f.push(format!("N=1 residual {r1:e}"));
    }
    if !(r2 <= 1e-6) {
        f.push(format!("N=2 residual {r2:e}"));
    }
    if !(r3 <= 1e-4) {
        f.push(format!("N=3 residual {r3:e}"));
    }
    if let Some(rec) = named(&r, "toda-spectral", 2, "A_2(lambda)").first() {
        if rec.outcome.params.get("points").map(|p| p.as_str()) != Some("49") {
            f.push(format!("N=2 used {:?} of 49 grid points", rec.outcome.params.get("points")));
        }
    } else {
        f.push("N=2 spectral record missing".into());
    }
    if batch_time(&r, "toda-spectral", 2) > Duration::from_secs(30) {
        f.push(format!("N=2 took {:?}", batch_time(&r, "toda-spectral", 2)));
    }
    if batch_time(&r, "toda-spectral", 3) > Duration::from_secs(600) {
        f.push(format!("N=3 took {:?}", batch_time(&r, "toda-spectral", 3)));
    }
    let dual = named(&r, "toda-dual", 2, "A_1(gamma_2");
    let rd = float_max(dual.iter().copied().filter(|x| !x.outcome.name.contains("applied at")));
    if dual.is_empty() || !(rd <= 1e-5) {
        f.push(format!("dual residual {rd:e} over {} checks", dual.len()));
    }
    for n in [2, 3] {
        let tr = named(&r, "toda-spectral", n, "truncation");
        if tr.len() != 1 || tr[0].outcome.status != Status::Pass {
            f.push(format!("N={n}: truncation self-consistency missing or failing"));
        }
    }
    let detail = format!("Toda N=1 {r1:.1e}, N=2 {r2:.1e}, N=3 {r3:.1e}, dual {rd:.1e}, truncation T vs 1.5T");
    announce(7, &detail, &f, t.elapsed());
}

#[test]
fn criterion_8_pairing() {
    let t = Instant::now();
    let r = verify(&config(&["pairing"], None, Mode::Exact));
    let mut f = failed(&r);
    let skew = named(&r, "pairing", 2, "<phi,");
    let samples: std::collections::BTreeSet<&str> = skew.iter().filter_map(|x| x.outcome.params.get("sample").map(|s| s.as_str())).collect();
    if samples.len() != 3 {
        f.push(format!("{} sample pairs", samples.len()));
    }
    let worst = float_max(skew.iter().copied());
    if !(worst <= 1e-6) {
        f.push(format!("worst skew residual {worst:e}"));
    }
    announce(8, &format!("pairing skew-symmetry at N=2 for 3 pairs, worst {worst:.1e}"), &f, t.elapsed());
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gztoda"));
    c.env_remove("GZTODA_JOBS");
    c
}

fn csv_body(path: &Path) -> (String, String) {
    let text = std::fs::read_to_string(path).unwrap();
    let (head, body) = text.split_once('\n').unwrap();
    (head.to_string(), body.to_string())
}

#[test]
fn criterion_9_determinism_and_cli_contract() {
    let t = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("config.json");
    std::fs::write(&cfg_path, r#"{"suites": ["casimir", "uq-relations", "toda-dual", "pairing"], "mode": "both", "seed": 7, "nMax": 2}"#).unwrap();
    let mut f = Vec::new();
    let mut reports = Vec::new();
    for (i, jobs) in ["1", "2"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.json"));
        let st = bin().args(["verify", "--config"]).arg(&cfg_path).arg("--out").arg(&out).env("GZTODA_JOBS", jobs).output().unwrap().status;
        if st.code() != Some(0) {
            f.push(format!("verify run {i} exited {:?}", st.code()));
        }
        reports.push(without_timings(&std::fs::read_to_string(&out).unwrap()).unwrap());
    }
    if reports[0] != reports[1] {
        f.push("reports differ beyond timings".into());
    }
    if reports[0]["environment"]["seed"] != 7 || reports[0]["environment"]["configHash"].as_str().map(|h| h.len()) != Some(64) {
        f.push("environment block lacks seed or config hash".into());
    }
    // flag overrides change the hash, thread count does not
    let cfg = Config::load(&cfg_path).unwrap();
    if reports[0]["environment"]["configHash"] != cfg.hash().as_str() {
        f.push("report hash differs from the config hash".into());
    }
    let mut tables = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("psi{i}.csv"));
        let st = bin().args(["eval", "--out"]).arg(&out).args(["--jobs", "1"]).output().unwrap().status;
        if st.code() != Some(0) {
            f.push(format!("eval run {i} exited {:?}", st.code()));
        }
        tables.push(csv_body(&out));
    }
    if tables[0] != tables[1] {
        f.push("CSV bodies differ".into());
    }
    if !tables[0].0.contains(&Config::default().hash()) {
        f.push("CSV header lacks the config hash".into());
    }
    let table = run_eval(&Config::default()).unwrap();
    if table.body.lines().count() != 41 * 41 || !(table.max_error <= 1e-6) {
        f.push(format!("eval table: {} rows, max error {:e}", table.body.lines().count(), table.max_error));
    }
    // exit codes
    let list = bin().arg("list").output().unwrap();
    let text = String::from_utf8_lossy(&list.stdout);
    if list.status.code() != Some(0) || !text.contains("casimir → cas1/cas2") || !text.contains("bimodule → wnc1/dg2/commt") || text.lines().count() != 13 {
        f.push("list output".into());
    }
    let unknown = bin().args(["verify", "--suite", "nonsense", "--out"]).arg(dir.path().join("x.json")).output().unwrap();
    if unknown.status.code() != Some(2) || !String::from_utf8_lossy(&unknown.stderr).contains("span-probe") {
        f.push(format!("unknown suite exited {:?}", unknown.status.code()));
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"seed\": \"seven\"}").unwrap();
    let st = bin().args(["verify", "--config"]).arg(&bad).output().unwrap().status;
    if st.code() != Some(2) {
        f.push(format!("malformed config exited {:?}", st.code()));
    }
    let strict = dir.path().join("strict.json");
    std::fs::write(&strict, r#"{"suites": ["toda-dual"], "toda": {"dualTolerance": 1e-30}}"#).unwrap();
    let st = bin().args(["verify", "--config"]).arg(&strict).arg("--out").arg(dir.path().join("s.json")).output().unwrap().status;
    if st.code() != Some(1) {
        f.push(format!("failing run exited {:?}", st.code()));
    }
    let unwritable = bin().args(["verify", "--suite", "casimir", "--n-max", "1", "--out", "/nonexistent/dir/r.json"]).output().unwrap().status;
    if unwritable.code() != Some(3) {
        f.push(format!("unwritable output exited {:?}", unwritable.code()));
    }
    announce(9, "identical reports (timings aside) and CSV bodies across runs; exit codes 0/1/2/3", &f, t.elapsed());
}

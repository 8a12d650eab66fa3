use std::time::Instant;

use gztoda_core::gzrep::{module_span_probe, verify_casimir, verify_gl_relations, verify_whittaker};
use gztoda_core::verify::{Mode, RunOpts, Status};

fn all_pass(out: &[gztoda_core::verify::Outcome]) {
    for o in out {
        assert_ne!(o.status, Status::Fail, "{}: {:?}", o.name, o.witness);
    }
}

#[test]
fn gl3_table_exact_and_randomized() {
    let t = Instant::now();
    let out = verify_gl_relations(3, RunOpts { mode: Mode::Both, seed: 7, trials: 10 });
    assert_eq!(out.len(), 81);
    all_pass(&out);
    assert!(out.iter().all(|o| o.exact == Some(true) && o.randomized == Some(true)));
    eprintln!("gl(3) table: {:?}", t.elapsed());
}

#[test]
fn casimir_up_to_three() {
    for n in 1..=3 {
        let t = Instant::now();
        let out = verify_casimir(n, RunOpts::default());
        assert!(!out.is_empty());
        all_pass(&out);
        eprintln!("casimir n={n}: {:?}", t.elapsed());
    }
}

#[test]
fn whittaker_three_and_four() {
    for n in [3, 4] {
        let t = Instant::now();
        let out = verify_whittaker(n, RunOpts::default());
        assert_eq!(out.len(), 2 * (n - 1) + 1);
        all_pass(&out);
        eprintln!("whittaker N={n}: {:?}", t.elapsed());
    }
}

#[test]
fn span_probe_three() {
    let out = module_span_probe(3, 3);
    all_pass(&out);
    let passed = out.iter().filter(|o| o.status == Status::Pass).count();
    assert!(passed >= 6, "only {passed} probes passed");
}

#[cfg(feature = "long-running")]
#[test]
fn gl4_table_exact() {
    let out = verify_gl_relations(4, RunOpts { mode: Mode::Exact, seed: 7, trials: 10 });
    assert!(out.len() >= 256);
    all_pass(&out);
    assert!(out.iter().all(|o| o.exact == Some(true)));
}

#[cfg(feature = "long-running")]
#[test]
fn casimir_four_on_size_four() {
    let ids = gztoda_core::gzrep::casimir_identities(4, 4).expect("identities");
    let out = gztoda_core::verify::judge_all(&ids, RunOpts { mode: Mode::Exact, seed: 7, trials: 10 });
    all_pass(&out);
    assert!(out.iter().all(|o| o.exact == Some(true)));
}

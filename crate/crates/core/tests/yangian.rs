use std::time::Instant;

use gztoda_core::verify::{Mode, RunOpts, Status};
use gztoda_core::yangian::{residue_recover, verify_rtt, verify_yangian_relations};

fn report(label: &str, outs: &[gztoda_core::verify::Outcome]) -> usize {
    let mut fails = 0;
    for o in outs {
        if o.status == Status::Fail {
            fails += 1;
            if fails <= 8 {
                eprintln!("{label} FAIL {} {:?}", o.name, o.witness);
            }
        }
        if let Some(n) = &o.note {
            eprintln!("{label} note {}: {n}", o.name);
        }
    }
    fails
}

#[test]
fn relations_n2_n3() {
    for n in 2..=3 {
        let t = Instant::now();
        let outs = verify_yangian_relations(n, RunOpts::default());
        eprintln!("N={n}: {} outcomes in {:?}", outs.len(), t.elapsed());
        assert_eq!(report("yangian", &outs), 0);
        assert_eq!(outs.iter().any(|o| o.name.contains("cubic")), n >= 3);
    }
}

#[test]
fn rtt_n2_both_modes() {
    let outs = verify_rtt(2, RunOpts { mode: Mode::Both, seed: 7, trials: 10 });
    assert_eq!(outs.len(), 16 + 1 + 4);
    assert_eq!(report("rtt", &outs), 0);
    assert!(outs.iter().all(|o| o.exact == Some(true) && o.randomized == Some(true)));
}

#[test]
fn qdet_n3() {
    let outs = verify_rtt(3, RunOpts::default());
    assert_eq!(report("rtt3", &outs), 0);
}

#[test]
fn residue_recovery_up_to_3() {
    for n in 1..=3 {
        let outs = residue_recover(n, RunOpts::default());
        assert_eq!(outs.len(), n * n);
        assert_eq!(report("residue", &outs), 0);
    }
}

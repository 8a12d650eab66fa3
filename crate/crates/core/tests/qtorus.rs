use gztoda_core::exact::RatFunc;
use gztoda_core::qtorus::*;
use gztoda_core::verify::{Mode, Outcome, RunOpts, Status};
use proptest::prelude::*;

fn opts(mode: Mode) -> RunOpts {
    RunOpts { mode, seed: 7, ..RunOpts::default() }
}

fn fails(out: &[Outcome]) -> Vec<String> {
    out.iter().filter(|o| !o.passed()).map(|o| format!("{}: {:?}", o.name, o.witness)).collect()
}

#[test]
fn gl_relations_n2() {
    let out = verify_uq_relations(2, UqAlgebra::Gl, opts(Mode::Both));
    assert!(fails(&out).is_empty(), "{:#?}", fails(&out));
    assert!(out.iter().any(|o| o.name.contains("[E12, E21]")));
}

#[test]
fn sl_forms_n2() {
    for alg in [UqAlgebra::SlAdjoint, UqAlgebra::SlSimplyConnected] {
        let out = verify_uq_relations(2, alg, opts(Mode::Both));
        assert!(fails(&out).is_empty(), "{alg:?}: {:#?}", fails(&out));
    }
}

#[test]
fn bimodule_n2() {
    let out = verify_bimodule(2, opts(Mode::Exact));
    assert!(fails(&out).is_empty(), "{:#?}", fails(&out));
    assert!(out.iter().any(|o| o.name.starts_with("sl2 dual maximal")));
    assert!(out.iter().any(|o| o.name.starts_with("sl2 dual simply-connected")));
}

#[test]
fn q_whittaker_n2() {
    for c2 in [vec![vec![0, 0], vec![0, 0]], vec![vec![2, 2], vec![2, 4]]] {
        let out = verify_q_whittaker(2, &c2, opts(Mode::Exact));
        assert!(fails(&out).is_empty(), "{c2:?}: {:#?}", fails(&out));
        for o in &out {
            println!("{} {:?} {:?}", o.name, o.status, o.note);
        }
    }
}

#[test]
fn c_prime_validation() {
    let out = verify_q_whittaker(2, &[vec![1, 0], vec![0, 0]], opts(Mode::Exact));
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].status, Status::Fail);
    assert!(out[0].witness.as_deref().unwrap().starts_with("BAD_MATRIX"));
}

#[test]
fn out_of_range() {
    assert!(!verify_uq_relations(4, UqAlgebra::Gl, opts(Mode::Exact))[0].passed());
}

fn monomial(t: &std::sync::Arc<Torus>, e: &[i16; 4], c: &[i32; 2]) -> QTorusElement {
    let f = RatFunc::monomial(&[(t.v(1, 1), c[0]), (t.w(1, 1), c[1])]);
    let u = QTorusElement::shift(t, 1, 1, e[0], false).unwrap();
    let w = QTorusElement::shift(t, 1, 1, e[1], true).unwrap();
    let v2 = QTorusElement::scalar(t, RatFunc::monomial(&[(t.v(2, 1), e[2] as i32), (t.s(), e[3] as i32)]));
    u.mul(&w).unwrap().mul(&v2).unwrap().scale(&f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn normal_ordering_is_associative(
        a in prop::array::uniform4(-3i16..=3), b in prop::array::uniform4(-3i16..=3), c in prop::array::uniform4(-3i16..=3),
        ca in prop::array::uniform2(-2i32..=2), cb in prop::array::uniform2(-2i32..=2), cc in prop::array::uniform2(-2i32..=2),
    ) {
        let t = Torus::new(2);
        let (x, y, z) = (monomial(&t, &a, &ca), monomial(&t, &b, &cb), monomial(&t, &c, &cc));
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn sl2_observations() {
    let out = verify_bimodule(2, opts(Mode::Exact));
    let obs = out.iter().find(|o| o.name.starts_with("sl2 adjoint [E, F] with")).unwrap();
    assert_eq!(obs.status, Status::Skipped);
    assert_eq!(obs.note.as_deref(), Some("gives twice the right-hand side"));
}

#[test]
fn n3_all_relation_suites() {
    for alg in [UqAlgebra::Gl, UqAlgebra::SlAdjoint, UqAlgebra::SlSimplyConnected] {
        let out = verify_uq_relations(3, alg, opts(Mode::Exact));
        assert!(fails(&out).is_empty(), "{alg:?}: {:#?}", fails(&out));
    }
    let out = verify_bimodule(3, opts(Mode::Exact));
    assert!(fails(&out).is_empty(), "{:#?}", fails(&out));
    assert_eq!(out.iter().filter(|o| o.name.starts_with("[rho(")).count(), 7 * 7);
}

#[test]
fn q_whittaker_n3() {
    let zero = vec![vec![0; 3]; 3];
    let c2 = vec![vec![2, 0, 2], vec![0, 2, 0], vec![2, 0, 4]];
    for c in [zero, c2] {
        let out = verify_q_whittaker(3, &c, opts(Mode::Both));
        assert!(fails(&out).is_empty(), "{c:?}: {:#?}", fails(&out));
        assert_eq!(out.iter().filter(|o| o.status == Status::Pass).count(), 6);
        let phase = out.iter().find(|o| o.name.starts_with("rho~(E32) w' with phase")).unwrap();
        assert_eq!(phase.note.as_deref(), Some("off by q~^-1"));
    }
}

#[test]
fn raising_search_reports_only() {
    for n in [2, 3] {
        let out = raising_ansatz_search(n);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].status, Status::Skipped);
        println!("{:?}", out[0].note);
    }
}

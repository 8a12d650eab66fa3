use std::time::Instant;

use gztoda_core::toda::{
    build_toda_operators, lgamma_complex, mb_eigenfunction, pairing_check, verify_dual_equation, verify_spectral,
    EigenfunctionSpec, MbKernel, PairingSample, SpectralConfig, TodaError,
};
use gztoda_core::toda::spectral::{refinement_study, symmetry_probe};
use gztoda_core::verify::Status;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm().max(1.0)
}

#[test]
fn lgamma_frozen_values() {
    let cases = [
        (c(0.5, 0.0), c(0.5723649429247000871, 0.0)),
        (c(5.0, 0.0), c(3.178053830347945620, 0.0)),
        (c(-2.5, 3.0), c(-7.47823604205031497, -5.72610427191038684)),
        (c(0.1, -40.0), c(-63.38846256993901994, -106.9259012676440596)),
        (c(-7.3, 0.2), c(-8.03797257291898459, -24.3372867533024708)),
        (c(3.0, 25.0), c(-30.29979091033337284, 59.27574425466425422)),
    ];
    for (z, want) in cases {
        let got = lgamma_complex(z).unwrap();
        assert!(close(got, want, 1e-13), "lgamma({z}) = {got}, want {want}");
    }
    assert!(matches!(lgamma_complex(c(-3.0, 0.0)), Err(TodaError::Pole(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lgamma_functional_equation(re in -30.0f64..30.0, im in -50.0f64..50.0) {
        let z = c(re, im);
        prop_assume!(z.im.abs() > 1e-3 || (z.re - z.re.round()).abs() > 1e-3);
        let lhs = lgamma_complex(z + 1.0).unwrap();
        let rhs = lgamma_complex(z).unwrap() + z.ln();
        let d = lhs - rhs;
        // equal modulo 2πi
        let k = (d.im / (2.0 * std::f64::consts::PI)).round();
        let r = c(d.re, d.im - 2.0 * std::f64::consts::PI * k);
        prop_assert!(r.norm() <= 1e-12 * lhs.norm().max(1.0), "z={} r={}", z, r);
    }

    #[test]
    fn lgamma_reflection(re in -20.0f64..20.0, im in -50.0f64..50.0) {
        let z = c(re, im);
        prop_assume!(z.im.abs() > 1e-3);
        // Γ(z)Γ(1−z) = π / sin(πz)
        let lhs = (lgamma_complex(z).unwrap() + lgamma_complex(1.0 - z).unwrap()).exp();
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "z={}", z);
    }
}

#[test]
fn n2_matches_frozen_values() {
    let spec = EigenfunctionSpec::real(&[0.7, -0.3], 1.0);
    let k = MbKernel::new(&spec).unwrap();
    let cases = [
        ([0.0, 0.0], c(1.160949928360669763, 0.0)),
        ([1.0, -0.5], c(0.096564337748914991, 0.009688751163186079)),
        ([-2.0, 1.5], c(6.582762046941371558, -0.660479271396411723)),
        ([0.3, 0.3], c(1.152601114670400300, 0.138979878475968574)),
    ];
    for (x, want) in cases {
        let got = k.eval(&x);
        assert!((got - want).norm() <= 1e-10 * want.norm(), "psi{x:?} = {got}, want {want}");
    }
    assert_eq!(mb_eigenfunction(&spec, &[0.0, 0.0]).unwrap(), k.eval(&[0.0, 0.0]));
}

#[test]
fn n1_spectral_to_machine_precision() {
    let spec = EigenfunctionSpec::real(&[0.7], 1.0);
    let out = verify_spectral(&spec, &SpectralConfig::default_for(1));
    for o in &out {
        assert!(o.passed(), "{o:?}");
    }
}

#[test]
fn n2_spectral_on_default_grid() {
    let t = Instant::now();
    let spec = EigenfunctionSpec::real(&[0.7, -0.3], 1.0);
    let out = verify_spectral(&spec, &SpectralConfig::default_for(2));
    for o in &out {
        eprintln!("{} {:?} {:?} {:?}", o.name, o.status, o.residual, o.note);
        assert!(o.passed(), "{o:?}");
    }
    assert!(t.elapsed().as_secs() <= 30, "took {:?}", t.elapsed());
}

#[test]
fn n2_dual_equation() {
    let spec = EigenfunctionSpec::real(&[0.7, -0.3], 1.0);
    for j in 1..=2 {
        for x in [[0.0, 0.0], [0.5, -1.0], [-1.0, 0.5]] {
            for o in verify_dual_equation(&spec, &x, j, 5e-3, 1e-5) {
                eprintln!("{} {:?} {:?}", o.name, o.status, o.residual);
                assert!(o.passed(), "{o:?}");
            }
        }
    }
}

#[test]
fn n2_observations() {
    let spec = EigenfunctionSpec::real(&[0.7, -0.3], 1.0);
    let r = refinement_study(&spec, &[0.5, -0.5], 5e-3, 4);
    eprintln!("{:?}", r.note);
    assert_eq!(r.status, Status::Skipped);
    let s = symmetry_probe(&spec, &[vec![0.0, 0.0], vec![1.0, -0.5]]);
    eprintln!("{:?} {:?}", s.residual, s.note);
    assert_eq!(s.status, Status::Skipped);
}

#[test]
fn pairing_n2_samples() {
    let out = pairing_check([0.7, -0.3], 1.0, &PairingSample::defaults(), 1e-6);
    assert_eq!(out.len(), 1 + 3 * 3);
    for o in &out {
        eprintln!("{} {:?} {:?}", o.name, o.status, o.residual);
        assert!(o.passed(), "{o:?}");
    }
}

#[test]
fn operator_constructions_agree_to_n6() {
    for n in 1..=6 {
        let ops = build_toda_operators(n).unwrap();
        for o in &ops.checks {
            assert!(o.passed(), "N={n}: {o:?}");
        }
    }
}

#[test]
fn operator_n2_symbols() {
    let ops = build_toda_operators(2).unwrap();
    let a2 = ops.open[2].display();
    let t2 = ops.transfer.display();
    eprintln!("A2 = {a2}\nt2 = {t2}");
    assert!(build_toda_operators(7).is_err());
}

#[test]
fn contour_obstruction_reported() {
    let spec = EigenfunctionSpec::new(vec![c(0.7, 0.6), c(-0.3, 0.0)], 1.0);
    assert!(matches!(MbKernel::new(&spec), Err(TodaError::ContourObstruction(_))));
}

#[test]
fn n3_spectral_coarse() {
    let t = Instant::now();
    let spec = EigenfunctionSpec::real(&[0.7, -0.3, 0.2], 1.0);
    let out = verify_spectral(&spec, &SpectralConfig::default_for(3));
    for o in &out {
        eprintln!("{} {:?} {:?} {:?}", o.name, o.status, o.residual, o.note);
        assert!(o.passed(), "{o:?}");
    }
    eprintln!("N=3 took {:?}", t.elapsed());
}

#[test]
fn raised_contour_gives_the_same_function() {
    let spec = EigenfunctionSpec::real(&[0.7, -0.3], 1.0);
    let base = MbKernel::new(&spec).unwrap();
    let mut q = spec.quad.clone();
    q.contour = vec![2.0];
    q.truncation += 4.0;
    q.nodes += 96;
    let raised = MbKernel::new(&spec.clone().with_quad(q)).unwrap();
    for x in [[0.0, 0.0], [1.0, -0.5], [-2.0, 1.5], [2.0, 0.0]] {
        let (a, b) = (base.eval(&x), raised.eval(&x));
        assert!((a - b).norm() <= 1e-10 * a.norm(), "x={x:?}: {a} vs {b}");
    }
}

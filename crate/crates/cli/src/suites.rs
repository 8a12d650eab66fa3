//! Named verification suites. Anchors are short labels that travel into
//! reports and `list`.

use gztoda_core::gzrep::{module_span_probe, verify_casimir, verify_gl_relations, verify_whittaker};
use gztoda_core::qtorus::{raising_ansatz_search, verify_bimodule, verify_q_whittaker, verify_uq_relations, UqAlgebra};
use gztoda_core::toda::spectral::{refinement_study, symmetry_probe};
use gztoda_core::toda::{pairing_check, verify_dual_equation, verify_spectral, EigenfunctionSpec, PairingSample, SpectralConfig};
use gztoda_core::verify::{Outcome, Residual, RunOpts, Status};
use gztoda_core::yangian::{residue_recover, verify_rtt, verify_yangian_relations};

use crate::config::Config;

pub struct Suite {
    pub name: &'static str,
    pub anchors: &'static str,
    /// Smallest size, default largest size, largest supported size.
    pub sizes: (usize, usize, usize),
    /// Whether the suite runs exact identities (and so honours `mode`).
    pub symbolic: bool,
    run: fn(&Config, RunOpts, usize) -> Vec<Outcome>,
}

impl Suite {
    /// Sizes to run and sizes refused because they exceed the supported range.
    pub fn sizes_for(&self, n_max: Option<usize>) -> (Vec<usize>, Vec<usize>) {
        let (lo, def, hard) = self.sizes;
        let top = n_max.unwrap_or(def);
        let run = (lo..=top.min(hard)).collect();
        let refused = if top > hard { (hard + 1..=top).collect() } else { Vec::new() };
        (run, refused)
    }

    pub fn run(&self, cfg: &Config, opts: RunOpts, n: usize) -> Vec<Outcome> {
        (self.run)(cfg, opts, n)
    }
}

pub const SUITES: &[Suite] = &[
    Suite { name: "glN-relations", anchors: "ah/m1", sizes: (2, 3, 4), symbolic: true, run: |_, o, n| verify_gl_relations(n, o) },
    Suite { name: "casimir", anchors: "cas1/cas2", sizes: (1, 3, 3), symbolic: true, run: |_, o, n| verify_casimir(n, o) },
    Suite { name: "whittaker", anchors: "fww′/fww″", sizes: (2, 4, 4), symbolic: true, run: |_, o, n| verify_whittaker(n, o) },
    Suite { name: "yangian", anchors: "first/cw1/y4", sizes: (2, 3, 3), symbolic: true, run: |_, o, n| verify_yangian_relations(n, o) },
    Suite { name: "rtt", anchors: "y2", sizes: (2, 2, 2), symbolic: true, run: |_, o, n| verify_rtt(n, o) },
    Suite { name: "residue-recovery", anchors: "rtt3", sizes: (2, 3, 3), symbolic: true, run: |_, o, n| residue_recover(n, o) },
    Suite { name: "uq-relations", anchors: "d1/d3/rsln1-4", sizes: (2, 3, 3), symbolic: true, run: run_uq },
    Suite { name: "bimodule", anchors: "wnc1/dg2/commt", sizes: (2, 3, 3), symbolic: true, run: |_, o, n| verify_bimodule(n, o) },
    Suite { name: "q-whittaker", anchors: "wv1/wv2/lw3", sizes: (2, 3, 3), symbolic: true, run: run_q_whittaker },
    Suite { name: "toda-spectral", anchors: "tch16/wf1", sizes: (1, 3, 3), symbolic: false, run: run_toda_spectral },
    Suite { name: "toda-dual", anchors: "tch16", sizes: (2, 2, 2), symbolic: false, run: run_toda_dual },
    Suite { name: "pairing", anchors: "in1′/in2′/inv5", sizes: (2, 2, 2), symbolic: false, run: run_pairing },
    Suite { name: "span-probe", anchors: "bas1/bas2", sizes: (2, 3, 3), symbolic: false, run: |_, _, n| module_span_probe(n, 3) },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

pub fn names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

/// One line per suite: `name → anchors  (N lo..def, max hard)`.
pub fn listing() -> String {
    let mut out = String::new();
    for s in SUITES {
        let (lo, def, hard) = s.sizes;
        out.push_str(&format!("{} → {}  (N {lo}..{def}, max {hard})\n", s.name, s.anchors));
    }
    out
}

fn run_uq(_: &Config, o: RunOpts, n: usize) -> Vec<Outcome> {
    let mut out = Vec::new();
    for (alg, tag) in [(UqAlgebra::Gl, "gl"), (UqAlgebra::SlAdjoint, "sl adjoint"), (UqAlgebra::SlSimplyConnected, "sl simply connected")] {
        out.extend(verify_uq_relations(n, alg, o).into_iter().map(|x| x.with_param("algebra", tag)));
    }
    out
}

fn run_q_whittaker(cfg: &Config, o: RunOpts, n: usize) -> Vec<Outcome> {
    let zero = vec![vec![0i64; n]; n];
    let mut out: Vec<Outcome> = verify_q_whittaker(n, &zero, o).into_iter().map(|x| x.with_param("c'", "0")).collect();
    if let Some(c) = cfg.q_whittaker.for_size(n) {
        let doubled: Vec<Vec<i64>> = c.iter().map(|r| r.iter().map(|v| 2 * v).collect()).collect();
        let label = format!("{c:?}");
        out.extend(verify_q_whittaker(n, &doubled, o).into_iter().map(|x| x.with_param("c'", &label)));
    }
    out.extend(raising_ansatz_search(n));
    out
}

fn toda_spec(cfg: &Config, n: usize) -> Result<EigenfunctionSpec, Outcome> {
    match cfg.toda.gamma(n) {
        Some(g) if g.len() == n => Ok(EigenfunctionSpec::real(g, cfg.toda.hbar)),
        _ => Err(Outcome::error(format!("toda N={n}"), format!("config needs {n} real labels for N={n}"))),
    }
}

fn run_toda_spectral(cfg: &Config, _: RunOpts, n: usize) -> Vec<Outcome> {
    let spec = match toda_spec(cfg, n) {
        Ok(s) => s,
        Err(o) => return vec![o],
    };
    let mut out = verify_spectral(&spec, &SpectralConfig::default_for(n));
    if n == 2 {
        out.push(refinement_study(&spec, &[0.5, -0.5], 5e-3, 4));
        out.push(symmetry_probe(&spec, &[vec![0.0, 0.0], vec![1.0, -0.5], vec![-2.0, 1.5]]));
    }
    out
}

fn run_toda_dual(cfg: &Config, _: RunOpts, n: usize) -> Vec<Outcome> {
    let spec = match toda_spec(cfg, n) {
        Ok(s) => s,
        Err(o) => return vec![o],
    };
    let mut out = Vec::new();
    for x in cfg.toda.dual_points.iter().filter(|x| x.len() == n) {
        for j in 1..=n {
            out.extend(verify_dual_equation(&spec, x, j, 5e-3, cfg.toda.dual_tolerance));
        }
    }
    if out.is_empty() {
        out.push(Outcome::new("toda dual", Status::Skipped, Residual::None).with_note(format!("no {n}-dimensional dual points configured")));
    }
    out
}

fn run_pairing(cfg: &Config, _: RunOpts, _: usize) -> Vec<Outcome> {
    let g = &cfg.toda.gamma2;
    if g.len() != 2 {
        return vec![Outcome::error("pairing", "config needs 2 real labels in gamma2")];
    }
    pairing_check([g[0], g[1]], cfg.toda.hbar, &PairingSample::defaults(), cfg.toda.pairing_tolerance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_suites_with_anchors() {
        assert_eq!(SUITES.len(), 13);
        let l = listing();
        assert!(l.contains("casimir → cas1/cas2"));
        assert!(l.contains("bimodule → wnc1/dg2/commt"));
        assert_eq!(l.lines().count(), 13);
    }

    #[test]
    fn size_ranges() {
        let s = find("whittaker").unwrap();
        assert_eq!(s.sizes_for(None), (vec![2, 3, 4], vec![]));
        assert_eq!(s.sizes_for(Some(3)), (vec![2, 3], vec![]));
        assert_eq!(s.sizes_for(Some(6)), (vec![2, 3, 4], vec![5, 6]));
        assert_eq!(find("pairing").unwrap().sizes_for(Some(1)), (vec![], vec![]));
    }
}

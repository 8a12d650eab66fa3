//! Finite-difference checks of the spectral system on the Mellin-Barnes
//! eigenfunction.

use std::cell::RefCell;
use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mb::{EigenfunctionSpec, MbKernel};
use super::operators::{build_toda_operators, eval_coeff, TodaOp};
use super::TodaError;
use crate::par::par_map;
use crate::verify::{Outcome, Residual, Status};

/// Fourth-order central first-derivative weights at offsets −2..2, times 12h.
const D1: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralConfig {
    pub grid: Vec<Vec<f64>>,
    pub lambdas: Vec<f64>,
    /// Finite-difference step.
    pub step: f64,
    pub tolerance: f64,
}

impl SpectralConfig {
    /// Integer grid on `[−3, 3]²` for N=2, a few points for N=1 and the
    /// corners of `[−½, ½]³` for N=3.
    pub fn default_for(n: usize) -> Self {
        let lambdas = vec![0.0, 1.0, 2.5];
        match n {
            1 => SpectralConfig { grid: vec![vec![-1.0], vec![0.0], vec![0.5], vec![2.0]], lambdas, step: 1e-3, tolerance: 1e-12 },
            2 => {
                let mut grid = Vec::new();
                for a in -3..=3 {
                    for b in -3..=3 {
                        grid.push(vec![a as f64, b as f64]);
                    }
                }
                SpectralConfig { grid, lambdas, step: 5e-3, tolerance: 1e-6 }
            }
            _ => {
                let mut grid = Vec::new();
                for a in [-0.5, 0.5] {
                    for b in [-0.5, 0.5] {
                        for c in [-0.5, 0.5] {
                            grid.push(vec![a, b, c]);
                        }
                    }
                }
                SpectralConfig { grid, lambdas, step: 2e-2, tolerance: 1e-4 }
            }
        }
    }
}

/// Lazily filled values of `ψ` on the stencil lattice around one point.
struct Stencil<'a> {
    kernel: &'a MbKernel,
    x: Vec<f64>,
    h: f64,
    cache: RefCell<HashMap<Vec<i8>, Complex64>>,
}

impl<'a> Stencil<'a> {
    fn new(kernel: &'a MbKernel, x: &[f64], h: f64) -> Self {
        Stencil { kernel, x: x.to_vec(), h, cache: RefCell::new(HashMap::new()) }
    }

    fn at(&self, off: &[i8]) -> Complex64 {
        if let Some(v) = self.cache.borrow().get(off) {
            return *v;
        }
        let p: Vec<f64> = self.x.iter().zip(off).map(|(x, &k)| x + self.h * k as f64).collect();
        let v = self.kernel.eval(&p);
        self.cache.borrow_mut().insert(off.to_vec(), v);
        v
    }

    /// `∂^S ψ` for a set of distinct coordinates.
    fn mixed(&self, set: &[usize]) -> Complex64 {
        let n = self.x.len();
        let mut total = Complex64::new(0.0, 0.0);
        let count = 4usize.pow(set.len() as u32);
        let offs = [-2i8, -1, 1, 2];
        for code in 0..count {
            let mut off = vec![0i8; n];
            let mut w = 1.0;
            let mut c = code;
            for &v in set {
                let k = offs[c % 4];
                c /= 4;
                off[v] = k;
                w *= D1[(k + 2) as usize];
            }
            total += self.at(&off) * w;
        }
        total / (12.0 * self.h).powi(set.len() as i32)
    }

    fn psi(&self) -> Complex64 {
        self.at(&vec![0; self.x.len()])
    }

    /// `(op ψ)(x)` at spectral parameter `λ`.
    fn apply(&self, op: &TodaOp, lambda: Complex64, hbar: f64) -> Result<Complex64, TodaError> {
        let mut total = Complex64::new(0.0, 0.0);
        for (key, c) in op.terms() {
            if key.p.iter().any(|&e| e > 1) {
                return Err(TodaError::BadSpec("only first-order mixed derivatives are supported".into()));
            }
            let set: Vec<usize> = key.p.iter().enumerate().filter(|(_, &e)| e == 1).map(|(i, _)| i).collect();
            let ex: f64 = key.x.iter().zip(&self.x).map(|(&a, x)| a as f64 * x).sum();
            let d = if set.is_empty() { self.psi() } else { self.mixed(&set) };
            let p_factor = Complex64::new(0.0, -hbar).powi(set.len() as i32);
            total += eval_coeff(c, lambda, hbar) * ex.exp() * p_factor * d;
        }
        Ok(total)
    }
}

/// Elementary symmetric polynomials `e_0..e_N`.
fn elementary(vals: &[Complex64]) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for v in vals {
        let mut next = e.clone();
        next.push(Complex64::new(0.0, 0.0));
        for k in 1..next.len() {
            next[k] += e[k - 1] * v;
        }
        e = next;
    }
    e
}

fn fmt_labels(g: &[Complex64]) -> String {
    let parts: Vec<String> =
        g.iter().map(|z| if z.im == 0.0 { format!("{}", z.re) } else { format!("{}{:+}i", z.re, z.im) }).collect();
    format!("({})", parts.join(", "))
}

fn fmt_point(x: &[f64]) -> String {
    format!("({})", x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))
}

/// For N=2 and `x₁ > x₂`: the same spec with the contour lifted near the
/// saddle `Im γ₁₁ ≈ ħe^{t/2}`, where the oscillating sum no longer cancels.
fn raised_spec(spec: &EigenfunctionSpec, x: &[f64]) -> Option<EigenfunctionSpec> {
    if spec.n != 2 {
        return None;
    }
    let t = (x[0] - x[1]) / spec.hbar;
    let c = ((0.5 * t).exp() - 0.5).floor();
    if !(c >= 1.0) {
        return None;
    }
    let mut q = spec.quad.clone();
    let step = 2.0 * q.truncation / (q.nodes - 1) as f64;
    let extra = (2.0 * c * spec.hbar / step).ceil() as usize;
    q.truncation += extra as f64 * step;
    q.nodes += 2 * extra;
    q.contour = vec![c];
    Some(spec.clone().with_quad(q))
}

/// `step` shrunk by the local frequency `max(1, e^{(x_k − x_{k+1})/2}/ħ)`
/// of the potential.
fn local_step(step: f64, x: &[f64], hbar: f64) -> f64 {
    let k = x.windows(2).map(|w| (0.5 * (w[0] - w[1])).exp() / hbar).fold(1.0, f64::max);
    step / k
}

fn amplification(n: usize, h: f64, hbar: f64) -> f64 {
    (1.5 * hbar / h).powi(n as i32)
}

struct PointResult {
    skipped: bool,
    raised: bool,
    spectral: f64,
    coeff: f64,
    worst: String,
}

/// Residuals of `A_N(λ)ψ = Π(λ − γ_Nm)ψ` and `h_k ψ = e_k(γ_N)ψ` over the
/// grid, plus truncation and node-refinement observations.
pub fn verify_spectral(spec: &EigenfunctionSpec, cfg: &SpectralConfig) -> Vec<Outcome> {
    let n = spec.n;
    let label = format!("toda spectral N={n}");
    let params = |o: Outcome| {
        o.with_param("N", n).with_param("hbar", spec.hbar).with_param("gamma", fmt_labels(&spec.gamma_n))
    };
    if cfg.grid.iter().any(|x| x.len() != n) {
        return vec![params(Outcome::error(label, TodaError::BadSpec("grid point dimension differs from N".into())))];
    }
    let kernel = match MbKernel::new(spec) {
        Ok(k) => k,
        Err(e) => return vec![params(Outcome::error(label, e))],
    };
    let ops = match build_toda_operators(n) {
        Ok(o) => o,
        Err(e) => return vec![params(Outcome::error(label, e))],
    };
    let a_n = &ops.open[n];
    let hs: Vec<TodaOp> = (1..=n).map(|k| ops.open_hamiltonian(k)).collect();
    let sym = elementary(&spec.gamma_n);
    let run_point = |kernel: &MbKernel, x: &[f64]| -> Result<PointResult, TodaError> {
        let h = local_step(cfg.step, x, spec.hbar);
        let st = Stencil::new(kernel, x, h);
        let psi = st.psi();
        let noise = kernel.noise(x) / psi.norm() * amplification(n, h, spec.hbar);
        if !(noise < cfg.tolerance / 2.0) {
            return Ok(PointResult { skipped: true, raised: false, spectral: 0.0, coeff: 0.0, worst: String::new() });
        }
        let mut spectral: f64 = 0.0;
        let mut worst = String::new();
        for &lam in &cfg.lambdas {
            let l = Complex64::new(lam, 0.0);
            let lhs = st.apply(a_n, l, spec.hbar)?;
            let ev: Complex64 = spec.gamma_n.iter().map(|g| l - g).product();
            let r = (lhs - ev * psi).norm() / psi.norm();
            if r > spectral {
                spectral = r;
                worst = format!("x={} lambda={lam}", fmt_point(x));
            }
        }
        let mut coeff: f64 = 0.0;
        for (k, h) in hs.iter().enumerate() {
            let lhs = st.apply(h, Complex64::new(0.0, 0.0), spec.hbar)?;
            coeff = coeff.max((lhs - sym[k + 1] * psi).norm() / psi.norm());
        }
        Ok(PointResult { skipped: false, raised: false, spectral, coeff, worst })
    };
    let results = par_map(&cfg.grid, |x| -> Result<PointResult, TodaError> {
        let r = run_point(&kernel, x)?;
        if !r.skipped {
            return Ok(r);
        }
        match raised_spec(spec, x) {
            Some(s) => {
                let mut r = run_point(&MbKernel::new(&s)?, x)?;
                r.raised = !r.skipped;
                Ok(r)
            }
            None => Ok(r),
        }
    });
    let mut skipped = Vec::new();
    let mut raised = Vec::new();
    let mut spectral: f64 = 0.0;
    let mut coeff: f64 = 0.0;
    let mut worst = String::new();
    for (x, r) in cfg.grid.iter().zip(results) {
        match r {
            Ok(r) if r.skipped => skipped.push(fmt_point(x)),
            Ok(r) => {
                if r.raised {
                    raised.push(fmt_point(x));
                }
                if r.spectral >= spectral {
                    spectral = r.spectral;
                    worst = r.worst;
                }
                coeff = coeff.max(r.coeff);
            }
            Err(e) => return vec![params(Outcome::error(label, e))],
        }
    }
    let used = cfg.grid.len() - skipped.len();
    let mut notes = Vec::new();
    if !raised.is_empty() {
        notes.push(format!("raised contour at {}", raised.join(" ")));
    }
    if !skipped.is_empty() {
        notes.push(format!("SKIPPED_POINT: |psi| below the noise floor at {}", skipped.join(" ")));
    }
    let note = if notes.is_empty() { None } else { Some(notes.join("; ")) };
    let finish = |mut o: Outcome, name: &str| {
        o = params(o).with_param("points", used).with_param("step", cfg.step).with_param("nodes", kernel.node_count());
        if used == 0 {
            o.status = Status::Fail;
            o.witness = Some(format!("{name}: every grid point was skipped"));
        }
        if let Some(n) = &note {
            o.note = Some(n.clone());
        }
        o
    };
    let mut a = finish(Outcome::numeric(format!("A_{n}(lambda) psi = prod(lambda - gamma) psi"), spectral, cfg.tolerance), "spectral");
    if a.status == Status::Fail && a.witness.is_none() {
        a.witness = Some(worst);
    }
    let c = finish(Outcome::numeric(format!("h_k psi = e_k(gamma) psi, k=1..{n}"), coeff, cfg.tolerance), "coefficients");
    let mut out = vec![a, c];
    let ok_points: Vec<Vec<f64>> =
        cfg.grid.iter().filter(|x| !skipped.contains(&fmt_point(x)) && !raised.contains(&fmt_point(x))).cloned().collect();
    out.push(params(truncation_consistency(spec, &kernel, &ok_points)));
    for c in ops.checks {
        out.push(c);
    }
    out
}

/// `ψ` with window `T` against window `≈1.5T` at the same step.
pub fn truncation_consistency(spec: &EigenfunctionSpec, kernel: &MbKernel, points: &[Vec<f64>]) -> Outcome {
    let name = "truncation T vs 1.5T";
    let tol = spec.quad.tail_tolerance;
    if spec.n == 1 {
        return Outcome::numeric(name, 0.0, tol);
    }
    let m = spec.quad.nodes;
    let extra = ((m - 1) as f64 / 4.0).round() as usize;
    let mut wide = spec.quad.clone();
    let (nodes, _) = spec.quad.rule_nodes();
    let step = nodes[1] - nodes[0];
    wide.truncation += extra as f64 * step;
    wide.nodes = m + 2 * extra;
    if spec.quad.rule != super::mb::Rule::Trapezoid {
        wide = spec.quad.scaled_truncation(1.5);
    }
    let big = match MbKernel::new(&spec.clone().with_quad(wide.clone())) {
        Ok(k) => k,
        Err(e) => return Outcome::error(name, e),
    };
    let diffs = par_map(points, |x| {
        let a = kernel.eval(x);
        (a - big.eval(x)).norm() / a.norm()
    });
    let worst = diffs.into_iter().fold(0.0, f64::max);
    Outcome::numeric(name, worst, tol)
        .with_param("T", spec.quad.truncation)
        .with_param("T_wide", wide.truncation)
}

/// Spectral residual at one point as the node count doubles; reports where
/// refinement stops helping.
pub fn refinement_study(spec: &EigenfunctionSpec, x: &[f64], step: f64, levels: usize) -> Outcome {
    let n = spec.n;
    let name = format!("node refinement N={n}");
    let ops = match build_toda_operators(n) {
        Ok(o) => o,
        Err(e) => return Outcome::error(name, e),
    };
    let base = (spec.quad.nodes - 1) / (1 << (levels - 1)).max(1);
    let mut seq = Vec::new();
    for lvl in 0..levels {
        let mut q = spec.quad.clone();
        q.nodes = base * (1 << lvl) + 1;
        q.tail_tolerance = f64::INFINITY;
        let k = match MbKernel::new(&spec.clone().with_quad(q.clone())) {
            Ok(k) => k,
            Err(e) => return Outcome::error(name, e),
        };
        let st = Stencil::new(&k, x, step);
        let psi = st.psi();
        let l = Complex64::new(1.0, 0.0);
        let r = match st.apply(&ops.open[n], l, spec.hbar) {
            Ok(v) => (v - spec.gamma_n.iter().map(|g| l - g).product::<Complex64>() * psi).norm() / psi.norm(),
            Err(e) => return Outcome::error(name, e),
        };
        seq.push((q.nodes, r));
    }
    let crossover = seq.windows(2).position(|w| w[1].1 >= w[0].1);
    let listing: Vec<String> = seq.iter().map(|(m, r)| format!("{m}:{r:.2e}")).collect();
    let note = match crossover {
        Some(i) => format!("{}; stencil error dominates from {} nodes", listing.join(" "), seq[i + 1].0),
        None => format!("{}; decreasing throughout", listing.join(" ")),
    };
    Outcome::new(name, Status::Skipped, Residual::None)
        .with_param("N", n)
        .with_param("x", fmt_point(x))
        .with_note(note)
}

/// `|ψ_{(γ_1,γ_2,…)} − ψ_{(γ_2,γ_1,…)}| / |ψ|`, recorded only.
pub fn symmetry_probe(spec: &EigenfunctionSpec, points: &[Vec<f64>]) -> Outcome {
    let name = format!("label swap symmetry N={}", spec.n);
    if spec.n < 2 {
        return Outcome::new(name, Status::Skipped, Residual::None).with_note("nothing to swap");
    }
    let mut swapped = spec.clone();
    swapped.gamma_n.swap(0, 1);
    let (a, b) = match (MbKernel::new(spec), MbKernel::new(&swapped)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::error(name, e),
    };
    let worst = points.iter().map(|x| (a.eval(x) - b.eval(x)).norm() / a.eval(x).norm()).fold(0.0, f64::max);
    Outcome::new(name, Status::Skipped, Residual::Float { value: worst, tolerance: 1e-6 })
        .with_param("N", spec.n)
        .with_note(if worst <= 1e-6 { "symmetric within 1e-6" } else { "not symmetric within 1e-6" })
}

/// `A_{N−1}(γ_Nj)ψ_γ(x) = i^{1−N} e^{−x_N} ψ_{γ − iħe_j}(x)`, and the same
/// relation applied to the shifted label.
pub fn verify_dual_equation(spec: &EigenfunctionSpec, x: &[f64], j: usize, step: f64, tolerance: f64) -> Vec<Outcome> {
    let n = spec.n;
    let name = format!("A_{}(gamma_{n}{j}) psi = i^(1-N) e^(-x_N) psi(shifted)", n.saturating_sub(1));
    let params = |o: Outcome| {
        o.with_param("N", n)
            .with_param("j", j)
            .with_param("x", fmt_point(x))
            .with_param("gamma", fmt_labels(&spec.gamma_n))
    };
    if !(2..=3).contains(&n) || j == 0 || j > n || x.len() != n {
        return vec![params(Outcome::error(name, TodaError::BadSpec("need N in 2..=3, 1 ≤ j ≤ N and an N-point".into())))];
    }
    let ops = match build_toda_operators(n) {
        Ok(o) => o,
        Err(e) => return vec![params(Outcome::error(name, e))],
    };
    let a = &ops.open[n - 1];
    let phase = Complex64::i().powi(1 - n as i32) * (-x[n - 1]).exp();
    let one = |base: &EigenfunctionSpec, tol: f64, label: String| -> Outcome {
        let shifted = base.shifted(j, 1.0);
        let (k0, k1) = match (MbKernel::new(base), MbKernel::new(&shifted)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return params(Outcome::error(label, e)),
        };
        let st = Stencil::new(&k0, x, step);
        let lhs = match st.apply(a, base.gamma_n[j - 1], base.hbar) {
            Ok(v) => v,
            Err(e) => return params(Outcome::error(label, e)),
        };
        let rhs = phase * k1.eval(x);
        params(Outcome::numeric(label, (lhs - rhs).norm() / rhs.norm(), tol)).with_param("step", step)
    };
    vec![
        one(spec, tolerance, name.clone()),
        one(&spec.shifted(j, 1.0), tolerance * 10.0, format!("{name}, applied at gamma - i hbar e_{j}")),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_spectral() {
        let spec = EigenfunctionSpec::real(&[0.7], 1.0);
        let out = verify_spectral(&spec, &SpectralConfig::default_for(1));
        assert!(out.iter().all(|o| o.passed()), "{out:#?}");
    }

    #[test]
    fn elementary_symmetric() {
        let e = elementary(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)]);
        let re: Vec<f64> = e.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 6.0, 11.0, 6.0]);
    }
}

//! The Mellin-Barnes integral for the open Toda eigenfunction over the real
//! contour, evaluated by a tensor-product rule on `[−T, T]^{N(N−1)/2}`.
//!
//! The Γ part of the integrand does not depend on `x`, so it is tabulated
//! once per label; each `ψ(x)` is then a contraction of that table against
//! one phase vector per integration variable.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lgamma::lgamma_complex;
use super::TodaError;
use crate::par::par_map;

/// Largest table the kernel will allocate.
pub const MAX_TABLE: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Trapezoid,
    GaussLegendre,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureConfig {
    /// Each integration variable runs over `[−T, T]`.
    pub truncation: f64,
    /// Nodes per dimension.
    pub nodes: usize,
    pub tail_tolerance: f64,
    pub rule: Rule,
    /// Imaginary offset of each dynamic row's contour, in units of ħ.
    /// Missing rows sit on the real line.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contour: Vec<f64>,
}

impl QuadratureConfig {
    /// Step `ħ/12` for N=2 and `ħ/6` for N=3, with the window reaching
    /// `14ħ` (N=2) or `9ħ` (N=3) beyond the labels.
    pub fn default_for(n: usize, hbar: f64, labels: &[Complex64]) -> Self {
        let reach = labels.iter().map(|g| g.re.abs()).fold(0.0, f64::max);
        let (margin, per_hbar) = if n <= 2 { (14.0, 12.0) } else { (9.0, 6.0) };
        let truncation = reach + margin * hbar;
        let nodes = (2.0 * truncation * per_hbar / hbar).ceil() as usize + 1;
        QuadratureConfig { truncation, nodes, tail_tolerance: 1e-10, rule: Rule::Trapezoid, contour: Vec::new() }
    }

    pub fn scaled_truncation(&self, factor: f64) -> Self {
        let mut c = self.clone();
        c.truncation *= factor;
        c.nodes = ((self.nodes - 1) as f64 * factor).round() as usize + 1;
        c
    }

    fn validate(&self) -> Result<(), TodaError> {
        if !(self.truncation > 0.0) || self.nodes < 2 || !(self.tail_tolerance > 0.0) {
            return Err(TodaError::BadSpec("truncation, nodes and tailTolerance must be positive".into()));
        }
        if self.contour.iter().any(|c| !c.is_finite()) {
            return Err(TodaError::BadSpec("contour offsets must be finite".into()));
        }
        Ok(())
    }

    /// Offset of dynamic row `r` (1-based), in units of ħ.
    pub fn height(&self, r: usize) -> f64 {
        self.contour.get(r - 1).copied().unwrap_or(0.0)
    }

    /// Nodes and weights on `[−T, T]`.
    pub fn rule_nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let t = self.truncation;
        let m = self.nodes;
        match self.rule {
            Rule::Trapezoid => {
                let h = 2.0 * t / (m - 1) as f64;
                let xs = (0..m).map(|i| -t + h * i as f64).collect();
                let ws = (0..m).map(|i| if i == 0 || i == m - 1 { h / 2.0 } else { h }).collect();
                (xs, ws)
            }
            Rule::GaussLegendre => {
                let (xs, ws) = gauss_legendre(m);
                (xs.iter().map(|x| x * t).collect(), ws.iter().map(|w| w * t).collect())
            }
        }
    }
}

/// Gauss-Legendre nodes and weights on `[−1, 1]` by Newton iteration.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; m];
    let mut ws = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -x;
        xs[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        ws[i] = w;
        ws[m - 1 - i] = w;
    }
    (xs, ws)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenfunctionSpec {
    pub n: usize,
    /// Labels `γ_N1..γ_NN`.
    pub gamma_n: Vec<Complex64>,
    pub hbar: f64,
    pub quad: QuadratureConfig,
}

impl EigenfunctionSpec {
    pub fn new(gamma_n: Vec<Complex64>, hbar: f64) -> Self {
        let n = gamma_n.len();
        let quad = QuadratureConfig::default_for(n, hbar, &gamma_n);
        EigenfunctionSpec { n, gamma_n, hbar, quad }
    }

    pub fn real(gamma_n: &[f64], hbar: f64) -> Self {
        Self::new(gamma_n.iter().map(|&g| Complex64::new(g, 0.0)).collect(), hbar)
    }

    pub fn with_quad(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    /// The same spec with label `j` (1-based) moved by `−iħ·k`.
    pub fn shifted(&self, j: usize, k: f64) -> Self {
        let mut s = self.clone();
        s.gamma_n[j - 1] -= Complex64::new(0.0, self.hbar * k);
        s
    }

    fn validate(&self) -> Result<(), TodaError> {
        if !(1..=3).contains(&self.n) || self.gamma_n.len() != self.n {
            return Err(TodaError::BadSpec(format!("N must be 1, 2 or 3 with N labels, got N={}", self.n)));
        }
        if !(self.hbar > 0.0) {
            return Err(TodaError::BadSpec("hbar must be positive".into()));
        }
        self.quad.validate()?;
        // poles of Γ((γ_{r,k} − γ_{r+1,m})/iħ + ½) sit at Im γ_{r,k} = Im γ_{r+1,m} − ħ/2 − jħ
        let margin = self.hbar / 8.0;
        if self.n >= 2 {
            let top = self.quad.height(self.n - 1) * self.hbar;
            for g in &self.gamma_n {
                if g.im > top + self.hbar / 2.0 - margin {
                    return Err(TodaError::ContourObstruction(format!(
                        "label {g} puts a pole within {margin} of the contour"
                    )));
                }
            }
        }
        for r in 1..self.n.saturating_sub(1) {
            if (self.quad.height(r) - self.quad.height(r + 1)) * self.hbar < margin - self.hbar / 2.0 {
                return Err(TodaError::ContourObstruction(format!("row {r} contour sits too low against row {}", r + 1)));
            }
        }
        Ok(())
    }
}

/// `ρ^{(N)}_k = (N − 2k + 1)/2`.
pub fn rho(n: usize, k: usize) -> f64 {
    (n as f64 - 2.0 * k as f64 + 1.0) / 2.0
}

/// Tabulated Γ part of the integrand, weights included.
#[derive(Clone, Debug)]
pub struct MbKernel {
    spec: EigenfunctionSpec,
    /// Row of each integration variable, in order `γ_11, γ_21, γ_22, ...`.
    rows: Vec<usize>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Complex64>,
    abs_sum: f64,
    tail: f64,
}

fn ln_sinh(a: f64) -> f64 {
    a + (-(-2.0 * a).exp_m1()).ln() - std::f64::consts::LN_2
}

impl MbKernel {
    pub fn new(spec: &EigenfunctionSpec) -> Result<Self, TodaError> {
        spec.validate()?;
        let n = spec.n;
        let rows: Vec<usize> = (1..n).flat_map(|r| std::iter::repeat(r).take(r)).collect();
        let d = rows.len();
        let (nodes, weights) = spec.quad.rule_nodes();
        let m = nodes.len();
        let size = m.checked_pow(d as u32).filter(|&s| s <= MAX_TABLE).ok_or_else(|| {
            TodaError::BadSpec(format!("{m}^{d} quadrature nodes exceed the table limit {MAX_TABLE}"))
        })?;
        let outer: Vec<usize> = if d == 0 { vec![0] } else { (0..m).collect() };
        let inner = if d == 0 { 1 } else { size / m };
        let chunks = par_map(&outer, |&i0| -> Result<Vec<Complex64>, TodaError> {
            let mut out = Vec::with_capacity(inner);
            let mut idx = vec![0usize; d];
            for flat in 0..inner {
                let mut rem = flat;
                for v in (1..d).rev() {
                    idx[v] = rem % m;
                    rem /= m;
                }
                if d > 0 {
                    idx[0] = i0;
                }
                out.push(Self::node_value(spec, &rows, &idx, &nodes, &weights)?);
            }
            Ok(out)
        });
        let mut values = Vec::with_capacity(size);
        for c in chunks {
            values.extend(c?);
        }
        let abs_sum: f64 = values.iter().map(|v| v.norm()).sum();
        let mut k = MbKernel { spec: spec.clone(), rows, nodes, weights, values, abs_sum, tail: 0.0 };
        k.tail = k.tail_estimate();
        if k.tail > spec.quad.tail_tolerance {
            return Err(TodaError::InsufficientTruncation { tail: k.tail, tolerance: spec.quad.tail_tolerance });
        }
        Ok(k)
    }

    fn node_value(
        spec: &EigenfunctionSpec,
        rows: &[usize],
        idx: &[usize],
        nodes: &[f64],
        weights: &[f64],
    ) -> Result<Complex64, TodaError> {
        let n = spec.n;
        let h = spec.hbar;
        let ln_h = h.ln();
        // γ[row-1][col-1]
        let mut g: Vec<Vec<Complex64>> = (1..=n).map(|r| vec![Complex64::new(0.0, 0.0); r]).collect();
        g[n - 1].clone_from(&spec.gamma_n);
        let mut w = 1.0;
        let mut v = 0;
        for r in 1..n {
            for c in 0..r {
                g[r - 1][c] = Complex64::new(nodes[idx[v]], spec.quad.height(r) * h);
                w *= weights[idx[v]];
                v += 1;
            }
        }
        debug_assert_eq!(v, rows.len());
        let ih = Complex64::new(0.0, h);
        let mut log = Complex64::new(0.0, 0.0);
        for r in 1..n {
            for k in 0..r {
                for mm in 0..=r {
                    let z = (g[r - 1][k] - g[r][mm]) / ih + 0.5;
                    log += z * ln_h + lgamma_complex(z)?;
                }
            }
            for s in 0..r {
                for p in s + 1..r {
                    let y = (g[r - 1][s].re - g[r - 1][p].re) / h;
                    if y == 0.0 {
                        return Ok(Complex64::new(0.0, 0.0));
                    }
                    // 1/|Γ(iy)|² = y sinh(πy)/π
                    log += y.abs().ln() + ln_sinh(PI * y.abs()) - PI.ln();
                }
            }
        }
        Ok(log.exp() * w)
    }

    /// Face mass times the decay length `ħ/π`, relative to `Σ|values|`.
    fn tail_estimate(&self) -> f64 {
        let d = self.rows.len();
        if d == 0 || self.abs_sum == 0.0 {
            return 0.0;
        }
        let m = self.nodes.len();
        let decay = self.spec.hbar / PI;
        let mut tail = 0.0;
        for (flat, val) in self.values.iter().enumerate() {
            let mut rem = flat;
            for _ in 0..d {
                let i = rem % m;
                rem /= m;
                if i == 0 || i == m - 1 {
                    tail += val.norm() / self.weights[i] * decay;
                }
            }
        }
        tail / self.abs_sum
    }

    pub fn spec(&self) -> &EigenfunctionSpec {
        &self.spec
    }

    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    fn prefactor(&self, x: &[f64]) -> Complex64 {
        let n = self.spec.n;
        let s: Complex64 = self.spec.gamma_n.iter().sum();
        let xr: f64 = (1..=n).map(|k| x[k - 1] * rho(n, k)).sum();
        (Complex64::new(-xr, 0.0) + Complex64::i() * s * x[n - 1] / self.spec.hbar).exp()
    }

    /// `ψ(x)`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.spec.n, "point dimension");
        let d = self.rows.len();
        let m = self.nodes.len();
        let h = self.spec.hbar;
        let mut cur: Vec<Complex64>;
        let mut src: &[Complex64] = &self.values;
        for v in (0..d).rev() {
            let row = self.rows[v];
            let t = x[row - 1] - x[row];
            let phase: Vec<Complex64> =
                self.nodes.iter().map(|&g| Complex64::from_polar(1.0, g * t / h)).collect();
            let next: Vec<Complex64> = src
                .chunks_exact(m)
                .map(|c| c.iter().zip(&phase).fold(Complex64::new(0.0, 0.0), |a, (u, p)| a + u * p))
                .collect();
            cur = next;
            src = &cur;
        }
        src[0] * self.prefactor(x) * self.damping(x)
    }

    /// `Π_v e^{−c_v t_v}` from the raised contours.
    fn damping(&self, x: &[f64]) -> f64 {
        self.rows.iter().map(|&r| -self.spec.quad.height(r) * (x[r - 1] - x[r])).sum::<f64>().exp()
    }

    /// Rounding floor for `ψ(x)`.
    pub fn noise(&self, x: &[f64]) -> f64 {
        f64::EPSILON * self.abs_sum * self.prefactor(x).norm() * self.damping(x)
    }
}

/// `ψ_γ(x)` for a single point.
pub fn mb_eigenfunction(spec: &EigenfunctionSpec, x: &[f64]) -> Result<Complex64, TodaError> {
    if x.len() != spec.n {
        return Err(TodaError::BadSpec(format!("point has {} coordinates, expected {}", x.len(), spec.n)));
    }
    Ok(MbKernel::new(spec)?.eval(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_for_n1() {
        let spec = EigenfunctionSpec::real(&[0.7], 1.0);
        let v = mb_eigenfunction(&spec, &[1.3]).unwrap();
        let expect = Complex64::from_polar(1.0, 0.7 * 1.3);
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((s - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn obstruction_and_size() {
        let spec = EigenfunctionSpec::new(vec![Complex64::new(0.0, 0.45), Complex64::new(0.0, 0.0)], 1.0);
        assert!(matches!(MbKernel::new(&spec), Err(TodaError::ContourObstruction(_))));
        let mut spec = EigenfunctionSpec::real(&[0.1, 0.2], 1.0);
        spec.quad.truncation = 2.0;
        assert!(matches!(MbKernel::new(&spec), Err(TodaError::InsufficientTruncation { .. })));
    }
}

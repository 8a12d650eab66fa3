//! Eigenfunction tables for `eval`.

use std::fmt::Write as _;

use gztoda_core::par::par_map;
use gztoda_core::toda::{EigenfunctionSpec, MbKernel, QuadratureConfig, Rule};
use num_complex::Complex64;

use crate::config::Config;
use crate::error::CliError;

pub struct Table {
    pub header: String,
    pub body: String,
    pub max_error: f64,
}

impl Table {
    pub fn to_csv(&self) -> String {
        format!("{}{}", self.header, self.body)
    }
}

fn spec_of(cfg: &Config) -> Result<EigenfunctionSpec, CliError> {
    let e = &cfg.eval;
    if e.gamma.is_empty() || e.gamma.len() > 3 {
        return Err(CliError::Config("eval.gamma needs 1 to 3 labels".into()));
    }
    if !e.gamma_im.is_empty() && e.gamma_im.len() != e.gamma.len() {
        return Err(CliError::Config("eval.gammaIm must be empty or match eval.gamma".into()));
    }
    if e.points < 1 || !(e.min <= e.max) {
        return Err(CliError::Config("eval grid needs points >= 1 and min <= max".into()));
    }
    let labels: Vec<Complex64> = e
        .gamma
        .iter()
        .enumerate()
        .map(|(i, &re)| Complex64::new(re, e.gamma_im.get(i).copied().unwrap_or(0.0)))
        .collect();
    let mut spec = EigenfunctionSpec::new(labels, e.hbar);
    if let Some(q) = &e.quadrature {
        spec = spec.with_quad(q.clone());
    }
    Ok(spec)
}

/// Same window, every other trapezoid node.
fn coarse(q: &QuadratureConfig) -> Option<QuadratureConfig> {
    if q.rule != Rule::Trapezoid || q.nodes < 5 {
        return None;
    }
    let mut c = q.clone();
    let half = (q.nodes - 1) / 2;
    let step = 2.0 * q.truncation / (q.nodes - 1) as f64;
    c.nodes = half + 1;
    c.truncation = step * half as f64;
    c.tail_tolerance = f64::INFINITY;
    Some(c)
}

/// `ψ` on the tensor grid with an error estimate per point:
/// rounding floor + tail bound + `|ψ_h − ψ_2h|`.
pub fn run_eval(cfg: &Config) -> Result<Table, CliError> {
    let spec = spec_of(cfg)?;
    let n = spec.n;
    let kernel = MbKernel::new(&spec).map_err(|e| CliError::Config(e.to_string()))?;
    let check = match coarse(&spec.quad) {
        Some(q) => Some(MbKernel::new(&spec.clone().with_quad(q)).map_err(|e| CliError::Config(e.to_string()))?),
        None => None,
    };
    let e = &cfg.eval;
    let axis: Vec<f64> = (0..e.points)
        .map(|i| if e.points == 1 { e.min } else { e.min + (e.max - e.min) * i as f64 / (e.points - 1) as f64 })
        .collect();
    let total = e.points.pow(n as u32);
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut flat| {
            let mut x = vec![0.0; n];
            for v in (0..n).rev() {
                x[v] = axis[flat % e.points];
                flat /= e.points;
            }
            x
        })
        .collect();
    let rows = par_map(&points, |x| {
        let psi = kernel.eval(x);
        let floor = kernel.noise(x);
        let mut err = floor + floor / f64::EPSILON * kernel.tail();
        if let Some(c) = &check {
            err += (psi - c.eval(x)).norm();
        }
        (psi, err)
    });
    let mut body = String::new();
    let mut max_error: f64 = 0.0;
    for (x, (psi, err)) in points.iter().zip(rows) {
        for v in x {
            write!(body, "{v:.6},").expect("string write");
        }
        writeln!(body, "{:.17e},{:.17e},{:.3e}", psi.re, psi.im, err).expect("string write");
        max_error = max_error.max(err);
    }
    let cols: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let header = format!(
        "# gztoda eval config-hash={} N={n} hbar={} nodes={}\n{},re_psi,im_psi,err_est\n",
        cfg.hash(),
        spec.hbar,
        kernel.node_count(),
        cols.join(",")
    );
    Ok(Table { header, body, max_error })
}

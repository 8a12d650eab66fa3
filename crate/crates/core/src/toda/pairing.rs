//! Numerical check of `⟨φ, Xψ⟩ = −⟨Xφ, ψ⟩` for the N=2 Whittaker modules.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lgamma::lgamma_complex;
use super::TodaError;
use crate::exact::diffop::shift_ratfunc;
use crate::exact::{DiffOp, GaussRat, Poly, RatFunc};
use crate::gzrep::GzRep;
use crate::par::par_map;
use crate::verify::Outcome;

/// `φ` and the polynomial multiplying `w₂`, as ascending coefficients in `γ₁₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingSample {
    pub phi: Vec<i64>,
    pub psi: Vec<i64>,
}

impl PairingSample {
    pub fn new(phi: &[i64], psi: &[i64]) -> Self {
        PairingSample { phi: phi.to_vec(), psi: psi.to_vec() }
    }

    /// `(1, 1)`, `(γ₁₁, 1)` and `(γ₁₁², γ₁₁)`.
    pub fn defaults() -> Vec<PairingSample> {
        vec![PairingSample::new(&[1], &[1]), PairingSample::new(&[0, 1], &[1]), PairingSample::new(&[0, 0, 1], &[0, 1])]
    }

    fn label(&self) -> String {
        format!("phi={} psi=({})*w2", poly_text(&self.phi), poly_text(&self.psi))
    }
}

fn poly_text(c: &[i64]) -> String {
    let parts: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(k, &a)| match k {
            0 => a.to_string(),
            1 => format!("{a}*g11"),
            _ => format!("{a}*g11^{k}"),
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

struct Setup {
    rep: GzRep,
    gamma2: [f64; 2],
    hbar: f64,
    step: f64,
    window: f64,
}

impl Setup {
    fn poly(&self, c: &[i64]) -> RatFunc {
        let g = Poly::var(self.rep.g(1, 1));
        let mut p = Poly::zero();
        let mut pow = Poly::one();
        for &a in c {
            p = p.add(&pow.scale(&GaussRat::from_int(a)));
            pow = pow.mul(&g);
        }
        RatFunc::from_poly(p)
    }

    fn point(&self, g11: Complex64) -> Vec<Complex64> {
        let mut pt = vec![Complex64::new(0.0, 0.0); self.rep.vars().len()];
        pt[self.rep.hbar()] = Complex64::new(self.hbar, 0.0);
        pt[self.rep.g(1, 1)] = g11;
        pt[self.rep.g(2, 1)] = Complex64::new(self.gamma2[0], 0.0);
        pt[self.rep.g(2, 2)] = Complex64::new(self.gamma2[1], 0.0);
        pt
    }

    /// `w₂(γ₁₁) = Π_m ħ^{a_m} Γ(a_m)` with `a_m = (γ₁₁ − γ₂m)/(iħ) + ½`.
    fn w2(&self, g11: Complex64) -> Result<Complex64, TodaError> {
        let ih = Complex64::new(0.0, self.hbar);
        let mut log = Complex64::new(0.0, 0.0);
        for g in self.gamma2 {
            let a = (g11 - g) / ih + 0.5;
            log += a * self.hbar.ln() + lgamma_complex(a)?;
        }
        Ok(log.exp())
    }

    fn nodes(&self) -> Vec<(f64, f64)> {
        let c = 0.5 * (self.gamma2[0] + self.gamma2[1]);
        let m = (2.0 * self.window / self.step).round() as usize;
        (0..=m)
            .map(|i| {
                let w = if i == 0 || i == m { 0.5 } else { 1.0 } * self.step;
                (c - self.window + self.step * i as f64, w)
            })
            .collect()
    }

    /// `∫ conj(f(γ)) · g(γ) dγ` with `g = Σ_k r_k(γ) w₂(γ + iħk)`.
    fn integrate(&self, f: &RatFunc, g: &[(i16, RatFunc)]) -> Result<Complex64, TodaError> {
        let vals = par_map(&self.nodes(), |&(x, w)| -> Result<Complex64, TodaError> {
            let z = Complex64::new(x, 0.0);
            let pt = self.point(z);
            let fv = f.eval_complex(&pt).conj();
            let mut gv = Complex64::new(0.0, 0.0);
            for (k, r) in g {
                gv += r.eval_complex(&pt) * self.w2(z + Complex64::new(0.0, self.hbar * *k as f64))?;
            }
            let v = fv * gv * w;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(TodaError::Pole(format!("integrand not finite at g11={x}")))
            }
        });
        vals.into_iter().try_fold(Complex64::new(0.0, 0.0), |a, v| v.map(|v| a + v))
    }

    /// `X(p·w₂) = Σ_k c_k(γ) p(γ + iħk) w₂(γ + iħk)` as `(k, c_k·p(γ+iħk))`.
    fn apply_to_state(&self, x: &DiffOp, p: &RatFunc) -> Vec<(i16, RatFunc)> {
        let g11 = self.rep.g(1, 1);
        x.terms().iter().map(|(k, c)| (k.get(g11), c.mul(&shift_ratfunc(p, k, self.rep.hbar())))).collect()
    }
}

/// Residuals `|⟨φ, Xψ⟩ + ⟨Xφ, ψ⟩| / |⟨φ, ψ⟩|` for `X ∈ {E12, E21, E11 − E22}`
/// and each sample, plus a non-degeneracy check of `⟨1, w₂⟩`.
pub fn pairing_check(gamma2: [f64; 2], hbar: f64, samples: &[PairingSample], tolerance: f64) -> Vec<Outcome> {
    let s = Setup { rep: GzRep::new(2), gamma2, hbar, step: hbar / 16.0, window: 25.0 * hbar };
    let params = |o: Outcome| {
        o.with_param("N", 2).with_param("hbar", hbar).with_param("gamma2", format!("({}, {})", gamma2[0], gamma2[1]))
    };
    if !(hbar > 0.0) || gamma2.iter().any(|g| !g.is_finite()) {
        return vec![params(Outcome::error("pairing", TodaError::BadSpec("need hbar > 0 and finite real labels".into())))];
    }
    let gens = (|| -> Result<Vec<(&'static str, DiffOp)>, crate::exact::ExactError> {
        let h = s.rep.generator(1, 1)?.sub(&s.rep.generator(2, 2)?)?;
        Ok(vec![("E12", s.rep.generator(1, 2)?), ("E21", s.rep.generator(2, 1)?), ("E11-E22", h)])
    })();
    let gens = match gens {
        Ok(g) => g,
        Err(e) => return vec![params(Outcome::error("pairing", e))],
    };
    let mut out = Vec::new();
    let base = s.integrate(&RatFunc::one(), &[(0, RatFunc::one())]);
    out.push(match base {
        Ok(v) => {
            let mut o = Outcome::numeric("<1, w2> nonzero", if v.norm() > 1e-8 { 0.0 } else { 1.0 }, 0.5)
                .with_note(format!("|<1, w2>| = {:.6e}", v.norm()));
            o = params(o);
            o
        }
        Err(e) => params(Outcome::error("<1, w2> nonzero", e)),
    });
    for sample in samples {
        let phi = s.poly(&sample.phi);
        let p = s.poly(&sample.psi);
        for (xname, x) in &gens {
            let name = format!("<phi, {xname} psi> = -<{xname} phi, psi>");
            let r = (|| -> Result<f64, TodaError> {
                let norm = s.integrate(&phi, &[(0, p.clone())])?;
                let left = s.integrate(&phi, &s.apply_to_state(x, &p))?;
                let right = s.integrate(&x.apply(&phi), &[(0, p.clone())])?;
                if norm.norm() == 0.0 {
                    return Err(TodaError::BadSpec("<phi, psi> vanishes; no relative scale".into()));
                }
                Ok((left + right).norm() / norm.norm())
            })();
            out.push(params(match r {
                Ok(v) => Outcome::numeric(name, v, tolerance),
                Err(e) => Outcome::error(name, e),
            })
            .with_param("sample", sample.label()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_labels() {
        assert_eq!(PairingSample::new(&[0, 0, 1], &[2, 1]).label(), "phi=1*g11^2 psi=(2+1*g11)*w2");
    }
}

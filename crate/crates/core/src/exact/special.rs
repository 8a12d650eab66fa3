//! States of the form `prefactor · ∏Γ(aᵢ)^mᵢ · ∏ħ^{bⱼ} · ∏exp(π Σ r_v γ_v / ħ)`.
//!
//! The non-rational core is never evaluated. Shifting a variable by iħ moves
//! every Γ argument and ħ exponent by a declared integer, so applying a
//! difference operator only changes the rational prefactor.

use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::diffop::{shift_ratfunc, DiffOp, Shift};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::vars::VarTable;
use super::ExactError;

/// `Γ(arg)^power`; `steps[v]` is the change of `arg` when `γ_v → γ_v + iħ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFactor {
    pub arg: RatFunc,
    pub steps: Vec<(usize, i32)>,
    pub power: i32,
}

/// `ħ^exponent`.
#[derive(Clone, Debug, PartialEq)]
pub struct HbarPower {
    pub exponent: RatFunc,
    pub steps: Vec<(usize, i32)>,
}

/// `exp(π Σ r_v γ_v / ħ)` with every `r_v ∈ ½ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpFactor {
    pub coeffs: Vec<(usize, BigRational)>,
}

#[derive(Clone, Debug)]
pub struct SpecialState {
    vars: Arc<VarTable>,
    pub prefactor: RatFunc,
    pub gammas: Vec<GammaFactor>,
    pub hbar_powers: Vec<HbarPower>,
    pub exps: Vec<ExpFactor>,
}

fn step_of(steps: &[(usize, i32)], v: usize) -> Option<i32> {
    steps.iter().find(|(w, _)| *w == v).map(|(_, m)| *m)
}

/// Checks `f(γ_v + iħ) − f(γ) = m_v` for every variable of `f` other than ħ.
fn validate_steps(
    f: &RatFunc,
    steps: &[(usize, i32)],
    vars: &VarTable,
    what: &str,
) -> Result<(), ExactError> {
    let h = vars.planck().expect("Planck variable");
    let mask = f.vars_mask() & !(1u64 << h);
    for (v, m) in steps {
        let d = shift_ratfunc(f, &Shift::unit(*v, 1), h).sub(f);
        if d != RatFunc::from_int(*m as i64) {
            return Err(ExactError::BadStep(format!(
                "{what}: declared step {m} for {} but the argument moves by {}",
                vars.var(*v).name,
                d.display_with(&vars.names())
            )));
        }
    }
    for v in 0..vars.len() {
        if mask & (1 << v) != 0 && step_of(steps, v).is_none() {
            return Err(ExactError::BadStep(format!(
                "{what}: no step declared for {}",
                vars.var(v).name
            )));
        }
    }
    Ok(())
}

/// `Γ(z + m) / Γ(z)` as a rational function of `z`.
pub fn gamma_ratio(z: &RatFunc, m: i32) -> RatFunc {
    let mut out = RatFunc::one();
    if m >= 0 {
        for j in 0..m {
            out = out.mul(&z.add(&RatFunc::from_int(j as i64)));
        }
        out
    } else {
        for j in 1..=(-m) {
            out = out.mul(&z.sub(&RatFunc::from_int(j as i64)));
        }
        out.inv().expect("Γ ratio at a pole")
    }
}

impl SpecialState {
    pub fn new(vars: &Arc<VarTable>, prefactor: RatFunc) -> Self {
        SpecialState {
            vars: vars.clone(),
            prefactor,
            gammas: Vec::new(),
            hbar_powers: Vec::new(),
            exps: Vec::new(),
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn with_gamma(mut self, g: GammaFactor) -> Result<Self, ExactError> {
        validate_steps(&g.arg, &g.steps, &self.vars, "gamma argument")?;
        self.gammas.push(g);
        Ok(self)
    }

    pub fn with_hbar_power(mut self, p: HbarPower) -> Result<Self, ExactError> {
        validate_steps(&p.exponent, &p.steps, &self.vars, "hbar exponent")?;
        self.hbar_powers.push(p);
        Ok(self)
    }

    pub fn with_exp(mut self, e: ExpFactor) -> Result<Self, ExactError> {
        for (_, r) in &e.coeffs {
            if !(r * BigRational::from_integer(2.into())).is_integer() {
                return Err(ExactError::BadStep(format!("exponential coefficient {r} is not in Z/2")));
            }
        }
        self.exps.push(e);
        Ok(self)
    }

    pub fn same_core(&self, o: &SpecialState) -> bool {
        self.gammas == o.gammas && self.hbar_powers == o.hbar_powers && self.exps == o.exps
    }

    /// Multiplier picked up by the core under the shift `k`.
    pub fn core_multiplier(&self, k: &Shift) -> Result<RatFunc, ExactError> {
        let h = self.vars.planck().expect("Planck variable");
        let mut out = RatFunc::one();
        for g in &self.gammas {
            let mut m = 0i32;
            for (v, kv) in k.entries() {
                match step_of(&g.steps, v) {
                    Some(s) => m += s * kv as i32,
                    None if g.arg.vars_mask() & (1 << v) != 0 => {
                        return Err(ExactError::BadStep(format!(
                            "shift of undeclared variable {} in a gamma argument",
                            self.vars.var(v).name
                        )))
                    }
                    None => {}
                }
            }
            if m != 0 {
                out = out.mul(&gamma_ratio(&g.arg, m).pow(g.power)?);
            }
        }
        for p in &self.hbar_powers {
            let mut m = 0i32;
            for (v, kv) in k.entries() {
                match step_of(&p.steps, v) {
                    Some(s) => m += s * kv as i32,
                    None if p.exponent.vars_mask() & (1 << v) != 0 => {
                        return Err(ExactError::BadStep(format!(
                            "shift of undeclared variable {} in an hbar exponent",
                            self.vars.var(v).name
                        )))
                    }
                    None => {}
                }
            }
            if m != 0 {
                out = out.mul(&RatFunc::var(h).pow(m)?);
            }
        }
        // e^{iπ r k} with r ∈ ½ℤ is i^{2rk}
        let mut quarter_turns = BigRational::zero();
        for e in &self.exps {
            for (v, r) in &e.coeffs {
                let kv = k.get(*v);
                if kv != 0 {
                    quarter_turns += r * BigRational::from_integer((2 * kv as i64).into());
                }
            }
        }
        let qt = quarter_turns.to_integer().mod_floor(&4.into()).to_i64().unwrap_or(0);
        if qt != 0 {
            out = out.scale(&GaussRat::i_pow(qt));
        }
        Ok(out)
    }

    /// Applies a difference operator; the core is unchanged.
    pub fn apply(&self, op: &DiffOp) -> Result<SpecialState, ExactError> {
        if **op.vars() != *self.vars {
            return Err(ExactError::VarMismatch);
        }
        let h = self.vars.planck().expect("Planck variable");
        let mut pre = RatFunc::zero();
        for (k, c) in op.terms() {
            let shifted = shift_ratfunc(&self.prefactor, k, h);
            let m = self.core_multiplier(k)?;
            pre = pre.add(&c.mul(&shifted).mul(&m));
        }
        Ok(SpecialState { prefactor: pre, ..self.clone() })
    }

    pub fn scaled(&self, c: &RatFunc) -> SpecialState {
        SpecialState { prefactor: self.prefactor.mul(c), ..self.clone() }
    }
}

impl PartialEq for SpecialState {
    fn eq(&self, o: &SpecialState) -> bool {
        self.same_core(o) && self.prefactor == o.prefactor
    }
}

/// `(a − b)/(iħ) + c` as a rational function.
pub fn over_ih(p: &Poly, hbar: usize, c: GaussRat) -> RatFunc {
    let den = Poly::var(hbar).scale(&GaussRat::i());
    RatFunc::new(p.clone(), den).expect("nonzero").add(&RatFunc::constant(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Arc<VarTable>, usize, usize, usize) {
        let v = Arc::new(VarTable::gelfand_zetlin(2));
        let (h, g11, g21) = (v.planck().unwrap(), v.gz(1, 1).unwrap(), v.gz(2, 1).unwrap());
        (v, h, g11, g21)
    }

    #[test]
    fn inverse_shift_on_gamma() {
        let (v, h, g11, g21) = setup();
        let z = over_ih(&Poly::var(g11).sub(&Poly::var(g21)), h, GaussRat::from_ratio(1, 2));
        let s = SpecialState::new(&v, RatFunc::one())
            .with_gamma(GammaFactor { arg: z.clone(), steps: vec![(g11, 1), (g21, -1)], power: 1 })
            .unwrap();
        let op = DiffOp::shift(&v, g11, -1).unwrap();
        let out = s.apply(&op).unwrap();
        let expect = z.sub(&RatFunc::one()).inv().unwrap();
        assert_eq!(out.prefactor, expect);
        assert!(out.same_core(&s));
    }

    #[test]
    fn hbar_power_step() {
        let (v, h, g11, g21) = setup();
        let z = over_ih(&Poly::var(g11).sub(&Poly::var(g21)), h, GaussRat::from_ratio(1, 2));
        let s = SpecialState::new(&v, RatFunc::one())
            .with_hbar_power(HbarPower { exponent: z, steps: vec![(g11, 1), (g21, -1)] })
            .unwrap();
        let out = s.apply(&DiffOp::shift(&v, g11, 1).unwrap()).unwrap();
        assert_eq!(out.prefactor, RatFunc::var(h));
    }

    #[test]
    fn wrong_step_rejected() {
        let (v, h, g11, g21) = setup();
        let z = over_ih(&Poly::var(g11).sub(&Poly::var(g21)), h, GaussRat::zero());
        let r = SpecialState::new(&v, RatFunc::one())
            .with_gamma(GammaFactor { arg: z, steps: vec![(g11, 2), (g21, -1)], power: 1 });
        assert!(matches!(r, Err(ExactError::BadStep(_))));
    }
}

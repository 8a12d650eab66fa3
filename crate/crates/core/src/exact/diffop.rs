//! Difference operators: finite sums `Σ c_k(γ) · T^k` where `T^k f(γ) = f(γ + iħk)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::vars::{VarRole, VarTable};
use super::ExactError;

/// Integer shift per variable index, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Shift(Vec<i16>);

impl Shift {
    pub fn zero() -> Self {
        Shift(Vec::new())
    }

    pub fn unit(var: usize, k: i16) -> Self {
        let mut s = Shift::zero();
        s.set(var, k);
        s
    }

    pub fn get(&self, var: usize) -> i16 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn set(&mut self, var: usize, k: i16) {
        if var >= self.0.len() {
            if k == 0 {
                return;
            }
            self.0.resize(var + 1, 0);
        }
        self.0[var] = k;
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &Shift) -> Shift {
        let n = self.0.len().max(o.0.len());
        let mut out = Shift((0..n).map(|i| self.get(i) + o.get(i)).collect());
        while out.0.last() == Some(&0) {
            out.0.pop();
        }
        out
    }

    pub fn neg(&self) -> Shift {
        Shift(self.0.iter().map(|k| -k).collect())
    }

    /// Nonzero entries as (var, k).
    pub fn entries(&self) -> impl Iterator<Item = (usize, i16)> + '_ {
        self.0.iter().enumerate().filter(|(_, &k)| k != 0).map(|(i, &k)| (i, k))
    }
}

/// `γ_v → γ_v + iħ·k_v` on a rational function.
pub fn shift_ratfunc(f: &RatFunc, shift: &Shift, hbar: usize) -> RatFunc {
    if shift.is_zero() {
        return f.clone();
    }
    let ih = Poly::var(hbar).scale(&GaussRat::i());
    let subs: Vec<(usize, Poly)> =
        shift.entries().map(|(v, k)| (v, ih.scale(&GaussRat::from_int(k as i64)))).collect();
    f.shift_vars(&subs)
}

#[derive(Clone, Debug)]
pub struct DiffOp {
    vars: Arc<VarTable>,
    terms: BTreeMap<Shift, RatFunc>,
}

impl DiffOp {
    pub fn zero(vars: &Arc<VarTable>) -> Self {
        DiffOp { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn identity(vars: &Arc<VarTable>) -> Self {
        DiffOp::multiplication(vars, RatFunc::one())
    }

    pub fn multiplication(vars: &Arc<VarTable>, c: RatFunc) -> Self {
        DiffOp::term(vars, c, Shift::zero())
    }

    pub fn term(vars: &Arc<VarTable>, c: RatFunc, k: Shift) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        DiffOp { vars: vars.clone(), terms }
    }

    /// The pure shift `γ_v → γ_v + iħk`. Row-N labels and non-GZ variables
    /// cannot be shifted.
    pub fn shift(vars: &Arc<VarTable>, var: usize, k: i16) -> Result<Self, ExactError> {
        match vars.var(var).role {
            VarRole::Gz { .. } => Ok(DiffOp::term(vars, RatFunc::one(), Shift::unit(var, k))),
            _ => Err(ExactError::Index(format!("{} is not a shiftable variable", vars.var(var).name))),
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Shift, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, k: &Shift) -> RatFunc {
        self.terms.get(k).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn hbar(&self) -> usize {
        self.vars.planck().expect("variable table has a Planck variable")
    }

    fn check(&self, o: &DiffOp) -> Result<(), ExactError> {
        if Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars {
            Ok(())
        } else {
            Err(ExactError::VarMismatch)
        }
    }

    fn insert_add(terms: &mut BTreeMap<Shift, RatFunc>, k: Shift, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match terms.remove(&k) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    terms.insert(k, s);
                }
            }
            None => {
                terms.insert(k, c);
            }
        }
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp, ExactError> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            DiffOp::insert_add(&mut terms, k.clone(), c.clone());
        }
        Ok(DiffOp { vars: self.vars.clone(), terms })
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp, ExactError> {
        self.add(&o.neg())
    }

    /// Left multiplication by a function.
    pub fn scale(&self, c: &RatFunc) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(&self.vars);
        }
        DiffOp {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.clone(), c.mul(a))).collect(),
        }
    }

    pub fn scale_scalar(&self, c: &GaussRat) -> DiffOp {
        if c.is_zero() {
            return DiffOp::zero(&self.vars);
        }
        DiffOp {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.clone(), a.scale(c))).collect(),
        }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &DiffOp) -> Result<DiffOp, ExactError> {
        self.check(o)?;
        let h = self.hbar();
        let mut terms = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                let c = c1.mul(&shift_ratfunc(c2, k1, h));
                DiffOp::insert_add(&mut terms, k1.add(k2), c);
            }
        }
        Ok(DiffOp { vars: self.vars.clone(), terms })
    }

    pub fn commutator(&self, o: &DiffOp) -> Result<DiffOp, ExactError> {
        self.compose(o)?.sub(&o.compose(self)?)
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let h = self.hbar();
        self.terms
            .iter()
            .fold(RatFunc::zero(), |acc, (k, c)| acc.add(&c.mul(&shift_ratfunc(f, k, h))))
    }

    /// Applies `g` to every coefficient (shifts unchanged).
    pub fn map_coeffs(
        &self,
        mut g: impl FnMut(&RatFunc) -> Result<RatFunc, ExactError>,
    ) -> Result<DiffOp, ExactError> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            DiffOp::insert_add(&mut terms, k.clone(), g(c)?);
        }
        Ok(DiffOp { vars: self.vars.clone(), terms })
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.vars.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let sh: Vec<String> =
                    k.entries().map(|(v, n)| format!("T[{}]^{}", names[v], n)).collect();
                if sh.is_empty() {
                    format!("[{}]", c.display_with(&names))
                } else {
                    format!("[{}]*{}", c.display_with(&names), sh.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for DiffOp {
    fn eq(&self, o: &DiffOp) -> bool {
        self.vars == o.vars && self.terms == o.terms
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Arc<VarTable> {
        Arc::new(VarTable::gelfand_zetlin(2))
    }

    #[test]
    fn shift_against_coordinate() {
        let v = table();
        let g11 = v.gz(1, 1).unwrap();
        let beta = DiffOp::shift(&v, g11, 1).unwrap();
        let mult = DiffOp::multiplication(&v, RatFunc::var(g11));
        let c = beta.commutator(&mult).unwrap();
        let ih = RatFunc::var(v.planck().unwrap()).scale(&GaussRat::i());
        assert_eq!(c, beta.scale(&ih));
    }

    #[test]
    fn inverse_shift_is_identity() {
        let v = table();
        let g11 = v.gz(1, 1).unwrap();
        let a = DiffOp::shift(&v, g11, 1).unwrap();
        let b = DiffOp::shift(&v, g11, -1).unwrap();
        assert_eq!(a.compose(&b).unwrap(), DiffOp::identity(&v));
    }

    #[test]
    fn mismatched_tables() {
        let a = DiffOp::identity(&table());
        let b = DiffOp::identity(&Arc::new(VarTable::gelfand_zetlin(3)));
        assert_eq!(a.compose(&b), Err(ExactError::VarMismatch));
    }
}

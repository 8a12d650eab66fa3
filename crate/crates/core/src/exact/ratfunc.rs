//! Rational functions with a factored denominator.
//!
//! The denominator is a product of monic, pairwise coprime atoms. Most atoms
//! produced by the operator algebra are linear in some variable, so coprimality
//! and cancellation usually reduce to exact division tests.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::gcd::{gcd, obviously_irreducible};
use super::poly::{Monomial, Poly};
use super::scalar::GaussRat;
use super::ExactError;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

/// Splits off the scalar and monomial content of `p` (assumed nonzero).
/// Returns (scalar, monomial, monic remainder).
fn split_atom(p: &Poly) -> (GaussRat, Monomial, Poly) {
    let m = p.monomial_content();
    let rest = if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&Poly::term(m.clone(), GaussRat::one())).expect("monomial content divides")
    };
    let (lc, monic) = rest.make_monic();
    (lc, m, monic)
}

/// Inserts monic `atom^e` into a coprime base, refining the base as needed.
fn insert_atom(base: &mut BTreeMap<Poly, u32>, atom: Poly, e: u32) {
    if e == 0 || atom.is_one() {
        return;
    }
    if let Some(k) = base.get_mut(&atom) {
        *k += e;
        return;
    }
    let irr = obviously_irreducible(&atom);
    let mut hit: Option<(Poly, Poly)> = None;
    for p in base.keys() {
        if irr && obviously_irreducible(p) {
            continue;
        }
        let g = gcd(&atom, p);
        if !g.is_one() {
            hit = Some((p.clone(), g));
            break;
        }
    }
    match hit {
        None => {
            base.insert(atom, e);
        }
        Some((p, g)) => {
            let k = base.remove(&p).expect("present");
            let p1 = p.div_exact(&g).expect("gcd divides").make_monic().1;
            let a1 = atom.div_exact(&g).expect("gcd divides").make_monic().1;
            insert_atom(base, g, k + e);
            insert_atom(base, p1, k);
            insert_atom(base, a1, e);
        }
    }
}

/// Exponent of `atom` in monic `p` when `p` is a product of powers of base
/// elements; used after refinement.
fn multiplicity(p: &Poly, atom: &Poly) -> (u32, Poly) {
    let mut k = 0;
    let mut rest = p.clone();
    while let Some(q) = rest.div_exact(atom) {
        rest = q;
        k += 1;
    }
    (k, rest)
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: BTreeMap::new() }
    }

    pub fn constant(c: GaussRat) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_poly(Poly::from_int(n))
    }

    pub fn var(idx: usize) -> Self {
        RatFunc::from_poly(Poly::var(idx))
    }

    /// `num / ∏ factors^e`. Supplying the denominator already split into factors
    /// avoids gcd work later.
    pub fn from_factored(num: Poly, factors: &[(Poly, u32)]) -> Result<Self, ExactError> {
        let mut out = RatFunc { num, den: BTreeMap::new() };
        let mut scale = GaussRat::one();
        for (f, e) in factors {
            if f.is_zero() {
                return Err(ExactError::DivZero);
            }
            let (lc, m, monic) = split_atom(f);
            scale = &scale * &lc.pow(*e as i32);
            for (i, &x) in m.exps().iter().enumerate() {
                if x > 0 {
                    insert_atom(&mut out.den, Poly::var(i), x as u32 * e);
                }
            }
            insert_atom(&mut out.den, monic, *e);
        }
        out.num = out.num.scale(&scale.inv().expect("nonzero"));
        out.cancel();
        Ok(out)
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, ExactError> {
        RatFunc::from_factored(num, &[(den, 1)])
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_atoms(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn den_poly(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (p, &e)| acc.mul(&p.pow(e)))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn vars_mask(&self) -> u64 {
        self.den.keys().fold(self.num.vars_mask(), |m, p| m | p.vars_mask())
    }

    /// Removes common factors of numerator and denominator.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        if self.den.is_empty() {
            return;
        }
        let atoms: Vec<Poly> = self.den.keys().cloned().collect();
        for a in atoms {
            let Some(&k) = self.den.get(&a) else { continue };
            if obviously_irreducible(&a) {
                let mut left = k;
                while left > 0 {
                    match self.num.div_exact(&a) {
                        Some(q) => {
                            self.num = q;
                            left -= 1;
                        }
                        None => break,
                    }
                }
                if left == 0 {
                    self.den.remove(&a);
                } else {
                    self.den.insert(a, left);
                }
            } else {
                let g = gcd(&self.num, &a);
                if g.is_one() {
                    continue;
                }
                self.num = self.num.div_exact(&g).expect("gcd divides");
                let rest = a.div_exact(&g).expect("gcd divides").make_monic().1;
                self.den.remove(&a);
                // a^k / g = g^(k-1) · rest^k
                insert_atom(&mut self.den, g, k - 1);
                insert_atom(&mut self.den, rest, k);
                self.cancel();
                return;
            }
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &GaussRat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let mut den = self.den.clone();
        for (p, &e) in &o.den {
            insert_atom(&mut den, p.clone(), e);
        }
        let mut out = RatFunc { num: self.num.mul(&o.num), den };
        out.cancel();
        out
    }

    pub fn mul_poly(&self, p: &Poly) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    /// Rewrites both denominators over a common coprime base; returns the base
    /// with the lcm exponents and the cofactors `lcm/self.den`, `lcm/o.den`.
    fn common_den(&self, o: &RatFunc) -> (BTreeMap<Poly, u32>, Poly, Poly) {
        if self.den == o.den {
            return (self.den.clone(), Poly::one(), Poly::one());
        }
        let mut base: BTreeMap<Poly, u32> = BTreeMap::new();
        for p in self.den.keys().chain(o.den.keys()) {
            insert_atom(&mut base, p.clone(), 1);
        }
        let exps = |d: &BTreeMap<Poly, u32>| -> BTreeMap<Poly, u32> {
            let mut out = BTreeMap::new();
            for (p, &e) in d {
                if base.contains_key(p) {
                    *out.entry(p.clone()).or_insert(0) += e;
                    continue;
                }
                let mut rest = p.clone();
                for b in base.keys() {
                    let (k, r) = multiplicity(&rest, b);
                    if k > 0 {
                        *out.entry(b.clone()).or_insert(0) += k * e;
                        rest = r;
                    }
                }
                debug_assert!(rest.is_constant());
            }
            out
        };
        let ea = exps(&self.den);
        let eb = exps(&o.den);
        let mut lcm = BTreeMap::new();
        let mut ca = Poly::one();
        let mut cb = Poly::one();
        for b in base.keys() {
            let ka = ea.get(b).copied().unwrap_or(0);
            let kb = eb.get(b).copied().unwrap_or(0);
            let k = ka.max(kb);
            if k == 0 {
                continue;
            }
            lcm.insert(b.clone(), k);
            if k > ka {
                ca = ca.mul(&b.pow(k - ka));
            }
            if k > kb {
                cb = cb.mul(&b.pow(k - kb));
            }
        }
        (lcm, ca, cb)
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (den, ca, cb) = self.common_den(o);
        let num = self.num.mul(&ca).add(&o.num.mul(&cb));
        let mut out = RatFunc { num, den };
        out.cancel();
        out
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<RatFunc, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivZero);
        }
        let num = self.den_poly();
        RatFunc::from_factored(num, &[(self.num.clone(), 1)])
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, ExactError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<RatFunc, ExactError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        let num = base.num.pow(e);
        let den = base.den.iter().map(|(p, &k)| (p.clone(), k * e)).collect();
        Ok(RatFunc { num, den })
    }

    /// Applies a polynomial ring map given on each variable that it moves.
    /// The map must send nonzero polynomials to nonzero polynomials.
    fn map_polys(&self, f: impl Fn(&Poly) -> Poly) -> RatFunc {
        let num = f(&self.num);
        if self.den.is_empty() {
            return RatFunc::from_poly(num);
        }
        let factors: Vec<(Poly, u32)> = self.den.iter().map(|(p, &e)| (f(p), e)).collect();
        RatFunc::from_factored(num, &factors).expect("injective map keeps denominators nonzero")
    }

    /// Substitutes `var := var + shift` for each pair.
    pub fn shift_vars(&self, shifts: &[(usize, Poly)]) -> RatFunc {
        let touched = shifts.iter().fold(0u64, |m, (v, _)| m | (1 << v));
        if touched & self.vars_mask() == 0 {
            return self.clone();
        }
        self.map_polys(|p| p.shift_vars(shifts))
    }

    /// Substitutes `var := factor · var`.
    pub fn scale_var(&self, var: usize, factor: &Monomial) -> RatFunc {
        if self.vars_mask() & (1 << var) == 0 {
            return self.clone();
        }
        self.map_polys(|p| p.scale_var(var, factor))
    }

    /// Laurent monomial `Π x_v^{e_v}`.
    pub fn monomial(exps: &[(usize, i32)]) -> RatFunc {
        let mut num = Monomial::one();
        let mut den = Vec::new();
        for &(v, e) in exps {
            if e > 0 {
                num = num.mul(&Monomial::var(v, e as u16));
            } else if e < 0 {
                den.push((Poly::var(v), (-e) as u32));
            }
        }
        RatFunc::from_factored(Poly::term(num, GaussRat::one()), &den).expect("variables are nonzero")
    }

    /// Substitutes `var := ±base^k · var` for any integer `k`; the minus sign
    /// is taken when `negate` is set.
    pub fn twist_var(&self, var: usize, base: usize, k: i32, negate: bool) -> RatFunc {
        if self.vars_mask() & (1 << var) == 0 || (k == 0 && !negate) {
            return self.clone();
        }
        let kk = k.unsigned_abs() as u16;
        // for k < 0 the image of p is p'/base^{|k|·deg p}
        let twist = |p: &Poly| -> (Poly, u32) {
            let dmax = p.degree_in(var);
            let out = Poly::from_terms(p.terms().iter().map(|(m, c)| {
                let e = m.exp(var);
                let pw = if k >= 0 { kk * e } else { kk * (dmax - e) };
                let c = if negate && e % 2 == 1 { -c } else { c.clone() };
                (m.mul(&Monomial::var(base, pw)), c)
            }));
            let lost = if k >= 0 { 0 } else { kk as u32 * dmax as u32 };
            (out, lost)
        };
        let (mut num, num_lost) = twist(&self.num);
        let mut factors = Vec::new();
        let mut gained = 0u32;
        for (a, &e) in &self.den {
            let (a2, lost) = twist(a);
            gained += lost * e;
            factors.push((a2, e));
        }
        if gained > 0 {
            num = num.mul_monomial(&Monomial::var(base, gained as u16));
        }
        if num_lost > 0 {
            factors.push((Poly::var(base), num_lost));
        }
        RatFunc::from_factored(num, &factors).expect("twist keeps denominators nonzero")
    }

    /// Substitutes `var := value` for a polynomial value.
    pub fn substitute_poly(&self, var: usize, value: &Poly) -> RatFunc {
        if self.vars_mask() & (1 << var) == 0 {
            return self.clone();
        }
        self.map_polys(|p| p.substitute(var, value))
    }

    /// General substitution `var := value`.
    pub fn substitute(&self, var: usize, value: &RatFunc) -> Result<RatFunc, ExactError> {
        if self.vars_mask() & (1 << var) == 0 {
            return Ok(self.clone());
        }
        let sub_poly = |p: &Poly| -> Result<RatFunc, ExactError> {
            let cs = p.coeffs_in(var);
            let mut acc = RatFunc::zero();
            for c in cs.iter().rev() {
                acc = acc.mul(value).add(&RatFunc::from_poly(c.clone()));
            }
            Ok(acc)
        };
        let mut out = sub_poly(&self.num)?;
        for (p, &e) in &self.den {
            let d = sub_poly(p)?;
            if d.is_zero() {
                return Err(ExactError::DivZero);
            }
            out = out.mul(&d.pow(-(e as i32))?);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[GaussRat]) -> Result<GaussRat, ExactError> {
        let n = self.num.eval(point);
        let mut d = GaussRat::one();
        for (p, &e) in &self.den {
            let v = p.eval(point);
            if v.is_zero() {
                return Err(ExactError::DivZero);
            }
            d = &d * &v.pow(e as i32);
        }
        Ok(&n * &d.inv().expect("nonzero"))
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        let n = self.num.eval_complex(point);
        self.den.iter().fold(n, |acc, (p, &e)| acc / p.eval_complex(point).powi(e as i32))
    }

    /// Degree in `var` of numerator minus denominator.
    pub fn degree_in(&self, var: usize) -> i32 {
        let dd: i32 = self.den.iter().map(|(p, &e)| p.degree_in(var) as i32 * e as i32).sum();
        self.num.degree_in(var) as i32 - dd
    }

    /// Expansion at `var = ∞`: returns `(top, c)` with
    /// `self = Σ_k c[k] · var^(top - k)`, each `c[k]` free of `var`.
    pub fn laurent_at_infinity(&self, var: usize, terms: usize) -> (i32, Vec<RatFunc>) {
        if self.is_zero() {
            return (0, vec![RatFunc::zero(); terms]);
        }
        let a: Vec<RatFunc> = self.num.coeffs_in(var).into_iter().map(RatFunc::from_poly).collect();
        let dpoly = self.den_poly();
        let b: Vec<RatFunc> = dpoly.coeffs_in(var).into_iter().map(RatFunc::from_poly).collect();
        let n = a.len() - 1;
        let d = b.len() - 1;
        let bd_inv = b[d].inv().expect("leading coefficient nonzero");
        let mut c: Vec<RatFunc> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = if k <= n { a[n - k].clone() } else { RatFunc::zero() };
            for j in 1..=k.min(d) {
                acc = acc.sub(&b[d - j].mul(&c[k - j]));
            }
            c.push(acc.mul(&bd_inv));
        }
        (n as i32 - d as i32, c)
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.den.is_empty() {
            return self.num.display_with(names);
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(p, &e)| {
                let s = format!("({})", p.display_with(names));
                if e == 1 {
                    s
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        format!("({}) / {}", self.num.display_with(names), den.join("*"))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        let (_, ca, cb) = self.common_den(o);
        self.num.mul(&ca) == o.num.mul(&cb)
    }
}

impl Eq for RatFunc {}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<GaussRat> for RatFunc {
    fn from(c: GaussRat) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..64).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "{}", self.display_with(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }
    fn r(p: Poly) -> RatFunc {
        RatFunc::from_poly(p)
    }

    #[test]
    fn additive_inverse() {
        let a = RatFunc::new(x(1), x(0)).unwrap();
        assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn difference_of_squares_cancels() {
        let num = x(1).mul(&x(1)).sub(&x(2).mul(&x(2)));
        let q = RatFunc::new(num, x(1).sub(&x(2))).unwrap();
        assert_eq!(q, r(x(1).add(&x(2))));
        assert!(q.is_poly());
    }

    #[test]
    fn product_over_factor() {
        let a = x(0).sub(&x(1));
        let b = x(0).sub(&x(2));
        let q = r(a.mul(&b)).div(&r(a.clone())).unwrap();
        assert_eq!(q, r(b));
    }

    #[test]
    fn reducible_denominator_is_refined() {
        let d = x(0).mul(&x(0)).sub(&Poly::one());
        let a = RatFunc::new(Poly::one(), d).unwrap();
        let b = RatFunc::new(Poly::one(), x(0).sub(&Poly::one())).unwrap();
        let s = a.mul(&r(x(0).add(&Poly::one())));
        assert_eq!(s, b);
        assert_eq!(s.den_atoms().len(), 1);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(RatFunc::one().div(&RatFunc::zero()), Err(ExactError::DivZero));
    }

    #[test]
    fn laurent_expansion() {
        // 1/(x - a) = x^-1 + a x^-2 + a^2 x^-3 + ...
        let f = RatFunc::new(Poly::one(), x(0).sub(&x(1))).unwrap();
        let (top, c) = f.laurent_at_infinity(0, 3);
        assert_eq!(top, -1);
        assert!(c[0].is_one());
        assert_eq!(c[1], r(x(1)));
        assert_eq!(c[2], r(x(1).mul(&x(1))));
    }
}

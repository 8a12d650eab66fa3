//! Sparse multivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use smallvec::SmallVec;

use super::scalar::GaussRat;

/// Exponent vector with trailing zeros trimmed, so equal monomials compare equal
/// regardless of how many variables the surrounding table has.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[u16; 12]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(idx: usize, exp: u16) -> Self {
        let mut m = Monomial::one();
        m.set(idx, exp);
        m
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        let mut m = Monomial(exps.iter().copied().collect());
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exp(&self, idx: usize) -> u16 {
        self.0.get(idx).copied().unwrap_or(0)
    }

    pub fn set(&mut self, idx: usize, exp: u16) {
        if idx >= self.0.len() {
            if exp == 0 {
                return;
            }
            self.0.resize(idx + 1, 0);
        }
        self.0[idx] = exp;
        self.trim();
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut out = long.0.clone();
        for (i, e) in short.0.iter().enumerate() {
            out[i] += e;
        }
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        if o.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in o.0.iter().enumerate() {
            if out[i] < *e {
                return None;
            }
            out[i] -= e;
        }
        let mut m = Monomial(out);
        m.trim();
        Some(m)
    }

    /// Componentwise minimum.
    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut out: SmallVec<[u16; 12]> =
            self.0.iter().zip(o.0.iter()).map(|(a, b)| (*a).min(*b)).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        Monomial(out)
    }

    pub fn vars_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | (1u64 << i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order, variable 0 most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

/// Terms are kept sorted by decreasing monomial, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monomial, GaussRat)>,
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn from_int(n: i64) -> Self {
        Poly::constant(GaussRat::from_int(n))
    }

    pub fn var(idx: usize) -> Self {
        Poly { terms: vec![(Monomial::var(idx, 1), GaussRat::one())] }
    }

    pub fn term(m: Monomial, c: GaussRat) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, GaussRat)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, GaussRat> = HashMap::new();
        for (m, c) in it {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, GaussRat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<&(Monomial, GaussRat)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> GaussRat {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(GaussRat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    pub fn vars_mask(&self) -> u64 {
        self.terms.iter().fold(0, |m, t| m | t.0.vars_mask())
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // Multiplying by a monomial preserves the order.
        Poly { terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.terms[i].0.cmp(&o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &o.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_monomial(m).scale(c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, GaussRat> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if d.terms.len() == 1 {
            let inv = dc.inv()?;
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.div(dm)?, c * &inv));
            }
            return Some(Poly { terms });
        }
        let inv = dc.inv()?;
        let mut rem: BTreeMap<Monomial, GaussRat> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, GaussRat)> = Vec::new();
        while let Some((rm, rc)) = rem.pop_last() {
            let qm = rm.div(dm)?;
            let qc = &rc * &inv;
            for (m, c) in d.terms.iter().skip(1) {
                let key = m.mul(&qm);
                let delta = c * &qc;
                match rem.entry(key) {
                    Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                    Entry::Occupied(mut o) => {
                        let nv = o.get() - &delta;
                        if nv.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = nv;
                        }
                    }
                }
            }
            quot.push((qm, qc));
        }
        // quotient terms come out in decreasing order
        Some(Poly { terms: quot })
    }

    /// Coefficients with respect to `var`: entry k multiplies `var^k`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, GaussRat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exp(var) as usize;
            let mut mm = m.clone();
            mm.set(var, 0);
            buckets[k].push((mm, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&c.mul_monomial(&Monomial::var(var, k as u16)));
            }
        }
        out
    }

    /// Substitutes `var := repl`.
    pub fn substitute(&self, var: usize, repl: &Poly) -> Poly {
        if self.degree_in(var) == 0 {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        // Horner
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(repl).add(c);
        }
        acc
    }

    /// Substitutes `var := var + shift` for every pair, in one pass.
    pub fn shift_vars(&self, shifts: &[(usize, Poly)]) -> Poly {
        let mut out = self.clone();
        for (v, s) in shifts {
            if out.degree_in(*v) == 0 || s.is_zero() {
                continue;
            }
            out = out.substitute(*v, &Poly::var(*v).add(s));
        }
        out
    }

    /// Substitutes `var := factor·var` for a monomial factor.
    pub fn scale_var(&self, var: usize, factor: &Monomial) -> Poly {
        if self.degree_in(var) == 0 {
            return self.clone();
        }
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let k = m.exp(var);
            let mut f = Monomial::one();
            for _ in 0..k {
                f = f.mul(factor);
            }
            (m.mul(&f), c.clone())
        }))
    }

    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        let mut cache: HashMap<(usize, u16), GaussRat> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache.entry((i, e)).or_insert_with(|| point[i].pow(e as i32));
                t = &t * p;
            }
            acc += &t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exps()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(c.to_complex(), |t, (i, &e)| t * point[i].powi(e as i32))
            })
            .sum()
    }

    /// Gcd of all term monomials.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Monomial::one() };
        it.fold(first.0.clone(), |g, (m, _)| g.gcd(m))
    }

    /// Divides by the leading coefficient; returns (leading coefficient, monic part).
    pub fn make_monic(&self) -> (GaussRat, Poly) {
        let lc = self.leading_coeff();
        if lc.is_zero() || lc.is_one() {
            return (lc, self.clone());
        }
        let inv = lc.inv().expect("nonzero");
        (lc, self.scale(&inv))
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let n = names.get(i).copied().unwrap_or("?");
                    if e == 1 {
                        n.to_string()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&c.to_string());
            } else if c.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                s.push_str(&format!("{}*{}", c, mono.join("*")));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
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

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exps(&[1, 0]);
        let b = Monomial::from_exps(&[0, 2]);
        let c = Monomial::from_exps(&[0, 1]);
        assert!(b > a);
        assert!(a > c);
    }

    #[test]
    fn exact_division() {
        let p = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        let d = x(0).sub(&x(1));
        assert_eq!(p.div_exact(&d).unwrap(), x(0).add(&x(1)));
        assert!(p.div_exact(&x(0).add(&Poly::one())).is_none());
    }

    #[test]
    fn substitution_shift() {
        let p = x(0).mul(&x(0));
        let shifted = p.shift_vars(&[(0, Poly::from_int(1))]);
        assert_eq!(shifted, x(0).mul(&x(0)).add(&x(0).scale(&GaussRat::from_int(2))).add(&Poly::one()));
    }
}

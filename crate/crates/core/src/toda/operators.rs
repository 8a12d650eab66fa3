//! Lax operators, the monodromy matrix and the open-chain generating
//! functions as exact operators in `e^{±x_n}` and `p_n = −iħ∂/∂x_n`.
//!
//! Terms are normal ordered as `c(λ, ħ) · e^{a·x} · p^α`, exponentials on the
//! left; `p_n e^{b x} = e^{b x}(p_n − iħ b_n)` is applied when reordering.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::exact::{GaussRat, Poly};
use crate::verify::{Outcome, Residual, Status};

pub const MAX_OPERATOR_N: usize = 6;
/// Coefficient variables.
pub const LAMBDA: usize = 0;
pub const HBAR: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpKey {
    pub x: Vec<i32>,
    pub p: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TodaOp {
    n: usize,
    terms: BTreeMap<OpKey, Poly>,
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |a, i| a * (n - i) as i64 / (i + 1) as i64)
}

impl TodaOp {
    pub fn zero(n: usize) -> Self {
        TodaOp { n, terms: BTreeMap::new() }
    }

    fn key0(&self) -> OpKey {
        OpKey { x: vec![0; self.n], p: vec![0; self.n] }
    }

    pub fn constant(n: usize, c: Poly) -> Self {
        let mut o = TodaOp::zero(n);
        if !c.is_zero() {
            let k = o.key0();
            o.terms.insert(k, c);
        }
        o
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Poly::one())
    }

    pub fn lambda(n: usize) -> Self {
        Self::constant(n, Poly::var(LAMBDA))
    }

    /// `p_k` (1-based).
    pub fn p(n: usize, k: usize) -> Self {
        let mut o = TodaOp::zero(n);
        let mut key = o.key0();
        key.p[k - 1] = 1;
        o.terms.insert(key, Poly::one());
        o
    }

    /// `c · e^{Σ a_k x_k}`.
    pub fn exp(n: usize, a: &[(usize, i32)], c: i64) -> Self {
        let mut o = TodaOp::zero(n);
        let mut key = o.key0();
        for &(k, e) in a {
            key.x[k - 1] += e;
        }
        o.terms.insert(key, Poly::from_int(c));
        o
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<OpKey, Poly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(terms: &mut BTreeMap<OpKey, Poly>, k: OpKey, c: Poly) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&k) {
            Some(e) => {
                let s = e.add(&c);
                if s.is_zero() {
                    terms.remove(&k);
                } else {
                    *e = s;
                }
            }
            None => {
                terms.insert(k, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            Self::insert(&mut terms, k.clone(), c.clone());
        }
        TodaOp { n: self.n, terms }
    }

    pub fn neg(&self) -> Self {
        TodaOp { n: self.n, terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            Self::insert(&mut terms, k.clone(), v.mul(c));
        }
        TodaOp { n: self.n, terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let ih = Poly::var(HBAR).scale(&GaussRat::i());
        let mut terms = BTreeMap::new();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                // p^α e^{b x} = e^{b x} Π_n Σ_j C(α_n, j) p_n^j (−iħ b_n)^{α_n − j}
                let mut partial: Vec<(Vec<u8>, Poly)> = vec![(k2.p.clone(), c1.mul(c2))];
                for site in 0..self.n {
                    let a = k1.p[site] as u32;
                    if a == 0 {
                        continue;
                    }
                    let b = k2.x[site];
                    let shift = ih.scale(&GaussRat::from_int(-(b as i64)));
                    let mut next = Vec::new();
                    for (p, c) in &partial {
                        for j in 0..=a {
                            if b == 0 && j < a {
                                continue;
                            }
                            let mut p2 = p.clone();
                            p2[site] += j as u8;
                            let c2 = c.mul(&shift.pow(a - j)).scale(&GaussRat::from_int(binom(a, j)));
                            next.push((p2, c2));
                        }
                    }
                    partial = next;
                }
                let x: Vec<i32> = k1.x.iter().zip(&k2.x).map(|(a, b)| a + b).collect();
                for (p, c) in partial {
                    Self::insert(&mut terms, OpKey { x: x.clone(), p }, c);
                }
            }
        }
        TodaOp { n: self.n, terms }
    }

    /// Coefficient of `λ^k` as an operator.
    pub fn lambda_coeff(&self, k: u16) -> Self {
        let mut terms = BTreeMap::new();
        for (key, c) in &self.terms {
            let cs = c.coeffs_in(LAMBDA);
            if let Some(ck) = cs.get(k as usize) {
                Self::insert(&mut terms, key.clone(), ck.clone());
            }
        }
        TodaOp { n: self.n, terms }
    }

    pub fn lambda_degree(&self) -> u16 {
        self.terms.values().map(|c| c.degree_in(LAMBDA)).max().unwrap_or(0)
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = ["lambda", "hbar"];
        self.terms
            .iter()
            .map(|(k, c)| {
                let mut f = format!("({})", c.display_with(&names));
                let xs: Vec<String> = k
                    .x
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a != 0)
                    .map(|(i, &a)| if a == 1 { format!("x{}", i + 1) } else { format!("{a}x{}", i + 1) })
                    .collect();
                if !xs.is_empty() {
                    f.push_str(&format!("·e^({})", xs.join("+")));
                }
                for (i, &e) in k.p.iter().enumerate() {
                    if e == 1 {
                        f.push_str(&format!("·p{}", i + 1));
                    } else if e > 1 {
                        f.push_str(&format!("·p{}^{e}", i + 1));
                    }
                }
                f
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for TodaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

type Mat = [[TodaOp; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `L_k(λ) = [[λ − p_k, e^{−x_k}], [−e^{x_k}, 0]]`.
pub fn lax(n: usize, k: usize) -> Mat {
    [
        [TodaOp::lambda(n).sub(&TodaOp::p(n, k)), TodaOp::exp(n, &[(k, -1)], 1)],
        [TodaOp::exp(n, &[(k, 1)], -1), TodaOp::zero(n)],
    ]
}

#[derive(Clone, Debug)]
pub struct TodaOperators {
    pub n: usize,
    /// `A_0 .. A_N` from the three-term recursion.
    pub open: Vec<TodaOp>,
    /// Monodromy entries `A, B, C, D` of `L_N ⋯ L_1`.
    pub monodromy: [[TodaOp; 2]; 2],
    /// `t̂_N = A_N + D_N`.
    pub transfer: TodaOp,
    /// Checks made while building.
    pub checks: Vec<Outcome>,
}

impl TodaOperators {
    /// `h_k`, with `A_N(λ) = Σ_k (−1)^k λ^{N−k} h_k`.
    pub fn open_hamiltonian(&self, k: usize) -> TodaOp {
        let c = self.open[self.n].lambda_coeff((self.n - k) as u16);
        if k % 2 == 1 {
            c.neg()
        } else {
            c
        }
    }

    /// `H_k` of the transfer matrix.
    pub fn periodic_hamiltonian(&self, k: usize) -> TodaOp {
        let c = self.transfer.lambda_coeff((self.n - k) as u16);
        if k % 2 == 1 {
            c.neg()
        } else {
            c
        }
    }
}

fn check(name: String, n: usize, ok: bool, witness: impl FnOnce() -> String) -> Outcome {
    let mut o = Outcome::new(
        name,
        if ok { Status::Pass } else { Status::Fail },
        Residual::Exact { zero: ok, summary: None },
    )
    .with_param("N", n);
    o.exact = Some(ok);
    if !ok {
        o.witness = Some(witness());
    }
    o
}

/// Builds `A_n`, `C_n` by both the monodromy product and the recursions and
/// records their agreement.
pub fn build_toda_operators(n: usize) -> Result<TodaOperators, super::TodaError> {
    if n == 0 || n > MAX_OPERATOR_N {
        return Err(super::TodaError::BadSpec(format!("operators are built for 1 ≤ N ≤ {MAX_OPERATOR_N}")));
    }
    let mut open = vec![TodaOp::one(n)];
    for k in 1..=n {
        let mut a = TodaOp::lambda(n).sub(&TodaOp::p(n, k)).mul(&open[k - 1]);
        if k >= 2 {
            a = a.sub(&TodaOp::exp(n, &[(k - 1, 1), (k, -1)], 1).mul(&open[k - 2]));
        }
        open.push(a);
    }
    let mut t = lax(n, 1);
    let mut a_c = vec![(t[0][0].clone(), t[1][0].clone())];
    for k in 2..=n {
        t = mat_mul(&lax(n, k), &t);
        a_c.push((t[0][0].clone(), t[1][0].clone()));
    }
    let mut checks = Vec::new();
    for k in 1..=n {
        let (a, c) = &a_c[k - 1];
        checks.push(check(format!("A_{k}: monodromy = three-term recursion"), n, *a == open[k], || {
            a.sub(&open[k]).display()
        }));
        if k >= 2 {
            let (ap, cp) = &a_c[k - 2];
            let rec_a = TodaOp::lambda(n)
                .sub(&TodaOp::p(n, k))
                .mul(ap)
                .add(&TodaOp::exp(n, &[(k, -1)], 1).mul(cp));
            let rec_c = TodaOp::exp(n, &[(k, 1)], -1).mul(ap);
            checks.push(check(format!("A_{k}: monodromy = (A, C) recursion"), n, *a == rec_a, || a.sub(&rec_a).display()));
            checks.push(check(format!("C_{k}: monodromy = (A, C) recursion"), n, *c == rec_c, || c.sub(&rec_c).display()));
        }
    }
    let transfer = t[0][0].add(&t[1][1]);
    let lead = open[n].lambda_coeff(n as u16);
    checks.push(check(format!("A_{n} is monic of degree {n}"), n, open[n].lambda_degree() as usize == n && lead == TodaOp::one(n), || {
        open[n].display()
    }));
    if (2..=4).contains(&n) {
        let wrap = transfer.sub(&open[n]);
        let ok = !wrap.is_zero() && wrap.terms().keys().all(|k| k.x[n - 1] > 0 && k.x[0] < 0);
        checks.push(check("t_N - A_N has only wrap-around terms".to_string(), n, ok, || wrap.display()));
    }
    // H = Σ p²/2 + Σ e^{x_k − x_{k+1}} = h_1²/2 − h_2
    if n >= 2 {
        let ops = TodaOperators { n, open: open.clone(), monodromy: t.clone(), transfer: transfer.clone(), checks: vec![] };
        let h1 = ops.open_hamiltonian(1);
        let h2 = ops.open_hamiltonian(2);
        let half = Poly::constant(GaussRat::from_ratio(1, 2));
        let lhs = h1.mul(&h1).scale(&half).sub(&h2);
        let mut ham = TodaOp::zero(n);
        for k in 1..=n {
            ham = ham.add(&TodaOp::p(n, k).mul(&TodaOp::p(n, k)).scale(&half));
            if k < n {
                ham = ham.add(&TodaOp::exp(n, &[(k, 1), (k + 1, -1)], 1));
            }
        }
        checks.push(check("H = h_1^2/2 - h_2".to_string(), n, lhs == ham, || lhs.sub(&ham).display()));
    }
    Ok(TodaOperators { n, open, monodromy: t, transfer, checks })
}

/// Values of the coefficient polynomial at `(λ, ħ)`.
pub fn eval_coeff(c: &Poly, lambda: Complex64, hbar: f64) -> Complex64 {
    c.eval_complex(&[lambda, Complex64::new(hbar, 0.0)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reordering_rule() {
        // p_1 e^{x_1} = e^{x_1} p_1 − iħ e^{x_1}
        let n = 1;
        let lhs = TodaOp::p(n, 1).mul(&TodaOp::exp(n, &[(1, 1)], 1));
        let rhs = TodaOp::exp(n, &[(1, 1)], 1)
            .mul(&TodaOp::p(n, 1))
            .sub(&TodaOp::exp(n, &[(1, 1)], 1).scale(&Poly::var(HBAR).scale(&GaussRat::i())));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transfer_n2() {
        let ops = build_toda_operators(2).unwrap();
        let n = 2;
        let lam = TodaOp::lambda(n);
        let expect = lam
            .mul(&lam)
            .sub(&lam.mul(&TodaOp::p(n, 1).add(&TodaOp::p(n, 2))))
            .add(&TodaOp::p(n, 1).mul(&TodaOp::p(n, 2)))
            .sub(&TodaOp::exp(n, &[(1, 1), (2, -1)], 1))
            .sub(&TodaOp::exp(n, &[(2, 1), (1, -1)], 1));
        assert_eq!(ops.transfer, expect);
        let a2 = lam.sub(&TodaOp::p(n, 2)).mul(&lam.sub(&TodaOp::p(n, 1))).sub(&TodaOp::exp(n, &[(1, 1), (2, -1)], 1));
        assert_eq!(ops.open[2], a2);
        assert!(ops.checks.iter().all(|c| c.status == Status::Pass));
    }
}

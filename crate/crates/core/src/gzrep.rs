//! Gelfand-Zetlin difference operator realization of U(gl(N)).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;

use crate::exact::special::over_ih;
use crate::exact::{
    DiffOp, ExactError, ExpFactor, GammaFactor, GaussRat, HbarPower, Poly, RatFunc, Shift,
    SpecialState, VarTable,
};
use crate::verify::{judge_all, Identity, Outcome, RunOpts, Status};

pub const MAX_CASIMIR: usize = 4;

/// Generator images for one representation size.
pub struct GzRep {
    n: usize,
    vars: Arc<VarTable>,
    cache: Mutex<HashMap<(usize, usize), DiffOp>>,
}

/// `ρ^{(n)}_k = (n − 2k + 1)/2`.
pub fn rho(n: usize, k: usize) -> GaussRat {
    GaussRat::from_ratio(n as i64 - 2 * k as i64 + 1, 2)
}

impl GzRep {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        GzRep { n, vars: Arc::new(VarTable::gelfand_zetlin(n)), cache: Mutex::new(HashMap::new()) }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn hbar(&self) -> usize {
        self.vars.planck().expect("Planck variable")
    }

    pub fn lambda(&self) -> usize {
        self.vars.index_of("lambda").expect("lambda")
    }

    pub fn mu(&self) -> usize {
        self.vars.index_of("mu").expect("mu")
    }

    /// Index of γ_{row,col}.
    pub fn g(&self, row: usize, col: usize) -> usize {
        self.vars.gz(row, col).expect("GZ variable in range")
    }

    pub fn gp(&self, row: usize, col: usize) -> Poly {
        Poly::var(self.g(row, col))
    }

    /// `iħ·c` as a polynomial.
    pub fn ih(&self, c: GaussRat) -> Poly {
        Poly::var(self.hbar()).scale(&(&GaussRat::i() * &c))
    }

    /// `1/(iħ)` as a rational function.
    pub fn inv_ih(&self) -> RatFunc {
        RatFunc::new(Poly::one(), self.ih(GaussRat::one())).expect("nonzero")
    }

    /// The multiplication operator by `c`.
    pub fn mult(&self, c: RatFunc) -> DiffOp {
        DiffOp::multiplication(&self.vars, c)
    }

    fn shift(&self, row: usize, col: usize, k: i16) -> Shift {
        Shift::unit(self.g(row, col), k)
    }

    /// `Σ_j γ_{n,j}`.
    pub fn row_sum(&self, n: usize) -> Poly {
        (1..=n).fold(Poly::zero(), |a, j| a.add(&self.gp(n, j)))
    }

    fn e_diag(&self, n: usize) -> DiffOp {
        let p = if n > 1 { self.row_sum(n).sub(&self.row_sum(n - 1)) } else { self.row_sum(n) };
        self.mult(RatFunc::from_poly(p).mul(&self.inv_ih()))
    }

    /// `Π_{s≠j} (γ_nj − γ_ns)` as factors.
    fn vandermonde_factors(&self, n: usize, j: usize) -> Vec<(Poly, u32)> {
        (1..=n).filter(|&s| s != j).map(|s| (self.gp(n, j).sub(&self.gp(n, s)), 1)).collect()
    }

    fn e_up(&self, n: usize) -> DiffOp {
        let half = GaussRat::from_ratio(1, 2);
        let mut out = DiffOp::zero(&self.vars);
        for j in 1..=n {
            let num = (1..=n + 1).fold(Poly::one(), |a, r| {
                a.mul(&self.gp(n, j).sub(&self.gp(n + 1, r)).sub(&self.ih(half.clone())))
            });
            let mut den = self.vandermonde_factors(n, j);
            den.push((self.ih(GaussRat::one()), 1));
            let c = RatFunc::from_factored(num.neg(), &den).expect("nonzero");
            out = out.add(&DiffOp::term(&self.vars, c, self.shift(n, j, -1))).expect("same table");
        }
        out
    }

    fn e_down(&self, n: usize) -> DiffOp {
        let half = GaussRat::from_ratio(1, 2);
        let mut out = DiffOp::zero(&self.vars);
        for j in 1..=n {
            let num = (1..n).fold(Poly::one(), |a, r| {
                a.mul(&self.gp(n, j).sub(&self.gp(n - 1, r)).add(&self.ih(half.clone())))
            });
            let mut den = self.vandermonde_factors(n, j);
            den.push((self.ih(GaussRat::one()), 1));
            let c = RatFunc::from_factored(num, &den).expect("nonzero");
            out = out.add(&DiffOp::term(&self.vars, c, self.shift(n, j, 1))).expect("same table");
        }
        out
    }

    /// Image of `E_{i,j}` (1-based). Non-simple entries come from nested
    /// commutators through the neighbouring index.
    pub fn generator(&self, i: usize, j: usize) -> Result<DiffOp, ExactError> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return Err(ExactError::Index(format!("E_{i}{j} outside gl({})", self.n)));
        }
        if let Some(op) = self.cache.lock().expect("cache lock").get(&(i, j)) {
            return Ok(op.clone());
        }
        let op = if i == j {
            self.e_diag(i)
        } else if j == i + 1 {
            self.e_up(i)
        } else if i == j + 1 {
            self.e_down(j)
        } else {
            let m = if i < j { i + 1 } else { i - 1 };
            self.generator(i, m)?.commutator(&self.generator(m, j)?)?
        };
        self.cache.lock().expect("cache lock").insert((i, j), op.clone());
        Ok(op)
    }

    /// Non-simple generator through an explicit intermediate index.
    pub fn generator_via(&self, i: usize, m: usize, j: usize) -> Result<DiffOp, ExactError> {
        self.generator(i, m)?.commutator(&self.generator(m, j)?)
    }

    /// Permutation sum of ordered products of `[(λ − iħρ_k)δ − iħE_{s(k),k}]`.
    pub fn casimir(&self, n: usize) -> Result<DiffOp, ExactError> {
        if n > MAX_CASIMIR {
            return Err(ExactError::SizeLimit(format!("casimir of order {n} exceeds {MAX_CASIMIR}")));
        }
        if n == 0 || n > self.n {
            return Err(ExactError::Index(format!("casimir order {n} outside 1..={}", self.n)));
        }
        let lam = Poly::var(self.lambda());
        let mih = RatFunc::from_poly(self.ih(GaussRat::from_int(-1)));
        let factor = |k: usize, s_k: usize| -> Result<DiffOp, ExactError> {
            let e = self.generator(s_k, k)?.scale(&mih);
            if s_k == k {
                let d = lam.sub(&self.ih(rho(n, k)));
                e.add(&self.mult(RatFunc::from_poly(d)))
            } else {
                Ok(e)
            }
        };
        let mut total = DiffOp::zero(&self.vars);
        for (perm, sign) in permutations(n) {
            let mut prod = DiffOp::identity(&self.vars);
            for k in 1..=n {
                prod = prod.compose(&factor(k, perm[k - 1])?)?;
                if prod.is_zero() {
                    break;
                }
            }
            total = if sign > 0 { total.add(&prod)? } else { total.sub(&prod)? };
        }
        Ok(total)
    }

    /// `Π_j (λ − γ_nj)` as a multiplication operator.
    pub fn casimir_expected(&self, n: usize) -> DiffOp {
        let lam = Poly::var(self.lambda());
        let p = (1..=n).fold(Poly::one(), |a, j| a.mul(&lam.sub(&self.gp(n, j))));
        self.mult(RatFunc::from_poly(p))
    }

    /// Left (`w' = 1`) or right Whittaker vector.
    pub fn whittaker_vector(&self, side: Side) -> Result<SpecialState, ExactError> {
        let mut s = SpecialState::new(&self.vars, RatFunc::one());
        if side == Side::Left {
            return Ok(s);
        }
        let h = self.hbar();
        let mut exp = Vec::new();
        for n in 1..self.n {
            if n > 1 {
                for j in 1..=n {
                    exp.push((self.g(n, j), BigRational::from_integer(num_bigint::BigInt::from(1 - n as i64))));
                }
            }
        }
        if !exp.is_empty() {
            s = s.with_exp(ExpFactor { coeffs: exp })?;
        }
        let half = GaussRat::from_ratio(1, 2);
        for n in 1..self.n {
            for k in 1..=n {
                for m in 1..=n + 1 {
                    let arg = over_ih(&self.gp(n, k).sub(&self.gp(n + 1, m)), h, half.clone());
                    let steps = vec![(self.g(n, k), 1), (self.g(n + 1, m), -1)];
                    s = s.with_hbar_power(HbarPower { exponent: arg.clone(), steps: steps.clone() })?;
                    s = s.with_gamma(GammaFactor { arg, steps, power: 1 })?;
                }
            }
        }
        Ok(s)
    }

    /// The character value `−i/ħ`.
    pub fn character(&self) -> RatFunc {
        RatFunc::new(Poly::constant(-GaussRat::i()), Poly::var(self.hbar())).expect("nonzero")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// All permutations of 1..=n with signs, in lexicographic order.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n + 1];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i32)>) {
        if cur.len() == n {
            let mut inv = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if cur[a] > cur[b] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

fn var_names(rep: &GzRep) -> Vec<String> {
    rep.vars().names().iter().map(|s| s.to_string()).collect()
}

/// Full commutator table `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`.
pub fn gl_relation_identities(rep: &GzRep) -> Result<Vec<Identity>, ExactError> {
    let n = rep.size();
    let mut idx = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    idx.push((i, j, k, l));
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            rep.generator(i, j)?;
        }
    }
    let built = crate::par::par_map(&idx, |&(i, j, k, l)| -> Result<Identity, ExactError> {
        let lhs = rep.generator(i, j)?.commutator(&rep.generator(k, l)?)?;
        let mut rhs = DiffOp::zero(rep.vars());
        if j == k {
            rhs = rhs.add(&rep.generator(i, l)?)?;
        }
        if l == i {
            rhs = rhs.sub(&rep.generator(k, j)?)?;
        }
        Ok(Identity::ops(format!("[E{i}{j},E{k}{l}]"), &lhs, &rhs).with_param("N", n))
    });
    built.into_iter().collect()
}

pub fn verify_gl_relations(n: usize, opts: RunOpts) -> Vec<Outcome> {
    let rep = GzRep::new(n);
    let mut out = match gl_relation_identities(&rep) {
        Ok(ids) => judge_all(&ids, opts),
        Err(e) => return vec![Outcome::error(format!("gl({n}) relations"), e)],
    };
    // The non-simple images do not depend on the intermediate index.
    for i in 1..=n {
        for j in 1..=n {
            let (lo, hi) = (i.min(j), i.max(j));
            for m in lo + 1..hi {
                let neighbour = if i < j { i + 1 } else { i - 1 };
                if m == neighbour {
                    continue;
                }
                let name = format!("E{i}{j} via {m}");
                match rep.generator_via(i, m, j).and_then(|via| Ok((via, rep.generator(i, j)?))) {
                    Ok((via, direct)) => out.push(
                        Identity::ops(name, &via, &direct)
                            .with_param("N", n)
                            .judge(opts.mode, opts.seed, opts.trials),
                    ),
                    Err(e) => out.push(Outcome::error(name, e)),
                }
            }
        }
    }
    out
}

pub fn casimir_identities(n: usize, size: usize) -> Result<Vec<Identity>, ExactError> {
    let rep = GzRep::new(size);
    let a = rep.casimir(n)?;
    let mut ids = vec![Identity::ops(format!("A_{n}(lambda) = prod(lambda - g{n}j)"), &a, &rep.casimir_expected(n))
        .with_param("n", n)
        .with_param("N", size)];
    if n == 2 && size == 2 {
        for i in 1..=2 {
            for j in 1..=2 {
                let e = rep.generator(i, j)?;
                let c = a.commutator(&e)?;
                ids.push(
                    Identity::ops(format!("[A_2(lambda), E{i}{j}] = 0"), &c, &DiffOp::zero(rep.vars()))
                        .with_param("N", 2),
                );
            }
        }
    }
    Ok(ids)
}

pub fn verify_casimir(n: usize, opts: RunOpts) -> Vec<Outcome> {
    let mut out = Vec::new();
    for (order, size) in [(n, n), (n, n + 1)] {
        if size > 3 {
            continue;
        }
        match casimir_identities(order, size) {
            Ok(ids) => out.extend(judge_all(&ids, opts)),
            Err(e) => out.push(Outcome::error(format!("casimir n={order}"), e)),
        }
    }
    out
}

/// Identities `E_{n+1,n} w' = χ w'` and `E_{n,n+1} w = χ w`.
pub fn whittaker_identities(size: usize) -> Result<Vec<Identity>, ExactError> {
    let rep = GzRep::new(size);
    let names = var_names(&rep);
    let chi = rep.character();
    let left = rep.whittaker_vector(Side::Left)?;
    let right = rep.whittaker_vector(Side::Right)?;
    let mut ids = Vec::new();
    for n in 1..size {
        let down = rep.generator(n + 1, n)?;
        let l = left.apply(&down)?;
        ids.push(
            Identity::scalars(format!("E{}{} w' = -i/hbar w'", n + 1, n), names.clone(), l.prefactor, chi.mul(&left.prefactor))
                .with_param("N", size),
        );
        let up = rep.generator(n, n + 1)?;
        let r = right.apply(&up)?;
        if !r.same_core(&right) {
            return Err(ExactError::Mismatch("core changed under a shift".into()));
        }
        ids.push(
            Identity::scalars(format!("E{}{} w = -i/hbar w", n, n + 1), names.clone(), r.prefactor, chi.mul(&right.prefactor))
                .with_param("N", size),
        );
    }
    Ok(ids)
}

/// `Σ_j Π_{r<n}(γ_nj − γ_{n−1,r} + iħ/2) / Π_{s≠j}(γ_nj − γ_ns) = 1`.
pub fn lagrange_identity(n: usize) -> Identity {
    let rep = GzRep::new(n.max(2));
    let half = GaussRat::from_ratio(1, 2);
    let mut sum = RatFunc::zero();
    for j in 1..=n {
        let num = (1..n).fold(Poly::one(), |a, r| {
            a.mul(&rep.gp(n, j).sub(&rep.gp(n - 1, r)).add(&rep.ih(half.clone())))
        });
        let den = rep.vandermonde_factors(n, j);
        sum = sum.add(&RatFunc::from_factored(num, &den).expect("nonzero"));
    }
    Identity::scalars(format!("Lagrange sum n={n}"), var_names(&rep), sum, RatFunc::one())
}

pub fn verify_whittaker(size: usize, opts: RunOpts) -> Vec<Outcome> {
    let mut out = match whittaker_identities(size) {
        Ok(ids) => judge_all(&ids, opts),
        Err(e) => vec![Outcome::error(format!("whittaker N={size}"), e)],
    };
    out.push(lagrange_identity(size).judge(opts.mode, opts.seed, opts.trials));
    out
}

/// Pairing weight `μ₀`: factors `(γ_np − γ_nr)(e^{2πγ_np/ħ} − e^{2πγ_nr/ħ})`
/// for rows `2 ≤ n ≤ N−1`.
#[derive(Clone, Debug)]
pub struct PairingMeasure {
    pub size: usize,
}

impl PairingMeasure {
    pub fn new(size: usize) -> Self {
        PairingMeasure { size }
    }

    pub fn is_trivial(&self) -> bool {
        self.size <= 2
    }

    /// `gamma[n-1][j-1] = γ_nj` for the dynamic rows.
    pub fn eval(&self, gamma: &[Vec<f64>], hbar: f64) -> f64 {
        let tau = 2.0 * std::f64::consts::PI / hbar;
        let mut m = 1.0;
        for n in 2..self.size {
            let row = &gamma[n - 1];
            for p in 0..n {
                for r in p + 1..n {
                    m *= (row[p] - row[r]) * ((tau * row[p]).exp() - (tau * row[r]).exp());
                }
            }
        }
        m
    }
}

/// Expresses `f` as a combination of `Π σ_k(γ_n)^{m_nk}` (dynamic rows) with
/// coefficients rational in ħ and row-N labels. Returns `None` when `f` is
/// not such a polynomial of weighted degree ≤ `bound`.
pub fn sigma_decompose(rep: &GzRep, f: &RatFunc, bound: usize) -> Option<usize> {
    let n = rep.size();
    let dynamic: Vec<usize> = (1..n).flat_map(|r| (1..=r).map(move |j| (r, j))).map(|(r, j)| rep.g(r, j)).collect();
    let dyn_mask = dynamic.iter().fold(0u64, |m, &v| m | (1 << v));
    if f.den_atoms().keys().any(|p| p.vars_mask() & dyn_mask != 0) {
        return None;
    }
    let num = f.num();
    let deg: u32 = num
        .terms()
        .iter()
        .map(|(m, _)| dynamic.iter().map(|&v| m.exp(v) as u32).sum::<u32>())
        .max()
        .unwrap_or(0);
    if deg as usize > bound {
        return None;
    }
    // σ-monomial basis by weighted degree
    let mut sigmas: Vec<(usize, Poly)> = Vec::new();
    for r in 1..n {
        for k in 1..=r {
            let vars_r: Vec<Poly> = (1..=r).map(|j| rep.gp(r, j)).collect();
            sigmas.push((k, elementary(&vars_r, k)));
        }
    }
    let mut basis: Vec<Poly> = vec![Poly::one()];
    let mut weights: Vec<usize> = vec![0];
    for (w, s) in &sigmas {
        let mut extra = Vec::new();
        for (b, bw) in basis.iter().zip(weights.iter()) {
            let mut p = b.clone();
            let mut pw = *bw;
            while pw + w <= bound {
                p = p.mul(s);
                pw += w;
                extra.push((p.clone(), pw));
            }
        }
        for (p, pw) in extra {
            basis.push(p);
            weights.push(pw);
        }
    }
    // Linear system over the coefficient field: columns = basis, rows =
    // dynamic monomials.
    let split = |p: &Poly| -> HashMap<Vec<u16>, Poly> {
        let mut out: HashMap<Vec<u16>, Poly> = HashMap::new();
        for (m, c) in p.terms() {
            let key: Vec<u16> = dynamic.iter().map(|&v| m.exp(v)).collect();
            let mut rest = m.clone();
            for &v in &dynamic {
                rest.set(v, 0);
            }
            let t = Poly::term(rest, c.clone());
            let e = out.entry(key).or_insert_with(Poly::zero);
            *e = e.add(&t);
        }
        out
    };
    let target = split(num);
    let cols: Vec<HashMap<Vec<u16>, Poly>> = basis.iter().map(split).collect();
    let mut keys: Vec<Vec<u16>> = target.keys().cloned().collect();
    for c in &cols {
        keys.extend(c.keys().cloned());
    }
    keys.sort();
    keys.dedup();
    let ncol = basis.len();
    let mut rows: Vec<Vec<RatFunc>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<RatFunc> = cols
                .iter()
                .map(|c| c.get(k).map(|p| RatFunc::from_poly(p.clone())).unwrap_or_else(RatFunc::zero))
                .collect();
            row.push(target.get(k).map(|p| RatFunc::from_poly(p.clone())).unwrap_or_else(RatFunc::zero));
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..ncol {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().expect("nonzero pivot");
        let prow: Vec<RatFunc> = rows[rank].iter().map(|x| x.mul(&inv)).collect();
        rows[rank] = prow.clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=ncol {
                    rows[r][c] = rows[r][c].sub(&f.mul(&prow[c]));
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[ncol].is_zero()) {
        return None;
    }
    Some(deg as usize)
}

/// Elementary symmetric polynomial of order `k`.
pub fn elementary(vars: &[Poly], k: usize) -> Poly {
    let mut e = vec![Poly::zero(); k + 1];
    e[0] = Poly::one();
    for v in vars {
        for i in (1..=k).rev() {
            e[i] = e[i].add(&e[i - 1].mul(v));
        }
    }
    e[k].clone()
}

pub fn module_span_probe(size: usize, bound: usize) -> Vec<Outcome> {
    let rep = GzRep::new(size);
    let w = match rep.whittaker_vector(Side::Right) {
        Ok(w) => w,
        Err(e) => return vec![Outcome::error("span probe", e)],
    };
    let mut simple: Vec<(String, (usize, usize))> = Vec::new();
    for n in 1..=size {
        simple.push((format!("E{n}{n}"), (n, n)));
    }
    for n in 1..size {
        simple.push((format!("E{}{}", n + 1, n), (n + 1, n)));
        simple.push((format!("E{}{}", n, n + 1), (n, n + 1)));
    }
    let mut probes: Vec<(String, Vec<(usize, usize)>)> = vec![("1".into(), vec![])];
    for (name, ij) in &simple {
        probes.push((name.clone(), vec![*ij]));
    }
    for (a, ia) in &simple {
        for (b, ib) in &simple {
            probes.push((format!("{a}{b}"), vec![*ia, *ib]));
        }
    }
    crate::par::par_map(&probes, |(name, word)| {
        let mut s = w.clone();
        for &(i, j) in word.iter().rev() {
            let op = match rep.generator(i, j) {
                Ok(op) => op,
                Err(e) => return Outcome::error(format!("{name} w"), e),
            };
            s = match s.apply(&op) {
                Ok(s) => s,
                Err(e) => return Outcome::error(format!("{name} w"), e),
            };
        }
        let label = format!("{name} w in span");
        match sigma_decompose(&rep, &s.prefactor, bound) {
            Some(d) => Outcome::new(label, Status::Pass, crate::verify::Residual::None)
                .with_param("N", size)
                .with_param("degree", d),
            None => {
                let over = s.prefactor.den_atoms().is_empty()
                    || !s.prefactor.den_atoms().keys().any(|p| {
                        (1..size).any(|r| (1..=r).any(|j| p.vars_mask() & (1 << rep.g(r, j)) != 0))
                    });
                if over {
                    Outcome::new(label, Status::Skipped, crate::verify::Residual::None)
                        .with_param("N", size)
                        .with_note(format!("degree exceeds bound {bound}"))
                } else {
                    Outcome::new(label, Status::Fail, crate::verify::Residual::None).with_param("N", size)
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e11_for_n1() {
        let rep = GzRep::new(1);
        let e = rep.generator(1, 1).unwrap();
        let expect = RatFunc::var(rep.g(1, 1)).mul(&rep.inv_ih());
        assert_eq!(e, rep.mult(expect));
    }

    #[test]
    fn e21_for_n2() {
        let rep = GzRep::new(2);
        let e = rep.generator(2, 1).unwrap();
        let expect = DiffOp::term(rep.vars(), rep.inv_ih(), Shift::unit(rep.g(1, 1), 1));
        assert_eq!(e, expect);
    }

    #[test]
    fn e12_for_n2() {
        let rep = GzRep::new(2);
        let half = GaussRat::from_ratio(1, 2);
        let a = rep.gp(1, 1).sub(&rep.gp(2, 1)).sub(&rep.ih(half.clone()));
        let b = rep.gp(1, 1).sub(&rep.gp(2, 2)).sub(&rep.ih(half));
        let c = RatFunc::from_poly(a.mul(&b).neg()).mul(&rep.inv_ih());
        let expect = DiffOp::term(rep.vars(), c, Shift::unit(rep.g(1, 1), -1));
        assert_eq!(rep.generator(1, 2).unwrap(), expect);
    }

    #[test]
    fn gl2_table() {
        let out = verify_gl_relations(2, RunOpts::default());
        assert_eq!(out.len(), 16);
        assert!(out.iter().all(|o| o.status == Status::Pass), "{out:?}");
    }

    #[test]
    fn casimir_two() {
        let ids = casimir_identities(2, 2).unwrap();
        for id in ids {
            assert!(id.exact_residual().is_none(), "{}", id.name);
        }
    }

    #[test]
    fn whittaker_two() {
        for id in whittaker_identities(2).unwrap() {
            assert!(id.exact_residual().is_none(), "{}: {:?}", id.name, id.exact_residual());
        }
    }

    #[test]
    fn whittaker_core_counts() {
        let rep = GzRep::new(3);
        let w = rep.whittaker_vector(Side::Right).unwrap();
        assert_eq!(w.gammas.len(), 2 + 6);
        assert_eq!(rep.whittaker_vector(Side::Left).unwrap().gammas.len(), 0);
    }

    #[test]
    fn rho_is_antisymmetric() {
        for n in 1..6 {
            for k in 1..=n {
                assert!((&rho(n, k) + &rho(n, n + 1 - k)).is_zero());
            }
        }
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<i32>(), 0);
    }

    #[test]
    fn span_identity_and_diagonal() {
        let out = module_span_probe(2, 2);
        let find = |n: &str| out.iter().find(|o| o.name == n).unwrap().status;
        assert_eq!(find("1 w in span"), Status::Pass);
        assert_eq!(find("E11 w in span"), Status::Pass);
        assert_eq!(find("E21E12 w in span"), Status::Pass);
    }
}

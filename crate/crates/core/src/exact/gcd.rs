//! Multivariate gcd over the Gaussian rationals.
//!
//! Recursive primitive pseudo-remainder sequences. Inputs in this crate are
//! small (a handful of variables, low degree) so the classical algorithm is
//! fast enough; the factored denominators in `ratfunc` keep most calls tiny.

use super::poly::{Monomial, Poly};

/// Monic gcd. `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.make_monic().1;
    }
    if b.is_zero() {
        return a.make_monic().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.make_monic().1;
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = a.div_exact(&Poly::term(ma, one())).expect("monomial content divides");
    let b = b.div_exact(&Poly::term(mb, one())).expect("monomial content divides");
    let g = gcd_no_monomial(&a, &b);
    g.mul_monomial(&mg).make_monic().1
}

fn one() -> super::scalar::GaussRat {
    super::scalar::GaussRat::one()
}

fn gcd_no_monomial(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let va = a.vars_mask();
    let vb = b.vars_mask();
    // A variable present in only one input cannot occur in the gcd.
    let only_a = va & !vb;
    if only_a != 0 {
        let x = only_a.trailing_zeros() as usize;
        return gcd_with_coeffs(&a.coeffs_in(x), b);
    }
    let only_b = vb & !va;
    if only_b != 0 {
        let x = only_b.trailing_zeros() as usize;
        return gcd_with_coeffs(&b.coeffs_in(x), a);
    }
    // Same variable set: recurse on the variable of least degree.
    let mut x = va.trailing_zeros() as usize;
    let mut best = u32::MAX;
    let mut m = va;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let d = a.degree_in(v).max(b.degree_in(v)) as u32;
        if d < best {
            best = d;
            x = v;
        }
    }
    gcd_in_var(a, b, x)
}

fn gcd_with_coeffs(coeffs: &[Poly], other: &Poly) -> Poly {
    let mut g = other.clone();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Gcd of a list of polynomials.
pub fn gcd_many(polys: &[Poly]) -> Poly {
    let mut g = Poly::zero();
    for p in polys {
        if p.is_zero() {
            continue;
        }
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn content(coeffs: &[Poly]) -> Poly {
    gcd_many(coeffs)
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn div_all(v: &[Poly], d: &Poly) -> Vec<Poly> {
    if d.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c.div_exact(d).expect("content divides")).collect()
}

/// Scales so the leading coefficient (in x) has leading scalar 1.
fn normalize(v: Vec<Poly>) -> Vec<Poly> {
    let lc = v.last().expect("nonzero").leading_coeff();
    if lc.is_one() {
        return v;
    }
    let inv = lc.inv().expect("nonzero");
    v.into_iter().map(|c| c.scale(&inv)).collect()
}

fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r = a.to_vec();
    let n = b.len() - 1;
    let lb = &b[n];
    trim(&mut r);
    while r.len() > n {
        let m = r.len() - 1;
        let lr = r[m].clone();
        let shift = m - n;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (k, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[k + shift] = r[k + shift].sub(&t);
        }
        trim(&mut r);
    }
    r
}

fn gcd_in_var(a: &Poly, b: &Poly, x: usize) -> Poly {
    let ac = a.coeffs_in(x);
    let bc = b.coeffs_in(x);
    let ca = content(&ac);
    let cb = content(&bc);
    let cg = gcd(&ca, &cb);
    let mut p = normalize(div_all(&ac, &ca));
    let mut q = normalize(div_all(&bc, &cb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if q.len() == 1 {
            // q is a nonzero constant in x and primitive, hence a unit.
            return cg;
        }
        let r = prem(&p, &q);
        if r.is_empty() {
            let g = Poly::from_coeffs_in(x, &q);
            return g.mul(&cg).make_monic().1;
        }
        let cr = content(&r);
        let r = normalize(div_all(&r, &cr));
        p = q;
        q = r;
    }
}

/// True when `p` is certainly irreducible: degree one overall, or linear in some
/// variable with a scalar coefficient or a scalar constant term.
pub fn obviously_irreducible(p: &Poly) -> bool {
    if p.total_degree() == 1 {
        return true;
    }
    let mut m = p.vars_mask();
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        if p.degree_in(v) == 1 {
            let cs = p.coeffs_in(v);
            let (b, a) = (&cs[0], &cs[1]);
            if a.is_constant() || (b.is_constant() && !b.is_zero()) {
                return true;
            }
        }
    }
    false
}

/// Monic atom for a single variable.
pub fn var_atom(idx: usize) -> Poly {
    Poly::term(Monomial::var(idx, 1), one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::GaussRat;

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }
    fn c(n: i64) -> Poly {
        Poly::from_int(n)
    }

    #[test]
    fn bivariate_common_factor() {
        let f = x(0).sub(&x(1)).add(&c(2));
        let a = f.mul(&x(0).add(&x(1).mul(&x(1))));
        let b = f.mul(&f).mul(&x(1).add(&c(3)));
        assert_eq!(gcd(&a, &b), f.make_monic().1);
    }

    #[test]
    fn gaussian_coefficients() {
        let i = Poly::constant(GaussRat::i());
        let a = x(0).mul(&x(0)).add(&c(1));
        let b = x(0).sub(&i).mul(&x(1));
        assert_eq!(gcd(&a, &b), x(0).sub(&i));
    }

    #[test]
    fn coprime_is_one() {
        let a = x(0).mul(&x(1)).add(&c(1));
        let b = x(0).add(&x(1));
        assert!(gcd(&a, &b).is_one());
        assert!(obviously_irreducible(&a));
    }

    #[test]
    fn monomial_part() {
        let a = x(0).mul(&x(0)).mul(&x(1));
        let b = x(0).mul(&x(1)).mul(&x(1)).scale(&GaussRat::from_int(3));
        assert_eq!(gcd(&a, &b), x(0).mul(&x(1)));
    }
}

//! Gaussian rationals `a + b·i` with exact rational parts.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_rational::BigRational;

use super::rational::Q;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    re: Q,
    im: Q,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re: Q::from_big(re), im: Q::from_big(im) }
    }

    pub fn zero() -> Self {
        GaussRat { re: Q::zero(), im: Q::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat { re: Q::zero(), im: Q::one() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat { re: Q::int(n), im: Q::zero() }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat { re: Q::ratio(num, den), im: Q::zero() }
    }

    /// `(re_num/re_den) + (im_num/im_den)·i`
    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussRat { re: Q::ratio(re.0, re.1), im: Q::ratio(im.0, im.1) }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat { re: Q::from_big(re), im: Q::zero() }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).to_big()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(GaussRat { re: self.re.inv()?, im: Q::zero() });
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Some(GaussRat { re: self.re.div(&n)?, im: self.im.div(&n)?.neg() })
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, e: i32) -> Self {
        let mut base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = GaussRat::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `i^k`
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussRat::one(),
            1 => GaussRat::i(),
            2 => GaussRat::from_int(-1),
            _ => -GaussRat::i(),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Total order used only for canonical sorting.
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl PartialOrd for GaussRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GaussRat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_cmp(other)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat { re: self.re.mul(&o.re), im: Q::zero() };
        }
        GaussRat {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, o: GaussRat) -> GaussRat {
        &self + &o
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, o: GaussRat) -> GaussRat {
        &self - &o
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, o: GaussRat) -> GaussRat {
        &self * &o
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, o: &GaussRat) {
        *self = &*self + o;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, o: &GaussRat) {
        *self = &*self - o;
    }
}

impl MulAssign<&GaussRat> for GaussRat {
    fn mul_assign(&mut self, o: &GaussRat) {
        *self = &*self * o;
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -&self
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: self.re.neg(), im: self.im.neg() }
    }
}

fn fmt_rat(r: &Q) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rat(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}i)", fmt_rat(&self.re), sign, fmt_rat(&self.im.abs()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&GaussRat::i() * &GaussRat::i(), GaussRat::from_int(-1));
        assert_eq!(GaussRat::i_pow(3), -GaussRat::i());
        assert_eq!(GaussRat::i_pow(-1), -GaussRat::i());
    }

    #[test]
    fn inverse_roundtrip() {
        let z = GaussRat::from_parts((3, 2), (-5, 7));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert!(GaussRat::zero().inv().is_none());
        assert_eq!(z.pow(-2), (&z * &z).inv().unwrap());
    }
}

//! Rationals stored inline as `i64/i64` while they fit, spilling to
//! `BigRational` otherwise. The representation is canonical: a value is
//! `Small` exactly when its reduced numerator and denominator fit in `i64`.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, Debug)]
pub enum Q {
    /// Reduced, denominator positive.
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub fn zero() -> Q {
        Q::Small(0, 1)
    }

    pub fn one() -> Q {
        Q::Small(1, 1)
    }

    pub fn int(n: i64) -> Q {
        Q::Small(n, 1)
    }

    /// `n/d` for `d ≠ 0`.
    pub fn ratio(n: i64, d: i64) -> Q {
        assert!(d != 0, "zero denominator");
        Q::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Q {
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(a), Ok(b)) => Q::Small(a, b),
            _ => Q::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn from_big(r: BigRational) -> Q {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(a), Some(b)) => Q::Small(a, b),
            _ => Q::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Q::Small(a, b) => BigRational::new_raw(BigInt::from(*a), BigInt::from(*b)),
            Q::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Q::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Q::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Q::Small(a, _) => *a < 0,
            Q::Big(r) => r.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Q::Small(_, b) => *b == 1,
            Q::Big(r) => r.is_integer(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Q::Small(a, _) => BigInt::from(*a),
            Q::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Q::Small(_, b) => BigInt::from(*b),
            Q::Big(r) => r.denom().clone(),
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn neg(&self) -> Q {
        match self {
            Q::Small(a, b) => match a.checked_neg() {
                Some(n) => Q::Small(n, *b),
                None => Q::from_big(-self.to_big()),
            },
            Q::Big(r) => Q::from_big(-r),
        }
    }

    pub fn add(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                if b == d {
                    return Q::from_i128(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match a.checked_mul(d).and_then(|x| c.checked_mul(b).and_then(|y| x.checked_add(y))) {
                    Some(n) => Q::from_i128(n, b * d),
                    None => Q::from_big(self.to_big() + o.to_big()),
                }
            }
            _ => Q::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn sub(&self, o: &Q) -> Q {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Q) -> Q {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Q::zero();
                }
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big() * o.to_big()),
        }
    }

    /// `None` for division by zero.
    pub fn inv(&self) -> Option<Q> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Q::Small(a, b) => Q::from_i128(*b as i128, *a as i128),
            Q::Big(r) => Q::from_big(r.recip()),
        })
    }

    pub fn div(&self, o: &Q) -> Option<Q> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Q::Small(a, b) => *a as f64 / *b as f64,
            Q::Big(r) => r.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl PartialEq for Q {
    fn eq(&self, o: &Q) -> bool {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => a == c && b == d,
            (Q::Big(x), Q::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Q {}

impl Hash for Q {
    fn hash<H: Hasher>(&self, h: &mut H) {
        match self {
            Q::Small(a, b) => {
                0u8.hash(h);
                a.hash(h);
                b.hash(h);
            }
            Q::Big(r) => {
                1u8.hash(h);
                r.hash(h);
            }
        }
    }
}

impl Ord for Q {
    fn cmp(&self, o: &Q) -> Ordering {
        match (self, o) {
            (Q::Small(a, b), Q::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for Q {
    fn partial_cmp(&self, o: &Q) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in any::<i64>(), b in 1i64..=i64::MAX, c in any::<i64>(), d in 1i64..=i64::MAX) {
            let x = Q::ratio(a, b);
            let y = Q::ratio(c, d);
            prop_assert_eq!(x.add(&y).to_big(), big(a, b) + big(c, d));
            prop_assert_eq!(x.mul(&y).to_big(), big(a, b) * big(c, d));
            prop_assert_eq!(x.sub(&y).to_big(), big(a, b) - big(c, d));
            prop_assert_eq!(x.cmp(&y), big(a, b).cmp(&big(c, d)));
            prop_assert_eq!(Q::from_big(x.add(&y).to_big()), x.add(&y));
        }
    }

    #[test]
    fn overflow_spills_and_returns() {
        let m = Q::int(i64::MAX);
        let s = m.add(&Q::one());
        assert!(matches!(s, Q::Big(_)));
        assert_eq!(s.sub(&Q::one()), m);
        assert_eq!(Q::int(i64::MIN).neg().to_big(), -big(i64::MIN, 1));
    }
}

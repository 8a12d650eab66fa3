//! Randomized identity testing by evaluation at random rational points.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::diffop::DiffOp;
use super::ratfunc::RatFunc;
use super::scalar::GaussRat;
use super::ExactError;

pub const DEFAULT_HEIGHT: i64 = 10_000;
pub const DEFAULT_TRIALS: usize = 10;
const MAX_RESAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct SzWitness {
    /// Sample point, one value per variable.
    pub point: Vec<GaussRat>,
    /// Which coefficient differed, rendered for reports.
    pub key: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SzOutcome {
    pub equal: bool,
    pub trials: usize,
    pub witness: Option<SzWitness>,
}

fn sample_point(rng: &mut ChaCha8Rng, n: usize, height: i64) -> Vec<GaussRat> {
    (0..n)
        .map(|_| {
            let num = rng.gen_range(-height..=height);
            let den = rng.gen_range(1..=height.max(1));
            GaussRat::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
        })
        .collect()
}

/// Compares two coefficient maps at random points. Keys missing on one side
/// count as zero.
pub fn compare_maps<K: Ord + Debug>(
    lhs: &BTreeMap<K, RatFunc>,
    rhs: &BTreeMap<K, RatFunc>,
    nvars: usize,
    trials: usize,
    seed: u64,
    height: i64,
) -> Result<SzOutcome, ExactError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = RatFunc::zero();
    let keys: Vec<&K> = {
        let mut ks: Vec<&K> = lhs.keys().chain(rhs.keys()).collect();
        ks.sort();
        ks.dedup();
        ks
    };
    for _ in 0..trials.max(1) {
        let mut attempts = 0;
        'resample: loop {
            if attempts >= MAX_RESAMPLES {
                return Err(ExactError::DegenerateSampler(attempts));
            }
            attempts += 1;
            let point = sample_point(&mut rng, nvars, height);
            for k in &keys {
                let a = lhs.get(k).unwrap_or(&zero).eval(&point);
                let b = rhs.get(k).unwrap_or(&zero).eval(&point);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        if a != b {
                            return Ok(SzOutcome {
                                equal: false,
                                trials,
                                witness: Some(SzWitness { point, key: format!("{k:?}") }),
                            });
                        }
                    }
                    _ => continue 'resample,
                }
            }
            break;
        }
    }
    Ok(SzOutcome { equal: true, trials, witness: None })
}

/// Schwartz–Zippel comparison of two difference operators.
pub fn identity_test_random(
    lhs: &DiffOp,
    rhs: &DiffOp,
    trials: usize,
    seed: u64,
) -> Result<SzOutcome, ExactError> {
    if lhs.vars() != rhs.vars() {
        return Err(ExactError::VarMismatch);
    }
    compare_maps(lhs.terms(), rhs.terms(), lhs.vars().len(), trials, seed, DEFAULT_HEIGHT)
}

/// Zero test of a single operator.
pub fn is_zero_random(op: &DiffOp, trials: usize, seed: u64) -> Result<SzOutcome, ExactError> {
    compare_maps(op.terms(), &BTreeMap::new(), op.vars().len(), trials, seed, DEFAULT_HEIGHT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Poly, VarTable};
    use std::sync::Arc;

    #[test]
    fn equal_and_unequal() {
        let v = Arc::new(VarTable::gelfand_zetlin(2));
        let g11 = v.gz(1, 1).unwrap();
        let beta = DiffOp::shift(&v, g11, 1).unwrap();
        assert!(identity_test_random(&beta, &beta, 10, 1).unwrap().equal);
        let ih = RatFunc::from_poly(Poly::var(v.planck().unwrap()).scale(&GaussRat::i()));
        let other = beta.add(&beta.scale(&ih)).unwrap();
        let out = identity_test_random(&other, &beta, 10, 1).unwrap();
        assert!(!out.equal);
        assert_eq!(out.witness.unwrap().point.len(), v.len());
    }

    #[test]
    fn vanishing_denominator_everywhere() {
        // 1/(x - x) cannot be built, so use a map whose denominator vanishes at
        // every sampled point: height 0 forces all samples to zero.
        let mut m = BTreeMap::new();
        m.insert(0u8, RatFunc::new(Poly::one(), Poly::var(0)).unwrap());
        let r = compare_maps(&m, &BTreeMap::new(), 1, 1, 3, 0);
        assert_eq!(r, Err(ExactError::DegenerateSampler(MAX_RESAMPLES)));
    }
}

//! Seeded random instances.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{
    HyperbolicProgram, Instance, Kind, KnapsackInstance, LinearForm, QuadraticProgram, Rank1QuadraticProgram,
    SubsetSumGoalInstance,
};

pub const MAX_COEFF_BOUND: u64 = 1 << 62;
pub const MAX_GEN_VARS: usize = 1 << 16;

fn non_negative(rng: &mut ChaCha8Rng, n: usize, bound: u64) -> Vec<u64> {
    (0..n).map(|_| rng.random_range(0..=bound)).collect()
}

fn signed(rng: &mut ChaCha8Rng, n: usize, bound: u64) -> Vec<BigInt> {
    let b = bound as i64;
    (0..n).map(|_| BigInt::from(rng.random_range(-b..=b))).collect()
}

fn big(xs: &[u64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Draws an instance of `kind` with `n` variables and coefficients bounded by
/// `coeff_bound` in absolute value. The same arguments always give the same
/// instance.
///
/// Knapsack and subset-sum entries are drawn from `[0, coeff_bound]`; the
/// knapsack bound is uniform over `[0, sum w]`, so some instances have no
/// feasible subset. The subset-sum goal is uniform over `[0, sum q]`. Every
/// other coefficient is uniform over `[-coeff_bound, coeff_bound]`.
pub fn generate(kind: Kind, n: usize, coeff_bound: u64, seed: u64) -> Result<Instance> {
    if coeff_bound > MAX_COEFF_BOUND {
        return Err(Error::InvalidInstance(format!("coefficient bound exceeds {MAX_COEFF_BOUND}")));
    }
    if n > MAX_GEN_VARS {
        return Err(Error::InvalidInstance(format!("at most {MAX_GEN_VARS} variables can be generated")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rng = &mut rng;
    Ok(match kind {
        Kind::Knapsack => {
            let w = non_negative(rng, n, coeff_bound);
            let p = non_negative(rng, n, coeff_bound);
            let total: u128 = w.iter().map(|&x| x as u128).sum();
            let bound = rng.random_range(0..=total);
            KnapsackInstance::new(big(&w), big(&p), BigInt::from(bound))?.into()
        }
        Kind::SubsetSumGoal => {
            let q = non_negative(rng, n, coeff_bound);
            let total: u128 = q.iter().map(|&x| x as u128).sum();
            let goal = rng.random_range(0..=total);
            SubsetSumGoalInstance::new(big(&q), BigInt::from(goal))?.into()
        }
        Kind::Rank1Quadratic => {
            let u = signed(rng, n, coeff_bound);
            let v = signed(rng, n, coeff_bound);
            Rank1QuadraticProgram::new(u, v)?.into()
        }
        Kind::Quadratic => {
            let rows = (0..n).map(|_| signed(rng, n, coeff_bound)).collect();
            QuadraticProgram::new(rows)?.into()
        }
        Kind::Hyperbolic => {
            let a0 = signed(rng, 1, coeff_bound).remove(0);
            let a = signed(rng, n, coeff_bound);
            let b0 = signed(rng, 1, coeff_bound).remove(0);
            let b = signed(rng, n, coeff_bound);
            HyperbolicProgram::new(LinearForm::new(a0, a), LinearForm::new(b0, b))?.into()
        }
    })
}

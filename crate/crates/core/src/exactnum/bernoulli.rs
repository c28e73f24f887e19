use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{binomial, Rational};

/// Bernoulli numbers `B_0 … B_max` from `Σ_{j<k} C(k, j) B_j = 0` (`k >= 2`),
/// so `B_1 = -1/2` and `B_2 / 2 = 1/12`.
pub fn bernoulli_table(max: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(max + 1);
    b.push(Rational::one());
    for m in 1..=max {
        // (m+1) B_m = -Σ_{j<m} C(m+1, j) B_j
        let acc = b
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (j, bj)| {
                acc + Rational::from_integer(binomial(m as u64 + 1, j as u64)) * bj
            });
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// The Bernoulli number `B_k`.
pub fn bernoulli(k: usize) -> Rational {
    if k >= 3 && k % 2 == 1 {
        return Rational::zero();
    }
    bernoulli_table(k).pop().unwrap()
}

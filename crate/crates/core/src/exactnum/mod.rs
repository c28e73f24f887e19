//! Exact scalar arithmetic.
//!
//! Rationals are [`num_rational::BigRational`]. Everything else in this module
//! is built on top of them: cyclotomic numbers in the power basis of
//! `Q(ζ_N)`, Bernoulli numbers, integer polynomials and polynomials in the
//! formal real parameter ε.

mod bernoulli;
mod cyclotomic;
mod epspoly;
mod intpoly;

pub use bernoulli::{bernoulli, bernoulli_table};
pub use cyclotomic::{cyc_arith, cyclotomic_poly, euler_phi, CycArith, CycField, CycNum};
pub use epspoly::EpsPoly;
pub use intpoly::IntPoly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// `n / d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Removes every prime factor of `level` from `value`.
pub fn strip_primes_of(value: &BigInt, level: u32) -> BigInt {
    let mut v = value.abs();
    if v.is_zero() {
        return v;
    }
    let level = BigInt::from(level);
    loop {
        let g = v.gcd(&level);
        if g.is_one() {
            return v;
        }
        v /= g;
    }
}

/// True iff every prime dividing `den` also divides `level`, i.e. `1/den`
/// lies in `Z[1/level]`.
pub fn is_smooth_over(den: &BigInt, level: u32) -> bool {
    strip_primes_of(den, level).is_one()
}

/// True iff `x` lies in `Z[1/level]`.
pub fn rational_is_integral_at(x: &Rational, level: u32) -> bool {
    is_smooth_over(x.denom(), level)
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Divisors of `n >= 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of `d^power` over the divisors of `n`.
pub fn divisor_sigma(power: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(power))
        .sum()
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

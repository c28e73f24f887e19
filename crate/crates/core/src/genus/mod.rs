//! Level-`N` Eisenstein data of the Hirzebruch elliptic genus.
//!
//! The genus has characteristic power series
//! `Ell(x) = 1 + Σ_{k>=1} Ĝ_k x^k / (k-1)!` with
//! `Ĝ_k = c_k − Σ_{n>=1} (Σ_{d|n} (ζ^{-n/d} + (−1)^k ζ^{n/d}) d^{k-1}) q^n`,
//! `c_1 = 1/2 + ζ/(1−ζ)` and `c_k = B_k / k` otherwise.
//!
//! [`numeric`] holds floating point oracles that evaluate the same genus from
//! its theta-type product and from the lattice sum `ψ(x)`.

pub mod numeric;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::exactnum::{
    bernoulli, divisor_sigma, divisors, factorial, CycField, CycNum, EpsPoly, Rational,
};
use crate::qseries::{divisor_weighted_series, QSeries};
use crate::{Error, Result};

/// Constant term `c_k` of `Ĝ_k`.
pub fn c_const(field: &Arc<CycField>, k: u32) -> CycNum {
    if k == 1 {
        let z = CycNum::zeta_pow(field, 1);
        let one = CycNum::one(field);
        let half = CycNum::from_rational(field, &Rational::new(1.into(), 2.into()));
        &half + &(&z / &(&one - &z))
    } else {
        let b = bernoulli(k as usize) / Rational::from_integer(BigInt::from(k));
        CycNum::from_rational(field, &b)
    }
}

/// `Ĝ_k^{(N)}` to precision `prec`.
pub fn g_hat(field: &Arc<CycField>, k: u32, prec: usize) -> Result<QSeries> {
    if k < 1 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    let tail = divisor_weighted_series(field, prec, k, sign)?;
    Ok(QSeries::constant(c_const(field, k), prec).sub(&tail))
}

/// `G̃_k^{(N)} = Ĝ_k^{(N)} − c_k`, the level-`N` series without constant term.
pub fn g_tilde(field: &Arc<CycField>, k: u32, prec: usize) -> Result<QSeries> {
    Ok(g_hat(field, k, prec)?.without_constant())
}

/// The classical level-one Eisenstein series `G_k = −B_k/(2k) + Σ σ_{k−1}(n) q^n`
/// for even `k >= 2`; zero for odd `k`. Coefficients are rational, carried in
/// the given cyclotomic field.
pub fn g_level1(field: &Arc<CycField>, k: u32, prec: usize) -> Result<QSeries> {
    if k < 1 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    if k % 2 == 1 {
        return Ok(QSeries::zero(field, prec));
    }
    let c = -bernoulli(k as usize) / Rational::from_integer(BigInt::from(2 * k));
    let coeffs: Vec<Rational> = (0..prec)
        .map(|n| {
            if n == 0 {
                c.clone()
            } else {
                Rational::from_integer(divisor_sigma(k - 1, n as u64))
            }
        })
        .collect();
    Ok(QSeries::from_rationals(field, &coeffs))
}

/// Level-one `G̃_k = Σ σ_{k−1}(n) q^n` (even `k`), the ordinary Eisenstein
/// series with its constant term removed.
pub fn g_tilde_level1(field: &Arc<CycField>, k: u32, prec: usize) -> Result<QSeries> {
    Ok(g_level1(field, k, prec)?.without_constant())
}

/// Taylor data of `Ell(x)` up to `x^K`.
#[derive(Clone, Debug)]
pub struct EllExpansion {
    pub level: u32,
    pub x_order: u32,
    /// `g_hat[k-1] = Ĝ_k` for `k = 1..=x_order`.
    pub g_hat: Vec<QSeries>,
}

impl EllExpansion {
    /// `1/(k−1)!`, the factor in front of `Ĝ_k x^k`.
    pub fn factorial_weight(k: u32) -> Rational {
        Rational::new(1.into(), factorial(k as u64 - 1))
    }

    /// Coefficient series of `x^k` in `Ell(x)`, i.e. `Ĝ_k/(k−1)!`; `x^0 ↦ 1`.
    pub fn x_coefficient(&self, k: u32) -> QSeries {
        if k == 0 {
            let f = self.g_hat[0].field();
            return QSeries::one(f, self.g_hat[0].prec());
        }
        self.g_hat[k as usize - 1].scale_rational(&Self::factorial_weight(k))
    }
}

pub fn ell_expansion(field: &Arc<CycField>, x_order: u32, prec: usize) -> Result<EllExpansion> {
    if x_order < 1 {
        return Err(Error::InvalidArgument("x_order must be at least 1".into()));
    }
    let g_hat = (1..=x_order)
        .map(|k| g_hat(field, k, prec))
        .collect::<Result<Vec<_>>>()?;
    Ok(EllExpansion {
        level: field.level(),
        x_order,
        g_hat,
    })
}

/// Coefficients of `ch(λ^d)` and `ch(λ^{−d})` in the `q^n` term of
/// `Ẽll(λ)/c_1(λ)`.
#[derive(Clone, Debug)]
pub struct TwistTable {
    pub level: u32,
    pub prec: usize,
    pub entries: BTreeMap<(usize, usize), (CycNum, CycNum)>,
}

impl TwistTable {
    pub fn get(&self, n: usize, d: usize) -> Option<&(CycNum, CycNum)> {
        self.entries.get(&(n, d))
    }
}

/// Entry `(n, d)` for `d | n`, `1 <= n < prec`, is `(−ζ^{−n/d}, ζ^{n/d})`.
pub fn twist_table(field: &Arc<CycField>, prec: usize) -> TwistTable {
    let mut entries = BTreeMap::new();
    for n in 1..prec {
        for d in divisors(n as u64) {
            let m = (n as u64 / d) as i64;
            entries.insert(
                (n, d as usize),
                (-CycNum::zeta_pow(field, -m), CycNum::zeta_pow(field, m)),
            );
        }
    }
    TwistTable {
        level: field.level(),
        prec,
        entries,
    }
}

/// Expansion of `(Ell(x)·Ell(−x) − 1)/(−x²)` in powers of `x²`.
///
/// Entry `j` is the coefficient of `x^{2j}`. With `c_2 = −x²` the coefficient
/// of `c_2^j` is `(−1)^j` times entry `j`: entry 0 is `g_2^{(N)}` and entry
/// `j >= 1` equals `−2·G_{2j+2}/(2j)!` for the level-one `G`.
pub fn ell_quaternionic(field: &Arc<CycField>, c2_order: u32, prec: usize) -> Result<Vec<QSeries>> {
    let top = 2 * (c2_order + 1);
    let ell = ell_expansion(field, top, prec)?;
    let e: Vec<QSeries> = (0..=top).map(|k| ell.x_coefficient(k)).collect();
    let mut out = Vec::with_capacity(c2_order as usize + 1);
    for j in 0..=c2_order {
        let m = 2 * (j + 1) as usize;
        let mut acc = QSeries::zero(field, prec);
        for i in 0..=m {
            let term = e[i].mul(&e[m - i]);
            acc = if (m - i) % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        out.push(acc.neg());
    }
    Ok(out)
}

/// `g_2^{(N)} = Ĝ_1² − 2Ĝ_2`, the weight-two form in the quaternionic genus.
pub fn g2(field: &Arc<CycField>, prec: usize) -> Result<QSeries> {
    let g1 = g_hat(field, 1, prec)?;
    let g2 = g_hat(field, 2, prec)?;
    Ok(g1.mul(&g1).sub(&g2.scale_rational(&Rational::from_integer(2.into()))))
}

/// Helper for callers that want an ε-free constant series.
pub fn constant_series(field: &Arc<CycField>, r: &Rational, prec: usize) -> QSeries {
    QSeries::constant(CycNum::from_rational(field, r), prec)
}

/// Multiplies a series by a formal `a + bε`.
pub fn scale_linear_eps(s: &QSeries, a: &Rational, b: &Rational) -> QSeries {
    s.scale_eps(&EpsPoly::linear(s.field(), a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn field(n: u32) -> Arc<CycField> {
        CycField::new(n).unwrap()
    }

    #[test]
    fn g_hat_one_at_level_three() {
        let f = field(3);
        let g = g_hat(&f, 1, 10).unwrap();
        assert_eq!(
            g.coeff0(0),
            CycNum::from_coords(&f, &[rat(1, 6), rat(1, 3)]).unwrap()
        );
        let z = |m| CycNum::zeta_pow(&f, m);
        assert_eq!(g.coeff0(1), &z(1) - &z(2));
    }

    #[test]
    fn g_hat_one_vanishes_at_level_two() {
        assert!(g_hat(&field(2), 1, 30).unwrap().is_zero());
    }

    #[test]
    fn weight_two_constant_is_one_twelfth() {
        for n in 2..=12 {
            let g = g_hat(&field(n), 2, 3).unwrap();
            assert_eq!(g.coeff0(0).as_rational(), Some(rat(1, 12)));
        }
    }

    #[test]
    fn g_tilde_two_at_level_three() {
        let f = field(3);
        let g = g_tilde(&f, 2, 6).unwrap();
        assert!(g.coeff0(0).is_zero());
        assert_eq!(g.coeff0(1), CycNum::from_int(&f, 1));
        // σ_1(n) − 3σ_1(n/3)
        let expect = [0, 1, 3, 1, 7, 6];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(g.coeff0(n), CycNum::from_int(&f, *e), "n = {}", n);
        }
    }

    #[test]
    fn level_one_weight_four() {
        let f = field(3);
        let g4 = g_level1(&f, 4, 101).unwrap();
        assert_eq!(g4.coeff0(0).as_rational(), Some(rat(1, 240)));
        for n in 1..101u64 {
            let brute: i64 = (1..=n).filter(|d| n % d == 0).map(|d| (d * d * d) as i64).sum();
            assert_eq!(g4.coeff0(n as usize), CycNum::from_int(&f, brute));
        }
        assert!(g_tilde_level1(&f, 4, 5).unwrap().coeff0(0).is_zero());
        assert!(g_level1(&f, 5, 5).unwrap().is_zero());
    }

    #[test]
    fn odd_constants_vanish() {
        let f = field(5);
        let ell = ell_expansion(&f, 9, 4).unwrap();
        for k in [3, 5, 7, 9] {
            assert!(ell.x_coefficient(k).coeff0(0).is_zero());
        }
        assert_eq!(ell.x_coefficient(2).coeff0(0).as_rational(), Some(rat(1, 12)));
    }

    #[test]
    fn twist_table_entries() {
        let f = field(3);
        let t = twist_table(&f, 10);
        let (a, b) = t.get(1, 1).unwrap();
        assert_eq!(*a, -CycNum::zeta_pow(&f, 2));
        assert_eq!(*b, CycNum::zeta_pow(&f, 1));
        assert!(t.get(4, 3).is_none());
        // collapse onto G̃_1 at n = 4
        let sum = divisors(4)
            .into_iter()
            .map(|d| {
                let (a, b) = t.get(4, d as usize).unwrap();
                // ch(λ^{±d}) ≡ 1 at c_1 = 0 leaves Ẽll(x)/x at x = 0, i.e. G̃_1
                a + b
            })
            .fold(CycNum::zero(&f), |acc, x| &acc + &x);
        let g1 = g_tilde(&f, 1, 10).unwrap();
        assert_eq!(sum, g1.coeff0(4));
    }

    #[test]
    fn quaternionic_entries() {
        for n in [2u32, 3, 5] {
            let f = field(n);
            let q = ell_quaternionic(&f, 2, 25).unwrap();
            assert_eq!(q[0], g2(&f, 25).unwrap());
            let g4 = g_level1(&f, 4, 25).unwrap();
            assert_eq!(q[1], g4.neg(), "level {}", n);
            // −2 G_6 / 4! = −G_6 / 12
            let g6 = g_level1(&f, 6, 25).unwrap();
            assert_eq!(q[2], g6.scale_rational(&rat(-1, 12)), "level {}", n);
        }
    }

    #[test]
    fn g2_constant_at_level_three() {
        let f = field(3);
        let g = g2(&f, 10).unwrap();
        let z = CycNum::zeta_pow(&f, 1);
        let one = CycNum::one(&f);
        let d = &one - &z;
        let expect = &(&z / &(&d * &d)) + &CycNum::from_rational(&f, &rat(1, 12));
        assert_eq!(g.coeff0(0), expect);
        assert_eq!(g.coeff0(0).as_rational(), Some(rat(-1, 4)));
        // at level two Ĝ_1 = 0 so g_2 = −2 Ĝ_2
        let f2 = field(2);
        assert_eq!(
            g2(&f2, 10).unwrap(),
            g_hat(&f2, 2, 10).unwrap().scale_rational(&int(-2))
        );
    }

    #[test]
    fn g2_is_one_twelfth_mod_integral() {
        for n in [2u32, 3, 4, 5, 6] {
            let f = field(n);
            let g = g2(&f, 50).unwrap();
            let diff = g.sub(&constant_series(&f, &rat(1, 12), 50));
            assert!(diff.is_integral_series().unwrap(), "level {}", n);
        }
    }

    #[test]
    fn q_coefficients_integral_except_constant() {
        for n in 2..=12u32 {
            let f = field(n);
            for k in 1..=8 {
                let g = g_hat(&f, k, 30).unwrap();
                assert!(g.without_constant().is_integral_series().unwrap());
            }
        }
    }
}

//! Truncated q-series with coefficients in `Q(ζ_N)[ε]`.
//!
//! A [`QSeries`] stores the coefficients of `q^0 … q^{P-1}`. Binary operations
//! require equal levels and truncate to the smaller precision.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::exactnum::{divisors, CycField, CycNum, EpsPoly, Rational};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    field: Arc<CycField>,
    coeffs: Vec<EpsPoly>,
}

/// Ring operations accepted by [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

/// Checked ring arithmetic between two series of the same level.
pub fn series_arith(f: &QSeries, g: &QSeries, op: SeriesOp) -> Result<QSeries> {
    f.check_level(g)?;
    Ok(match op {
        SeriesOp::Add => f.add(g),
        SeriesOp::Sub => f.sub(g),
        SeriesOp::Mul => f.mul(g),
    })
}

impl QSeries {
    pub fn zero(field: &Arc<CycField>, prec: usize) -> QSeries {
        QSeries {
            field: Arc::clone(field),
            coeffs: vec![EpsPoly::zero(field); prec],
        }
    }

    pub fn constant(c: CycNum, prec: usize) -> QSeries {
        let field = Arc::clone(c.field());
        let mut s = QSeries::zero(&field, prec);
        if prec > 0 {
            s.coeffs[0] = EpsPoly::constant(c);
        }
        s
    }

    pub fn one(field: &Arc<CycField>, prec: usize) -> QSeries {
        QSeries::constant(CycNum::one(field), prec)
    }

    /// `c·q^n` truncated at `prec`.
    pub fn monomial(c: CycNum, n: usize, prec: usize) -> QSeries {
        let field = Arc::clone(c.field());
        let mut s = QSeries::zero(&field, prec);
        if n < prec {
            s.coeffs[n] = EpsPoly::constant(c);
        }
        s
    }

    /// Series with ε-free coefficients; precision is `coeffs.len()`.
    pub fn from_cyc(field: &Arc<CycField>, coeffs: Vec<CycNum>) -> QSeries {
        QSeries {
            field: Arc::clone(field),
            coeffs: coeffs.into_iter().map(EpsPoly::constant).collect(),
        }
    }

    /// Series with rational coefficients.
    pub fn from_rationals(field: &Arc<CycField>, coeffs: &[Rational]) -> QSeries {
        QSeries::from_cyc(
            field,
            coeffs
                .iter()
                .map(|r| CycNum::from_rational(field, r))
                .collect(),
        )
    }

    pub fn from_eps(field: &Arc<CycField>, coeffs: Vec<EpsPoly>) -> QSeries {
        QSeries {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[EpsPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &EpsPoly {
        &self.coeffs[n]
    }

    /// ε⁰-part of the coefficient of `q^n`.
    pub fn coeff0(&self, n: usize) -> CycNum {
        self.coeffs[n].coeff(0)
    }

    pub fn set_coeff(&mut self, n: usize, c: EpsPoly) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(EpsPoly::is_zero)
    }

    pub fn truncate(&self, prec: usize) -> QSeries {
        let mut s = self.clone();
        s.coeffs.truncate(prec);
        s
    }

    /// Maximal ε-degree over all coefficients (`0` for the zero series).
    pub fn eps_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(EpsPoly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn is_eps_free(&self) -> bool {
        self.coeffs.iter().all(EpsPoly::is_constant)
    }

    fn check_level(&self, rhs: &QSeries) -> Result<()> {
        if self.level() != rhs.level() {
            return Err(Error::LevelMismatch(self.level(), rhs.level()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &QSeries) -> QSeries {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &QSeries, f: impl Fn(&EpsPoly, &EpsPoly) -> EpsPoly) -> QSeries {
        assert_eq!(self.level(), rhs.level(), "q-series level mismatch");
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Cauchy product truncated at the smaller precision.
    pub fn mul(&self, rhs: &QSeries) -> QSeries {
        assert_eq!(self.level(), rhs.level(), "q-series level mismatch");
        let prec = self.prec().min(rhs.prec());
        let mut out = vec![EpsPoly::zero(&self.field); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: out,
        }
    }

    pub fn pow(&self, e: u32) -> QSeries {
        let mut acc = QSeries::one(&self.field, self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> QSeries {
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> QSeries {
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a.scale_rational(r)).collect(),
        }
    }

    pub fn scale_eps(&self, p: &EpsPoly) -> QSeries {
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|a| a * p).collect(),
        }
    }

    /// Coefficientwise complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> QSeries {
        QSeries {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(EpsPoly::conj).collect(),
        }
    }

    /// Same series with the constant term replaced by zero.
    pub fn without_constant(&self) -> QSeries {
        let mut s = self.clone();
        if let Some(c) = s.coeffs.first_mut() {
            *c = EpsPoly::zero(&self.field);
        }
        s
    }

    /// Splits `f = Σ_j ε^j · f_j` into ε-free pieces `f_j`.
    pub fn eps_split(&self) -> Vec<QSeries> {
        let deg = self.eps_degree();
        (0..=deg)
            .map(|j| {
                QSeries::from_cyc(&self.field, self.coeffs.iter().map(|c| c.coeff(j)).collect())
            })
            .collect()
    }

    /// Inverse of [`QSeries::eps_split`].
    pub fn eps_join(field: &Arc<CycField>, parts: &[QSeries]) -> QSeries {
        let prec = parts.iter().map(QSeries::prec).min().unwrap_or(0);
        let coeffs = (0..prec)
            .map(|n| EpsPoly::new(field, parts.iter().map(|p| p.coeff0(n)).collect()))
            .collect();
        QSeries::from_eps(field, coeffs)
    }

    /// Index of the first coefficient outside `Z[ζ_N, 1/N]`.
    pub fn first_non_integral(&self) -> Result<Option<usize>> {
        if !self.is_eps_free() {
            return Err(Error::EpsDependent);
        }
        Ok(self
            .coeffs
            .iter()
            .position(|c| !c.coeff(0).is_n_integral()))
    }

    /// True iff every coefficient lies in `Z[ζ_N, 1/N]`; ε-dependent series
    /// are rejected.
    pub fn is_integral_series(&self) -> Result<bool> {
        Ok(self.first_non_integral()?.is_none())
    }
}

/// `Σ_{n>=1} (Σ_{d|n} (ζ^{-n/d} + s·ζ^{n/d}) d^{k-1}) q^n` with `s = ±1`.
pub fn divisor_weighted_series(
    field: &Arc<CycField>,
    prec: usize,
    weight: u32,
    sign: i32,
) -> Result<QSeries> {
    if weight < 1 {
        return Err(Error::InvalidArgument("weight must be at least 1".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument("sign must be +1 or -1".into()));
    }
    let phi = field.degree();
    let coeffs = (0..prec)
        .map(|n| {
            let mut acc = vec![BigInt::from(0); phi];
            if n > 0 {
                for d in divisors(n as u64) {
                    let m = (n as u64 / d) as i64;
                    let w = BigInt::from(d).pow(weight - 1);
                    for (a, (x, y)) in acc
                        .iter_mut()
                        .zip(field.zeta_coords(-m).iter().zip(field.zeta_coords(m)))
                    {
                        let t = if sign == 1 { x + y } else { x - y };
                        *a += &w * t;
                    }
                }
            }
            let coords: Vec<Rational> = acc.into_iter().map(Rational::from_integer).collect();
            CycNum::from_coords(field, &coords).expect("coordinate count")
        })
        .collect();
    Ok(QSeries::from_cyc(field, coeffs))
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries[N={}, P={}](", self.level(), self.prec())?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match n {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*q", c)?,
                _ => write!(f, "({})*q^{}", c, n)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{divisor_sigma, int, rat};

    fn field(n: u32) -> Arc<CycField> {
        CycField::new(n).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = field(3);
        let a = QSeries::from_rationals(&f, &[int(1), int(1), int(0)]);
        let b = QSeries::from_rationals(&f, &[int(1), int(-1), int(0)]);
        let p = series_arith(&a, &b, SeriesOp::Mul).unwrap();
        assert_eq!(p, QSeries::from_rationals(&f, &[int(1), int(0), int(-1)]));
    }

    #[test]
    fn geometric_square() {
        // (Σ q^n)^2 has coefficient n+1 at q^n; brute force convolution count
        let f = field(3);
        let g = QSeries::from_rationals(&f, &vec![int(1); 10]);
        let sq = g.mul(&g);
        let brute = (0..10)
            .flat_map(|i| (0..10).map(move |j| (i, j)))
            .filter(|(i, j)| i + j == 5)
            .count() as i64;
        assert_eq!(sq.coeff0(5), CycNum::from_int(&f, brute));
        assert_eq!(brute, 6);
    }

    #[test]
    fn level_mismatch_rejected() {
        let a = QSeries::one(&field(3), 4);
        let b = QSeries::one(&field(5), 4);
        assert_eq!(
            series_arith(&a, &b, SeriesOp::Add),
            Err(Error::LevelMismatch(3, 5))
        );
    }

    #[test]
    fn precision_is_minimum() {
        let f = field(2);
        let a = QSeries::one(&f, 5);
        let b = QSeries::one(&f, 3);
        assert_eq!(a.mul(&b).prec(), 3);
        assert_eq!(a.add(&b).prec(), 3);
    }

    #[test]
    fn integrality_checks() {
        let f = field(3);
        let sigma3: Vec<Rational> = (0..50)
            .map(|n| {
                if n == 0 {
                    int(0)
                } else {
                    Rational::from_integer(divisor_sigma(3, n))
                }
            })
            .collect();
        assert!(QSeries::from_rationals(&f, &sigma3)
            .is_integral_series()
            .unwrap());
        let half_plus_q = QSeries::from_rationals(&f, &[rat(1, 2), int(1)]);
        assert!(!half_plus_q.is_integral_series().unwrap());
        assert_eq!(half_plus_q.first_non_integral().unwrap(), Some(0));
        let eps = QSeries::from_eps(&f, vec![EpsPoly::eps(&f)]);
        assert_eq!(eps.is_integral_series(), Err(Error::EpsDependent));
    }

    #[test]
    fn eps_splitting() {
        let f = field(3);
        let s = QSeries::from_eps(
            &f,
            vec![
                EpsPoly::linear(&f, &rat(1, 2), &int(-1)),
                EpsPoly::linear(&f, &int(1), &int(-2)),
            ],
        );
        let parts = s.eps_split();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], QSeries::from_rationals(&f, &[rat(1, 2), int(1)]));
        assert_eq!(parts[1], QSeries::from_rationals(&f, &[int(-1), int(-2)]));
        assert_eq!(QSeries::eps_join(&f, &parts), s);
        let free = QSeries::from_rationals(&f, &[int(3), int(4)]);
        assert_eq!(free.eps_split(), vec![free.clone()]);
    }

    #[test]
    fn divisor_sums_level_three() {
        let f = field(3);
        let z = |m| CycNum::zeta_pow(&f, m);
        let s = divisor_weighted_series(&f, 5, 1, -1).unwrap();
        assert_eq!(s.coeff0(1), &z(-1) - &z(1));
        // k = 2, s = +1, n = 2: (ζ^{-2}+ζ^2)·1 + (ζ^{-1}+ζ)·2 = -3
        let s2 = divisor_weighted_series(&f, 5, 2, 1).unwrap();
        assert_eq!(s2.coeff0(2), CycNum::from_int(&f, -3));
    }

    #[test]
    fn divisor_sums_vanish_at_level_two_for_odd_sign() {
        let f = field(2);
        assert!(divisor_weighted_series(&f, 30, 1, -1).unwrap().is_zero());
        assert!(divisor_weighted_series(&f, 30, 3, -1).unwrap().is_zero());
    }

    #[test]
    fn even_sign_sum_is_real() {
        for n in [5u32, 7, 8, 12] {
            let f = field(n);
            for k in 1..=4 {
                let s = divisor_weighted_series(&f, 20, k, 1).unwrap();
                assert_eq!(s.conj(), s, "N={} k={}", n, k);
                let a = divisor_weighted_series(&f, 20, k, -1).unwrap();
                assert_eq!(a.conj(), a.neg(), "N={} k={}", n, k);
            }
        }
    }
}

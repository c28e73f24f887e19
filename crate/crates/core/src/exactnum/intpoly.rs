use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// Polynomial with arbitrary-precision integer coefficients, lowest degree
/// first. The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x^n`.
    pub fn x_pow(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        IntPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Polynomial long division by a monic divisor: `self = q * divisor + r`.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i - dd + j] -= &c * dj;
            }
            quot[i - dd] = c;
        }
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Evaluates at a floating point argument (Horner).
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `p(x / s)` scaled by `t`, returned only if every coefficient stays
    /// integral.
    pub fn rescale_argument(&self, s: i64, t: i64) -> Option<IntPoly> {
        let s = BigInt::from(s);
        let mut out = Vec::with_capacity(self.coeffs.len());
        let mut spow = BigInt::one();
        for c in &self.coeffs {
            let num = c * t;
            let (q, r) = num.div_rem(&spow);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
            spow *= &s;
        }
        Some(IntPoly::new(out))
    }

    /// Rational coefficient vector.
    pub fn to_rationals(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}x", a)?,
                (_, true) => write!(f, "x^{}", i)?,
                (_, false) => write!(f, "{}x^{}", a, i)?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_degrees() {
        let p = IntPoly::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPoly::from_i64(&[0, 0]).degree(), None);
    }

    #[test]
    fn division_by_monic() {
        // x^3 - 1 = (x - 1)(x^2 + x + 1)
        let a = IntPoly::from_i64(&[-1, 0, 0, 1]);
        let b = IntPoly::from_i64(&[-1, 1]);
        let (q, r) = a.div_rem_monic(&b);
        assert_eq!(q, IntPoly::from_i64(&[1, 1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn rescaling() {
        // 2 * T_2(x/2) with T_2 = 2x^2 - 1 gives x^2 - 2
        let t2 = IntPoly::from_i64(&[-1, 0, 2]);
        assert_eq!(t2.rescale_argument(2, 2), Some(IntPoly::from_i64(&[-2, 0, 1])));
        assert_eq!(IntPoly::from_i64(&[0, 1]).rescale_argument(2, 1), None);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, 0, -1]).to_string(), "-x^2 + 1");
        assert_eq!(IntPoly::from_i64(&[-2, 3]).to_string(), "3x - 2");
    }
}

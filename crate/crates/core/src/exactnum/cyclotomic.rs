//! The cyclotomic field `Q(ζ_N)` in the power basis `1, ζ, …, ζ^{φ(N)-1}`.
//!
//! Elements are stored as a vector of integer numerators over one common
//! positive denominator, kept coprime to the numerators. The power basis is an
//! integral basis of `Z[ζ_N]`, so membership in `Z[ζ_N, 1/N]` is a pure check
//! on that denominator.

use std::f64::consts::PI;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{divisors, is_smooth_over, IntPoly, Rational};
use crate::{Error, Result};

/// Euler's totient.
pub fn euler_phi(n: u32) -> usize {
    let n = n as u64;
    super::prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1)) as usize
}

/// The `n`-th cyclotomic polynomial, obtained by dividing `x^n - 1` by the
/// cyclotomic polynomials of the proper divisors of `n`.
pub fn cyclotomic_poly(n: u32) -> IntPoly {
    assert!(n >= 1, "cyclotomic polynomial needs n >= 1");
    let mut p = &IntPoly::x_pow(n as usize) - &IntPoly::one();
    for d in divisors(n as u64) {
        if d as u32 == n {
            continue;
        }
        let (q, r) = p.div_rem_monic(&cyclotomic_poly(d as u32));
        debug_assert!(r.is_zero());
        p = q;
    }
    p
}

/// Arithmetic context for one level `N`.
#[derive(Debug)]
pub struct CycField {
    level: u32,
    phi: usize,
    modulus: IntPoly,
    /// `x^j mod Φ_N` for `0 <= j < max(N, 2φ - 1)`.
    powers: Vec<Vec<BigInt>>,
}

impl CycField {
    pub fn new(level: u32) -> Result<Arc<CycField>> {
        if level < 2 {
            return Err(Error::InvalidLevel(level));
        }
        let modulus = cyclotomic_poly(level);
        let phi = modulus.degree().unwrap();
        debug_assert_eq!(phi, euler_phi(level));
        let count = (level as usize).max(2 * phi);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); phi];
        cur[0] = BigInt::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce: x^phi = -sum_{i<phi} m_i x^i
            let top = cur.pop().unwrap();
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in cur.iter_mut().zip(modulus.coeffs()) {
                    *c -= &top * m;
                }
            }
        }
        Ok(Arc::new(CycField {
            level,
            phi,
            modulus,
            powers,
        }))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Dimension `φ(N)` of the power basis.
    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    /// Integer coordinates of `ζ^m`.
    pub fn zeta_coords(&self, m: i64) -> &[BigInt] {
        let r = m.rem_euclid(self.level as i64) as usize;
        &self.powers[r]
    }

    /// `ζ = exp(2πi/N)` as a complex number.
    pub fn zeta_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / self.level as f64)
    }
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
    }
}

impl Eq for CycField {}

impl Hash for CycField {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
    }
}

/// Exact element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CycField>,
    nums: Vec<BigInt>,
    den: BigInt,
}

/// Binary operations accepted by [`cyc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycArith {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked field arithmetic: errors on level mismatch or division by zero.
pub fn cyc_arith(a: &CycNum, b: &CycNum, op: CycArith) -> Result<CycNum> {
    if a.level() != b.level() {
        return Err(Error::LevelMismatch(a.level(), b.level()));
    }
    Ok(match op {
        CycArith::Add => a + b,
        CycArith::Sub => a - b,
        CycArith::Mul => a * b,
        CycArith::Div => a.checked_div(b)?,
    })
}

impl CycNum {
    fn from_parts(field: &Arc<CycField>, nums: Vec<BigInt>, den: BigInt) -> CycNum {
        let mut x = CycNum {
            field: Arc::clone(field),
            nums,
            den,
        };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.nums {
                *c = -&*c;
            }
        }
        let mut g = self.den.clone();
        for c in &self.nums {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            self.den /= &g;
            for c in &mut self.nums {
                *c /= &g;
            }
        }
        if self.nums.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    pub fn zero(field: &Arc<CycField>) -> CycNum {
        CycNum {
            field: Arc::clone(field),
            nums: vec![BigInt::zero(); field.phi],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CycField>) -> CycNum {
        Self::from_rational(field, &Rational::one())
    }

    pub fn from_rational(field: &Arc<CycField>, r: &Rational) -> CycNum {
        let mut nums = vec![BigInt::zero(); field.phi];
        nums[0] = r.numer().clone();
        Self::from_parts(field, nums, r.denom().clone())
    }

    pub fn from_int(field: &Arc<CycField>, n: i64) -> CycNum {
        Self::from_rational(field, &Rational::from_integer(BigInt::from(n)))
    }

    /// Builds an element from its power-basis coordinates.
    pub fn from_coords(field: &Arc<CycField>, coords: &[Rational]) -> Result<CycNum> {
        if coords.len() != field.phi {
            return Err(Error::InvalidArgument(format!(
                "expected {} coordinates at level {}, got {}",
                field.phi,
                field.level,
                coords.len()
            )));
        }
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = coords
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Ok(Self::from_parts(field, nums, den))
    }

    /// `ζ^m`, any integer `m`.
    pub fn zeta_pow(field: &Arc<CycField>, m: i64) -> CycNum {
        CycNum {
            field: Arc::clone(field),
            nums: field.zeta_coords(m).to_vec(),
            den: BigInt::one(),
        }
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    /// Power-basis coordinates.
    pub fn coords(&self) -> Vec<Rational> {
        self.nums
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord(&self, i: usize) -> Rational {
        Rational::new(self.nums[i].clone(), self.den.clone())
    }

    /// Common denominator of the coordinates.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Integer numerators over [`CycNum::denominator`].
    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.nums[0].is_one() && self.nums[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.nums[1..].iter().all(Zero::is_zero) {
            Some(self.coord(0))
        } else {
            None
        }
    }

    /// True iff the element lies in `Z[ζ_N, 1/N]`.
    pub fn is_n_integral(&self) -> bool {
        is_smooth_over(&self.den, self.field.level)
    }

    pub fn scale(&self, r: &Rational) -> CycNum {
        let nums = self.nums.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(&self.field, nums, &self.den * r.denom())
    }

    pub fn scale_int(&self, k: &BigInt) -> CycNum {
        let nums = self.nums.iter().map(|c| c * k).collect();
        Self::from_parts(&self.field, nums, self.den.clone())
    }

    /// Image under the Galois automorphism `ζ ↦ ζ^{-1}` (complex
    /// conjugation).
    pub fn conj(&self) -> CycNum {
        self.galois(-1)
    }

    /// Image under `ζ ↦ ζ^a` for `a` prime to `N`.
    pub fn galois(&self, a: i64) -> CycNum {
        let mut nums = vec![BigInt::zero(); self.field.phi];
        for (j, c) in self.nums.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, z) in nums.iter_mut().zip(self.field.zeta_coords(a * j as i64)) {
                *t += c * z;
            }
        }
        Self::from_parts(&self.field, nums, self.den.clone())
    }

    /// Numerical value with `ζ = exp(2πi/N)`.
    pub fn to_complex(&self) -> Complex64 {
        let z = self.field.zeta_complex();
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &self.nums {
            acc += zp * c.to_f64().unwrap_or(f64::NAN);
            zp *= z;
        }
        acc / den
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic polynomial.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a: Vec<Rational> = self.coords();
        let m = self.field.modulus.to_rationals();
        let (g, s) = qpoly::ext_gcd_left(&a, &m);
        // g is a nonzero constant since Φ_N is irreducible
        debug_assert_eq!(g.len(), 1);
        let ginv = g[0].recip();
        let mut coords: Vec<Rational> = s.into_iter().map(|c| c * &ginv).collect();
        coords.resize(self.field.phi, Rational::zero());
        Self::from_coords(&self.field, &coords)
    }

    pub fn checked_div(&self, rhs: &CycNum) -> Result<CycNum> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check_level(&self, rhs: &CycNum) {
        assert_eq!(
            self.field.level, rhs.field.level,
            "cyclotomic level mismatch"
        );
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.level == other.field.level && self.den == other.den && self.nums == other.nums
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.level.hash(state);
        self.nums.hash(state);
        self.den.hash(state);
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.check_level(rhs);
        if self.den == rhs.den {
            let nums = self.nums.iter().zip(&rhs.nums).map(|(a, b)| a + b).collect();
            return CycNum::from_parts(&self.field, nums, self.den.clone());
        }
        let l = self.den.lcm(&rhs.den);
        let fa = &l / &self.den;
        let fb = &l / &rhs.den;
        let nums = self
            .nums
            .iter()
            .zip(&rhs.nums)
            .map(|(a, b)| a * &fa + b * &fb)
            .collect();
        CycNum::from_parts(&self.field, nums, l)
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self + &(-rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: Arc::clone(&self.field),
            nums: self.nums.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.check_level(rhs);
        let phi = self.field.phi;
        let mut acc = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.nums.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.nums.iter().enumerate() {
                if !b.is_zero() {
                    acc[i + j] += a * b;
                }
            }
        }
        let mut nums = vec![BigInt::zero(); phi];
        for (t, c) in acc.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if t < phi {
                nums[t] += c;
            } else {
                for (n, p) in nums.iter_mut().zip(&self.field.powers[t]) {
                    if !p.is_zero() {
                        *n += &c * p;
                    }
                }
            }
        }
        CycNum::from_parts(&self.field, nums, &self.den * &rhs.den)
    }
}

impl Div for &CycNum {
    type Output = CycNum;
    fn div(self, rhs: &CycNum) -> CycNum {
        self.checked_div(rhs).expect("division by zero in Q(ζ)")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[N={}]({})", self.field.level, self)
    }
}

impl fmt::Display for CycNum {
    /// Human-readable form such as `1/6 + 1/3*z`, where `z = ζ_N`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coords().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            }
            let a = c.abs();
            match j {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if j == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", j)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Minimal dense polynomial arithmetic over `Q`, only what the inverse needs.
mod qpoly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn sub_mul(a: &[Rational], b: &[Rational], c: &[Rational]) -> Vec<Rational> {
        // a - b*c
        let mut out: Vec<Rational> = a.to_vec();
        let need = if b.is_empty() || c.is_empty() {
            0
        } else {
            b.len() + c.len() - 1
        };
        if out.len() < need {
            out.resize(need, Rational::zero());
        }
        for (i, x) in b.iter().enumerate() {
            for (j, y) in c.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
        trim(&mut out);
        out
    }

    fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        let db = b.len() - 1;
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut q = vec![Rational::zero(); rem.len() - db];
        let lead = &b[db];
        for i in (db..rem.len()).rev() {
            let c = &rem[i] / lead;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                rem[i - db + j] -= &c * bj;
            }
            q[i - db] = c;
        }
        trim(&mut rem);
        trim(&mut q);
        (q, rem)
    }

    /// Returns `(g, s)` with `s*a ≡ g (mod m)`, `g = gcd(a, m)`.
    pub fn ext_gcd_left(a: &[Rational], m: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r0: Vec<Rational> = m.to_vec();
        let mut r1: Vec<Rational> = a.to_vec();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0: Vec<Rational> = Vec::new();
        let mut s1: Vec<Rational> = vec![num_traits::One::one()];
        while !r1.is_empty() {
            let (q, r) = div_rem(&r0, &r1);
            let s2 = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        (r0, s0)
    }
}

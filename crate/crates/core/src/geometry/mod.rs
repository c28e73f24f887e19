//! Spectral and geometric inputs for the example computations.

pub mod extcalc;
pub mod reps;

use std::sync::Arc;

use num_bigint::BigInt;

use crate::exactnum::{CycField, EpsPoly, IntPoly, Rational};
use crate::fassembly::{XiKind, XiTable};
use crate::genus::numeric::hurwitz_zeta;
use crate::{Error, Result};

pub use extcalc::{connection_matrix, cs3_data, cs_integral, ext_d, ExtForm, SpherePoly};
pub use reps::{
    psi_as_irreps, su2_tensor, su3_dim, su3_kernel_parity, su3_psi_twist_kernel_parity, SU2Decomp,
    SU3Weight,
};

/// `ξ(ð ⊗ λ^d) ≡ ½ − dε` on the circle whose twisted spectrum is
/// `{2π(k + dε)}`; with `use_eps` false the ε-term is dropped.
pub fn circle_xi(field: &Arc<CycField>, d: i64, use_eps: bool) -> Result<EpsPoly> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "d = 0 is the untwisted e-invariant input".into(),
        ));
    }
    let half = Rational::new(1.into(), 2.into());
    let slope = if use_eps { Rational::from_integer(BigInt::from(-d)) } else { Rational::from_integer(0.into()) };
    Ok(EpsPoly::linear(field, &half, &slope))
}

pub fn circle_xi_table(field: &Arc<CycField>, dmax: i64, use_eps: bool) -> Result<XiTable> {
    XiTable::from_fn(XiKind::ComplexPositive, 1, field, dmax, |d| circle_xi(field, d, use_eps))
}

/// `ζ_H(0, x)` for `0 < x < 1` by Euler–Maclaurin continuation.
pub fn hurwitz_zeta0_numeric(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidArgument(format!("x = {} outside (0, 1)", x)));
    }
    hurwitz_zeta(0.0, x, 12, 12)
}

/// `η = ζ_H(0, ε) − ζ_H(0, 1 − ε)` of `−i∂_t + 2πε` on the unit circle.
pub fn circle_eta_numeric(eps: f64) -> Result<f64> {
    Ok(hurwitz_zeta0_numeric(eps)? - hurwitz_zeta0_numeric(1.0 - eps)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChebyshevKind {
    T,
    U,
}

/// Chebyshev polynomials from `P_{n+1} = 2x·P_n − P_{n−1}`; `U_{−1} = 0`.
pub fn chebyshev(kind: ChebyshevKind, d: u32) -> IntPoly {
    let two_x = IntPoly::from_i64(&[0, 2]);
    let mut prev = IntPoly::one();
    let mut cur = match kind {
        ChebyshevKind::T => IntPoly::x_pow(1),
        ChebyshevKind::U => two_x.clone(),
    };
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ψ^d λ_H = 2T_d(λ_H/2)`, a polynomial with integer coefficients.
pub fn adams_psi_poly(d: u32) -> IntPoly {
    chebyshev(ChebyshevKind::T, d)
        .rescale_argument(2, 2)
        .expect("2T_d(x/2) is integral")
}

/// `ind(ð ⊗ ψ^d λ_H)` on `HP¹`, via [`hp1_index_symbolic`].
pub fn hp1_index(d: u32) -> BigInt {
    hp1_index_symbolic(d).index
}

/// Steps of the index computation on `HP¹ = S⁴` (where `Â = 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hp1Index {
    /// `[x²] (e^{dx} + e^{−dx})`, the degree-4 part of `ch(ψ^d λ_H)`.
    pub ch2_in_x: Rational,
    /// Coefficient of `c_2` after `x² = −c_2`.
    pub ch2_in_c2: Rational,
    /// `∫ c_2(λ_H)`.
    pub c2_integral: i64,
    pub index: BigInt,
}

pub fn hp1_index_symbolic(d: u32) -> Hp1Index {
    // degree-2 Taylor coefficient of e^{dx} + e^{−dx}: 2·d²/2!
    let d = BigInt::from(d);
    let ch2_in_x = Rational::new(2 * &d * &d, BigInt::from(2));
    let ch2_in_c2 = -ch2_in_x.clone();
    let c2_integral = -1;
    let index = &ch2_in_c2 * Rational::from_integer(BigInt::from(c2_integral));
    Hp1Index {
        ch2_in_x,
        ch2_in_c2,
        c2_integral,
        index: index.to_integer(),
    }
}

/// `ξ_d = −d/12` for the homogeneous space carrying `ν²` (l = 3).
pub fn nu2_xi_table(field: &Arc<CycField>, dmax: i64) -> Result<XiTable> {
    XiTable::from_fn(XiKind::ComplexPositive, 3, field, dmax, |d| {
        Ok(EpsPoly::from_rational(field, &Rational::new(BigInt::from(-d), BigInt::from(12))))
    })
}

/// Kernel parities `d³ mod 2` for odd `d`, from the index on `HP¹` (l = 4).
pub fn etasigma_parity_table(field: &Arc<CycField>, dmax: i64) -> Result<XiTable> {
    XiTable::from_fn(XiKind::QuaternionicKernelParity, 4, field, dmax, |d| {
        let p = hp1_index(d as u32) % BigInt::from(2);
        Ok(EpsPoly::from_rational(field, &Rational::from_integer(p)))
    })
}

/// Kernel parities on `SU(3)/SU(2)` for odd `d`, from the weight enumeration.
pub fn su3_parity_table(field: &Arc<CycField>, dmax: i64) -> Result<XiTable> {
    XiTable::from_fn(XiKind::QuaternionicKernelParity, 4, field, dmax, |d| {
        let p = su3_psi_twist_kernel_parity(d as u32)?;
        Ok(EpsPoly::from_rational(field, &Rational::from_integer(BigInt::from(p))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_values() {
        let f = CycField::new(3).unwrap();
        assert_eq!(circle_xi(&f, 1, true).unwrap(), EpsPoly::linear(&f, &rat(1, 2), &rat(-1, 1)));
        assert_eq!(circle_xi(&f, 2, true).unwrap(), EpsPoly::linear(&f, &rat(1, 2), &rat(-2, 1)));
        assert_eq!(circle_xi(&f, -1, true).unwrap(), EpsPoly::linear(&f, &rat(1, 2), &rat(1, 1)));
        assert!(circle_xi(&f, 5, false).unwrap().is_constant());
        assert!(circle_xi(&f, 0, true).is_err());
    }

    // ζ_H(0, x) = ½ − x, so (η + dim ker)/2 = (1 − 2ε)/2 = ½ − ε.
    #[test]
    fn hurwitz_continuation() {
        assert!(hurwitz_zeta0_numeric(0.5).unwrap().abs() < 1e-12);
        assert!((hurwitz_zeta0_numeric(0.25).unwrap() - 0.25).abs() < 1e-10);
        assert!((circle_eta_numeric(0.3).unwrap() - 0.4).abs() < 1e-9);
        for x in [0.05, 0.37, 0.81] {
            assert!((hurwitz_zeta0_numeric(x).unwrap() - (0.5 - x)).abs() < 1e-10);
        }
        assert!(hurwitz_zeta0_numeric(1.0).is_err());
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(ChebyshevKind::T, 2), IntPoly::from_i64(&[-1, 0, 2]));
        assert_eq!(adams_psi_poly(2), IntPoly::from_i64(&[-2, 0, 1]));
        assert_eq!(adams_psi_poly(1), IntPoly::from_i64(&[0, 1]));
        let lhs = &chebyshev(ChebyshevKind::U, 3) - &chebyshev(ChebyshevKind::U, 1);
        assert_eq!(lhs, chebyshev(ChebyshevKind::T, 3).scale(&BigInt::from(2)));
    }

    #[test]
    fn adams_character_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 0..=20u32 {
            let p = adams_psi_poly(d);
            for _ in 0..50 {
                let t: f64 = rng.gen_range(-3.0..3.0);
                let lhs = 2.0 * (d as f64 * t).cos();
                assert!((p.eval_f64(2.0 * t.cos()) - lhs).abs() < 1e-9, "d={}", d);
            }
        }
        let t5 = chebyshev(ChebyshevKind::T, 5);
        for _ in 0..50 {
            let t: f64 = rng.gen_range(-3.0..3.0);
            assert!((2.0 * t5.eval_f64(t.cos()) - 2.0 * (5.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn hp1_indices() {
        assert_eq!(hp1_index(1), BigInt::from(1));
        assert_eq!(hp1_index(2), BigInt::from(4));
        for d in 1..=9u32 {
            let s = hp1_index_symbolic(d);
            assert_eq!(s.index, BigInt::from(d * d));
            assert_eq!(&s.index % 2, BigInt::from(d % 2));
        }
    }

    #[test]
    fn tables() {
        let f = CycField::new(3).unwrap();
        let nu = nu2_xi_table(&f, 12).unwrap();
        assert_eq!(nu.get(12).unwrap(), &EpsPoly::from_rational(&f, &rat(-1, 1)));
        let es = etasigma_parity_table(&f, 9).unwrap();
        assert_eq!(es.get(3).unwrap(), &EpsPoly::from_rational(&f, &rat(1, 1)));
        assert!(es.get(2).is_err());
        let su = su3_parity_table(&f, 9).unwrap();
        for d in [1, 3, 5, 7, 9] {
            assert_eq!(su.get(d).unwrap(), es.get(d).unwrap());
        }
    }
}

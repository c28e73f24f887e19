use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{CycField, CycNum, Rational};

/// Polynomial in the formal real parameter ε with coefficients in `Q(ζ_N)`,
/// lowest ε-degree first, trailing zeros trimmed.
///
/// ε is never instantiated numerically: identities are checked degree by
/// degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsPoly {
    field: Arc<CycField>,
    coeffs: Vec<CycNum>,
}

impl EpsPoly {
    pub fn new(field: &Arc<CycField>, coeffs: Vec<CycNum>) -> EpsPoly {
        let mut p = EpsPoly {
            field: Arc::clone(field),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(CycNum::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(field: &Arc<CycField>) -> EpsPoly {
        EpsPoly {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CycNum) -> EpsPoly {
        let field = Arc::clone(c.field());
        EpsPoly::new(&field, vec![c])
    }

    pub fn from_rational(field: &Arc<CycField>, r: &Rational) -> EpsPoly {
        EpsPoly::constant(CycNum::from_rational(field, r))
    }

    /// `a + b·ε` with rational `a`, `b`.
    pub fn linear(field: &Arc<CycField>, a: &Rational, b: &Rational) -> EpsPoly {
        EpsPoly::new(
            field,
            vec![CycNum::from_rational(field, a), CycNum::from_rational(field, b)],
        )
    }

    /// The monomial `ε`.
    pub fn eps(field: &Arc<CycField>) -> EpsPoly {
        EpsPoly::new(field, vec![CycNum::zero(field), CycNum::one(field)])
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// ε-degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True iff there is no ε-dependence.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    /// Coefficient of `ε^j`.
    pub fn coeff(&self, j: usize) -> CycNum {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| CycNum::zero(&self.field))
    }

    pub fn scale(&self, c: &CycNum) -> EpsPoly {
        EpsPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rational(&self, r: &Rational) -> EpsPoly {
        EpsPoly::new(&self.field, self.coeffs.iter().map(|a| a.scale(r)).collect())
    }

    pub fn conj(&self) -> EpsPoly {
        EpsPoly::new(&self.field, self.coeffs.iter().map(CycNum::conj).collect())
    }
}

impl Add for &EpsPoly {
    type Output = EpsPoly;
    fn add(self, rhs: &EpsPoly) -> EpsPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|j| match (self.coeffs.get(j), rhs.coeffs.get(j)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        EpsPoly::new(&self.field, coeffs)
    }
}

impl Sub for &EpsPoly {
    type Output = EpsPoly;
    fn sub(self, rhs: &EpsPoly) -> EpsPoly {
        self + &(-rhs)
    }
}

impl Neg for &EpsPoly {
    type Output = EpsPoly;
    fn neg(self) -> EpsPoly {
        EpsPoly {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &EpsPoly {
    type Output = EpsPoly;
    fn mul(self, rhs: &EpsPoly) -> EpsPoly {
        if self.is_zero() || rhs.is_zero() {
            return EpsPoly::zero(&self.field);
        }
        let mut out = vec![CycNum::zero(&self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        EpsPoly::new(&self.field, out)
    }
}

impl fmt::Debug for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsPoly({})", self)
    }
}

impl fmt::Display for EpsPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match j {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*eps", c)?,
                _ => write!(f, "({})*eps^{}", c, j)?,
            }
            first = false;
        }
        Ok(())
    }
}

//! Exterior calculus on `(S³ × S³)/S¹` w.r.t. the global coframe
//! `θ = (L₁*, L₂*, w₁*, w₂*, w₃*)`, with coefficients in
//! `Q[y₁, y₂, y₃]/(y₁² + y₂² + y₃² − 1)`.
//!
//! `dθ = −ω ∧ θ` with the connection matrix of the normal homogeneous
//! metric; on functions `dy₁ = 2(y₃w₂* − y₂w₃*)` and cyclically, from the
//! right-invariant action `K_a(y) = 2 e_a × y` and `L_i(y) = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactnum::Rational;
use crate::{Error, Result};

/// Exponent vector `[a, b, c]` of `y₁^a y₂^b y₃^c`.
type Monomial = [u32; 3];

/// Polynomial in `y₁, y₂, y₃` kept in the normal form `deg_{y₃} <= 1`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SpherePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SpherePoly {
    pub fn zero() -> SpherePoly {
        SpherePoly::default()
    }

    pub fn constant(r: Rational) -> SpherePoly {
        let mut p = SpherePoly::zero();
        p.add_term([0, 0, 0], r);
        p
    }

    pub fn int(n: i64) -> SpherePoly {
        SpherePoly::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// `y_{i+1}` for `i` in `0..3`.
    pub fn var(i: usize) -> SpherePoly {
        let mut e = [0; 3];
        e[i] = 1;
        let mut p = SpherePoly::zero();
        p.add_term(e, Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0, 0, 0]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if e[2] >= 2 {
            // y₃² = 1 − y₁² − y₂²
            let rest = [e[0], e[1], e[2] - 2];
            self.add_term(rest, c.clone());
            self.add_term([e[0] + 2, e[1], e[2] - 2], -c.clone());
            self.add_term([e[0], e[1] + 2, e[2] - 2], -c);
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &SpherePoly) -> SpherePoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> SpherePoly {
        SpherePoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &SpherePoly) -> SpherePoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SpherePoly) -> SpherePoly {
        let mut out = SpherePoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> SpherePoly {
        let mut out = SpherePoly::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * r);
        }
        out
    }

    /// `∂/∂y_{i+1}` of the normal-form representative.
    pub fn partial(&self, i: usize) -> SpherePoly {
        let mut out = SpherePoly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * Rational::from_integer(BigInt::from(e[i])));
            }
        }
        out
    }
}

impl fmt::Debug for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for SpherePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, k) })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub const COFRAME: [&str; 5] = ["L1*", "L2*", "w1*", "w2*", "w3*"];

/// Differential form `Σ_I p_I θ_I`, `I` an ordered subset of the coframe
/// stored as a bitmask.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ExtForm {
    terms: BTreeMap<u8, SpherePoly>,
}

fn wedge_sign(a: u8, b: u8) -> i64 {
    // inversions between the increasing index lists of a and b
    let mut swaps = 0;
    for i in 0..5 {
        if a & (1 << i) != 0 {
            swaps += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl ExtForm {
    pub fn zero() -> ExtForm {
        ExtForm::default()
    }

    pub fn function(p: SpherePoly) -> ExtForm {
        ExtForm::zero().with(0, p)
    }

    /// The coframe element `θ_i`.
    pub fn basis(i: usize) -> ExtForm {
        ExtForm::zero().with(1 << i, SpherePoly::int(1))
    }

    fn with(mut self, mask: u8, p: SpherePoly) -> ExtForm {
        self.add_term(mask, &p);
        self
    }

    fn add_term(&mut self, mask: u8, p: &SpherePoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_default();
        *slot = slot.add(p);
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `θ_I` for the ascending index list `idx`.
    pub fn coeff(&self, idx: &[usize]) -> SpherePoly {
        let mask = idx.iter().fold(0u8, |m, &i| m | (1 << i));
        self.terms.get(&mask).cloned().unwrap_or_default()
    }

    /// Degree of a homogeneous form; `None` for zero or mixed degree.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.count_ones());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &ExtForm) -> ExtForm {
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(*m, p);
        }
        out
    }

    pub fn neg(&self) -> ExtForm {
        ExtForm {
            terms: self.terms.iter().map(|(m, p)| (*m, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &ExtForm) -> ExtForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, p: &SpherePoly) -> ExtForm {
        let mut out = ExtForm::zero();
        for (m, q) in &self.terms {
            out.add_term(*m, &q.mul(p));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> ExtForm {
        self.scale(&SpherePoly::int(n))
    }

    pub fn wedge(&self, other: &ExtForm) -> ExtForm {
        let mut out = ExtForm::zero();
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let s = wedge_sign(*a, *b);
                out.add_term(a | b, &p.mul(q).scale(&Rational::from_integer(BigInt::from(s))));
            }
        }
        out
    }

    /// `self = c·vol` for a constant `c`, if so.
    pub fn multiple_of(&self, vol: &ExtForm) -> Option<Rational> {
        let (mask, v) = vol.terms.iter().next()?;
        let p = self.terms.get(mask).cloned().unwrap_or_default();
        // try c = p / v at the leading monomial, then verify
        let (ve, vc) = v.terms.iter().next_back()?;
        let c = p.terms.get(ve).cloned().unwrap_or_default() / vc;
        (vol.scale(&SpherePoly::constant(c.clone())) == *self).then_some(c)
    }
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, p)| {
                let idx: Vec<&str> = (0..5).filter(|i| m & (1 << i) != 0).map(|i| COFRAME[i]).collect();
                if idx.is_empty() {
                    format!("({})", p)
                } else {
                    format!("({})*{}", p, idx.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn l1() -> ExtForm {
    ExtForm::basis(0)
}

fn l2() -> ExtForm {
    ExtForm::basis(1)
}

fn w(i: usize) -> ExtForm {
    ExtForm::basis(2 + i)
}

fn y(i: usize) -> SpherePoly {
    SpherePoly::var(i)
}

/// `L₃* = y₁w₁* + y₂w₂* + y₃w₃*`.
pub fn l3() -> ExtForm {
    (0..3).fold(ExtForm::zero(), |acc, i| acc.add(&w(i).scale(&y(i))))
}

/// `L₁* ∧ L₂* ∧ L₃*`.
pub fn vol3() -> ExtForm {
    l1().wedge(&l2()).wedge(&l3())
}

/// The skew 5×5 matrix `ω` of 1-forms with `dθ = −ω ∧ θ`.
pub fn connection_matrix() -> Vec<Vec<ExtForm>> {
    let z = ExtForm::zero;
    let l3 = l3();
    // 2w_a* − 2y_a L₃*
    let rot = |a: usize| w(a).scale_int(2).sub(&l3.scale(&y(a)).scale_int(2));
    vec![
        vec![z(), l3.neg(), l2().scale(&y(0)), l2().scale(&y(1)), l2().scale(&y(2))],
        vec![l3.clone(), z(), l1().scale(&y(0)).neg(), l1().scale(&y(1)).neg(), l1().scale(&y(2)).neg()],
        vec![l2().scale(&y(0)).neg(), l1().scale(&y(0)), z(), rot(2), rot(1).neg()],
        vec![l2().scale(&y(1)).neg(), l1().scale(&y(1)), rot(2).neg(), z(), rot(0)],
        vec![l2().scale(&y(2)).neg(), l1().scale(&y(2)), rot(1), rot(0).neg(), z()],
    ]
}

/// `dy_{i+1}`.
pub fn dy(i: usize) -> ExtForm {
    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
    // dy_i = 2(y_k w_j* − y_j w_k*) for (i, j, k) cyclic
    w(j).scale(&y(k)).sub(&w(k).scale(&y(j))).scale_int(2)
}

fn d_function(p: &SpherePoly) -> ExtForm {
    (0..3).fold(ExtForm::zero(), |acc, i| acc.add(&dy(i).scale(&p.partial(i))))
}

fn d_coframe(a: usize, omega: &[Vec<ExtForm>]) -> ExtForm {
    (0..5)
        .fold(ExtForm::zero(), |acc, b| acc.add(&omega[a][b].wedge(&ExtForm::basis(b))))
        .neg()
}

/// Exterior derivative.
pub fn ext_d(f: &ExtForm) -> ExtForm {
    let omega = connection_matrix();
    let mut out = ExtForm::zero();
    for (mask, p) in &f.terms {
        // d(p θ_{i1} ∧ … ∧ θ_{ir}) = dp ∧ θ_I + p Σ_j (−1)^{j} θ_{i1} ∧ … dθ_{ij} … ∧ θ_{ir}
        let idx: Vec<usize> = (0..5).filter(|i| mask & (1 << i) != 0).collect();
        let theta_i = ExtForm::zero().with(*mask, SpherePoly::int(1));
        out = out.add(&d_function(p).wedge(&theta_i));
        for (j, &a) in idx.iter().enumerate() {
            let mut piece = ExtForm::function(SpherePoly::int(if j % 2 == 0 { 1 } else { -1 }));
            for (jj, &b) in idx.iter().enumerate() {
                let factor = if jj == j { d_coframe(a, &omega) } else { ExtForm::basis(b) };
                piece = piece.wedge(&factor);
            }
            out = out.add(&piece.scale(p));
        }
    }
    out
}

/// Traces entering the Chern–Simons form, with their volume multiples.
#[derive(Clone, Debug)]
pub struct CsData {
    pub tr_omega_domega: ExtForm,
    pub tr_omega3: ExtForm,
    pub omega_domega: Rational,
    pub omega3: Rational,
}

pub fn cs3_data() -> Result<CsData> {
    let omega = connection_matrix();
    let domega: Vec<Vec<ExtForm>> = omega.iter().map(|row| row.iter().map(ext_d).collect()).collect();
    let mut t1 = ExtForm::zero();
    let mut t3 = ExtForm::zero();
    for a in 0..5 {
        for b in 0..5 {
            if omega[a][b].is_zero() {
                continue;
            }
            t1 = t1.add(&omega[a][b].wedge(&domega[b][a]));
            let ab = &omega[a][b];
            for c in 0..5 {
                if !omega[b][c].is_zero() && !omega[c][a].is_zero() {
                    t3 = t3.add(&ab.wedge(&omega[b][c]).wedge(&omega[c][a]));
                }
            }
        }
    }
    let vol = vol3();
    let c1 = t1
        .multiple_of(&vol)
        .ok_or_else(|| Error::Reduction(format!("tr(ω dω) = {} is not a volume multiple", t1)))?;
    let c3 = t3
        .multiple_of(&vol)
        .ok_or_else(|| Error::Reduction(format!("tr(ω³) = {} is not a volume multiple", t3)))?;
    Ok(CsData {
        tr_omega_domega: t1,
        tr_omega3: t3,
        omega_domega: c1,
        omega3: c3,
    })
}

/// `∫ L₁* ∧ L₂* ∧ L₃* ∧ c₁(λ)` in units of `π²`. This value is not derived
/// here; it is fixed so that the Chern–Simons contribution is `d/12`.
pub const I1_OVER_PI_SQUARED: i64 = 2;

/// `(−1/24)(−1/8π²) ∫ tr(ω dω + ⅔ω³) c₁(λ^d)`.
pub fn cs_integral(d: i64) -> Result<Rational> {
    let data = cs3_data()?;
    let two_thirds = Rational::new(2.into(), 3.into());
    let trace = &data.omega_domega + &two_thirds * &data.omega3;
    // (1/24)(1/8π²)·I₁ with I₁ = 2π²
    let prefactor = Rational::new(BigInt::from(I1_OVER_PI_SQUARED), BigInt::from(24 * 8));
    Ok(prefactor * trace * Rational::from_integer(BigInt::from(d)))
}

//! SU(2) and SU(3) representation bookkeeping.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::exactnum::Rational;
use crate::{Error, Result};

/// A (possibly virtual) SU(2) representation `Σ m_n V_n`, keyed by the
/// dimension `n` of the irreducible `V_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SU2Decomp {
    mults: BTreeMap<u32, i64>,
}

impl SU2Decomp {
    pub fn zero() -> SU2Decomp {
        SU2Decomp::default()
    }

    /// The irreducible `V_n` of dimension `n >= 1`.
    pub fn irrep(n: u32) -> SU2Decomp {
        assert!(n >= 1, "V_0 does not exist");
        SU2Decomp::zero().with(n, 1)
    }

    /// `n` copies of the trivial representation.
    pub fn trivial(n: i64) -> SU2Decomp {
        SU2Decomp::zero().with(1, n)
    }

    fn with(mut self, n: u32, m: i64) -> SU2Decomp {
        if m != 0 {
            let e = self.mults.entry(n).or_insert(0);
            *e += m;
            if *e == 0 {
                self.mults.remove(&n);
            }
        }
        self
    }

    pub fn multiplicity(&self, n: u32) -> i64 {
        self.mults.get(&n).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.mults.iter().map(|(n, m)| (*n, *m))
    }

    pub fn is_virtual(&self) -> bool {
        self.mults.values().any(|&m| m < 0)
    }

    pub fn dim(&self) -> i64 {
        self.mults.iter().map(|(n, m)| *n as i64 * m).sum()
    }

    pub fn add(&self, other: &SU2Decomp) -> SU2Decomp {
        other.iter().fold(self.clone(), |acc, (n, m)| acc.with(n, m))
    }

    pub fn sub(&self, other: &SU2Decomp) -> SU2Decomp {
        other.iter().fold(self.clone(), |acc, (n, m)| acc.with(n, -m))
    }

    /// Character at `diag(e^{it}, e^{−it})`: `Σ m_n sin(nt)/sin t`.
    pub fn character(&self, t: f64) -> f64 {
        self.iter()
            .map(|(n, m)| m as f64 * (n as f64 * t).sin() / t.sin())
            .sum()
    }

    /// `dim Hom_{SU(2)}(self, other)` for honest representations.
    pub fn hom_dim(&self, other: &SU2Decomp) -> i64 {
        self.iter().map(|(n, m)| m * other.multiplicity(n)).sum()
    }
}

impl fmt::Display for SU2Decomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mults.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, m) in self.iter() {
            let sign = if m < 0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            let a = m.abs();
            if a == 1 {
                write!(f, "{}V{}", sign, n)?;
            } else {
                write!(f, "{}{}V{}", sign, a, n)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Clebsch–Gordan: `V_m ⊗ V_n = ⊕_{j<min(m,n)} V_{m+n−1−2j}`, bilinearly.
pub fn su2_tensor(a: &SU2Decomp, b: &SU2Decomp) -> SU2Decomp {
    let mut out = SU2Decomp::zero();
    for (m, x) in a.iter() {
        for (n, y) in b.iter() {
            for j in 0..m.min(n) {
                out = out.with(m + n - 1 - 2 * j, x * y);
            }
        }
    }
    out
}

/// `ψ^d λ_H = V_{d+1} − V_{d−1}` for `d >= 2`.
pub fn psi_as_irreps(d: u32) -> Result<SU2Decomp> {
    if d < 2 {
        return Err(Error::InvalidArgument(
            "ψ^d as irreducibles needs d >= 2; use 2T_d(λ_H/2)".into(),
        ));
    }
    Ok(SU2Decomp::irrep(d + 1).sub(&SU2Decomp::irrep(d - 1)))
}

/// Dominant SU(3) weight `m·ω_1 + n·ω_2` with `ω_{1,2} = ½ ± i√3/6` in the
/// Eisenstein lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SU3Weight {
    pub m: u32,
    pub n: u32,
}

impl SU3Weight {
    pub fn new(m: u32, n: u32) -> SU3Weight {
        SU3Weight { m, n }
    }

    /// `(Re, Im/√3)` of the embedded point, both rational.
    pub fn eisenstein(&self) -> (Rational, Rational) {
        let (m, n) = (BigInt::from(self.m), BigInt::from(self.n));
        (
            Rational::new(&m + &n, BigInt::from(2)),
            Rational::new(&m - &n, BigInt::from(6)),
        )
    }

    /// `|z|²` of the embedded point, exact.
    pub fn norm2(&self) -> Rational {
        let (re, im) = self.eisenstein();
        &re * &re + Rational::from_integer(BigInt::from(3)) * &im * &im
    }

    pub fn conjugate(&self) -> SU3Weight {
        SU3Weight::new(self.n, self.m)
    }

    /// `γ + ρ_G`, where `ρ_G = ω_1 + ω_2 = 1`.
    pub fn plus_rho(&self) -> SU3Weight {
        SU3Weight::new(self.m + 1, self.n + 1)
    }
}

/// Weyl dimension formula `(m+1)(n+1)(m+n+2)/2`.
pub fn su3_dim(m: u32, n: u32) -> u64 {
    let (m, n) = (m as u64, n as u64);
    (m + 1) * (n + 1) * (m + n + 2) / 2
}

/// Gelfand–Tsetlin patterns `(a, b, c)` under the top row `(m+n, n, 0)`:
/// `m+n >= a >= n >= b >= 0` and `a >= c >= b`.
pub fn su3_gt_patterns(m: u32, n: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for a in n..=m + n {
        for b in 0..=n {
            for c in b..=a {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// Restriction to the upper-left SU(2), read off from the multiplicities of
/// the SU(2) weight `2c − a − b` over all patterns.
pub fn su3_restrict_su2(m: u32, n: u32) -> SU2Decomp {
    let mut weights: BTreeMap<i64, i64> = BTreeMap::new();
    for (a, b, c) in su3_gt_patterns(m, n) {
        *weights.entry(2 * c as i64 - a as i64 - b as i64).or_insert(0) += 1;
    }
    let w = |h: i64| weights.get(&h).copied().unwrap_or(0);
    let top = weights.keys().next_back().copied().unwrap_or(0);
    let mut out = SU2Decomp::zero();
    for h in 0..=top {
        let mult = w(h) - w(h + 2);
        if mult != 0 {
            out = out.with(h as u32 + 1, mult);
        }
    }
    out
}

/// Enumeration data behind [`su3_kernel_parity`].
#[derive(Clone, Debug)]
pub struct KernelParityReport {
    pub k: u32,
    /// `‖κ + ρ_H‖² = (k+1)²`.
    pub target: Rational,
    /// Dominant `γ` with `‖γ + ρ_G‖² = ‖κ + ρ_H‖²`.
    pub shell: Vec<SU3Weight>,
    /// `dim W^γ · dim Hom_{SU(2)}(W^γ, (2 ⊕ V_2) ⊗ V_{2k+2})` per self-conjugate `γ`.
    pub self_conjugate: Vec<(SU3Weight, u64)>,
    pub parity: u8,
}

pub fn su3_kernel_report(k: u32) -> Result<KernelParityReport> {
    let target = Rational::from_integer(BigInt::from((k as u64 + 1).pow(2)));
    let on_real_line = SU3Weight::new(k, k);
    if on_real_line.plus_rho().norm2() != target {
        return Err(Error::Calibration(format!(
            "γ = {} is not on the shell ‖γ+ρ‖² = {}",
            k, target
        )));
    }
    // ‖(x, y)‖² = (x² + xy + y²)/3 >= x²/3, so x <= √3·(k+1) < 2(k+1)
    let bound = 2 * (k + 1);
    let mut shell = Vec::new();
    for m in 0..bound {
        for n in 0..bound {
            let g = SU3Weight::new(m, n);
            if g.plus_rho().norm2() == target {
                shell.push(g);
            }
        }
    }
    let spinors = SU2Decomp::trivial(2).add(&SU2Decomp::irrep(2));
    let twisted = su2_tensor(&spinors, &SU2Decomp::irrep(2 * k + 2));
    let contribution = |g: &SU3Weight| {
        let hom = su3_restrict_su2(g.m, g.n).hom_dim(&twisted);
        su3_dim(g.m, g.n) * hom as u64
    };
    let mut self_conjugate = Vec::new();
    let mut parity = 0u64;
    for g in &shell {
        if g.m == g.n {
            let c = contribution(g);
            self_conjugate.push((*g, c));
            parity += c;
        } else if contribution(g) != contribution(&g.conjugate()) {
            return Err(Error::Calibration(format!(
                "conjugate weights ({}, {}) contribute differently",
                g.m, g.n
            )));
        }
    }
    if self_conjugate.iter().all(|(g, _)| g.m != k) {
        return Err(Error::Calibration(format!("no real-line weight at k = {}", k)));
    }
    Ok(KernelParityReport {
        k,
        target,
        shell,
        self_conjugate,
        parity: (parity % 2) as u8,
    })
}

/// `dim ker(ð^κ) mod 2` for `κ = V_{2k+2}` on `SU(3)/SU(2)`.
pub fn su3_kernel_parity(k: u32) -> Result<u8> {
    Ok(su3_kernel_report(k)?.parity)
}

/// Kernel parity for the virtual twist `ψ^d λ_H = V_{d+1} − V_{d−1}`, odd `d`.
pub fn su3_psi_twist_kernel_parity(d: u32) -> Result<u8> {
    if d % 2 == 0 {
        return Err(Error::InvalidArgument(format!("d = {} must be odd", d)));
    }
    if d == 1 {
        return su3_kernel_parity(0);
    }
    Ok((su3_kernel_parity((d - 1) / 2)? + su3_kernel_parity((d - 3) / 2)?) % 2)
}

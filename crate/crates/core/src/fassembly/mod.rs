//! Assembly of f-invariant representatives from ξ-tables and the end-to-end
//! example pipelines.
//!
//! With `n = d·e`, the complex formula is
//! `Σ_n Σ_{d|n} (ζ^{−e} ξ_d − ζ^{e} ξ_{−d}) q^n`, its reduction to positive
//! twists is `Σ_n Σ_{d|n} (ζ^{−e} + (−1)^{l+1} ζ^{e}) ξ_d q^n`, and the
//! quaternionic one is the level-free `Σ_n Σ_{d|n} ξ_d q^n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::divcong::{is_equivalent, EquivOutcome, IndeterminacyLattice};
use crate::exactnum::{divisors, divisor_sigma, CycField, CycNum, EpsPoly, Rational};
use crate::genus::g_tilde;
use crate::geometry;
use crate::qseries::QSeries;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XiKind {
    /// ξ(λ^d) for both signs of `d`.
    ComplexFull,
    /// ξ(λ^d) for `d > 0`.
    ComplexPositive,
    /// ξ of the virtual twist `d(ψ^d λ_H − 2)`, `d > 0`.
    Quaternionic,
    /// `dim ker(ð ⊗ ψ^d λ_H)` (or its parity) for odd `d > 0`.
    QuaternionicKernelParity,
}

impl XiKind {
    pub fn name(self) -> &'static str {
        match self {
            XiKind::ComplexFull => "complex_full",
            XiKind::ComplexPositive => "complex_positive",
            XiKind::Quaternionic => "quaternionic",
            XiKind::QuaternionicKernelParity => "quaternionic_kernel_parity",
        }
    }
}

/// Chosen representatives of the twisted spectral invariants.
#[derive(Clone, Debug)]
pub struct XiTable {
    pub kind: XiKind,
    /// `dim M = 2l − 1` (complex) or `2l − 3` (quaternionic).
    pub l: u32,
    field: Arc<CycField>,
    entries: BTreeMap<i64, EpsPoly>,
}

impl XiTable {
    pub fn new(kind: XiKind, l: u32, field: &Arc<CycField>) -> Result<XiTable> {
        if l == 0 {
            return Err(Error::InvalidArgument("l must be positive".into()));
        }
        Ok(XiTable {
            kind,
            l,
            field: Arc::clone(field),
            entries: BTreeMap::new(),
        })
    }

    /// Table with `entries[d] = f(d)` for every admissible `d` with `|d| <= dmax`.
    pub fn from_fn(
        kind: XiKind,
        l: u32,
        field: &Arc<CycField>,
        dmax: i64,
        mut f: impl FnMut(i64) -> Result<EpsPoly>,
    ) -> Result<XiTable> {
        let mut t = XiTable::new(kind, l, field)?;
        let lo = if kind == XiKind::ComplexFull { -dmax } else { 1 };
        for d in lo..=dmax {
            if t.admits(d) {
                t.insert(d, f(d)?)?;
            }
        }
        Ok(t)
    }

    fn admits(&self, d: i64) -> bool {
        match self.kind {
            XiKind::ComplexFull => d != 0,
            XiKind::ComplexPositive | XiKind::Quaternionic => d > 0,
            XiKind::QuaternionicKernelParity => d > 0 && d % 2 == 1,
        }
    }

    pub fn insert(&mut self, d: i64, value: EpsPoly) -> Result<()> {
        if !self.admits(d) {
            return Err(Error::InvalidArgument(format!(
                "d = {} is not admissible for a {} table",
                d,
                self.kind.name()
            )));
        }
        if value.level() != self.field.level() {
            return Err(Error::LevelMismatch(value.level(), self.field.level()));
        }
        self.entries.insert(d, value);
        Ok(())
    }

    pub fn get(&self, d: i64) -> Result<&EpsPoly> {
        self.entries.get(&d).ok_or(Error::MissingTwist(d))
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn entries(&self) -> impl Iterator<Item = (i64, &EpsPoly)> {
        self.entries.iter().map(|(d, v)| (*d, v))
    }

    /// Entrywise sum; both tables must agree in kind, `l` and level.
    pub fn add(&self, other: &XiTable) -> Result<XiTable> {
        if self.kind != other.kind || self.l != other.l {
            return Err(Error::WrongTableKind {
                expected: self.kind.name(),
                found: other.kind.name(),
            });
        }
        if self.level() != other.level() {
            return Err(Error::LevelMismatch(self.level(), other.level()));
        }
        let mut out = self.clone();
        for (d, v) in &other.entries {
            let sum = match out.entries.get(d) {
                Some(u) => u + v,
                None => v.clone(),
            };
            out.entries.insert(*d, sum);
        }
        Ok(out)
    }

    fn expect(&self, kind: XiKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongTableKind {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FRepresentative {
    pub series: QSeries,
    /// `k = l + 1`, the top weight of the indeterminacy.
    pub weight_bound: u32,
    pub level: u32,
    pub note: String,
}

impl FRepresentative {
    fn new(series: QSeries, weight_bound: u32, note: impl Into<String>) -> FRepresentative {
        FRepresentative {
            level: series.level(),
            series,
            weight_bound,
            note: note.into(),
        }
    }
}

/// `Σ_{n<prec} Σ_{d|n} w(d, n/d) q^n` with `w` returning an ε-polynomial.
fn double_sum(
    field: &Arc<CycField>,
    prec: usize,
    mut w: impl FnMut(i64, i64) -> Result<EpsPoly>,
) -> Result<QSeries> {
    let mut coeffs = vec![EpsPoly::zero(field); prec];
    for (n, slot) in coeffs.iter_mut().enumerate().skip(1) {
        for d in divisors(n as u64) {
            let d = d as i64;
            let term = w(d, n as i64 / d)?;
            *slot = &*slot + &term;
        }
    }
    Ok(QSeries::from_eps(field, coeffs))
}

fn zeta_eps(field: &Arc<CycField>, m: i64) -> EpsPoly {
    EpsPoly::constant(CycNum::zeta_pow(field, m))
}

pub fn assemble_complex(xi: &XiTable, prec: usize) -> Result<FRepresentative> {
    xi.expect(XiKind::ComplexFull)?;
    let f = xi.field();
    let s = double_sum(f, prec, |d, e| {
        let plus = &zeta_eps(f, -e) * xi.get(d)?;
        let minus = &zeta_eps(f, e) * xi.get(-d)?;
        Ok(&plus - &minus)
    })?;
    Ok(FRepresentative::new(s, xi.l + 1, "complex assembly over ±d"))
}

pub fn assemble_complex_reduced(xi: &XiTable, prec: usize) -> Result<FRepresentative> {
    xi.expect(XiKind::ComplexPositive)?;
    let f = xi.field();
    let sign: i64 = if xi.l % 2 == 1 { 1 } else { -1 };
    let s = double_sum(f, prec, |d, e| {
        let mut w = CycNum::zeta_pow(f, -e);
        let z = CycNum::zeta_pow(f, e);
        w = if sign == 1 { &w + &z } else { &w - &z };
        Ok(xi.get(d)?.scale(&w))
    })?;
    Ok(FRepresentative::new(s, xi.l + 1, "complex assembly over d > 0"))
}

pub fn assemble_quaternionic(xi: &XiTable, prec: usize) -> Result<FRepresentative> {
    xi.expect(XiKind::Quaternionic)?;
    let f = xi.field();
    let s = double_sum(f, prec, |d, _| Ok(xi.get(d)?.clone()))?;
    Ok(FRepresentative::new(s, xi.l + 1, "quaternionic assembly"))
}

pub fn assemble_quaternionic_reduced(parities: &XiTable, prec: usize) -> Result<FRepresentative> {
    parities.expect(XiKind::QuaternionicKernelParity)?;
    let f = parities.field();
    match parities.l % 4 {
        0 => {
            let half = Rational::new(1.into(), 2.into());
            let s = double_sum(f, prec, |d, _| {
                if d % 2 == 0 {
                    Ok(EpsPoly::zero(f))
                } else {
                    Ok(parities.get(d)?.scale_rational(&half))
                }
            })?;
            Ok(FRepresentative::new(s, parities.l + 1, "half odd-divisor kernel sum"))
        }
        2 => Ok(FRepresentative::new(
            QSeries::zero(f, prec),
            parities.l + 1,
            "zero branch, l = 2 mod 4",
        )),
        _ => Err(Error::InvalidArgument(format!(
            "quaternionic reduction needs even l, got {}",
            parities.l
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnownClass {
    Eta2,
    Nu2,
    EtaSigma,
}

impl FromStr for KnownClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<KnownClass> {
        match s {
            "eta2" => Ok(KnownClass::Eta2),
            "nu2" => Ok(KnownClass::Nu2),
            "etasigma" => Ok(KnownClass::EtaSigma),
            _ => Err(Error::InvalidArgument(format!("unknown class {:?}", s))),
        }
    }
}

/// Stored representatives: `½G̃_1` (modulo the full indeterminacy including
/// `ℝ·G̃_2`), `½(G̃_2)²` and `½Σσ_3(n)q^n`.
pub fn known_representative(class: KnownClass, field: &Arc<CycField>, prec: usize) -> Result<FRepresentative> {
    let half = Rational::new(1.into(), 2.into());
    let level = field.level();
    if class != KnownClass::Eta2 && level % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "this representative is only valid at odd level, got N = {}",
            level
        )));
    }
    Ok(match class {
        KnownClass::Eta2 => FRepresentative::new(
            g_tilde(field, 1, prec)?.scale_rational(&half),
            2,
            "½G̃_1 modulo D̲̲_2 + Z[[q]] + ℝG̃_2",
        ),
        KnownClass::Nu2 => {
            let g2 = g_tilde(field, 2, prec)?;
            FRepresentative::new(g2.mul(&g2).scale_rational(&half), 4, "½(G̃_2)²")
        }
        KnownClass::EtaSigma => {
            let mut c: Vec<Rational> = (0..prec)
                .map(|n| Rational::from_integer(divisor_sigma(3, n as u64)) * &half)
                .collect();
            if let Some(c0) = c.first_mut() {
                *c0 = Rational::from_integer(BigInt::from(0));
            }
            FRepresentative::new(QSeries::from_rationals(field, &c), 5, "½Σσ_3(n)q^n")
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    Trivial,
    Eta2Circle,
    Nu2Homogeneous,
    EtasigmaProduct,
    Su3Quotient,
}

impl Example {
    pub const ALL: [Example; 5] = [
        Example::Trivial,
        Example::Eta2Circle,
        Example::Nu2Homogeneous,
        Example::EtasigmaProduct,
        Example::Su3Quotient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Example::Trivial => "trivial",
            Example::Eta2Circle => "eta2_circle",
            Example::Nu2Homogeneous => "nu2_homogeneous",
            Example::EtasigmaProduct => "etasigma_product",
            Example::Su3Quotient => "su3_appendix",
        }
    }
}

impl FromStr for Example {
    type Err = Error;
    fn from_str(s: &str) -> Result<Example> {
        Example::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown example {:?}", s)))
    }
}

/// Inputs that are free parameters of an example.
#[derive(Clone, Debug)]
pub struct ExampleOptions {
    /// The complex e-invariant `e_C[M]` used by the trivial example.
    pub e_c: Rational,
}

impl Default for ExampleOptions {
    fn default() -> Self {
        ExampleOptions {
            e_c: Rational::new(1.into(), 2.into()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub example: Example,
    pub level: u32,
    pub prec: usize,
    pub assembled: FRepresentative,
    pub reference: FRepresentative,
    pub outcome: EquivOutcome,
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "example: {}", self.example.name())?;
        writeln!(f, "level: {}  prec: {}  weight bound: {}", self.level, self.prec, self.assembled.weight_bound)?;
        writeln!(f, "assembled ({}): {}", self.assembled.note, self.assembled.series)?;
        writeln!(f, "reference ({}): {}", self.reference.note, self.reference.series)?;
        writeln!(
            f,
            "verdict: {}  (sturm bound {}, policy met: {})",
            if self.outcome.equivalent { "equivalent" } else { "not equivalent" },
            self.outcome.sturm_bound,
            self.outcome.policy_met
        )?;
        if let Some(r) = &self.outcome.reason {
            writeln!(f, "reason: {}", r)?;
        }
        if let Some(c) = &self.outcome.certificate {
            writeln!(f, "certificate:\n{}", c)?;
        }
        Ok(())
    }
}

pub fn run_example(example: Example, level: u32, prec: usize, opts: &ExampleOptions) -> Result<ExampleReport> {
    let field = CycField::new(level)?;
    let dmax = prec as i64 - 1;
    let (assembled, reference) = match example {
        Example::Trivial => {
            let e = EpsPoly::from_rational(&field, &opts.e_c);
            let xi = XiTable::from_fn(XiKind::ComplexFull, 1, &field, dmax, |_| Ok(e.clone()))?;
            let a = assemble_complex(&xi, prec)?;
            let r = FRepresentative::new(
                g_tilde(&field, 1, prec)?.scale_rational(&-opts.e_c.clone()),
                2,
                "−e_C·G̃_1",
            );
            (a, r)
        }
        Example::Eta2Circle => {
            let xi = geometry::circle_xi_table(&field, dmax, true)?;
            (
                assemble_complex_reduced(&xi, prec)?,
                known_representative(KnownClass::Eta2, &field, prec)?,
            )
        }
        Example::Nu2Homogeneous => {
            let xi = geometry::nu2_xi_table(&field, dmax)?;
            (
                assemble_complex_reduced(&xi, prec)?,
                known_representative(KnownClass::Nu2, &field, prec)?,
            )
        }
        Example::EtasigmaProduct => {
            let xi = geometry::etasigma_parity_table(&field, dmax)?;
            (
                assemble_quaternionic_reduced(&xi, prec)?,
                known_representative(KnownClass::EtaSigma, &field, prec)?,
            )
        }
        Example::Su3Quotient => {
            let xi = geometry::su3_parity_table(&field, dmax)?;
            (
                assemble_quaternionic_reduced(&xi, prec)?,
                known_representative(KnownClass::EtaSigma, &field, prec)?,
            )
        }
    };
    let lattice = IndeterminacyLattice::standard(level, assembled.weight_bound, prec)?;
    let outcome = is_equivalent(&assembled.series, &reference.series, &lattice)?;
    Ok(ExampleReport {
        example,
        level,
        prec,
        assembled,
        reference,
        outcome,
    })
}

#[cfg(test)]
mod tests;

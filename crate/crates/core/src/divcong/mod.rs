//! Divided congruences for `Γ_1(N)` and the equivalence test modulo
//! `D̲̲_k + Z[ζ_N, 1/N][[q]] + ℝ·G̃_k`.
//!
//! Elements of `D_k` are integral by definition, so as a set of
//! q-expansions the lattice is
//! `Q(ζ)·M_0 + Q(ζ)·M_k + Z[ζ_N, 1/N][[q]] + ℝ·G̃_k`; intermediate weights
//! only ever appear with coefficient zero in a certificate.
//!
//! The test flattens `Q(ζ_N)` coordinates to `φ(N)` rational rows, projects
//! away the free span with an integral left kernel `K`, and decides whether
//! `K·v` lies in the `Z[1/N]`-column span of `K` using its Hermite normal
//! form.

pub mod hnf;
pub mod linalg;

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::exactnum::{is_smooth_over, CycField, CycNum, EpsPoly, Rational};
use crate::genus::{g_hat, g_tilde};
use crate::qseries::QSeries;
use crate::{Error, Result};

use hnf::{hnf, pivots};
use linalg::{left_kernel, rank, solve, RatMatrix};

/// Built-in generator weights: level `N` uses `Ĝ_w^{(N)}` for each listed `w`.
pub const GENERATOR_CONFIG: &[(u32, &[u32])] = &[(2, &[2, 4]), (3, &[1, 3]), (4, &[1, 2])];

/// `dim M_k(Γ_1(N))` for `k = 0, 1, …`, tabulated from the dimension formulas
/// for genus-zero `Γ_1(N)` (N = 2: `⌊k/4⌋ + 1` for even `k`, 0 for odd; N = 3:
/// `⌊k/3⌋ + 1`; N = 4: `⌊k/2⌋ + 1`).
pub const DIMENSION_TABLE: &[(u32, &[usize])] = &[
    (2, &[1, 0, 1, 0, 2, 0, 2, 0, 3, 0, 3, 0, 4]),
    (3, &[1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4, 5]),
    (4, &[1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7]),
];

pub fn expected_dimension(level: u32, weight: u32) -> Option<usize> {
    DIMENSION_TABLE
        .iter()
        .find(|(n, _)| *n == level)
        .and_then(|(_, dims)| dims.get(weight as usize).copied())
}

/// `μ = [SL_2(Z) : Γ_1(N)]` as used by the precision policy: `N²Π_{p|N}(1 − p⁻²)`
/// for `N > 2` and 3 for `N = 2`.
pub fn gamma1_index(level: u32) -> u64 {
    match level {
        0 | 1 => 1,
        2 => 3,
        n => {
            let n = n as u64;
            let mut num = n * n;
            for p in crate::exactnum::prime_factors(n) {
                num = num / (p * p) * (p * p - 1);
            }
            num
        }
    }
}

/// `⌈k·μ/12⌉`, the precision at which vanishing of a weight-`k` expansion
/// counts as proof.
pub fn sturm_bound(level: u32, k: u32) -> u64 {
    (k as u64 * gamma1_index(level)).div_ceil(12)
}

/// Minimum precision accepted by [`build_basis`] and [`is_equivalent`].
pub fn policy_precision(level: u32, k: u32) -> usize {
    sturm_bound(level, k) as usize + 5
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub weight: u32,
    pub series: QSeries,
    pub label: String,
}

pub fn default_generators(field: &Arc<CycField>, prec: usize) -> Result<Vec<Generator>> {
    let (_, weights) = GENERATOR_CONFIG
        .iter()
        .find(|(n, _)| *n == field.level())
        .ok_or(Error::UnsupportedLevel(field.level()))?;
    weights
        .iter()
        .map(|&w| {
            Ok(Generator {
                weight: w,
                series: g_hat(field, w, prec)?,
                label: format!("G{}", w),
            })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct BasisEntry {
    pub weight: u32,
    pub series: QSeries,
    pub label: String,
}

/// Q(ζ)-bases of the weight-`k` pieces, `0 <= k <= maxweight`.
#[derive(Clone, Debug)]
pub struct ModularBasis {
    pub level: u32,
    pub maxweight: u32,
    pub prec: usize,
    pub entries: Vec<BasisEntry>,
    /// Achieved dimension per weight.
    pub dims: Vec<usize>,
}

impl ModularBasis {
    pub fn field(&self) -> &Arc<CycField> {
        self.entries[0].series.field()
    }

    pub fn of_weight(&self, k: u32) -> impl Iterator<Item = &BasisEntry> {
        self.entries.iter().filter(move |e| e.weight == k)
    }

    pub fn dimension(&self, k: u32) -> usize {
        self.dims.get(k as usize).copied().unwrap_or(0)
    }

    /// The same basis with weights above `k` dropped.
    pub fn up_to(&self, k: u32) -> ModularBasis {
        let k = k.min(self.maxweight);
        ModularBasis {
            level: self.level,
            maxweight: k,
            prec: self.prec,
            entries: self.entries.iter().filter(|e| e.weight <= k).cloned().collect(),
            dims: self.dims[..=k as usize].to_vec(),
        }
    }
}

/// `φ(N)` rational rows per q-coefficient, for `ζ^j·s`, `j < φ(N)`.
fn flatten_span(s: &QSeries, prec: usize) -> Vec<Vec<Rational>> {
    let field = s.field();
    (0..field.degree())
        .map(|j| {
            let z = CycNum::zeta_pow(field, j as i64);
            (0..prec).flat_map(|n| (&s.coeff0(n) * &z).coords()).collect()
        })
        .collect()
}

fn flatten(s: &QSeries, prec: usize) -> Vec<Rational> {
    (0..prec).flat_map(|n| s.coeff0(n).coords()).collect()
}

fn unflatten(field: &Arc<CycField>, v: &[Rational]) -> Result<QSeries> {
    let coeffs = v
        .chunks(field.degree())
        .map(|c| CycNum::from_coords(field, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(QSeries::from_cyc(field, coeffs))
}

/// Rank over `Q(ζ_N)` of a family of ε-free series, read at precision `prec`.
pub fn cyc_rank(series: &[&QSeries], prec: usize) -> usize {
    let Some(first) = series.first() else {
        return 0;
    };
    let phi = first.field().degree();
    let rows: RatMatrix = series.iter().flat_map(|s| flatten_span(s, prec)).collect();
    rank(&rows) / phi
}

fn monomials(weights: &[u32], target: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], target: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let i = cur.len();
        if i == weights.len() {
            if target == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let max = if w == 0 { 0 } else { target / w };
        for e in (0..=max).rev() {
            cur.push(e);
            rec(weights, target - e * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, target, &mut Vec::new(), &mut out);
    out
}

fn monomial_label(gens: &[Generator], exps: &[u32]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| if e == 1 { g.label.clone() } else { format!("{}^{}", g.label, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Basis from the built-in generators of `level`.
pub fn build_basis(level: u32, maxweight: u32, prec: usize) -> Result<ModularBasis> {
    let field = CycField::new(level)?;
    let gens = default_generators(&field, prec)?;
    let expected: Option<Vec<usize>> = (0..=maxweight).map(|k| expected_dimension(level, k)).collect();
    build_basis_with(&field, &gens, maxweight, prec, expected.as_deref())
}

/// Basis spanned by all monomials in `gens`; when `expected` is given the
/// achieved dimension in every weight must reach it.
pub fn build_basis_with(
    field: &Arc<CycField>,
    gens: &[Generator],
    maxweight: u32,
    prec: usize,
    expected: Option<&[usize]>,
) -> Result<ModularBasis> {
    let level = field.level();
    let required = policy_precision(level, maxweight);
    if prec < required {
        return Err(Error::PrecisionBelowPolicy { got: prec, required });
    }
    for g in gens {
        if g.series.level() != level {
            return Err(Error::LevelMismatch(g.series.level(), level));
        }
        if !g.series.is_eps_free() {
            return Err(Error::EpsDependent);
        }
        if g.series.prec() < prec {
            return Err(Error::PrecisionBelowPolicy { got: g.series.prec(), required: prec });
        }
        if g.weight == 0 {
            return Err(Error::InvalidArgument(format!("generator {} has weight 0", g.label)));
        }
    }
    let mut gen_weights: Vec<u32> = gens.iter().map(|g| g.weight).collect();
    gen_weights.sort_unstable();
    gen_weights.dedup();
    for &w in &gen_weights {
        let same: Vec<&QSeries> = gens.iter().filter(|g| g.weight == w).map(|g| &g.series).collect();
        let r = cyc_rank(&same, prec);
        if r < same.len() {
            return Err(Error::DimensionDeficit { weight: w, expected: same.len(), achieved: r });
        }
    }

    let weights: Vec<u32> = gens.iter().map(|g| g.weight).collect();
    let mut entries = Vec::new();
    let mut dims = Vec::new();
    for k in 0..=maxweight {
        let mut chosen: Vec<QSeries> = Vec::new();
        let mut rows: RatMatrix = Vec::new();
        let phi = field.degree();
        for exps in monomials(&weights, k) {
            let mut s = QSeries::one(field, prec);
            for (g, &e) in gens.iter().zip(&exps) {
                if e > 0 {
                    s = s.mul(&g.series.truncate(prec).pow(e));
                }
            }
            let mut trial = rows.clone();
            trial.extend(flatten_span(&s, prec));
            if rank(&trial) == (chosen.len() + 1) * phi {
                rows = trial;
                chosen.push(s.clone());
                entries.push(BasisEntry {
                    weight: k,
                    series: s,
                    label: monomial_label(gens, &exps),
                });
            }
        }
        if let Some(exp) = expected.and_then(|e| e.get(k as usize)) {
            if chosen.len() < *exp {
                return Err(Error::DimensionDeficit { weight: k, expected: *exp, achieved: chosen.len() });
            }
        }
        dims.push(chosen.len());
    }
    Ok(ModularBasis {
        level,
        maxweight,
        prec,
        entries,
        dims,
    })
}

/// `Λ = D̲̲_k + Z[ζ_N, 1/N][[q]] (+ ℝ·G̃_k)` at level `N`.
#[derive(Clone, Debug)]
pub struct IndeterminacyLattice {
    pub level: u32,
    pub weight: u32,
    pub basis: ModularBasis,
    pub g_tilde: Option<QSeries>,
    pub prec: usize,
}

impl IndeterminacyLattice {
    pub fn new(basis: &ModularBasis, weight: u32, with_g_tilde: bool) -> Result<IndeterminacyLattice> {
        if weight == 0 && with_g_tilde {
            return Err(Error::InvalidArgument("there is no G̃_0; weight 0 needs with_g_tilde = false".into()));
        }
        if weight > basis.maxweight {
            return Err(Error::InvalidArgument(format!(
                "basis only reaches weight {}, lattice needs {}",
                basis.maxweight, weight
            )));
        }
        let g = if with_g_tilde {
            Some(g_tilde(basis.field(), weight, basis.prec)?)
        } else {
            None
        };
        Ok(IndeterminacyLattice {
            level: basis.level,
            weight,
            basis: basis.up_to(weight),
            g_tilde: g,
            prec: basis.prec,
        })
    }

    /// Built-in basis for `level` with the `ℝ·G̃_k` summand enabled.
    pub fn standard(level: u32, weight: u32, prec: usize) -> Result<IndeterminacyLattice> {
        let basis = build_basis(level, weight, prec)?;
        IndeterminacyLattice::new(&basis, weight, true)
    }

    pub fn field(&self) -> &Arc<CycField> {
        self.basis.field()
    }

    fn is_free(&self, weight: u32) -> bool {
        weight == 0 || weight == self.weight
    }
}

/// Witness `F − G = Σ c_i·b_i + (α + β·ε)·G̃_k + r` with `r` integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivCertificate {
    /// One coefficient per basis entry of the lattice, in basis order.
    pub coefficients: Vec<CycNum>,
    pub alpha: CycNum,
    pub beta: CycNum,
    pub residual: QSeries,
}

impl EquivCertificate {
    fn zero(lattice: &IndeterminacyLattice, prec: usize) -> EquivCertificate {
        let f = lattice.field();
        EquivCertificate {
            coefficients: vec![CycNum::zero(f); lattice.basis.entries.len()],
            alpha: CycNum::zero(f),
            beta: CycNum::zero(f),
            residual: QSeries::zero(f, prec),
        }
    }

    /// Reassembles the right-hand side of the witness identity.
    pub fn recombine(&self, lattice: &IndeterminacyLattice) -> QSeries {
        let f = lattice.field();
        let prec = self.residual.prec();
        let mut acc = self.residual.clone();
        for (c, e) in self.coefficients.iter().zip(&lattice.basis.entries) {
            if !c.is_zero() {
                acc = acc.add(&e.series.truncate(prec).scale(c));
            }
        }
        if let Some(g) = &lattice.g_tilde {
            let real = EpsPoly::new(f, vec![self.alpha.clone(), self.beta.clone()]);
            acc = acc.add(&g.truncate(prec).scale_eps(&real));
        }
        acc
    }

    /// Exact replay: the certificate reproduces `F − G` and its residual is
    /// integral.
    pub fn replays(&self, lattice: &IndeterminacyLattice, f: &QSeries, g: &QSeries) -> bool {
        let prec = self.residual.prec();
        let d = f.truncate(prec).sub(&g.truncate(prec));
        self.residual.is_integral_series().unwrap_or(false)
            && self.recombine(lattice) == d
            && self.alpha == self.alpha.conj()
            && self.beta == self.beta.conj()
    }
}

impl fmt::Display for EquivCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coefficients.iter().enumerate() {
            if !c.is_zero() {
                writeln!(f, "basis[{}]: {}", i, c)?;
            }
        }
        writeln!(f, "alpha: {}", self.alpha)?;
        writeln!(f, "beta: {}", self.beta)?;
        write!(f, "residual: {}", self.residual)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionPolicy {
    /// Refuse to decide below `sturm_bound + 5`.
    Strict,
    /// Decide anyway and flag the outcome.
    Permissive,
}

#[derive(Clone, Debug)]
pub struct EquivOutcome {
    pub equivalent: bool,
    pub certificate: Option<EquivCertificate>,
    /// Precision actually compared.
    pub prec: usize,
    pub sturm_bound: u64,
    pub policy_met: bool,
    /// Why the test failed, if it did.
    pub reason: Option<String>,
}

/// Decides `F ≡ G` modulo the lattice, refusing precisions below policy.
pub fn is_equivalent(f: &QSeries, g: &QSeries, lattice: &IndeterminacyLattice) -> Result<EquivOutcome> {
    is_equivalent_with(f, g, lattice, PrecisionPolicy::Strict)
}

pub fn is_equivalent_with(
    f: &QSeries,
    g: &QSeries,
    lattice: &IndeterminacyLattice,
    policy: PrecisionPolicy,
) -> Result<EquivOutcome> {
    for s in [f, g] {
        if s.level() != lattice.level {
            return Err(Error::LevelMismatch(s.level(), lattice.level));
        }
    }
    let prec = f.prec().min(g.prec()).min(lattice.prec);
    let required = policy_precision(lattice.level, lattice.weight);
    let policy_met = prec >= required;
    if !policy_met && policy == PrecisionPolicy::Strict {
        return Err(Error::PrecisionBelowPolicy { got: prec, required });
    }
    let d = f.truncate(prec).sub(&g.truncate(prec));
    let deg = d.eps_degree();
    if deg >= 2 {
        return Err(Error::EpsDegreeTooHigh(deg));
    }
    let outcome = |cert: std::result::Result<EquivCertificate, String>| {
        let (equivalent, certificate, reason) = match cert {
            Ok(c) => (true, Some(c), None),
            Err(r) => (false, None, Some(r)),
        };
        EquivOutcome {
            equivalent,
            certificate,
            prec,
            sturm_bound: sturm_bound(lattice.level, lattice.weight),
            policy_met,
            reason,
        }
    };
    let parts = d.eps_split();
    let field = lattice.field();
    let mut cert = EquivCertificate::zero(lattice, prec);

    if deg == 1 {
        match eps_multiple(&parts[1], lattice.g_tilde.as_ref().map(|g| g.truncate(prec))) {
            Some(beta) => cert.beta = beta,
            None => {
                return Ok(outcome(Err("ε-part is not a real multiple of G̃_k".into())));
            }
        }
    }

    let free: Vec<usize> = (0..lattice.basis.entries.len())
        .filter(|&i| lattice.is_free(lattice.basis.entries[i].weight))
        .collect();
    let mut columns: Vec<Vec<Rational>> = free
        .iter()
        .flat_map(|&i| flatten_span(&lattice.basis.entries[i].series, prec))
        .collect();
    if let Some(gt) = &lattice.g_tilde {
        columns.push(flatten(gt, prec));
    }
    let v = flatten(&parts[0], prec);
    let rows = v.len();
    let m: RatMatrix = (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();

    let w = match integral_part(&m, &v, lattice.level) {
        Some(w) => w,
        None => return Ok(outcome(Err("ε⁰-part is not integral modulo the free span".into()))),
    };
    let rest: Vec<Rational> = v.iter().zip(&w).map(|(a, b)| a - b).collect();
    let x = if columns.is_empty() {
        if rest.iter().any(|r| !r.is_zero()) {
            return Ok(outcome(Err("ε⁰-part is not integral".into())));
        }
        Vec::new()
    } else {
        solve(&m, &rest).ok_or_else(|| Error::Reduction("free span solve inconsistent".into()))?
    };
    let phi = field.degree();
    for (slot, &i) in free.iter().enumerate() {
        cert.coefficients[i] = CycNum::from_coords(field, &x[slot * phi..(slot + 1) * phi])?;
    }
    if lattice.g_tilde.is_some() {
        cert.alpha = CycNum::from_rational(field, &x[free.len() * phi]);
    }
    cert.residual = unflatten(field, &w)?;
    if !cert.replays(lattice, f, g) {
        return Err(Error::Reduction("certificate failed replay".into()));
    }
    Ok(outcome(Ok(cert)))
}

/// `β` real with `d = β·g` exactly, if one exists.
fn eps_multiple(d: &QSeries, g: Option<QSeries>) -> Option<CycNum> {
    let field = d.field();
    if d.is_zero() {
        return Some(CycNum::zero(field));
    }
    let g = g?;
    let n = (0..g.prec()).find(|&n| !g.coeff0(n).is_zero())?;
    let beta = d.coeff0(n).checked_div(&g.coeff0(n)).ok()?;
    if beta != beta.conj() {
        return None;
    }
    (g.scale(&beta) == *d).then_some(beta)
}

/// Some `w ∈ Z[1/N]^R` with `v − w` in the column span of `m`, if any.
fn integral_part(m: &RatMatrix, v: &[Rational], level: u32) -> Option<Vec<Rational>> {
    let rows = v.len();
    let k = if m.first().is_some_and(|r| !r.is_empty()) {
        left_kernel(m)
    } else {
        // no free directions: the kernel is everything
        hnf::identity(rows)
    };
    if k.is_empty() {
        return Some(vec![Rational::zero(); rows]);
    }
    // t = K·v
    let t: Vec<Rational> = k
        .iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, _)| !a.is_zero())
                .map(|(a, b)| Rational::from_integer(a.clone()) * b)
                .sum()
        })
        .collect();
    let (h, u) = hnf(&k);
    let piv = pivots(&h);
    let mut y: Vec<Rational> = Vec::with_capacity(piv.len());
    for (c, &p) in piv.iter().enumerate() {
        let mut acc = t[p].clone();
        for (i, yi) in y.iter().enumerate() {
            acc -= Rational::from_integer(h[p][i].clone()) * yi;
        }
        let yc = acc / Rational::from_integer(h[p][c].clone());
        if !is_smooth_over(yc.denom(), level) {
            return None;
        }
        y.push(yc);
    }
    for (i, ti) in t.iter().enumerate() {
        let s: Rational = y.iter().enumerate().map(|(c, yc)| Rational::from_integer(h[i][c].clone()) * yc).sum();
        if &s != ti {
            return None;
        }
    }
    let w = (0..rows)
        .map(|r| {
            y.iter()
                .enumerate()
                .filter(|(c, _)| !u[r][*c].is_zero())
                .map(|(c, yc)| Rational::from_integer(u[r][c].clone()) * yc)
                .sum()
        })
        .collect();
    Some(w)
}

/// Outcome of [`relative_integrality_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub integral: bool,
    pub first_failure: Option<usize>,
}

/// Coefficientwise membership in `Z[ζ_N, 1/N]`, reporting the first failure.
pub fn relative_integrality_check(f: &QSeries, level: u32) -> Result<IntegralityReport> {
    if f.level() != level {
        return Err(Error::LevelMismatch(f.level(), level));
    }
    let first_failure = f.first_non_integral()?;
    Ok(IntegralityReport {
        integral: first_failure.is_none(),
        first_failure,
    })
}

#[cfg(test)]
mod tests;

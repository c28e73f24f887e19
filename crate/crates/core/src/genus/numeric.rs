//! Floating point oracles for the level-`N` elliptic genus.
//!
//! `Φ(τ, x) = (e^{x/2} − e^{−x/2}) Π_{n>=1} (1 − q^n e^x)(1 − q^n e^{−x}) / (1 − q^n)²`
//! with `q = e^{2πiτ}`, and `Ell(x) = x·Φ(x − 2πi/N) / (Φ(x)·Φ(−2πi/N))`.
//! These are only ever compared against the exact q-expansions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::qseries::QSeries;
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `q = exp(2πiτ)`; requires `Im τ > 0`.
pub fn nome(tau: Complex64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::InvalidArgument("Im τ must be positive".into()));
    }
    Ok((2.0 * PI * I * tau).exp())
}

/// True iff `x` lies (to rounding) on `2πi(Z + τZ)`.
fn on_lattice(tau: Complex64, x: Complex64) -> bool {
    // x / 2πi = a + bτ with real a, b
    let w = x / (2.0 * PI * I);
    let b = w.im / tau.im;
    let a = w.re - b * tau.re;
    let tol = 1e-12;
    (a - a.round()).abs() < tol && (b - b.round()).abs() < tol
}

/// The theta-type product `Φ(τ, x)` with `terms` factors.
pub fn phi_numeric(tau: Complex64, x: Complex64, terms: usize) -> Result<Complex64> {
    if terms == 0 {
        return Err(Error::InvalidArgument("need at least one factor".into()));
    }
    let q = nome(tau)?;
    let ex = x.exp();
    let emx = (-x).exp();
    let mut acc = (x / 2.0).exp() - (-x / 2.0).exp();
    let mut qn = Complex64::new(1.0, 0.0);
    for _ in 0..terms {
        qn *= q;
        let one = Complex64::new(1.0, 0.0);
        acc *= (one - qn * ex) * (one - qn * emx) / ((one - qn) * (one - qn));
    }
    Ok(acc)
}

/// `Ell^{Γ_1(N)}(x)` from the product formula.
pub fn ell_numeric(level: u32, tau: Complex64, x: Complex64, terms: usize) -> Result<Complex64> {
    if level < 2 {
        return Err(Error::InvalidLevel(level));
    }
    if x.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if on_lattice(tau, x) {
        return Err(Error::Pole);
    }
    let a = 2.0 * PI * I / level as f64;
    let num = phi_numeric(tau, x - a, terms)?;
    let den = phi_numeric(tau, x, terms)? * phi_numeric(tau, -a, terms)?;
    Ok(x * num / den)
}

/// `ψ(x) = ½coth(x/2) + Σ ζ^n q^n e^{−x}/(1 − q^n e^{−x}) − Σ ζ^{−n} q^n e^x/(1 − q^n e^x)`,
/// absolutely convergent for `|q| < min(|e^x|, |e^{−x}|)`.
pub fn psi_numeric(level: u32, tau: Complex64, x: Complex64, terms: usize) -> Result<Complex64> {
    if level < 2 {
        return Err(Error::InvalidLevel(level));
    }
    let q = nome(tau)?;
    let ex = x.exp();
    let emx = (-x).exp();
    if q.norm() >= ex.norm().min(emx.norm()) {
        return Err(Error::Divergent);
    }
    if on_lattice(tau, x) {
        return Err(Error::Pole);
    }
    let zeta = Complex64::from_polar(1.0, 2.0 * PI / level as f64);
    let one = Complex64::new(1.0, 0.0);
    let mut acc = 0.5 * (ex + one) / (ex - one);
    let mut qn = one;
    let mut zn = one;
    for _ in 0..terms {
        qn *= q;
        zn *= zeta;
        acc += zn * qn * emx / (one - qn * emx) - zn.inv() * qn * ex / (one - qn * ex);
    }
    Ok(acc)
}

/// `c_1 = ½ + ζ/(1−ζ)` evaluated numerically.
pub fn c1_numeric(level: u32) -> Complex64 {
    let zeta = Complex64::from_polar(1.0, 2.0 * PI / level as f64);
    0.5 + zeta / (1.0 - zeta)
}

/// Taylor coefficients `a_0 … a_kmax` of an analytic `f` at 0 from the
/// trapezoidal rule on the circle `|x| = radius` with `points` nodes.
pub fn taylor_coefficients(
    f: impl Fn(Complex64) -> Result<Complex64>,
    radius: f64,
    points: usize,
    kmax: usize,
) -> Result<Vec<Complex64>> {
    let values = (0..points)
        .map(|j| {
            let x = Complex64::from_polar(radius, 2.0 * PI * j as f64 / points as f64);
            f(x).map(|v| (x, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=kmax)
        .map(|k| {
            let s: Complex64 = values
                .iter()
                .map(|(x, v)| v * x.powi(-(k as i32)))
                .sum();
            s / points as f64
        })
        .collect())
}

/// Evaluates an ε-free exact series at a numeric `q`.
pub fn eval_series(s: &QSeries, q: Complex64) -> Result<Complex64> {
    if !s.is_eps_free() {
        return Err(Error::EpsDependent);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 0..s.prec() {
        acc += s.coeff0(n).to_complex() * qn;
        qn *= q;
    }
    Ok(acc)
}

/// Numeric Hurwitz zeta `ζ_H(s, x)` for real `s ≠ 1`, `0 < x`, by
/// Euler–Maclaurin summation with `m` leading terms and `corrections`
/// Bernoulli corrections. This provides the analytic continuation in `s`.
pub fn hurwitz_zeta(s: f64, x: f64, m: usize, corrections: usize) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::InvalidArgument("x must be positive".into()));
    }
    if (s - 1.0).abs() < 1e-15 {
        return Err(Error::Pole);
    }
    let bern = crate::exactnum::bernoulli_table(2 * corrections);
    let mf = m as f64;
    let tail = mf + x;
    let mut acc: f64 = (0..m).map(|n| (n as f64 + x).powf(-s)).sum();
    acc += tail.powf(1.0 - s) / (s - 1.0);
    acc += 0.5 * tail.powf(-s);
    // Σ_j B_{2j}/(2j)! · s(s+1)…(s+2j−2) · tail^{−s−2j+1}
    let mut rising = s; // s(s+1)…(s+2j−2) for j = 1
    let mut fact = 2.0; // (2j)!
    for j in 1..=corrections {
        let b = num_traits::ToPrimitive::to_f64(&bern[2 * j]).unwrap_or(f64::NAN);
        acc += b / fact * rising * tail.powf(-s - 2.0 * j as f64 + 1.0);
        rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
        fact *= (2.0 * j as f64 + 1.0) * (2.0 * j as f64 + 2.0);
    }
    Ok(acc)
}

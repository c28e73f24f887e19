//! Batch front end for the `finvariant` library: configuration, file I/O and
//! reports. `main.rs` only parses arguments and maps outcomes to exit codes.

pub mod io;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use finvariant::divcong::{
    build_basis, is_equivalent_with, policy_precision, relative_integrality_check,
    IndeterminacyLattice, ModularBasis, PrecisionPolicy,
};
use finvariant::exactnum::{CycField, EpsPoly, Rational};
use finvariant::fassembly::{
    assemble_complex, assemble_complex_reduced, assemble_quaternionic, assemble_quaternionic_reduced,
    run_example, Example, ExampleOptions, FRepresentative, XiKind, XiTable,
};
use finvariant::genus::numeric::{ell_numeric, eval_series, nome, taylor_coefficients};
use finvariant::genus::{ell_expansion, g2, g_hat, g_tilde};
use finvariant::geometry::reps::su3_kernel_report;
use finvariant::geometry::{circle_xi_table, etasigma_parity_table, nu2_xi_table, su3_parity_table};
use finvariant::qseries::QSeries;
use finvariant::Error;
use num_complex::Complex64;

use io::SeriesRecord;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("data: {0}")]
    Data(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for bad invocations, 3 for bad or inconsistent data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                Error::InvalidLevel(_)
                | Error::InvalidArgument(_)
                | Error::UnsupportedLevel(_)
                | Error::PrecisionBelowPolicy { .. },
            ) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Machine,
}

/// Shared settings of one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub level: u32,
    pub prec: usize,
    pub x_order: u32,
    pub weight_bound: u32,
    pub basis_dir: PathBuf,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(level: u32, prec: usize) -> RunConfig {
        RunConfig {
            level,
            prec,
            x_order: 4,
            weight_bound: 0,
            basis_dir: PathBuf::from("./bases"),
            format: OutputFormat::Text,
        }
    }

    pub fn check_level(&self) -> Result<()> {
        if self.level < 2 {
            return Err(CliError::Usage(format!("level N = {} must be at least 2", self.level)));
        }
        Ok(())
    }

    /// Level check plus the precision policy for `weight_bound`.
    pub fn validate(&self) -> Result<()> {
        self.check_level()?;
        let required = policy_precision(self.level, self.weight_bound);
        if self.prec < required {
            return Err(CliError::Core(Error::PrecisionBelowPolicy {
                got: self.prec,
                required,
            }));
        }
        Ok(())
    }

    fn machine(&self) -> bool {
        self.format == OutputFormat::Machine
    }
}

/// Report text plus the verdict, if the command produces one.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub verdict: Option<bool>,
}

impl Outcome {
    fn info(text: String) -> Outcome {
        Outcome { text, verdict: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Some(false) => 1,
            _ => 0,
        }
    }
}

fn field(level: u32) -> Result<std::sync::Arc<CycField>> {
    CycField::new(level).map_err(CliError::from)
}

fn write_series_lines(out: &mut String, s: &QSeries, machine: bool) {
    for n in 0..s.prec() {
        let c = s.coeff(n);
        if machine {
            for j in 0..c.coeffs().len().max(1) {
                let coords: Vec<String> = c
                    .coeff(j)
                    .coords()
                    .iter()
                    .map(|r| format!("{}/{}", r.numer(), r.denom()))
                    .collect();
                writeln!(out, "coeff n={} eps={} {}", n, j, coords.join(" ")).unwrap();
            }
        } else {
            writeln!(out, "  q^{:<3} {}", n, c).unwrap();
        }
    }
}

/// `Ĝ_k` (or `G̃_k` with `tilde`) at level `N`.
pub fn cmd_eis(cfg: &RunConfig, k: u32, tilde: bool) -> Result<Outcome> {
    cfg.check_level()?;
    if k == 0 {
        return Err(CliError::Usage("weight k must be at least 1".into()));
    }
    let f = field(cfg.level)?;
    let s = if tilde { g_tilde(&f, k, cfg.prec)? } else { g_hat(&f, k, cfg.prec)? };
    let mut out = String::new();
    let name = if tilde { "G~" } else { "G^" };
    if cfg.machine() {
        writeln!(out, "series name={} level={} k={} prec={}", name, cfg.level, k, cfg.prec).unwrap();
    } else {
        writeln!(out, "{}_{} at level {} (z = ζ_{}), prec {}", name, k, cfg.level, cfg.level, cfg.prec).unwrap();
        if s.is_zero() {
            writeln!(out, "  zero series").unwrap();
        }
    }
    write_series_lines(&mut out, &s, cfg.machine());
    Ok(Outcome::info(out))
}

/// Coefficients of `x^k` in `Ell(x)` for `k <= x_order`.
pub fn cmd_ell(cfg: &RunConfig) -> Result<Outcome> {
    cfg.check_level()?;
    let f = field(cfg.level)?;
    let ell = ell_expansion(&f, cfg.x_order, cfg.prec)?;
    let mut out = String::new();
    for k in 0..=cfg.x_order {
        if cfg.machine() {
            writeln!(out, "xpow k={}", k).unwrap();
        } else {
            writeln!(out, "[x^{}]", k).unwrap();
        }
        write_series_lines(&mut out, &ell.x_coefficient(k), cfg.machine());
    }
    Ok(Outcome::info(out))
}

/// `g_2^{(N)}` and whether `g_2 − 1/12` is `N`-integral.
pub fn cmd_g2(cfg: &RunConfig) -> Result<Outcome> {
    cfg.check_level()?;
    let f = field(cfg.level)?;
    let s = g2(&f, cfg.prec)?;
    let twelfth = QSeries::constant(
        finvariant::exactnum::CycNum::from_rational(&f, &Rational::new(1.into(), 12.into())),
        cfg.prec,
    );
    let report = relative_integrality_check(&s.sub(&twelfth), cfg.level)?;
    let mut out = String::new();
    if cfg.machine() {
        writeln!(out, "series name=g2 level={} prec={}", cfg.level, cfg.prec).unwrap();
    } else {
        writeln!(out, "g_2 at level {}, prec {}", cfg.level, cfg.prec).unwrap();
    }
    write_series_lines(&mut out, &s, cfg.machine());
    match report.first_failure {
        None => writeln!(out, "g2 - 1/12 integral over Z[zeta_{}, 1/{}]: true", cfg.level, cfg.level).unwrap(),
        Some(n) => writeln!(out, "g2 - 1/12 integral: false (first failure at q^{})", n).unwrap(),
    }
    Ok(Outcome {
        text: out,
        verdict: Some(report.integral),
    })
}

/// Loads the cached basis for `(N, W, P)` or builds and caches it.
pub fn load_or_build_basis(cfg: &RunConfig, maxweight: u32, prec: usize) -> Result<ModularBasis> {
    let path = io::cache_path(&cfg.basis_dir, cfg.level, maxweight, prec);
    if path.exists() {
        let b = io::read_basis(&path)?;
        check_basis(&b, cfg.level, maxweight, prec, &path)?;
        return Ok(b);
    }
    let b = build_basis(cfg.level, maxweight, prec)?;
    io::write_basis(&path, &b)?;
    Ok(b)
}

pub fn check_basis(b: &ModularBasis, level: u32, maxweight: u32, prec: usize, path: &Path) -> Result<()> {
    if b.level != level {
        return Err(CliError::Data(format!(
            "{} is a level-{} basis, requested level {}",
            path.display(),
            b.level,
            level
        )));
    }
    if b.maxweight < maxweight || b.prec < prec {
        return Err(CliError::Data(format!(
            "{} reaches weight {} at prec {}, need weight {} at prec {}",
            path.display(),
            b.maxweight,
            b.prec,
            maxweight,
            prec
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct DivcongArgs {
    pub f: PathBuf,
    pub g: PathBuf,
    pub with_g_tilde: bool,
    pub permissive: bool,
    /// Explicit basis file instead of the cache directory.
    pub basis_file: Option<PathBuf>,
}

/// `F ≡ G` modulo the indeterminacy lattice of `cfg.weight_bound`.
pub fn cmd_divcong(cfg: &RunConfig, args: &DivcongArgs) -> Result<Outcome> {
    let f = io::read_series(&args.f)?;
    let g = io::read_series(&args.g)?;
    for rec in [&f, &g] {
        if rec.level != cfg.level {
            return Err(CliError::Data(format!(
                "series {:?} has level {}, requested level {}",
                rec.label, rec.level, cfg.level
            )));
        }
    }
    let prec = cfg.prec.min(f.series.prec()).min(g.series.prec());
    let mut cfg = cfg.clone();
    cfg.prec = prec;
    let policy_met = match cfg.validate() {
        Ok(()) => true,
        Err(CliError::Core(Error::PrecisionBelowPolicy { .. })) if args.permissive => false,
        Err(e) => return Err(e),
    };
    let w = cfg.weight_bound;
    let with_g = args.with_g_tilde && w > 0;
    let basis = match &args.basis_file {
        Some(p) => {
            let b = io::read_basis(p)?;
            check_basis(&b, cfg.level, w, prec, p)?;
            b
        }
        // the basis itself is always built at policy precision; F and G set the compared precision
        None => load_or_build_basis(&cfg, w, prec.max(policy_precision(cfg.level, w)))?,
    };
    let lattice = IndeterminacyLattice::new(&basis, w, with_g)?;
    let policy = if args.permissive { PrecisionPolicy::Permissive } else { PrecisionPolicy::Strict };
    let outcome = is_equivalent_with(&f.series, &g.series, &lattice, policy)?;
    let replays = outcome
        .certificate
        .as_ref()
        .map(|c| c.replays(&lattice, &f.series, &g.series));

    let mut out = String::new();
    if cfg.machine() {
        writeln!(out, "modulus level={} weight={} gtilde={}", cfg.level, w, with_g).unwrap();
        writeln!(out, "prec={} sturm={} policy_met={}", prec, outcome.sturm_bound, policy_met).unwrap();
        writeln!(out, "verdict={}", outcome.equivalent).unwrap();
        if let Some(r) = replays {
            writeln!(out, "replays={}", r).unwrap();
        }
    } else {
        writeln!(out, "F: {} ({})", f.label, args.f.display()).unwrap();
        writeln!(out, "G: {} ({})", g.label, args.g.display()).unwrap();
        writeln!(
            out,
            "modulus: level {}, weight bound {}, R*G~_{} {}",
            cfg.level,
            w,
            w,
            if with_g { "enabled" } else { "disabled" }
        )
        .unwrap();
        writeln!(out, "precision: {} (sturm bound {}, policy met: {})", prec, outcome.sturm_bound, policy_met).unwrap();
        if !policy_met {
            writeln!(out, "warning: below the precision policy; a false verdict is not a proof").unwrap();
        }
        writeln!(out, "verdict: {}", outcome.equivalent).unwrap();
        if let Some(r) = &outcome.reason {
            writeln!(out, "reason: {}", r).unwrap();
        }
        if let Some(c) = &outcome.certificate {
            writeln!(out, "certificate (replays: {}):\n{}", replays.unwrap_or(false), c).unwrap();
        }
    }
    Ok(Outcome {
        text: out,
        verdict: Some(outcome.equivalent),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssemblyKind {
    Complex,
    ComplexReduced,
    Quaternionic,
    QuaternionicReduced,
}

impl AssemblyKind {
    fn table_kind(self) -> XiKind {
        match self {
            AssemblyKind::Complex => XiKind::ComplexFull,
            AssemblyKind::ComplexReduced => XiKind::ComplexPositive,
            AssemblyKind::Quaternionic => XiKind::Quaternionic,
            AssemblyKind::QuaternionicReduced => XiKind::QuaternionicKernelParity,
        }
    }
}

#[derive(Clone, Debug)]
pub enum XiSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub struct AssembleArgs {
    pub kind: AssemblyKind,
    pub l: u32,
    pub source: XiSource,
    pub out: Option<PathBuf>,
}

fn builtin_table(name: &str, f: &std::sync::Arc<CycField>, dmax: i64) -> Result<XiTable> {
    Ok(match name {
        "circle" => circle_xi_table(f, dmax, true)?,
        "nu2" => nu2_xi_table(f, dmax)?,
        "etasigma" => etasigma_parity_table(f, dmax)?,
        "su3" => su3_parity_table(f, dmax)?,
        other => return Err(CliError::Usage(format!("unknown built-in table {:?}", other))),
    })
}

/// Builds `F` from a ξ-table.
pub fn cmd_assemble(cfg: &RunConfig, args: &AssembleArgs) -> Result<Outcome> {
    cfg.check_level()?;
    let f = field(cfg.level)?;
    let dmax = cfg.prec as i64 - 1;
    let table = match &args.source {
        XiSource::Builtin(name) => {
            let t = builtin_table(name, &f, dmax)?;
            if t.kind != args.kind.table_kind() {
                return Err(CliError::Usage(format!(
                    "table {} is a {} table, --kind needs {}",
                    name,
                    t.kind.name(),
                    args.kind.table_kind().name()
                )));
            }
            t
        }
        XiSource::File(p) => {
            let mut t = XiTable::new(args.kind.table_kind(), args.l, &f)?;
            for (d, a, b) in io::parse_xi_lines(p, &io::read(p)?)? {
                t.insert(d, EpsPoly::linear(&f, &a, &b))?;
            }
            t
        }
    };
    let rep: FRepresentative = match args.kind {
        AssemblyKind::Complex => assemble_complex(&table, cfg.prec)?,
        AssemblyKind::ComplexReduced => assemble_complex_reduced(&table, cfg.prec)?,
        AssemblyKind::Quaternionic => assemble_quaternionic(&table, cfg.prec)?,
        AssemblyKind::QuaternionicReduced => assemble_quaternionic_reduced(&table, cfg.prec)?,
    };
    let rec = SeriesRecord {
        level: cfg.level,
        weight: Some(rep.weight_bound),
        label: format!("assembled {} l={}", table.kind.name(), table.l),
        series: rep.series.clone(),
    };
    let mut out = String::new();
    if cfg.machine() {
        writeln!(out, "assembled kind={} l={} weight_bound={}", table.kind.name(), table.l, rep.weight_bound).unwrap();
    } else {
        writeln!(out, "{} (weight bound {})", rep.note, rep.weight_bound).unwrap();
    }
    write_series_lines(&mut out, &rep.series, cfg.machine());
    if let Some(p) = &args.out {
        io::write(p, &io::format_series(&rec))?;
        if !cfg.machine() {
            writeln!(out, "written to {}", p.display()).unwrap();
        }
    }
    Ok(Outcome::info(out))
}

/// Short CLI names in addition to the full example names.
pub fn parse_example(name: &str) -> Result<Example> {
    let alias = match name {
        "eta2" => Example::Eta2Circle,
        "nu2" => Example::Nu2Homogeneous,
        "etasigma" => Example::EtasigmaProduct,
        "su3" => Example::Su3Quotient,
        other => other.parse().map_err(|_| CliError::Usage(format!("unknown example {:?}", name)))?,
    };
    Ok(alias)
}

pub fn example_weight_bound(ex: Example) -> u32 {
    match ex {
        Example::Trivial | Example::Eta2Circle => 2,
        Example::Nu2Homogeneous => 4,
        Example::EtasigmaProduct | Example::Su3Quotient => 5,
    }
}

/// Full pipeline for one of the built-in examples.
pub fn cmd_example(cfg: &RunConfig, ex: Example, opts: &ExampleOptions) -> Result<Outcome> {
    let mut cfg = cfg.clone();
    cfg.weight_bound = example_weight_bound(ex);
    cfg.validate()?;
    let report = run_example(ex, cfg.level, cfg.prec, opts)?;
    let mut out = String::new();
    if cfg.machine() {
        writeln!(out, "example name={} level={} prec={}", ex.name(), cfg.level, cfg.prec).unwrap();
        writeln!(out, "modulus level={} weight={} gtilde=true", cfg.level, report.assembled.weight_bound).unwrap();
        writeln!(out, "assembled {}", report.assembled.series).unwrap();
        writeln!(out, "reference {}", report.reference.series).unwrap();
        writeln!(out, "verdict={}", report.outcome.equivalent).unwrap();
    } else {
        write!(out, "{}", report).unwrap();
    }
    if ex == Example::Su3Quotient {
        if !cfg.machine() {
            writeln!(out, "kernel parities on SU(3)/SU(2):").unwrap();
        }
        for k in 0..=10 {
            let r = su3_kernel_report(k)?;
            if cfg.machine() {
                writeln!(out, "parity k={} value={} shell={}", k, r.parity, r.shell.len()).unwrap();
            } else {
                writeln!(out, "  k = {:>2}: dim ker mod 2 = {}  ({} shell weights)", k, r.parity, r.shell.len()).unwrap();
            }
        }
    }
    Ok(Outcome {
        text: out,
        verdict: Some(report.outcome.equivalent),
    })
}

/// Sample points for the numeric comparison.
pub const ORACLE_TAUS: [(f64, f64); 2] = [(0.0, 0.31), (0.05, 0.4)];
pub const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct OracleRow {
    pub tau: Complex64,
    pub k: u32,
    pub error: f64,
}

/// Contour Taylor coefficients of `Ell` against the exact q-sums.
pub fn oracle_rows(level: u32, kmax: u32) -> Result<Vec<OracleRow>> {
    let f = field(level)?;
    let ell = ell_expansion(&f, kmax, 150)?;
    let mut rows = Vec::new();
    for (re, im) in ORACLE_TAUS {
        let tau = Complex64::new(re, im);
        let q = nome(tau)?;
        let coeffs = taylor_coefficients(|x| ell_numeric(level, tau, x, 200), 1.0, 64, kmax as usize)?;
        for k in 0..=kmax {
            let exact = eval_series(&ell.x_coefficient(k), q)?;
            rows.push(OracleRow {
                tau,
                k,
                error: (coeffs[k as usize] - exact).norm(),
            });
        }
    }
    Ok(rows)
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<Outcome> {
    cfg.check_level()?;
    let rows = oracle_rows(cfg.level, cfg.x_order)?;
    let mut out = String::new();
    let mut ok = true;
    for r in &rows {
        let pass = r.error < ORACLE_TOLERANCE;
        ok &= pass;
        if cfg.machine() {
            writeln!(out, "oracle tau={}+{}i k={} err={:e} pass={}", r.tau.re, r.tau.im, r.k, r.error, pass).unwrap();
        } else {
            writeln!(out, "tau = {}+{}i  k = {}  |numeric - exact| = {:.3e}  {}", r.tau.re, r.tau.im, r.k, r.error, if pass { "ok" } else { "FAIL" }).unwrap();
        }
    }
    writeln!(out, "tolerance {:e}: {}", ORACLE_TOLERANCE, if ok { "pass" } else { "fail" }).unwrap();
    Ok(Outcome {
        text: out,
        verdict: Some(ok),
    })
}

/// Default precision for a weight bound: the policy, but never below 20.
pub fn default_prec(level: u32, weight_bound: u32) -> usize {
    policy_precision(level, weight_bound).max(20)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use finvariant::divcong::policy_precision;
use finvariant::exactnum::Rational;
use finvariant::fassembly::ExampleOptions;
use finvariant_cli::{
    cmd_assemble, cmd_divcong, cmd_eis, cmd_ell, cmd_example, cmd_g2, cmd_oracle, default_prec,
    example_weight_bound, parse_example, AssembleArgs, AssemblyKind, CliError, DivcongArgs, Outcome,
    OutputFormat, RunConfig, XiSource,
};

#[derive(Parser)]
#[command(name = "finv", version, about = "Exact f-invariant workbench")]
struct Cli {
    /// Key=value output, byte-stable across runs.
    #[arg(long, global = true)]
    machine: bool,
    /// Basis cache directory.
    #[arg(long, global = true, default_value = "./bases")]
    basis: PathBuf,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Complex,
    ComplexReduced,
    Quaternionic,
    QuaternionicReduced,
}

#[derive(Subcommand)]
enum Cmd {
    /// q-expansion of the level-N Eisenstein-type series Ĝ_k.
    Eis {
        #[arg(short = 'N')]
        level: u32,
        #[arg(short)]
        k: u32,
        #[arg(short, default_value_t = 10)]
        p: usize,
        /// Drop the constant term (G̃_k).
        #[arg(long)]
        tilde: bool,
    },
    /// Taylor coefficients in x of the level-N elliptic genus.
    Ell {
        #[arg(short = 'N')]
        level: u32,
        #[arg(short = 'x', default_value_t = 4)]
        x_order: u32,
        #[arg(short, default_value_t = 10)]
        p: usize,
    },
    /// g₂ at level N and its congruence to 1/12.
    G2 {
        #[arg(short = 'N')]
        level: u32,
        #[arg(short, default_value_t = 20)]
        p: usize,
    },
    /// Decide F ≡ G modulo the indeterminacy lattice.
    Divcong {
        f: PathBuf,
        g: PathBuf,
        #[arg(short = 'N')]
        level: u32,
        #[arg(short)]
        w: u32,
        /// Defaults to the precision of the input files.
        #[arg(short)]
        p: Option<usize>,
        /// Omit the R·G̃_w summand.
        #[arg(long)]
        no_gtilde: bool,
        /// Decide below the precision policy (false verdicts become inconclusive).
        #[arg(long)]
        permissive: bool,
        /// Use this basis file instead of the cache.
        #[arg(long)]
        basis_file: Option<PathBuf>,
    },
    /// Assemble F from a ξ-table.
    Assemble {
        #[arg(short = 'N')]
        level: u32,
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Dimension parameter l (ignored for built-in tables).
        #[arg(short, default_value_t = 1)]
        l: u32,
        /// Built-in table: circle, nu2, etasigma, su3.
        #[arg(long, conflicts_with = "xi")]
        table: Option<String>,
        /// File with lines `d a [b]`, ξ_d = a + bε.
        #[arg(long)]
        xi: Option<PathBuf>,
        #[arg(short, default_value_t = 20)]
        p: usize,
        /// Write the assembled series in series-file format.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one of the built-in examples end to end.
    Example {
        /// trivial, eta2, nu2, etasigma, su3
        name: String,
        #[arg(short = 'N', default_value_t = 3)]
        level: u32,
        #[arg(short)]
        p: Option<usize>,
        /// The complex e-invariant of the trivial example.
        #[arg(long, default_value = "1/2")]
        e_c: String,
    },
    /// Numeric Taylor coefficients of Ell against the exact q-sums.
    Oracle {
        #[arg(short = 'N')]
        level: u32,
        #[arg(short, default_value_t = 6)]
        k: u32,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let format = if cli.machine { OutputFormat::Machine } else { OutputFormat::Text };
    let cfg = |level: u32, prec: usize| RunConfig {
        basis_dir: cli.basis.clone(),
        format,
        ..RunConfig::new(level, prec)
    };
    match cli.cmd {
        Cmd::Eis { level, k, p, tilde } => cmd_eis(&cfg(level, p), k, tilde),
        Cmd::Ell { level, x_order, p } => cmd_ell(&RunConfig {
            x_order,
            ..cfg(level, p)
        }),
        Cmd::G2 { level, p } => cmd_g2(&cfg(level, p)),
        Cmd::Divcong {
            f,
            g,
            level,
            w,
            p,
            no_gtilde,
            permissive,
            basis_file,
        } => {
            let c = RunConfig {
                weight_bound: w,
                ..cfg(level, p.unwrap_or(usize::MAX))
            };
            c.check_level()?;
            cmd_divcong(
                &c,
                &DivcongArgs {
                    f,
                    g,
                    with_g_tilde: !no_gtilde,
                    permissive,
                    basis_file,
                },
            )
        }
        Cmd::Assemble {
            level,
            kind,
            l,
            table,
            xi,
            p,
            out,
        } => {
            let source = match (table, xi) {
                (Some(t), None) => XiSource::Builtin(t),
                (None, Some(x)) => XiSource::File(x),
                _ => return Err(CliError::Usage("give exactly one of --table or --xi".into())),
            };
            let kind = match kind {
                KindArg::Complex => AssemblyKind::Complex,
                KindArg::ComplexReduced => AssemblyKind::ComplexReduced,
                KindArg::Quaternionic => AssemblyKind::Quaternionic,
                KindArg::QuaternionicReduced => AssemblyKind::QuaternionicReduced,
            };
            cmd_assemble(&cfg(level, p), &AssembleArgs { kind, l, source, out })
        }
        Cmd::Example { name, level, p, e_c } => {
            let ex = parse_example(&name)?;
            let e_c: Rational = e_c
                .parse()
                .map_err(|_| CliError::Usage(format!("--e-c {:?} is not a rational", e_c)))?;
            let wb = example_weight_bound(ex);
            let prec = p.unwrap_or_else(|| default_prec(level.max(2), wb));
            if level >= 2 && prec < policy_precision(level, wb) {
                eprintln!("note: precision {} is below the policy for weight {}", prec, wb);
            }
            cmd_example(&cfg(level, prec), ex, &ExampleOptions { e_c })
        }
        Cmd::Oracle { level, k } => cmd_oracle(&RunConfig {
            x_order: k,
            ..cfg(level, 0)
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("finv: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

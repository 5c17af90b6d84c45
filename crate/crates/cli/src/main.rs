//! Command line driver: every construction and verification of the library
//! as a reproducible command with deterministic text or JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 a verification failed (or no lift
//! exists), 2 usage or input errors.

mod datum;
mod reports;
mod tabfile;
mod theta;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use loopext::autlift::{
    build_lifted, gl2z_zeta_enumerate, scalar_centre_action, solve_lift, LiftOutcome,
};
use loopext::exec::ExecMode;
use loopext::extension::{cocycle_verify, Cocycle};
use loopext::lie::{build_split_simple, SeriesRank, StructureTable};
use loopext::sampling::DEFAULT_SEED;
use loopext::scalars::parse_scalar;
use loopext::window::Window;

#[derive(Parser)]
#[command(name = "loopext", version, about = "Exact checks for centrally extended loop algebras and their twisted forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone, serde::Serialize)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    #[serde(skip)]
    out: Option<PathBuf>,
    /// Seed recorded in the report (randomized property checks)
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive antisymmetry / Jacobi / Killing checks for one algebra
    VerifyAlgebra {
        #[arg(long = "type")]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a 2-cocycle on a window (alternating + cyclic identity)
    Cocycle {
        /// kassel | ef | residue | tabulated
        #[arg(long)]
        kind: String,
        #[arg(long = "type")]
        algebra: Option<String>,
        /// Number of Laurent variables (kassel only; ef is 2, residue is 1)
        #[arg(long)]
        n: Option<usize>,
        /// Exact scalar such as `i`, `z3`, `1/2` (ef only)
        #[arg(long)]
        zeta: Option<String>,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Tabulated cocycle file (kind = tabulated)
        #[arg(long)]
        file: Option<PathBuf>,
        /// Write the tabulation of the chosen cocycle to this file and exit
        #[arg(long)]
        export_tabulated: Option<PathBuf>,
        /// Corrupt one in-window entry of the exported tabulation
        #[arg(long, default_value_t = false)]
        corrupt: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the integer matrices stabilizing the line through (1, zeta)
    Gl2z {
        #[arg(long)]
        zeta: String,
        #[arg(long, default_value_t = 1)]
        bound: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the descended central extension of a twisted multiloop algebra
    Descend {
        #[arg(long = "type")]
        algebra: Option<String>,
        /// diagram-swap | triality | identity
        #[arg(long)]
        aut: Option<String>,
        /// Galois order of the (single) twist variable
        #[arg(long)]
        order: Option<u32>,
        /// Untwisted datum in n variables
        #[arg(long, default_value_t = false)]
        trivial: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        window: i64,
        /// Datum description file (TOML) instead of flags
        #[arg(long)]
        datum: Option<PathBuf>,
        /// Include the graded bases in the report
        #[arg(long, default_value_t = false)]
        dump_bases: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Solve the lift equation for an automorphism and a cocycle
    Lift {
        /// id | weyl:e,f | weyl:K | torus:c1[,c2..] | mtorus:m1[,m2..]
        /// | base:scale:c1[,c2..] | base:mat:p1,p2,q1,q2 ; compose with ';'
        #[arg(long)]
        theta: String,
        /// kassel | residue | ef
        #[arg(long)]
        cocycle: String,
        #[arg(long = "type")]
        algebra: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        zeta: Option<String>,
        #[arg(long, default_value_t = 2)]
        window: i64,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn load_table(name: &str) -> anyhow::Result<StructureTable> {
    let sr = SeriesRank::parse(name).map_err(|e| anyhow::anyhow!("{e}"))?;
    build_split_simple(sr.series, sr.rank).map_err(|e| anyhow::anyhow!("{e}"))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::VerifyAlgebra { algebra, common } => {
            let table = load_table(&algebra)?;
            let report = table.verify(ExecMode::default());
            let ok = report.passed();
            let envelope = reports::Envelope::new(
                "verify-algebra",
                reports::VerifyAlgebraConfig { algebra, seed: common.seed, format: common.format },
                report,
            );
            reports::emit(&common, &envelope, reports::render_verify_algebra(&envelope))?;
            Ok(exit_check(ok))
        }
        Command::Cocycle {
            kind,
            algebra,
            n,
            zeta,
            window,
            file,
            export_tabulated,
            corrupt,
            common,
        } => {
            let (table, cocycle) = match kind.as_str() {
                "kassel" => {
                    let table = load_table(algebra.as_deref().unwrap_or("A1"))?;
                    let nvars = n.unwrap_or(1);
                    (table, Cocycle::kassel(nvars))
                }
                "residue" => {
                    let table = load_table(algebra.as_deref().unwrap_or("A1"))?;
                    (table, Cocycle::Residue)
                }
                "ef" => {
                    let table = load_table(algebra.as_deref().unwrap_or("A2"))?;
                    let zeta = parse_scalar(
                        zeta.as_deref()
                            .ok_or_else(|| anyhow::anyhow!("--zeta is required for kind ef"))?,
                    )
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                    (table, Cocycle::ef(zeta))
                }
                "tabulated" => {
                    let path = file
                        .ok_or_else(|| anyhow::anyhow!("--file is required for kind tabulated"))?;
                    tabfile::read(&path)?
                }
                other => anyhow::bail!("unknown cocycle kind {other:?}"),
            };
            let win = Window::new(cocycle.nvars(), window);
            if let Some(path) = export_tabulated {
                let mut tab = Cocycle::tabulate(&table, &cocycle, win.enlarged(2))
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                if corrupt {
                    anyhow::ensure!(tab.corrupt_entry(&win), "nothing to corrupt");
                }
                tabfile::write(&path, &table, &tab)?;
                println!("wrote tabulated cocycle to {}", path.display());
                return Ok(ExitCode::SUCCESS);
            }
            let report = cocycle_verify(&table, &cocycle, &win, ExecMode::default())
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let ok = report.passed();
            let envelope = reports::Envelope::new(
                "cocycle",
                reports::CocycleConfig {
                    kind,
                    algebra: table.name().to_string(),
                    nvars: win.nvars,
                    window: win.radius,
                    seed: common.seed,
                    format: common.format,
                },
                report,
            );
            reports::emit(&common, &envelope, reports::render_cocycle(&envelope))?;
            Ok(exit_check(ok))
        }
        Command::Gl2z { zeta, bound, common } => {
            anyhow::ensure!(bound >= 1, "--bound must be at least 1");
            let z = parse_scalar(&zeta).map_err(|e| anyhow::anyhow!("{e}"))?;
            let entries = gl2z_zeta_enumerate(&z, bound);
            let report = reports::Gl2zReport {
                zeta: z.to_string(),
                bound,
                count: entries.len(),
                entries,
            };
            let envelope = reports::Envelope::new(
                "gl2z",
                reports::Gl2zConfig { zeta, bound, seed: common.seed, format: common.format },
                report,
            );
            reports::emit(&common, &envelope, reports::render_gl2z(&envelope))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Descend {
            algebra,
            aut,
            order,
            trivial,
            n,
            window,
            datum: datum_path,
            dump_bases,
            common,
        } => {
            let datum = if let Some(path) = datum_path {
                datum::read(&path)?
            } else {
                datum::from_flags(algebra.as_deref(), aut.as_deref(), order, trivial, n)?
            };
            let win = Window::new(datum.spec().nvars, window);
            let report = datum.verify_central_extension(&win).map_err(|e| anyhow::anyhow!("{e}"))?;
            let stability = datum.stability_check(&win).map_err(|e| anyhow::anyhow!("{e}"))?;
            let ok = report.passed() && stability.stable && stability.decomposition_holds;
            let bases = if dump_bases {
                Some(datum::dump_bases(&datum, &win)?)
            } else {
                None
            };
            let envelope = reports::Envelope::new(
                "descend",
                reports::DescendConfig {
                    algebra: datum.table().name().to_string(),
                    orders: datum.spec().orders.clone(),
                    window,
                    seed: common.seed,
                    format: common.format,
                },
                reports::DescendBody { extension: report, stability, bases },
            );
            reports::emit(&common, &envelope, reports::render_descend(&envelope))?;
            Ok(exit_check(ok))
        }
        Command::Lift { theta, cocycle, algebra, n, zeta, window, common } => {
            let table = load_table(&algebra)?;
            let cocycle = match cocycle.as_str() {
                "kassel" => Cocycle::kassel(n.unwrap_or(1)),
                "residue" => Cocycle::Residue,
                "ef" => {
                    let z = parse_scalar(
                        zeta.as_deref()
                            .ok_or_else(|| anyhow::anyhow!("--zeta is required for ef"))?,
                    )
                    .map_err(|e| anyhow::anyhow!("{e}"))?;
                    Cocycle::ef(z)
                }
                other => anyhow::bail!("unknown cocycle {other:?}"),
            };
            let nvars = cocycle.nvars();
            let theta = theta::parse(&table, &theta, nvars)?;
            let win = Window::new(nvars, window);
            let outcome = solve_lift(&table, &theta, &cocycle, &win)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let (ok, body) = match &outcome {
                LiftOutcome::Lifted(cert) => {
                    let lifted = build_lifted(&theta, &cocycle, cert)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    let centre = scalar_centre_action(&lifted, &win)
                        .map_err(|e| anyhow::anyhow!("{e}"))?;
                    (true, reports::LiftBody::from_certificate(cert, &centre))
                }
                LiftOutcome::NoLift { witness_x, witness_y, detail } => (
                    false,
                    reports::LiftBody::no_lift(witness_x, witness_y, detail),
                ),
            };
            let envelope = reports::Envelope::new(
                "lift",
                reports::LiftConfig {
                    theta: theta.describe(),
                    cocycle: cocycle.describe(),
                    algebra,
                    nvars,
                    window,
                    seed: common.seed,
                    format: common.format,
                },
                body,
            );
            reports::emit(&common, &envelope, reports::render_lift(&envelope))?;
            Ok(exit_check(ok))
        }
    }
}

fn exit_check(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

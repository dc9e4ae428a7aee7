//! Command-line front end: growth tables, sublattice listings, Moebius
//! values, orbit statistics, the figure series, brute-force verification,
//! the algebraic examples, and the full check battery.
//!
//! Exit codes: 0 ok, 1 usage or domain error, 2 cap exceeded,
//! 3 consistency failure (including failed checks), 4 I/O failure.
//! Output for a fixed configuration is byte-for-byte deterministic.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use orbitzeta::algebraic::{ledrappier_fix, solenoid_fix, solenoid_lattice, SolenoidFamily};
use orbitzeta::checks::run_all;
use orbitzeta::growth::{
    free_abelian_sieve, heisenberg_sieve, GroupDescriptor, GroupKind, GrowthSequence,
};
use orbitzeta::lattice::{enumerate_sublattices, Sublattice};
use orbitzeta::moebius::{moebius_closed, MoebiusEvaluator};
use orbitzeta::oracle::orbit_count_oracle;
use orbitzeta::render::decimal_string;
use orbitzeta::shiftorbits::{figure_series, orbit_count, OrbitTable, ShiftSystem};
use orbitzeta::BigRational;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "orbitzeta", version, about = "Exact orbit statistics of full shifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup-growth table: columns n, a_n, s_n.
    Growth {
        /// Group spelling: z:<d> or heisenberg.
        #[arg(long)]
        group: String,
        #[arg(long = "max-n")]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All sublattices of Z^d with a given index, in canonical order.
    Sublattices {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moebius value of the interval [lower, upper], closed form vs oracle.
    Mobius {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// The larger subgroup, e.g. "1 0; 0 1".
        #[arg(long)]
        upper: String,
        /// The smaller subgroup, e.g. "2 0; 0 2".
        #[arg(long)]
        lower: String,
        /// Accept non-canonical generator matrices and canonicalize them.
        #[arg(long)]
        canonicalize: bool,
    },
    /// Exact orbit table: n, a_n, orbits_n, pi, mertens_num, mertens_den,
    /// phi, psi.
    Orbits {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        b: u32,
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(6..))]
        precision: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The normalized orbit-count series for the two-symbol planar shift:
    /// N, phi, psi plus exact fractions.
    Figure1 {
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(6..))]
        precision: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cumulative Mertens main term: n, a_n, main_num, main_den, main.
    Mertens {
        /// Group spelling: z:<d> or heisenberg.
        #[arg(long)]
        group: String,
        #[arg(long)]
        max: usize,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(6..))]
        precision: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare inversion-based orbit counts against brute-force enumeration
    /// for every lattice of index up to the horizon.
    OracleVerify {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        b: u32,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed points of the three-term-relation system on one torus.
    Ledrappier {
        /// Period lattice, e.g. "3 0; 0 3".
        #[arg(long)]
        lattice: String,
        /// Accept non-canonical generator matrices and canonicalize them.
        #[arg(long)]
        canonicalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form fixed-point counts for the solenoid lattice families.
    Solenoid {
        /// horizontal or vertical.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole verification battery; one PASS/FAIL line per criterion.
    CheckAll,
}

enum AppError {
    Lib(orbitzeta::Error),
    Io(std::io::Error),
}

impl From<orbitzeta::Error> for AppError {
    fn from(err: orbitzeta::Error) -> AppError {
        AppError::Lib(err)
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> AppError {
        AppError::Io(err)
    }
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Lib(orbitzeta::Error::CapExceeded(_)) => 2,
            AppError::Lib(orbitzeta::Error::Inconsistency(_)) => 3,
            AppError::Lib(_) => 1,
            AppError::Io(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            AppError::Lib(err) => err.to_string(),
            AppError::Io(err) => format!("I/O failure: {err}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Err(err) = configure_threads() {
        eprintln!("error: {}", err.message());
        return ExitCode::from(err.exit_code());
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// ORBITZETA_THREADS caps the global worker pool; unset means the rayon
/// default.
fn configure_threads() -> Result<(), AppError> {
    let Ok(raw) = std::env::var("ORBITZETA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        AppError::Lib(orbitzeta::Error::Parse(format!(
            "ORBITZETA_THREADS must be a positive integer, got {raw:?}"
        )))
    })?;
    if threads == 0 {
        return Err(AppError::Lib(orbitzeta::Error::Parse(
            "ORBITZETA_THREADS must be positive".into(),
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| AppError::Lib(orbitzeta::Error::Domain(e.to_string())))
}

fn run(command: Command) -> Result<u8, AppError> {
    match command {
        Command::Growth {
            group,
            max_n,
            format,
            out,
        } => {
            let seq = sieve_for(&group, max_n)?;
            let text = match format {
                OutputFormat::Csv => growth_csv(&seq, max_n),
                OutputFormat::Json => growth_json(&seq, max_n),
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Sublattices { d, n, format, out } => {
            let lattices = enumerate_sublattices(d, n)?;
            let text = match format {
                OutputFormat::Csv => {
                    let mut s = String::from("lattice,index\n");
                    for l in &lattices {
                        s.push_str(&format!("\"{l}\",{n}\n"));
                    }
                    s
                }
                OutputFormat::Json => {
                    let rows: Vec<serde_json::Value> = lattices
                        .iter()
                        .map(|l| {
                            serde_json::json!({
                                "lattice": l.to_string(),
                                "index": n,
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::Value::Array(rows))
                }
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Mobius {
            d,
            upper,
            lower,
            canonicalize,
        } => {
            let upper = parse_lattice(&upper, d, canonicalize)?;
            let lower = parse_lattice(&lower, d, canonicalize)?;
            let closed = moebius_closed(&upper, &lower)?;
            let recursive = MoebiusEvaluator::new(256).eval(&upper, &lower)?;
            let agrees = closed == recursive;
            println!("{closed}, oracle-agrees={agrees}");
            Ok(if agrees { 0 } else { 3 })
        }
        Command::Orbits {
            d,
            b,
            max,
            precision,
            format,
            out,
        } => {
            let sys = ShiftSystem::free_abelian(d, b)?;
            let table = OrbitTable::compute(&sys, max)?;
            let text = match format {
                OutputFormat::Csv => orbits_csv(&table, precision as usize),
                OutputFormat::Json => orbits_json(&table, precision as usize),
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Figure1 {
            max,
            precision,
            format,
            out,
        } => {
            let sys = ShiftSystem::free_abelian(2, 2)?;
            let rows = figure_series(&sys, max)?;
            let precision = precision as usize;
            let text = match format {
                OutputFormat::Csv => {
                    let mut s = String::from("N,phi,psi,phi_exact,psi_exact\n");
                    for row in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            row.n,
                            decimal_string(&row.phi, precision),
                            decimal_string(&row.psi, precision),
                            fraction_string(&row.phi),
                            fraction_string(&row.psi),
                        ));
                    }
                    s
                }
                OutputFormat::Json => {
                    let rows: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|row| {
                            serde_json::json!({
                                "N": row.n,
                                "phi": decimal_string(&row.phi, precision),
                                "psi": decimal_string(&row.psi, precision),
                                "phi_exact": fraction_string(&row.phi),
                                "psi_exact": fraction_string(&row.psi),
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::Value::Array(rows))
                }
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::Mertens {
            group,
            max,
            precision,
            format,
            out,
        } => {
            let seq = sieve_for(&group, max)?;
            let precision = precision as usize;
            if max > orbitzeta::growth::MERTENS_EXACT_CAP {
                return Err(orbitzeta::Error::CapExceeded(format!(
                    "exact main term capped at horizon {}",
                    orbitzeta::growth::MERTENS_EXACT_CAP
                ))
                .into());
            }
            let mut main = BigRational::new(0.into(), 1.into());
            let mut lines = Vec::with_capacity(max);
            for n in 1..=max {
                main += BigRational::new(seq.a(n).clone(), n.into());
                lines.push((n, seq.a(n).clone(), main.clone()));
            }
            let text = match format {
                OutputFormat::Csv => {
                    let mut s = String::from("n,a_n,main_num,main_den,main\n");
                    for (n, a, m) in &lines {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            n,
                            a,
                            m.numer(),
                            m.denom(),
                            decimal_string(m, precision),
                        ));
                    }
                    s
                }
                OutputFormat::Json => {
                    let rows: Vec<serde_json::Value> = lines
                        .iter()
                        .map(|(n, a, m)| {
                            serde_json::json!({
                                "n": n,
                                "a_n": a.to_string(),
                                "main_exact": fraction_string(m),
                                "main": decimal_string(m, precision),
                            })
                        })
                        .collect();
                    format!("{}\n", serde_json::Value::Array(rows))
                }
            };
            emit(&out, &text)?;
            Ok(0)
        }
        Command::OracleVerify { d, b, max, out } => {
            let sys = ShiftSystem::free_abelian(d, b)?;
            let mut text = String::from("lattice,index,inversion,oracle,agree\n");
            let mut all_agree = true;
            for n in 1..=max {
                for l in enumerate_sublattices(d, n as u64)? {
                    let fast = orbit_count(&sys, &l)?;
                    let brute = orbit_count_oracle(b, &l)?;
                    let agree = fast == brute.into();
                    all_agree &= agree;
                    text.push_str(&format!("\"{l}\",{n},{fast},{brute},{agree}\n"));
                }
            }
            emit(&out, &text)?;
            Ok(if all_agree { 0 } else { 3 })
        }
        Command::Ledrappier {
            lattice,
            canonicalize,
            out,
        } => {
            let l = parse_lattice(&lattice, 2, canonicalize)?;
            let report = ledrappier_fix(&l)?;
            let value = serde_json::json!({
                "lattice": report.lattice.to_string(),
                "index": report.index,
                "kernel_dim": report.kernel_dim,
                "fix_count": report.fix_count.to_string(),
            });
            emit(&out, &format!("{value}\n"))?;
            Ok(0)
        }
        Command::Solenoid { family, n, out } => {
            let family = SolenoidFamily::parse(&family)?;
            let lattice = solenoid_lattice(family, n)?;
            let fix = solenoid_fix(family, n)?;
            let value = serde_json::json!({
                "family": family.to_string(),
                "n": n,
                "lattice": lattice.to_string(),
                "index": n,
                "fix_count": fix.to_string(),
            });
            emit(&out, &format!("{value}\n"))?;
            Ok(0)
        }
        Command::CheckAll => {
            let outcomes = run_all();
            let mut stdout = std::io::stdout().lock();
            let mut all_passed = true;
            for outcome in &outcomes {
                writeln!(stdout, "{}", outcome.report_line())?;
                all_passed &= outcome.passed;
            }
            Ok(if all_passed { 0 } else { 3 })
        }
    }
}

fn sieve_for(group: &str, horizon: usize) -> Result<GrowthSequence, AppError> {
    let descriptor = GroupDescriptor::parse(group)?;
    Ok(match descriptor.kind() {
        GroupKind::FreeAbelian(d) => free_abelian_sieve(d, horizon)?,
        GroupKind::Heisenberg => heisenberg_sieve(horizon)?,
    })
}

fn parse_lattice(text: &str, d: usize, canonicalize: bool) -> Result<Sublattice, AppError> {
    let l = Sublattice::parse(text, canonicalize)?;
    if l.dim() != d {
        return Err(orbitzeta::Error::DimensionMismatch {
            expected: d,
            got: l.dim(),
        }
        .into());
    }
    Ok(l)
}

fn growth_csv(seq: &GrowthSequence, horizon: usize) -> String {
    let mut s = String::from("n,a_n,s_n\n");
    for n in 1..=horizon {
        s.push_str(&format!("{},{},{}\n", n, seq.a(n), seq.partial_sum(n)));
    }
    s
}

fn growth_json(seq: &GrowthSequence, horizon: usize) -> String {
    let rows: Vec<serde_json::Value> = (1..=horizon)
        .map(|n| {
            serde_json::json!({
                "n": n,
                "a_n": seq.a(n).to_string(),
                "s_n": seq.partial_sum(n).to_string(),
            })
        })
        .collect();
    format!("{}\n", serde_json::Value::Array(rows))
}

fn orbits_csv(table: &OrbitTable, precision: usize) -> String {
    let mut s = String::from("n,a_n,orbits_n,pi,mertens_num,mertens_den,phi,psi\n");
    for row in table.rows() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            row.n,
            row.subgroup_count,
            row.orbit_total,
            row.pi,
            row.mertens.numer(),
            row.mertens.denom(),
            decimal_string(&row.phi, precision),
            decimal_string(&row.psi, precision),
        ));
    }
    s
}

fn orbits_json(table: &OrbitTable, precision: usize) -> String {
    let rows: Vec<serde_json::Value> = table
        .rows()
        .iter()
        .map(|row| {
            serde_json::json!({
                "n": row.n,
                "a_n": row.subgroup_count,
                "orbits_n": row.orbit_total.to_string(),
                "pi": row.pi.to_string(),
                "mertens_exact": fraction_string(&row.mertens),
                "phi": decimal_string(&row.phi, precision),
                "psi": decimal_string(&row.psi, precision),
            })
        })
        .collect();
    format!("{}\n", serde_json::Value::Array(rows))
}

fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), AppError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().lock().write_all(content.as_bytes())?,
    }
    Ok(())
}

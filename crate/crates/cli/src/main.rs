//! `grho`: G-rho two-sample tests, swap chains, interval bounds and
//! randomized self-checks from the command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use grho_core::bounds::{self, BoundsResult};
use grho_core::chain::{generate_chain, verify_monotone, Chain, DEFAULT_TOLERANCE};
use grho_core::grho::{components, GrhoConfig, GrhoReport, WeightConvention};
use grho_core::survival::{self, km_estimate, Dataset, Group};
use grho_core::verify::{self, VerifyConfig, VerifyReport};
use grho_core::{Error, Execution};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "grho",
    version,
    about = "G-rho two-sample survival tests and swap-chain diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Weight convention: left-limit S(t-) or right-continuous S(t).
    #[arg(long, global = true, env = "GRHO_CONVENTION", default_value = "left-limit")]
    convention: WeightConvention,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Run sequentially instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// G-rho test on a `time,status,group` CSV.
    Test {
        input: PathBuf,
        /// Comma-separated list of rho values.
        #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
        rho: Vec<f64>,
    },
    /// Pooled Kaplan-Meier step list.
    Km { input: PathBuf },
    /// Adjacent-swap chain from all-G0-first to all-G1-first.
    Chain {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
        rho: Vec<f64>,
        /// Slack for the monotonicity check.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Sharp Z bounds for a `lower,upper,status,group` CSV.
    Bounds {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
        rho: Vec<f64>,
    },
    /// Seeded randomized suites: monotonicity, oracle agreement, bounds sharpness.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,0.5,1,2",
            allow_negative_numbers = true
        )]
        rho: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

enum Failure {
    Core(Error),
    Io(io::Error),
    /// Verification ran but some check failed.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or_default();
            eprintln!("error[Usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(2),
        Err(Failure::Core(e)) => {
            let _ = out.flush();
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(if e.is_internal() { 2 } else { 1 })
        }
        Err(Failure::Io(e)) => {
            let _ = out.flush();
            eprintln!("error[Io]: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match &cli.command {
        Command::Test { input, rho } => {
            let ds = survival::read_csv(open(input)?)?;
            let reports = configs(rho, cli.convention)?
                .iter()
                .map(|cfg| GrhoReport::new(&components(&ds, cfg)?))
                .collect::<Result<Vec<_>, _>>()?;
            write_test(out, cli.format, &reports)
        }
        Command::Km { input } => {
            let ds = survival::read_csv(open(input)?)?;
            let curve = km_estimate(&ds)?;
            match cli.format {
                Format::Json => writeln!(out, "{}", serde_json::to_string(curve.steps())?)?,
                Format::Csv | Format::Table => {
                    let sep = if cli.format == Format::Csv { "," } else { "  " };
                    writeln!(out, "time{sep}survival")?;
                    for s in curve.steps() {
                        if cli.format == Format::Csv {
                            writeln!(out, "{},{}", s.time, s.survival)?;
                        } else {
                            writeln!(out, "{}  {:.4}", s.time, s.survival)?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Chain { input, rho, tolerance } => {
            if tolerance.is_nan() || *tolerance <= 0.0 {
                return Err(Error::Input("tolerance must be positive".into()).into());
            }
            let ds = survival::read_csv(open(input)?)?;
            if !ds.is_strict() {
                return Err(Error::TiesPresent.into());
            }
            let (g0, g1) = (ds.group_sorted(Group::G0), ds.group_sorted(Group::G1));
            let s0: Vec<_> = g0.iter().map(|o| o.status).collect();
            let s1: Vec<_> = g1.iter().map(|o| o.status).collect();
            for cfg in configs(rho, cli.convention)? {
                let chain = generate_chain(&s0, &s1, &cfg)?;
                write_chain(out, cli.format, &ds, &chain)?;
                verify_monotone(&chain.steps, *tolerance)?;
            }
            Ok(())
        }
        Command::Bounds { input, rho } => {
            let (g0, g1) = bounds::read_csv(open(input)?)?;
            let results = configs(rho, cli.convention)?
                .iter()
                .map(|cfg| bounds::bounds_with(&g0, &g1, cfg, exec))
                .collect::<Result<Vec<_>, _>>()?;
            write_bounds(out, cli.format, &results)
        }
        Command::Verify {
            seed,
            max_n,
            cases,
            rho,
            tolerance,
        } => {
            configs(rho, cli.convention)?;
            let cfg = VerifyConfig {
                seed: *seed,
                max_n: *max_n,
                cases: *cases,
                rhos: rho.clone(),
                convention: cli.convention,
                tolerance: *tolerance,
            };
            let report = verify::run(&cfg, exec)?;
            write_verify(out, cli.format, &report)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())).into())
}

fn configs(rhos: &[f64], convention: WeightConvention) -> Result<Vec<GrhoConfig>, Error> {
    if rhos.is_empty() {
        return Err(Error::Input("at least one rho is required".into()));
    }
    rhos.iter()
        .map(|&rho| GrhoConfig::new(rho).map(|c| c.with_convention(convention)))
        .collect()
}

fn write_test(out: &mut Out, format: Format, reports: &[GrhoReport]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "rho,convention,O,E,V,Z,p")?;
            for r in reports {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.rho, r.convention, r.o, r.e, r.v, r.z, r.p
                )?;
            }
        }
        Format::Table => {
            writeln!(
                out,
                "{:>6}  {:>9}  {:>9}  {:>9}  {:>8}  {:>8}",
                "rho", "O", "E", "V", "Z", "p"
            )?;
            for r in reports {
                writeln!(
                    out,
                    "{:>6}  {:>9.4}  {:>9.4}  {:>9.4}  {:>8.4}  {:>8.4}",
                    r.rho, r.o, r.e, r.v, r.z, r.p
                )?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ChainLine<'a> {
    rho: f64,
    index: usize,
    scenario: String,
    subcase: String,
    z_before: f64,
    z_after: f64,
    arrangement: &'a str,
}

fn write_chain(out: &mut Out, format: Format, ds: &Dataset, chain: &Chain) -> Result<(), Failure> {
    let times = [ds.group_sorted(Group::G0), ds.group_sorted(Group::G1)];
    let n0 = chain.initial.count(Group::G0);
    let render =
        |arr: &grho_core::chain::Arrangement| arr.render_with(|m| times[m.group.index()][m.index].time.to_string());
    match format {
        Format::Json => {
            for step in &chain.steps {
                let arrangement = render(&step.arrangement_after).join(" ");
                let line = ChainLine {
                    rho: chain.rho,
                    index: step.index,
                    scenario: step.scenario().to_string(),
                    subcase: step.class.subcase(),
                    z_before: step.z_before,
                    z_after: step.z_after,
                    arrangement: &arrangement,
                };
                writeln!(out, "{}", serde_json::to_string(&line)?)?;
            }
        }
        Format::Csv => {
            for (row, z) in chain.z_values().iter().enumerate() {
                writeln!(out, "{},{},{z}", chain.rho, row + 1)?;
            }
        }
        Format::Table => {
            writeln!(out, "rho = {}", chain.rho)?;
            let rows: Vec<(String, f64)> = chain
                .arrangements()
                .zip(chain.z_values())
                .map(|(arr, z)| {
                    let cells = render(arr);
                    (format!("{} | {}", cells[..n0].join(" "), cells[n0..].join(" ")), z)
                })
                .collect();
            let width = rows.iter().map(|(a, _)| a.chars().count()).max().unwrap_or(0);
            for (i, (arr, z)) in rows.iter().enumerate() {
                let pad = width - arr.chars().count();
                writeln!(out, "{:>3}  {arr}{}  {z:>8.4}", i + 1, " ".repeat(pad))?;
            }
        }
    }
    Ok(())
}

fn write_bounds(out: &mut Out, format: Format, results: &[BoundsResult]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            for r in results {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
        }
        Format::Csv => {
            writeln!(out, "rho,z_min,z_max")?;
            for r in results {
                writeln!(out, "{},{},{}", r.rho, r.z_min, r.z_max)?;
            }
        }
        Format::Table => {
            for r in results {
                writeln!(out, "rho = {}: z in [{:.4}, {:.4}]", r.rho, r.z_min, r.z_max)?;
                writeln!(out, "  min at {}", r.arg_min)?;
                writeln!(out, "  max at {}", r.arg_max)?;
            }
        }
    }
    Ok(())
}

fn write_verify(out: &mut Out, format: Format, report: &VerifyReport) -> Result<(), Failure> {
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(report)?)?,
        Format::Csv => {
            writeln!(out, "suite,instances,checks,failures")?;
            for s in &report.suites {
                writeln!(out, "{},{},{},{}", s.name, s.instances, s.checks, s.failures.len())?;
            }
        }
        Format::Table => {
            writeln!(out, "seed {}", report.seed)?;
            for s in &report.suites {
                let verdict = if s.passed() { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{verdict}  {:<18} {:>5} instances {:>8} checks {:>3} failures",
                    s.name,
                    s.instances,
                    s.checks,
                    s.failures.len()
                )?;
                for f in s.failures.iter().take(5) {
                    writeln!(out, "      {f}")?;
                }
            }
        }
    }
    Ok(())
}

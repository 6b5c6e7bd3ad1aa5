//! stark-spectral: spectral densities and Stark resonances of the 1-D
//! Dirac operator with two point wells.
//!
//! Subcommands: `free-density`, `zero-field`, `stark-density`, `poles`
//! (plus a hidden `pcf-eval` for debugging the special-function engine).
//! Exit codes: 0 success, 1 usage error, 2 numerical failure.

mod config;
mod output;
mod runs;

use clap::{Args, Parser, Subcommand};
use config::{read_config_file, OutputFormat, RunConfig};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "stark-spectral",
    version,
    about = "Spectral densities and resonance poles of a 1-D Dirac double point well in a constant field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free spectral density over an energy grid.
    FreeDensity(CommonArgs),
    /// Double-well density at F = 0 plus the bound-state energies.
    ZeroField(CommonArgs),
    /// Double-well density in a constant field.
    StarkDensity(CommonArgs),
    /// Resonance poles continued in the interatomic distance.
    Poles(CommonArgs),
    /// Evaluate U(a,z) (debugging aid).
    #[command(hide = true)]
    PcfEval(PcfEvalArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Well strength.
    #[arg(long)]
    g: Option<f64>,
    /// Half interatomic distance (wells at ±R).
    #[arg(long = "R")]
    r: Option<f64>,
    /// Electric field strength.
    #[arg(long = "F")]
    f: Option<f64>,
    /// Fermion mass.
    #[arg(long)]
    m: Option<f64>,
    /// Speed of light.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emin: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    emax: Option<f64>,
    /// Number of energy grid points.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    rmin: Option<f64>,
    #[arg(long)]
    rmax: Option<f64>,
    #[arg(long)]
    rstep: Option<f64>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value config file; explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads (default: machine parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Close-approach threshold for avoided-crossing classification.
    #[arg(long = "d-avoid")]
    d_avoid: Option<f64>,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
struct PcfEvalArgs {
    a_re: f64,
    a_im: f64,
    z_re: f64,
    z_im: f64,
}

fn lookup<T: std::str::FromStr>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> anyhow::Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|e| anyhow::anyhow!("config key {key}={raw}: {e}")),
    }
}

fn resolve(command: &str, args: &CommonArgs) -> anyhow::Result<RunConfig> {
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    macro_rules! merge {
        ($flag:expr, $key:literal, $default:expr) => {
            match $flag {
                Some(v) => v,
                None => lookup(&file, $key)?.unwrap_or($default),
            }
        };
    }
    let threads = merge!(args.threads, "threads", default_threads());
    let format: OutputFormat = match &args.format {
        Some(s) => s.parse()?,
        None => lookup::<String>(&file, "format")?
            .map(|s| s.parse())
            .transpose()?
            .unwrap_or(OutputFormat::Csv),
    };
    Ok(RunConfig {
        command: command.to_string(),
        g: merge!(args.g, "g", 1.0),
        r: merge!(args.r, "R", 1.0),
        f: merge!(args.f, "F", 0.0),
        m: merge!(args.m, "m", 1.0),
        c: merge!(args.c, "c", 1.0),
        emin: merge!(args.emin, "emin", -8.0),
        emax: merge!(args.emax, "emax", 8.0),
        n: merge!(args.n, "n", 4001),
        rmin: merge!(args.rmin, "rmin", 0.5),
        rmax: merge!(args.rmax, "rmax", 5.0),
        rstep: merge!(args.rstep, "rstep", 0.01),
        format,
        threads,
        d_avoid: merge!(args.d_avoid, "d-avoid", 0.05),
    })
}

fn default_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn open_sink(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?;
            Ok(Box::new(std::io::BufWriter::new(f)))
        }
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout()))),
    }
}

/// Errors before any numerics: exit 1. Errors during computation: exit 2.
enum Phase {
    Usage,
    Numerics,
}

fn dispatch(cli: Cli) -> Result<(), (Phase, anyhow::Error)> {
    let usage = |e: anyhow::Error| (Phase::Usage, e);
    let numerics = |e: anyhow::Error| (Phase::Numerics, e);
    match cli.command {
        Command::PcfEval(args) => {
            let a = num_complex::Complex64::new(args.a_re, args.a_im);
            let z = num_complex::Complex64::new(args.z_re, args.z_im);
            let ev = stark_core::pcf::pcf_u(a, z).map_err(|e| numerics(e.into()))?;
            let v = ev.value.to_c64();
            let d = ev.derivative.to_c64();
            println!("U_re={}", output::fmt17(v.re));
            println!("U_im={}", output::fmt17(v.im));
            println!("U_log_modulus={}", output::fmt17(ev.value.log_modulus));
            println!("U_phase={}", output::fmt17(ev.value.phase));
            println!("dU_re={}", output::fmt17(d.re));
            println!("dU_im={}", output::fmt17(d.im));
            Ok(())
        }
        Command::FreeDensity(args) => {
            let cfg = resolve("free-density", &args).map_err(usage)?;
            cfg.validate_grid().map_err(usage)?;
            cfg.params().map_err(usage)?;
            init_rayon(cfg.threads);
            let data = runs::run_free_density(&cfg).map_err(numerics)?;
            let mut sink = open_sink(&args.out).map_err(usage)?;
            output::write_density(&mut sink, &cfg, &data).map_err(numerics)
        }
        Command::ZeroField(args) => {
            let cfg = resolve("zero-field", &args).map_err(usage)?;
            cfg.validate_grid().map_err(usage)?;
            cfg.params().map_err(usage)?;
            init_rayon(cfg.threads);
            let data = runs::run_zero_field(&cfg).map_err(numerics)?;
            let mut sink = open_sink(&args.out).map_err(usage)?;
            output::write_density(&mut sink, &cfg, &data).map_err(numerics)
        }
        Command::StarkDensity(args) => {
            let cfg = resolve("stark-density", &args).map_err(usage)?;
            cfg.validate_grid().map_err(usage)?;
            cfg.params().map_err(usage)?;
            init_rayon(cfg.threads);
            let data = runs::run_stark_density(&cfg).map_err(numerics)?;
            let mut sink = open_sink(&args.out).map_err(usage)?;
            output::write_density(&mut sink, &cfg, &data).map_err(numerics)
        }
        Command::Poles(args) => {
            let cfg = resolve("poles", &args).map_err(usage)?;
            cfg.validate_r_range().map_err(usage)?;
            init_rayon(cfg.threads);
            let data = runs::run_poles(&cfg).map_err(numerics)?;
            let mut sink = open_sink(&args.out).map_err(usage)?;
            output::write_poles(&mut sink, &cfg, &data).map_err(numerics)
        }
    }
}

fn init_rayon(threads: usize) {
    // Build the global pool once; later identical calls are no-ops.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's rendered message but force the documented code.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((Phase::Usage, e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err((Phase::Numerics, e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(2)
        }
    }
}

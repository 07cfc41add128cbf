//! Command-line front end.
//!
//! ```text
//! fullsep gen   --state <name> [--dims a,b,c] [--seed S] --out F
//! fullsep pure  F [--tol T] [--out R]
//! fullsep mixed F --method <direct|kronecker|analytic|quasipure|all> [knobs] [--out R]
//! fullsep mix   --state <name> --x X [--dims a,b,c] [--seed S] --out F
//! fullsep sweep --state <name> --x-start A --x-end B --x-step H --method M [knobs] --out F.csv
//! ```
//!
//! Exit codes: 0 success (inconclusive results included), 1 invalid input or
//! file, 2 numerical invariant violation, 3 size-guard refusal.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::io::{read_state, write_state, LoadedState, StateFile};
use crate::mixedcrit::{Method, OptimizerConfig, DEFAULT_RANK_TOL, DEFAULT_TRUNC_TOL};
use crate::operators::Dims;
use crate::purecrit::DEFAULT_PURE_TOL;
use crate::quasipure::DEFAULT_TAU_EPS;
use crate::report::{mixed_reports, pure_report, AnalysisConfig, MethodSelection, SeparabilityReport};
use crate::states::{mix_with_identity, StateKind, StateSpec};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "fullsep", version, about = "Full-separability criteria for tripartite quantum states")]
struct Cli {
    /// Worker threads for internal parallelism (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a pure state file
    Gen {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact criterion on a pure state file
    Pure {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PURE_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bounds on a density-matrix (or pure) state file
    Mixed {
        input: PathBuf,
        #[arg(long, default_value = "all")]
        method: String,
        #[command(flatten)]
        knobs: Knobs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mix a named state with white noise: x|ψ⟩⟨ψ| + (1-x)I/d
    Mix {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one method over a grid of mixing weights and write CSV
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        x_start: f64,
        #[arg(long)]
        x_end: f64,
        #[arg(long)]
        x_step: f64,
        #[arg(long)]
        method: String,
        #[command(flatten)]
        knobs: Knobs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct StateArgs {
    /// ghz, w, ghz_prime, w_prime, random_product, random_pure, random_semiseparable[:ab|ac|bc]
    #[arg(long)]
    state: String,
    /// Local dimensions, e.g. 2,2,3
    #[arg(long)]
    dims: Option<String>,
    /// Seed for the random families
    #[arg(long)]
    seed: Option<u64>,
}

impl StateArgs {
    fn spec(&self) -> Result<StateSpec> {
        let kind: StateKind = self.state.parse()?;
        let dims = self.dims.as_deref().map(parse_dims).transpose()?;
        Ok(StateSpec {
            kind,
            dims,
            seed: self.seed,
        })
    }
}

#[derive(Debug, Args)]
struct Knobs {
    /// Verdict threshold on the reported value
    #[arg(long, default_value_t = DEFAULT_PURE_TOL)]
    tol: f64,
    /// Eigenvalue cutoff relative to the largest eigenvalue
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Kronecker weight cutoff relative to the largest weight
    #[arg(long, default_value_t = DEFAULT_TRUNC_TOL)]
    trunc_tol: f64,
    /// Cap on retained Kronecker factors
    #[arg(long)]
    max_factors: Option<usize>,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    /// Optimizer convergence tolerance
    #[arg(long, default_value_t = 1e-8)]
    opt_tol: f64,
    /// Optimizer seed
    #[arg(long, default_value_t = 0)]
    opt_seed: u64,
}

impl Knobs {
    fn config(&self) -> Result<AnalysisConfig> {
        for (name, v) in [
            ("tol", self.tol),
            ("rank-tol", self.rank_tol),
            ("trunc-tol", self.trunc_tol),
            ("opt-tol", self.opt_tol),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(format!("--{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.max_factors == Some(0) {
            return Err(Error::InvalidInput("--max-factors must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidInput("--restarts must be at least 1".into()));
        }
        Ok(AnalysisConfig {
            tol: self.tol,
            rank_tol: self.rank_tol,
            trunc_tol: self.trunc_tol,
            max_factors: self.max_factors,
            tau_eps: DEFAULT_TAU_EPS,
            optimizer: OptimizerConfig {
                restarts: self.restarts,
                max_iters: self.max_iters,
                tol: self.opt_tol,
                seed: self.opt_seed,
                warm_starts: Vec::new(),
            },
        })
    }
}

fn parse_dims(s: &str) -> Result<Dims> {
    let parts: std::result::Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    let parts = parts.map_err(|_| Error::InvalidDimension(format!("cannot parse dims '{s}', expected a,b,c")))?;
    Dims::from_slice(&parts)
}

/// One CSV row of a sweep.
#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub x: f64,
    pub value: f64,
    pub raw_value: f64,
    pub dominance_ratio: f64,
    pub converged: bool,
}

/// Grid `start, start + step, …` up to `end` (inclusive within 1e-9 steps).
pub fn sweep_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidInput(format!("--x-step must be > 0, got {step}")));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&end) || start > end {
        return Err(Error::InvalidInput(format!(
            "sweep range must satisfy 0 <= x-start <= x-end <= 1, got [{start}, {end}]"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| {
            let x = start + i as f64 * step;
            ((x * 1e12).round() / 1e12).min(1.0)
        })
        .collect())
}

fn sweep(spec: &StateSpec, grid: &[f64], method: Method, cfg: &AnalysisConfig) -> Result<Vec<SweepRow>> {
    let psi = spec.build()?;
    grid.iter()
        .map(|&x| {
            let rho = mix_with_identity(&psi, x)?;
            let rep = mixed_reports(&rho, MethodSelection::One(method), cfg)?.remove(0);
            Ok(SweepRow {
                x,
                value: rep.value,
                raw_value: rep.raw_value,
                dominance_ratio: rep.diagnostics.dominance_ratio.unwrap_or(0.0),
                converged: rep.diagnostics.converged,
            })
        })
        .collect()
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    Ok(())
}

fn emit_reports(reports: &[SeparabilityReport], out: Option<&Path>) -> Result<()> {
    match reports {
        [single] => emit(single, out),
        many => emit(&many, out),
    }
}

fn single_method(name: &str) -> Result<Method> {
    match name.parse::<MethodSelection>()? {
        MethodSelection::One(Method::Pure) | MethodSelection::All => Err(Error::InvalidInput(format!(
            "sweep needs one of direct, kronecker, analytic, quasipure; got '{name}'"
        ))),
        MethodSelection::One(m) => Ok(m),
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen { state, out } => {
            let psi = state.spec()?.build()?;
            write_state(&out, &StateFile::from(&psi))?;
            eprintln!("wrote {} ({} pure state)", out.display(), psi.dims());
            Ok(())
        }
        Command::Pure { input, tol, out } => {
            let psi = match read_state(&input)? {
                LoadedState::Pure(p) => p,
                LoadedState::Mixed(_) => {
                    return Err(Error::InvalidInput(format!(
                        "{} holds a density matrix; use the mixed command",
                        input.display()
                    )))
                }
            };
            let cfg = AnalysisConfig {
                tol,
                ..AnalysisConfig::default()
            };
            emit(&pure_report(&psi, &cfg)?, out.as_deref())
        }
        Command::Mixed {
            input,
            method,
            knobs,
            out,
        } => {
            let selection: MethodSelection = method.parse()?;
            let cfg = knobs.config()?;
            let rho = read_state(&input)?.into_density()?;
            emit_reports(&mixed_reports(&rho, selection, &cfg)?, out.as_deref())
        }
        Command::Mix { state, x, out } => {
            let psi = state.spec()?.build()?;
            let rho = mix_with_identity(&psi, x)?;
            write_state(&out, &StateFile::from(&rho))?;
            eprintln!("wrote {} ({} density matrix, x = {x})", out.display(), rho.dims());
            Ok(())
        }
        Command::Sweep {
            state,
            x_start,
            x_end,
            x_step,
            method,
            knobs,
            out,
        } => {
            let method = single_method(&method)?;
            let cfg = knobs.config()?;
            let grid = sweep_grid(x_start, x_end, x_step)?;
            let rows = sweep(&state.spec()?, &grid, method, &cfg)?;
            let mut writer = csv::Writer::from_path(&out)?;
            for row in &rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
            eprintln!("wrote {} ({} rows)", out.display(), rows.len());
            Ok(())
        }
    }
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidState(_) => 2,
        Error::SizeGuard(_) => 3,
        _ => 1,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidInput("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::InvalidInput(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

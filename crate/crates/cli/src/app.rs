//! Argument parsing and dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use fmkernel::diagcomb::Side;
use fmkernel::kernelcalc::{DimMode, Engine};

use crate::cache::{Cache, CACHE_ENV};
use crate::commands::{self, mixed_pairs, Outcome, Run, DEFAULT_CASES};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "fmkernel", version, about = "Exact checks for partial-diagonal kernels and their convolutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// write the JSON report here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// worker threads; 0 means one per core
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// directory for character and orbit caches
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded invariant multiplicities Λ*_m
    LambdaTable {
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// CSV on stdout instead of a table
        #[arg(long)]
        csv: bool,
    },
    /// Irreducibility of the exterior powers of ρ_m, and the matrix oracle
    CharCheck {
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 5)]
        oracle_max: usize,
    },
    /// Exactness and hom dimensions of both Čech complexes
    CechCheck {
        #[arg(long, default_value_t = 6)]
        k_max: usize,
    },
    /// Orbits of the symmetric group on pairs of kernel labels
    OrbitTable {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
    /// Curves: P^R * P is the identity, and mixed products vanish
    VerifyPropA(SweepArgs),
    /// Surfaces: P^R * P has the P^{n-1} pattern
    VerifyTheoremC(SweepArgs),
    /// n <= ell: the composition picks up an off-diagonal summand
    VerifyFailure(SweepArgs),
    /// The four grid cells for ell = 1
    FixturesEll1 {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// curve or surface; both when omitted
        #[arg(long)]
        dim: Option<String>,
    },
    /// Heisenberg relations in a truncated Fock space
    FockCheck {
        #[arg(long, default_value_t = 4)]
        max_n: i64,
        #[arg(long, default_value_t = 6)]
        truncation: usize,
        /// JSON `{"degrees": [..], "pairing": [[..]]}`; the rank-4 model otherwise
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Euler characteristics of compositions in the Grothendieck group
    EulerK {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        /// JSON `{"chi": [[..]], "omega": [[..]]}`; two built-in lattices otherwise
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, requires = "n")]
    pub ell: Option<usize>,
    #[arg(long, requires = "ell")]
    pub n: Option<usize>,
    /// curve, surface or mult:<d>
    #[arg(long)]
    pub dim: Option<String>,
    /// a dimension mode, or an engine name as shorthand for --engine
    #[arg(long)]
    pub mode: Option<String>,
    /// symbolic, concrete or both
    #[arg(long)]
    pub engine: Option<String>,
    /// mixed pairs up to this n + ell (verify-prop-a)
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
}

fn parse_engine(s: &str) -> Option<Engine> {
    match s {
        "symbolic" => Some(Engine::Symbolic),
        "concrete" => Some(Engine::Concrete),
        "both" => Some(Engine::Both),
        _ => None,
    }
}

fn parse_dim(s: &str) -> Result<DimMode> {
    s.parse::<DimMode>().map_err(|e| CliError::Usage(e.to_string()))
}

impl SweepArgs {
    /// Dimension modes to run (the default when none is given) and the engine.
    fn resolve(&self, default_dims: &[DimMode]) -> Result<(Vec<DimMode>, Engine)> {
        let mut dim = self.dim.as_deref().map(parse_dim).transpose()?;
        let mut engine = match self.engine.as_deref() {
            Some(e) => Some(parse_engine(e).ok_or_else(|| CliError::Usage(format!("unknown engine {e}")))?),
            None => None,
        };
        if let Some(m) = self.mode.as_deref() {
            match parse_engine(m) {
                Some(e) if engine.is_none() => engine = Some(e),
                Some(_) => return Err(CliError::Usage("--mode names an engine and --engine is also given".into())),
                None if dim.is_none() => dim = Some(parse_dim(m)?),
                None => return Err(CliError::Usage("--mode and --dim both give a dimension".into())),
            }
        }
        let dims = dim.map_or_else(|| default_dims.to_vec(), |d| vec![d]);
        Ok((dims, engine.unwrap_or(Engine::Both)))
    }

    fn cases(&self, default: &[(usize, usize)]) -> Vec<(usize, usize)> {
        match (self.ell, self.n) {
            (Some(ell), Some(n)) => vec![(ell, n)],
            _ => default.to_vec(),
        }
    }
}

fn self_runs(cases: &[(usize, usize)], dims: &[DimMode]) -> Result<Vec<Run>> {
    let mut runs = Vec::new();
    for &(ell, n) in cases {
        if n == 0 {
            return Err(CliError::Usage("--n must be positive".into()));
        }
        for &mode in dims {
            runs.push(Run { a: Side::new(ell, n), b: Side::new(ell, n), mode });
        }
    }
    Ok(runs)
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cache = Cache::new(cli.cache_dir.clone());
    let jobs = cli.jobs;
    match &cli.command {
        Command::LambdaTable { m_max, d, csv } => commands::lambda_table(*m_max, *d, *csv, jobs, &cache),
        Command::CharCheck { m_max, oracle_max } => commands::char_check(*m_max, *oracle_max, jobs, &cache),
        Command::CechCheck { k_max } => commands::cech_check(*k_max, jobs),
        Command::OrbitTable { ell, n, i, j } => commands::orbit_table(*ell, *n, *i, *j, jobs, &cache),
        Command::VerifyPropA(args) => {
            let (dims, engine) = args.resolve(&[DimMode::Curve])?;
            let cases = args.cases(&DEFAULT_CASES);
            let mut runs = self_runs(&cases, &dims)?;
            let mixed: Vec<_> = match (args.ell, args.n) {
                (Some(ell), Some(n)) => mixed_pairs(ell + n).into_iter().filter(|(a, _)| *a == Side::new(ell, n)).collect(),
                _ => (1..=args.n_max).flat_map(mixed_pairs).collect(),
            };
            for &mode in &dims {
                runs.extend(mixed.iter().map(|&(a, b)| Run { a, b, mode }));
            }
            commands::verify("verify-prop-a", &runs, engine, jobs)
        }
        Command::VerifyTheoremC(args) => {
            let (dims, engine) = args.resolve(&[DimMode::Surface])?;
            let runs = self_runs(&args.cases(&DEFAULT_CASES), &dims)?;
            commands::verify("verify-theorem-c", &runs, engine, jobs)
        }
        Command::VerifyFailure(args) => {
            let (dims, engine) = args.resolve(&[DimMode::Curve, DimMode::Surface])?;
            let runs = self_runs(&args.cases(&[(2, 2)]), &dims)?;
            commands::verify("verify-failure", &runs, engine, jobs)
        }
        Command::FixturesEll1 { n, dim } => {
            let modes = match dim {
                Some(d) => vec![parse_dim(d)?],
                None => vec![DimMode::Curve, DimMode::Surface],
            };
            commands::fixtures_ell1(*n, &modes)
        }
        Command::FockCheck { max_n, truncation, model } => commands::fock_check(model.as_ref(), *max_n, *truncation, jobs),
        Command::EulerK { n_max, model } => commands::euler_k(model.as_ref(), *n_max),
    }
}

pub fn write_document(path: &Path, outcome: &Outcome) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&outcome.document).expect("reports serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

/// Full run: dispatch, print, write the report. Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            if let Some(path) = &cli.out {
                if let Err(e) = write_document(path, &outcome) {
                    eprintln!("error: {e}");
                    return e.exit_code();
                }
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

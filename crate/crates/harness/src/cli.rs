//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use dynsub::channels::Channel;
use dynsub::classical::{entropy_uniform, product_bounds, StochasticMatrix};
use dynsub::matcore::{von_neumann_entropy, DensityMatrix};
use dynsub::quasifree::{
    fock_density, qf_compose, qf_map_entropy, qf_state_entropy, qf_validate, QFMap, QFSymbol,
};
use dynsub::randgen::{
    random_bistochastic_channel, random_bistochastic_matrix, random_channel, random_qf_map,
    random_stochastic, BistochasticMethod, RngStream,
};
use serde_json::{json, Value};

use crate::io::{read_complex, read_real, MatrixFile};
use crate::report::{fixed12, sig12, SuiteReport};
use crate::suites::{run_sample, run_suite, Suite, SuiteConfig, ALL};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dynsub",
    version,
    about = "Entropies of quantum operations and their compositions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run randomized verification suites.
    Verify(VerifyArgs),
    /// Re-evaluate a single sample of a suite.
    Replay(ReplayArgs),
    #[command(subcommand)]
    Channel(ChannelCmd),
    #[command(subcommand)]
    Classical(ClassicalCmd),
    #[command(subcommand)]
    Qf(QfCmd),
    #[command(subcommand)]
    Random(RandomCmd),
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Dimensions (mode numbers for `quasifree`); repeatable. Defaults per suite.
    #[arg(long = "dim")]
    pub dims: Vec<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Inequality slack tolerance. Equality cross-checks keep their own.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl SuiteArgs {
    fn config(&self, suite: Suite) -> Result<SuiteConfig, CliError> {
        let mut cfg = SuiteConfig::defaults(suite, self.seed);
        if !self.dims.is_empty() {
            let min = if suite == Suite::Quasifree { 1 } else { 2 };
            if let Some(d) = self.dims.iter().find(|&&d| d < min) {
                return Err(CliError::Input(format!(
                    "{}: dimension {d} below {min}",
                    suite.name()
                )));
            }
            cfg.dims = self.dims.clone();
        }
        if let Some(k) = self.samples {
            cfg.samples = k;
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Input(format!(
                    "tolerance {t} is not a finite nonnegative number"
                )));
            }
            cfg.tol = t;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name; repeatable.
    #[arg(long = "suite", conflicts_with = "all")]
    pub suites: Vec<String>,
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub common: SuiteArgs,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Include wall-clock times, which makes reports non-reproducible.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub suite: String,
    #[arg(long)]
    pub index: u64,
    #[command(flatten)]
    pub common: SuiteArgs,
}

#[derive(Debug, Subcommand)]
pub enum ChannelCmd {
    /// Map entropy `S(D/N)` of a Choi matrix.
    Entropy {
        #[arg(long)]
        choi: PathBuf,
    },
    /// Canonical Kraus operators and their weights.
    Kraus {
        #[arg(long)]
        choi: PathBuf,
    },
    /// Choi matrix of `later ∘ earlier`.
    Compose {
        #[arg(long)]
        later: PathBuf,
        #[arg(long)]
        earlier: PathBuf,
    },
    /// Image of a density matrix.
    Apply {
        #[arg(long)]
        choi: PathBuf,
        #[arg(long)]
        rho: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassicalCmd {
    /// `H(T)` and the entropy of the diagonal channel.
    Entropy {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Two-sided bounds on `H(T2·T1)`.
    Bounds {
        #[arg(long)]
        t2: PathBuf,
        #[arg(long)]
        t1: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum QfCmd {
    /// Entropy of a state symbol (`--symbol`) or of a map (`--r` and `--z`).
    Entropy {
        #[arg(long, conflicts_with_all = ["r", "z"])]
        symbol: Option<PathBuf>,
        #[arg(long, requires = "z")]
        r: Option<PathBuf>,
        #[arg(long, requires = "r")]
        z: Option<PathBuf>,
    },
    /// `(R, Z)` of `later ∘ earlier`.
    Compose {
        #[arg(long)]
        later_r: PathBuf,
        #[arg(long)]
        later_z: PathBuf,
        #[arg(long)]
        earlier_r: PathBuf,
        #[arg(long)]
        earlier_z: PathBuf,
    },
    /// Fock-space density matrix of a symbol (at most 4 modes).
    Fock {
        #[arg(long)]
        symbol: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub bistochastic: bool,
}

#[derive(Debug, Subcommand)]
pub enum RandomCmd {
    /// Random channel as a Choi matrix.
    Channel(RandomArgs),
    /// Random column-stochastic matrix.
    Matrix(RandomArgs),
    /// Random quasi-free map `(R, Z)`; `--dim` is the number of modes.
    Qfmap(RandomArgs),
}

/// Runs a command, printing its JSON result to stdout, and returns the exit code.
pub fn run(cli: Cli) -> Result<i32, CliError> {
    let (value, ok) = execute(cli.command)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&value).expect("serializable")
    );
    Ok(if ok { 0 } else { 1 })
}

/// Executes a command and returns its JSON result and whether it passed.
pub fn execute(command: Command) -> Result<(Value, bool), CliError> {
    match command {
        Command::Verify(args) => verify(&args),
        Command::Replay(args) => replay(&args),
        Command::Channel(c) => Ok((channel(c)?, true)),
        Command::Classical(c) => Ok((classical(c)?, true)),
        Command::Qf(c) => Ok((qf(c)?, true)),
        Command::Random(c) => Ok((random(c)?, true)),
    }
}

fn suite_by_name(name: &str) -> Result<Suite, CliError> {
    Suite::from_name(name).ok_or_else(|| {
        let names: Vec<_> = ALL.iter().map(|s| s.name()).collect();
        CliError::Input(format!(
            "unknown suite {name:?}; expected one of {}",
            names.join(", ")
        ))
    })
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("DYNSUB_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Input(format!("DYNSUB_THREADS={v:?} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Input(e.to_string()))
}

fn verify(args: &VerifyArgs) -> Result<(Value, bool), CliError> {
    let suites: Vec<Suite> = if args.all {
        ALL.to_vec()
    } else if args.suites.is_empty() {
        return Err(CliError::Input("give --suite NAME or --all".into()));
    } else {
        args.suites
            .iter()
            .map(|s| suite_by_name(s))
            .collect::<Result<_, _>>()?
    };
    let configs: Vec<SuiteConfig> = suites
        .iter()
        .map(|&s| args.common.config(s))
        .collect::<Result<_, _>>()?;
    let pool = thread_pool()?;
    let reports: Vec<SuiteReport> = suites
        .iter()
        .zip(&configs)
        .map(|(&s, cfg)| {
            let r = pool.install(|| run_suite(s, cfg, args.timings)).rounded();
            eprintln!(
                "{:<20} {}  worst {} = {:.3e} (tol {:.0e}) at index {}",
                r.suite,
                if r.pass { "PASS" } else { "FAIL" },
                r.worst_check,
                r.worst_violation,
                r.worst_tolerance,
                r.worst_case_index,
            );
            r
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let value = json!({ "seed": args.common.seed, "pass": pass, "suites": reports });
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&value).expect("serializable");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok((value, pass))
}

fn replay(args: &ReplayArgs) -> Result<(Value, bool), CliError> {
    let suite = suite_by_name(&args.suite)?;
    let cfg = args.common.config(suite)?;
    if args.index >= cfg.total() as u64 {
        return Err(CliError::Input(format!(
            "index {} outside 0..{}",
            args.index,
            cfg.total()
        )));
    }
    let outcome = run_sample(suite, &cfg, args.index);
    let mut value = json!({
        "suite": suite.name(),
        "seed": cfg.seed,
        "index": outcome.index,
        "dim": outcome.dim,
    });
    let ok = match outcome.result {
        Ok(checks) => {
            let ok = checks.iter().all(|c| c.passes());
            value["checks"] = checks
                .iter()
                .map(|c| json!({ "tag": c.tag, "slack": sig12(c.slack), "tolerance": sig12(c.tol), "pass": c.passes() }))
                .collect();
            ok
        }
        Err(message) => {
            value["error"] = json!(message);
            false
        }
    };
    value["pass"] = json!(ok);
    Ok((value, ok))
}

fn read_channel(path: &Path) -> Result<Channel, CliError> {
    Ok(Channel::from_choi(read_complex(path)?)?)
}

fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    Ok(DensityMatrix::new(read_complex(path)?)?)
}

fn read_stochastic(path: &Path) -> Result<StochasticMatrix, CliError> {
    Ok(StochasticMatrix::new(read_real(path)?)?)
}

fn read_symbol(path: &Path) -> Result<QFSymbol, CliError> {
    Ok(QFSymbol::new(read_complex(path)?)?)
}

fn read_qf_map(r: &Path, z: &Path) -> Result<QFMap, CliError> {
    Ok(qf_validate(read_complex(r)?, read_complex(z)?)?)
}

fn matrix_json(m: &dynsub::ComplexMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_complex(m)).expect("serializable")
}

fn qf_map_json(m: &QFMap) -> Value {
    json!({ "modes": m.modes(), "r": matrix_json(m.r()), "z": matrix_json(m.z()) })
}

fn channel(cmd: ChannelCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        ChannelCmd::Entropy { choi } => {
            let ch = read_channel(&choi)?;
            json!({ "dim": ch.dim(), "entropy": fixed12(ch.map_entropy()?) })
        }
        ChannelCmd::Kraus { choi } => {
            let k = read_channel(&choi)?.to_kraus()?;
            json!({
                "dim": k.dim(),
                "weights": k.weights().iter().map(|&w| sig12(w)).collect::<Vec<_>>(),
                "operators": k.operators().iter().map(matrix_json).collect::<Vec<_>>(),
            })
        }
        ChannelCmd::Compose { later, earlier } => {
            let c = Channel::compose(&read_channel(&later)?, &read_channel(&earlier)?)?;
            json!({ "dim": c.dim(), "choi": matrix_json(c.choi()) })
        }
        ChannelCmd::Apply { choi, rho } => {
            let out = read_channel(&choi)?.apply_state(&read_state(&rho)?)?;
            json!({ "dim": out.dim(), "rho": matrix_json(out.as_matrix()), "entropy": fixed12(von_neumann_entropy(&out)) })
        }
    })
}

fn classical(cmd: ClassicalCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        ClassicalCmd::Entropy { matrix } => {
            let t = read_stochastic(&matrix)?;
            let h = entropy_uniform(&t);
            json!({
                "dim": t.dim(),
                "entropy": fixed12(h),
                "map_entropy": fixed12(Channel::from_stochastic(&t).map_entropy()?),
                "bistochastic": t.is_bistochastic(),
            })
        }
        ClassicalCmd::Bounds { t2, t1 } => {
            let b = product_bounds(&read_stochastic(&t2)?, &read_stochastic(&t1)?)?;
            json!({
                "actual": fixed12(b.actual),
                "lower": fixed12(b.lower),
                "upper": fixed12(b.upper),
                "loose_upper": fixed12(b.loose_upper),
                "delta1": fixed12(b.delta1),
                "delta2": fixed12(b.delta2),
                "holds": b.holds(1e-10),
            })
        }
    })
}

fn qf(cmd: QfCmd) -> Result<Value, CliError> {
    Ok(match cmd {
        QfCmd::Entropy {
            symbol: Some(s), ..
        } => {
            let q = read_symbol(&s)?;
            json!({ "modes": q.modes(), "entropy": fixed12(qf_state_entropy(&q)) })
        }
        QfCmd::Entropy {
            r: Some(r),
            z: Some(z),
            ..
        } => {
            let m = read_qf_map(&r, &z)?;
            json!({ "modes": m.modes(), "entropy": fixed12(qf_map_entropy(&m)), "bistochastic": m.is_bistochastic() })
        }
        QfCmd::Entropy { .. } => {
            return Err(CliError::Input("give --symbol or both --r and --z".into()))
        }
        QfCmd::Compose {
            later_r,
            later_z,
            earlier_r,
            earlier_z,
        } => {
            let m = qf_compose(
                &read_qf_map(&later_r, &later_z)?,
                &read_qf_map(&earlier_r, &earlier_z)?,
            )?;
            qf_map_json(&m)
        }
        QfCmd::Fock { symbol } => {
            let q = read_symbol(&symbol)?;
            let rho = fock_density(&q)?;
            json!({
                "modes": q.modes(),
                "entropy": fixed12(von_neumann_entropy(&rho)),
                "qf_entropy": fixed12(qf_state_entropy(&q)),
                "rho": matrix_json(rho.as_matrix()),
            })
        }
    })
}

fn random(cmd: RandomCmd) -> Result<Value, CliError> {
    let args = match &cmd {
        RandomCmd::Channel(a) | RandomCmd::Matrix(a) | RandomCmd::Qfmap(a) => a,
    };
    if args.dim == 0 {
        return Err(CliError::Input("--dim must be at least 1".into()));
    }
    let mut rng = RngStream::new(args.seed, 0).rng();
    Ok(match cmd {
        RandomCmd::Channel(a) => {
            let ch = if a.bistochastic {
                random_bistochastic_channel(a.dim, &mut rng, BistochasticMethod::Sinkhorn)?
            } else {
                random_channel(a.dim, &mut rng)
            };
            json!({ "dim": a.dim, "choi": matrix_json(ch.choi()) })
        }
        RandomCmd::Matrix(a) => {
            let t = if a.bistochastic {
                random_bistochastic_matrix(a.dim, &mut rng)?
            } else {
                random_stochastic(a.dim, &mut rng)
            };
            json!({ "dim": a.dim, "matrix": serde_json::to_value(MatrixFile::from_real(t.as_matrix())).expect("serializable") })
        }
        RandomCmd::Qfmap(a) => qf_map_json(&random_qf_map(a.dim, &mut rng, a.bistochastic)),
    })
}

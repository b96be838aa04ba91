use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use symqcc_cli::config::FileConfig;
use symqcc_cli::runner::{execute, ProtocolKind, RunSpec};
use symqcc_cli::sweep::{run_sweep, SweepSpec};
use symqcc_cli::verify::{run_all, Suite};
use symqcc_core::composed::RandomnessMode;
use symqcc_core::error::Error;
use symqcc_core::symmetric::SymmetricSpec;
use symqcc_core::{analysis, ExecMode};

/// Two-party protocols for composed symmetric functions: analysis, seeded
/// runs, parameter sweeps, and the acceptance verifier.
#[derive(Parser)]
#[command(name = "symqcc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Master seed for all randomness of the run.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Execution mode: sim (statevector engine) or ledger (cost accounting).
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Optional flat JSON config supplying defaults for common flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (sweep CSV or verify JSON summary).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bound report for an outer function as JSON.
    Analyze {
        /// Function descriptor: or | and | parity | thr:<t> | table:<bits>.
        #[arg(long)]
        f: String,
        /// Input arity.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Execute one protocol and print the full run report as JSON.
    Run {
        /// Protocol: find-one | find-exact | find-more | composed | sym-and | sparse-intersect.
        protocol: String,
        /// Outer function descriptor (composed and sym-and).
        #[arg(long)]
        f: Option<String>,
        /// Inner function descriptor: and2 | xor2 | tt:<j>:<k>:<hex>.
        #[arg(long)]
        g: Option<String>,
        /// Alice's input bits (n*j bits, entries concatenated).
        #[arg(long)]
        x: String,
        /// Bob's input bits (n*k bits, entries concatenated).
        #[arg(long)]
        y: String,
        /// Sparsity or promise parameter.
        #[arg(long)]
        k: Option<usize>,
        /// Block size for find-exact.
        #[arg(long)]
        gamma: Option<usize>,
        /// Randomness regime for sym-and: shared | private.
        #[arg(long)]
        randomness: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep a parameter grid and write one CSV row per trial.
    Sweep {
        /// Protocol: find-one | find-more | composed | sym-and | sparse-intersect.
        protocol: String,
        /// Outer function descriptor where applicable.
        #[arg(long)]
        f: Option<String>,
        /// Inner function descriptor (default and2).
        #[arg(long, default_value = "and2")]
        g: String,
        /// Comma-separated instance sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated sparsity/promise parameters.
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Marked coordinates planted per search instance (defaults to k).
        #[arg(long)]
        marked: Option<usize>,
        /// Trials per grid point.
        #[arg(long)]
        trials: Option<usize>,
        /// Base seed; trial row i uses seed_base xor i.
        #[arg(long)]
        seed_base: Option<u64>,
        /// Randomness regime for sym-and: shared | private.
        #[arg(long)]
        randomness: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the acceptance criteria and exit 0 only if all pass.
    Verify {
        /// Suite: fast (smoke scale) or full (stated sample sizes).
        suite: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_randomness(s: Option<&str>) -> Result<RandomnessMode, Error> {
    match s {
        None | Some("shared") => Ok(RandomnessMode::SharedRandomness),
        Some("private") => Ok(RandomnessMode::PrivateOnly),
        Some(other) => Err(Error::input(format!(
            "unknown randomness regime \"{other}\" (expected shared or private)"
        ))),
    }
}

fn load_config(common: &CommonOpts) -> Result<FileConfig, Error> {
    match &common.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

fn resolve_mode(flag: &Option<String>, cfg: &FileConfig) -> Result<ExecMode, Error> {
    match flag.as_deref().or(cfg.mode.as_deref()) {
        None => Ok(ExecMode::Sim),
        Some(s) => s.parse(),
    }
}

fn real_main() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { f, n, common } => {
            let _ = load_config(&common)?;
            let spec = SymmetricSpec::from_descriptor(&f, n)?;
            let report = analysis::analyze(&spec);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::Run { protocol, f, g, x, y, k, gamma, randomness, common } => {
            let cfg = load_config(&common)?;
            let spec = RunSpec {
                protocol: ProtocolKind::parse(&protocol)?,
                mode: resolve_mode(&common.mode, &cfg)?,
                seed: common.seed.or(cfg.seed).unwrap_or(0),
                f,
                g,
                x,
                y,
                k,
                gamma,
                randomness: parse_randomness(
                    randomness.as_deref().or(cfg.randomness.as_deref()),
                )?,
            };
            let report = execute(&spec)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::Sweep {
            protocol,
            f,
            g,
            n,
            k,
            marked,
            trials,
            seed_base,
            randomness,
            common,
        } => {
            let cfg = load_config(&common)?;
            let out = common
                .out
                .clone()
                .or_else(|| cfg.out.as_ref().map(PathBuf::from))
                .ok_or_else(|| Error::input("sweep needs --out <csv path>"))?;
            let spec = SweepSpec {
                protocol: ProtocolKind::parse(&protocol)?,
                mode: resolve_mode(&common.mode, &cfg)?,
                f,
                g,
                ns: n,
                ks: k,
                marked,
                trials: trials.or(cfg.trials).unwrap_or(100),
                seed_base: seed_base.or(common.seed).or(cfg.seed).unwrap_or(0),
                out,
                randomness: parse_randomness(
                    randomness.as_deref().or(cfg.randomness.as_deref()),
                )?,
            };
            let rows = run_sweep(&spec)?;
            eprintln!("wrote {rows} rows to {}", spec.out.display());
            Ok(())
        }
        Command::Verify { suite, common } => {
            let suite = match suite.as_str() {
                "fast" => Suite::Fast,
                "full" => Suite::Full,
                other => return Err(Error::input(format!("unknown suite \"{other}\""))),
            };
            let reports = run_all(suite);
            for r in &reports {
                println!("{}", r.line());
            }
            let summary: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
            let json = serde_json::json!({
                "suite": if suite == Suite::Full { "full" } else { "fast" },
                "pass": reports.iter().all(|r| r.pass),
                "criteria": summary,
            });
            if let Some(path) = &common.out {
                std::fs::write(path, serde_json::to_string_pretty(&json).expect("serializes"))
                    .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
            } else if suite == Suite::Full {
                println!("{}", serde_json::to_string_pretty(&json).expect("serializes"));
            }
            if reports.iter().all(|r| r.pass) {
                Ok(())
            } else {
                std::process::exit(2);
            }
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

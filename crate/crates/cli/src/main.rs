use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spde_order_cli::{list_scenarios, run_scenario, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "spde-order",
    version,
    about = "Order-based solver for SPDEs with discontinuous monotone drift"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config; exits nonzero if any enabled gate fails.
    Run {
        config: PathBuf,
        /// Master seed, overriding `run.master_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory, overriding `run.out_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of noise paths, overriding `run.paths`.
        #[arg(long)]
        paths: Option<usize>,
        /// Worker threads (0 = all cores), overriding `run.threads`.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the built-in scenarios.
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            seed,
            out,
            paths,
            threads,
        } => {
            let mut cfg = match ScenarioConfig::from_file(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(s) = seed {
                cfg.run.master_seed = s;
            }
            if let Some(o) = out {
                cfg.run.out_dir = o;
            }
            if let Some(p) = paths {
                cfg.run.paths = p;
            }
            if let Some(t) = threads {
                cfg.run.threads = t;
            }
            match run_scenario(&cfg) {
                Ok(outcome) => {
                    for (gate, ok) in &outcome.gates {
                        println!("{gate}: {}", if *ok { "pass" } else { "fail" });
                    }
                    println!("artifacts in {}", cfg.run.out_dir.display());
                    if outcome.passed() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::FAILURE
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}

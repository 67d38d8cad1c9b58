use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use a2g::config::{ConfigError, SCHEMA};
use a2g::experiments::{self, Context, RunError, EXPERIMENTS};
use a2g::{montecarlo, output};

#[derive(Parser)]
#[command(name = "a2g", version, about = "CoMP handoff and coverage experiments for UAV air-to-ground networks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment and write its CSVs, manifest and report.
    Run {
        /// fig8, fig9a, fig9b, fig10 ... fig17 or custom
        experiment: String,
        /// `key = value` file, or a manifest.json from an earlier run
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one key, e.g. --set lambda0_per_km2=2
        #[arg(long = "set", value_name = "K=V")]
        sets: Vec<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0: one per core)
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Output directory [default: out/<experiment>]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow values outside the reference parameter table
        #[arg(long)]
        force: bool,
    },
    /// List experiments and configuration keys.
    List,
}

const USAGE: u8 = 2;
const NUMERIC: u8 = 3;
const VIOLATION: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::List => {
            println!("experiments:");
            for e in EXPERIMENTS {
                println!("  {:<7} {}", e.id, e.about);
            }
            println!("keys:");
            for k in SCHEMA {
                println!("  {:<16} {}", k.name, k.help);
            }
            ExitCode::SUCCESS
        }
        Cmd::Run { experiment, config, sets, trials, seed, threads, out, force } => {
            let Some(exp) = experiments::find(&experiment) else {
                let ids: Vec<&str> = EXPERIMENTS.iter().map(|e| e.id).collect();
                eprintln!("error: unknown experiment `{experiment}` (one of {})", ids.join(", "));
                return ExitCode::from(USAGE);
            };
            let mut params = exp.params(force);
            let resolved = (|| -> Result<(), ConfigError> {
                if let Some(path) = &config {
                    params.load_file(path)?;
                }
                for s in &sets {
                    params.set_assignment(s)?;
                }
                if let Some(n) = trials {
                    params.set("trials", &n.to_string())?;
                }
                if let Some(n) = seed {
                    params.set("seed", &n.to_string())?;
                }
                Ok(())
            })();
            if let Err(e) = resolved {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE);
            }
            let outcome = match exp.run(&params, &Context { threads }) {
                Ok(o) => o,
                Err(RunError::Config(e)) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(USAGE);
                }
                Err(RunError::Numeric(e)) => {
                    let d = a2g_core::analytic::diagnostics();
                    eprintln!("numeric failure: {e}");
                    eprintln!(
                        "diagnostics: clip events {}, geometry warnings {}, alpha perturbations {}, resampled trials {}",
                        d.clip_events,
                        d.geometry_warnings,
                        d.alpha_perturbations,
                        montecarlo::resampled_trials()
                    );
                    return ExitCode::from(NUMERIC);
                }
            };
            let dir = out.unwrap_or_else(|| PathBuf::from("out").join(exp.id));
            if let Err(e) = output::write_all(&dir, exp.id, &params, &outcome) {
                eprintln!("error: cannot write to {}: {e}", dir.display());
                return ExitCode::from(USAGE);
            }
            print!("{}", output::report(exp.id, &outcome));
            println!("wrote {}", dir.display());
            if outcome.bound_violations() > 0 {
                ExitCode::from(VIOLATION)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqorbit_cli::{cmd_check, cmd_minimize, cmd_sample, cmd_serve, CliError, Manifest, EXIT_USAGE};
use eqorbit_core::optimizer::MinimizeConfig;

#[derive(Parser)]
#[command(name = "eqorbit", version, about = "Search for symmetric periodic orbits of the n-body problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchArgs {
    /// Number of sine modes on the fundamental domain
    #[arg(long, default_value_t = 12)]
    s: usize,
    /// Quadrature intervals per fundamental domain [default: max(64, 8s)]
    #[arg(long)]
    nu: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
}

impl SearchArgs {
    fn config(&self) -> MinimizeConfig {
        MinimizeConfig { seed: self.seed, max_iters: self.max_iters, grad_tol: self.grad_tol, ..MinimizeConfig::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a group file and report its structure and coercivity
    Check {
        #[arg(long)]
        group: PathBuf,
    },
    /// Run seeded minimizations and write orbit records, histories and a summary
    Minimize {
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print a full-period trajectory CSV for an orbit record
    Sample {
        /// Orbit record written by `minimize`
        record: PathBuf,
        /// Subintervals over the whole period [default: nu * l]
        #[arg(long)]
        resolution: Option<usize>,
        /// Write to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Start the HTTP session service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Check { group } => print!("{}", cmd_check(&group)?),
        Command::Minimize { group, search, restarts, out } => {
            let m = Manifest { group, s: search.s, nu: search.nu, config: search.config(), out, restarts };
            print!("{}", cmd_minimize(&m)?);
        }
        Command::Sample { record, resolution, out } => {
            let csv = cmd_sample(&record, resolution)?;
            match out {
                Some(p) => std::fs::write(&p, csv)
                    .map_err(|e| CliError::Computation(format!("writing {}: {e}", p.display())))?,
                None => print!("{csv}"),
            }
        }
        Command::Serve { port, search } => {
            let defaults = eqorbit_service::Defaults { s: search.s, nu: search.nu, config: search.config() };
            cmd_serve(port, defaults, |addr| println!("listening on http://{addr}"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

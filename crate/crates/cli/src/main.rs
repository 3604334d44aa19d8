use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qsg_cli::commands::{self, MapSpec, SweepParam, SweepSpec};
use qsg_cli::{CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "qsg-sim", version, about = "Flux-qubit Stern-Gerlach simulator")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Override a config entry, e.g. `--set crossing.v0_x=0.5`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the model against the published operating point.
    Reproduce,
    /// Run kick, entanglement, Hadamard, measurement and fringes once.
    Protocol,
    /// Scan one parameter.
    Sweep {
        #[arg(value_enum)]
        param: SweepParam,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Geometric spacing.
        #[arg(long)]
        log: bool,
    },
    /// Gradient map around the crossing point.
    FieldsMap {
        /// Diameter of the disc parallel to the loop (m).
        #[arg(long, default_value_t = 2e-6)]
        rho_extent: f64,
        /// Height of the region (m).
        #[arg(long, default_value_t = 1e-6)]
        z_extent: f64,
        /// Points per axis.
        #[arg(long, default_value_t = 21)]
        n: usize,
    },
    /// Print the effective configuration as TOML.
    Config,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.sets)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    log::debug!("config hash {}", cfg.hash());
    match cli.command {
        Command::Reproduce => commands::reproduce(&cfg),
        Command::Protocol => commands::protocol(&cfg),
        Command::Sweep {
            param,
            from,
            to,
            steps,
            log,
        } => commands::sweep(
            &cfg,
            &SweepSpec {
                param,
                from,
                to,
                steps,
                log,
            },
        ),
        Command::FieldsMap { rho_extent, z_extent, n } => commands::fields_map(
            &cfg,
            &MapSpec {
                rho_extent,
                z_extent,
                n,
            },
        ),
        Command::Config => {
            print!("{}", cfg.to_toml()?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vortexlab_cli::commands::{self, KernelTableArgs, Solver};
use vortexlab_cli::Result;

#[derive(Parser)]
#[command(
    name = "vortexlab",
    version,
    about = "Filtered Euler flow past a small disk: kernels, radial checks and simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutDir {
    /// Output directory.
    #[arg(long, env = "VORTEXLAB_OUT", default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ConfigArg {
    /// INI configuration file.
    #[arg(long)]
    config: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Plane,
    Exterior,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the filtered kernel and its bound ratios on a log grid.
    KernelTable {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-5)]
        r_min: f64,
        #[arg(long, default_value_t = 50.0)]
        r_max: f64,
        /// Also write kernel_table.svg.
        #[arg(long)]
        svg: bool,
        #[command(flatten)]
        out: OutDir,
    },
    /// Check the exterior radial closed forms against quadrature.
    RadialVerify {
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.1, 0.05, 0.025, 0.0125])]
        eps: Vec<f64>,
        #[command(flatten)]
        out: OutDir,
    },
    /// Run one simulation and write its run directory.
    Simulate {
        #[arg(value_enum)]
        solver: SolverArg,
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutDir,
    },
    /// Compare exterior runs for several obstacle radii with the plane limit.
    Converge {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutDir,
    },
    /// Measure the contraction of the Picard iteration.
    Picard {
        #[command(flatten)]
        config: ConfigArg,
        #[command(flatten)]
        out: OutDir,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::KernelTable { alpha, samples, r_min, r_max, svg, out } => {
            commands::kernel_table(&out.out, &KernelTableArgs { alpha, samples, r_min, r_max, svg })
        }
        Command::RadialVerify { alpha, eps, out } => commands::radial_verify(&out.out, &alpha, &eps).map(drop),
        Command::Simulate { solver, config, out } => {
            let solver = match solver {
                SolverArg::Plane => Solver::Plane,
                SolverArg::Exterior => Solver::Exterior,
            };
            commands::simulate(solver, &config.config, &out.out).map(drop)
        }
        Command::Converge { config, out } => commands::converge(&config.config, &out.out).map(drop),
        Command::Picard { config, out } => commands::picard_study(&config.config, &out.out).map(drop),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plateau_cli::{cmd_grid, cmd_random_search, cmd_solve, cmd_sweep, error_json, exit_status, load_config, Overrides};
use plateau_core::io::GridField;
use plateau_core::Result;

/// Minimal surfaces spanned by closed space curves.
#[derive(Parser)]
#[command(name = "plateau", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize one configuration and write report.json.
    Solve(Common),
    /// Sweep the Fourier family of initial configurations.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated amplitudes, replacing search.s_values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s_values: Option<Vec<f64>>,
        /// Fourier mode of the family.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
    },
    /// Optimize many random initial configurations and cluster the energies.
    RandomSearch {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        samples: Option<usize>,
        /// Significant digits for clustering.
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Write a polar CSV grid of the dilatation or mean curvature.
    Grid {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        field: Option<Field>,
        #[arg(long)]
        n_r: Option<usize>,
        #[arg(long)]
        n_theta: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Dilatation,
    MeanCurvature,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    /// Source circle radius.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Maximum optimizer iterations.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps and searches.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            radius: self.radius,
            rho: self.rho,
            eta: self.eta,
            iters: self.iters,
            seed: self.seed,
            jobs: self.jobs,
            out: self.out.clone(),
            ..Default::default()
        }
    }
}

fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match cli.command {
        Command::Solve(common) => cmd_solve(&load_config(&common.config, &common.overrides())?),
        Command::Sweep { common, s_values, m } => {
            let o = Overrides { s_values, m, ..common.overrides() };
            cmd_sweep(&load_config(&common.config, &o)?)
        }
        Command::RandomSearch { common, samples, digits } => {
            let o = Overrides { samples, digits, ..common.overrides() };
            cmd_random_search(&load_config(&common.config, &o)?)
        }
        Command::Grid { common, field, n_r, n_theta } => {
            let field = field.map(|f| match f {
                Field::Dilatation => GridField::Dilatation,
                Field::MeanCurvature => GridField::MeanCurvature,
            });
            let o = Overrides { field, n_r, n_theta, ..common.overrides() };
            cmd_grid(&load_config(&common.config, &o)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_status(&e) as u8)
        }
    }
}

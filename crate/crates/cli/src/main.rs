use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qflip_cli::{run, CliError, Command, Overrides, RunConfig};

#[derive(Parser)]
#[command(
    name = "qflip",
    version,
    about = "Qubit penny-flip game under Lindblad noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Play one game and write its trajectory and outcome.
    Simulate(RunArgs),
    /// Expected payoff over a range of noise rates.
    Sweep(RunArgs),
    /// Optimize one player's pulses against the other's strategy.
    Optimize(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Worker threads (default: all processors).
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Multistart seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Single noise rate, replacing `gamma`/`gamma_range`.
    #[arg(long)]
    gamma: Option<f64>,
    /// Noise channel name.
    #[arg(long)]
    channel: Option<String>,
    /// RK4 steps per pulse segment.
    #[arg(long)]
    steps: Option<usize>,
    /// Number of optimizer starts.
    #[arg(long)]
    starts: Option<usize>,
}

fn execute(command: Command, args: RunArgs) -> Result<Vec<PathBuf>, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    cfg.apply(&Overrides {
        seed: args.seed,
        out_dir: args.out,
        gamma: args.gamma,
        channel: args.channel,
        steps_per_segment: args.steps,
        starts: args.starts,
    });
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.jobs {
        if n == 0 {
            return Err(CliError::config("--jobs", "must be >= 1"));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::config("--jobs", e.to_string()))?;
    pool.install(|| run(command, &cfg))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Simulate(a) => (Command::Simulate, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::Optimize(a) => (Command::Optimize, a),
    };
    match execute(command, args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qflip: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Run;
use config::RunConfig;

#[derive(Parser)]
#[command(name = "quatwave", version, about = "Wavelet transforms on the quaternionic affine group")]
struct Cli {
    /// JSON run configuration; defaults apply to omitted fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving the artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads, overriding the config.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Random seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Admissibility report of the configured wavelet.
    Admissibility,
    /// Complex coefficient table as JSON lines.
    Transform,
    /// Quaternionic coefficient table as JSON lines.
    Qtransform,
    /// Reconstruction error over the refinement levels.
    Reconstruct,
    /// Quaternionic reconstruction error over the refinement levels.
    Qreconstruct,
    /// Energy identity ratios.
    EnergyCheck,
    /// Algebra, group, measure and unitarity checks.
    GroupSelftest,
    /// Full pipeline of the real-line transform.
    Baseline1d,
    /// Reproducing-kernel samples as CSV.
    Kernel,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => return config_error(&e),
        },
        None => RunConfig::default(),
    };
    if let Some(w) = cli.workers {
        config.workers = w;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Err(e) = config.validate() {
        return config_error(&e);
    }
    if config.workers > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build_global() {
            return config_error(&format!("cannot start {} workers: {e}", config.workers));
        }
    }
    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        return config_error(&format!("cannot create {}: {e}", cli.out.display()));
    }

    let run = Run { config: &config, hash: config.hash(), out: &cli.out };
    let result = match cli.command {
        Command::Admissibility => commands::admissibility_cmd(&run),
        Command::Transform => commands::transform_cmd(&run),
        Command::Qtransform => commands::qtransform_cmd(&run),
        Command::Reconstruct => commands::reconstruct_cmd(&run),
        Command::Qreconstruct => commands::qreconstruct_cmd(&run),
        Command::EnergyCheck => commands::energy_cmd(&run),
        Command::GroupSelftest => commands::selftest_cmd(&run),
        Command::Baseline1d => commands::baseline_cmd(&run),
        Command::Kernel => commands::kernel_cmd(&run),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn config_error(msg: &str) -> ExitCode {
    eprintln!("config error: {msg}");
    ExitCode::from(2)
}

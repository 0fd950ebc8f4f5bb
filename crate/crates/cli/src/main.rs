use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use grasswig::commands::{
    cmd_angles, cmd_aset_probe, cmd_check, cmd_gen_map, cmd_reconstruct, CmdOutput,
};
use grasswig::config::{ExperimentConfig, GeneratorKind, GeneratorSpec, Tolerances};
use grasswig::error::Result;

#[derive(Parser)]
#[command(name = "grasswig", version, about = "Projection-map geometry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a generator and tabulate it into an oracle file.
    GenMap {
        /// Hilbert space dimension.
        #[arg(long)]
        d: usize,
        /// Projection rank.
        #[arg(long)]
        n: usize,
        /// Generator kind.
        #[arg(long, value_enum)]
        kind: GeneratorKind,
        /// Master seed; generator and samples split off it by counter.
        #[arg(long, env = "GRASSWIG_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of random evaluations to tabulate.
        #[arg(long, default_value_t = 24)]
        trials: usize,
        /// Destination file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Probe an oracle file for transition-probability preservation.
    Check {
        /// Oracle file from gen-map.
        oracle: PathBuf,
        #[arg(long, env = "GRASSWIG_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of sampled pairs.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Projection validation tolerance (default scales with d).
        #[arg(long)]
        tol_validate: Option<f64>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify an oracle file and reconstruct the inducing operator.
    Reconstruct {
        /// Oracle file from gen-map.
        oracle: PathBuf,
        #[arg(long, env = "GRASSWIG_SEED", default_value_t = 0)]
        seed: u64,
        /// Projection validation tolerance (default scales with d).
        #[arg(long)]
        tol_validate: Option<f64>,
        /// Acceptable verification residual (default 1e-6).
        #[arg(long)]
        tol_verify: Option<f64>,
        /// Write the classification here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal angles, tr PQ, and adjacency class of two projections.
    Angles {
        /// Projection file for P.
        p: PathBuf,
        /// Projection file for Q.
        q: PathBuf,
        /// Projection validation tolerance (default scales with d).
        #[arg(long)]
        tol_validate: Option<f64>,
        /// Angle threshold separating zero from nonzero (default 1e-7).
        #[arg(long)]
        tol_angle: Option<f64>,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the dimension of the A-set of two projections.
    AsetProbe {
        /// Projection file for P.
        p: PathBuf,
        /// Projection file for Q.
        q: PathBuf,
        #[arg(long, env = "GRASSWIG_SEED", default_value_t = 0)]
        seed: u64,
        /// Grid resolution budget.
        #[arg(long, default_value_t = 8100)]
        samples: usize,
        /// Projection validation tolerance (default scales with d).
        #[arg(long)]
        tol_validate: Option<f64>,
        /// Angle threshold separating zero from nonzero (default 1e-7).
        #[arg(long)]
        tol_angle: Option<f64>,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<CmdOutput> {
    match cli.command {
        Command::GenMap { d, n, kind, seed, trials, out } => {
            let tolerances = Tolerances::resolve(d, None, None, None);
            let config = ExperimentConfig::new(d, n, seed, trials, tolerances)?;
            let spec = GeneratorSpec { kind, seed };
            cmd_gen_map(&config, &spec, &out)
        }
        Command::Check { oracle, seed, trials, tol_validate, out } => {
            let result = cmd_check(&oracle, trials, seed, tol_validate)?;
            deliver(result, out)
        }
        Command::Reconstruct { oracle, seed, tol_validate, tol_verify, out } => {
            let result = cmd_reconstruct(&oracle, seed, tol_validate, tol_verify)?;
            deliver(result, out)
        }
        Command::Angles { p, q, tol_validate, tol_angle, out } => {
            let result = cmd_angles(&p, &q, tol_validate, tol_angle)?;
            deliver(result, out)
        }
        Command::AsetProbe { p, q, seed, samples, tol_validate, tol_angle, out } => {
            let result = cmd_aset_probe(&p, &q, samples, seed, tol_validate, tol_angle)?;
            deliver(result, out)
        }
    }
}

// Routes the JSON to a file when --out was given; stdout handling stays in
// main so library callers keep the string.
fn deliver(result: CmdOutput, out: Option<PathBuf>) -> Result<CmdOutput> {
    if let Some(path) = out {
        fs::write(path, &result.json)?;
        Ok(CmdOutput { json: String::new(), exit: result.exit })
    } else {
        Ok(result)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(output) => {
            if !output.json.is_empty() {
                print!("{}", output.json);
            }
            ExitCode::from(output.exit as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

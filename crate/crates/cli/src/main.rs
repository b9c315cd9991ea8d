use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ifs_spectra_cli::{exit, run, CliError, Command, RunConfig};

/// Spectral analysis of self-affine measures built from Hadamard triples.
#[derive(Parser, Debug)]
#[command(name = "ifs-spectra", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for the parallel routines (default: all cores).
    #[arg(long)]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.out = out.clone();
    }
    cfg.resolve()
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::INPUT } else { exit::PASS };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(n) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("input error: --threads {n}: {e}");
            return ExitCode::from(exit::INPUT as u8);
        }
    }
    let started = Instant::now();
    let result = load(&args).and_then(|cfg| run(args.command, &cfg));
    let code = match result {
        Ok(outcome) => {
            println!("{}", serde_json::to_string_pretty(&outcome.report).expect("report serializes"));
            if let Some(msg) = &outcome.message {
                eprintln!("{} FAILED: {msg}", args.command.name());
            }
            if outcome.pass {
                exit::PASS
            } else {
                exit::FAIL
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    eprintln!("{} finished in {:.2?}", args.command.name(), started.elapsed());
    ExitCode::from(code as u8)
}

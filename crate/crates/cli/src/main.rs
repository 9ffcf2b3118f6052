use std::fs::{self, File};
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lcu_core::experiments::{self, sidecar_path, synthesize_text, Experiment, RunConfig};
use lcu_core::Error;

#[derive(Parser)]
#[command(name = "lcu", version, about = "Collapsed-LCU Hamiltonian simulation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jaynes-Cummings |N,g> -> |N-1,e> transition probability
    JcTransition(RunArgs),
    /// Rabi-Hubbard Mott-state return probability from the reduced vacuum test
    RhOverlap(RunArgs),
    /// Full versus reduced LCU gate counts
    Resources(RunArgs),
    /// Reduced-LCU size for growing Rabi-Hubbard arrays
    Scaling(RunArgs),
    /// Block-encode a Pauli-sum text file and emit OpenQASM 2.0
    Synthesize {
        /// Pauli-sum text file, one `<re> <im> <letters>` term per line
        input: PathBuf,
        /// QASM output path; the JSON report goes next to it
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; the built-in preset is used when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Sample this many shots instead of reading exact probabilities
    #[arg(long)]
    shots: Option<u64>,
    /// Oblivious amplitude amplification rounds
    #[arg(long)]
    oaa: Option<usize>,
    /// Skip merging of parallel terms
    #[arg(long)]
    no_reduction: bool,
}

enum Failure {
    Config(String),
    Guard(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Guard { .. } => Failure::Guard(e.to_string()),
            Error::InvalidSpec(_) | Error::Parse { .. } | Error::Json(_) => Failure::Config(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn load_config(experiment: Experiment, args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            let cfg = RunConfig::from_json(&text)?;
            if cfg.experiment != experiment {
                return Err(Failure::Config(format!(
                    "config is for {:?}, not {experiment:?}",
                    cfg.experiment
                )));
            }
            cfg
        }
        None => RunConfig::preset(experiment),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = args.shots {
        cfg.shots = shots;
    }
    if let Some(rounds) = args.oaa {
        cfg.use_oaa = rounds;
    }
    if args.no_reduction {
        cfg.use_reduction = false;
    }
    if let Some(out) = &args.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run_experiment(experiment: Experiment, args: &RunArgs) -> Result<(), Failure> {
    let cfg = load_config(experiment, args)?;
    let out = experiments::run(&cfg)?;
    match &cfg.output_path {
        Some(path) => {
            experiments::write_output(&out, path)?;
            eprintln!("wrote {} rows to {}", out.table.len(), path.display());
        }
        None => print!("{}", out.table.csv()),
    }
    for note in &out.notes {
        eprintln!("note: {note}");
    }
    Ok(())
}

fn synthesize(input: &PathBuf, out: Option<&PathBuf>) -> Result<(), Failure> {
    let file = File::open(input).map_err(|e| Failure::Config(format!("cannot read {}: {e}", input.display())))?;
    let (qasm, report) = synthesize_text(BufReader::new(file))?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Other(e.to_string()))?;
    match out {
        Some(path) => {
            fs::write(path, qasm).map_err(|e| Failure::Other(e.to_string()))?;
            fs::write(sidecar_path(path, ".json"), &json).map_err(|e| Failure::Other(e.to_string()))?;
            println!("{json}");
        }
        None => print!("{qasm}"),
    }
    if !report.bound_satisfied {
        eprintln!("warning: SELECT uses {} CX, above the bound {}", report.cx_select, report.bound);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::JcTransition(a) => run_experiment(Experiment::JcTransition, a),
        Command::RhOverlap(a) => run_experiment(Experiment::RhOverlap, a),
        Command::Resources(a) => run_experiment(Experiment::Resources, a),
        Command::Scaling(a) => run_experiment(Experiment::Scaling, a),
        Command::Synthesize { input, out } => synthesize(input, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("guard violation: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use quam::cli::{Command, OutputFormat, RunConfig, StorageMethod};
use quam::Error;

#[derive(Parser)]
#[command(
    name = "quam",
    version,
    about = "Associative pattern memory: superposition storage, amplification recall, and a Hopfield baseline"
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum MethodArg {
    #[default]
    Fast,
    Circuit,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Json,
    Csv,
}

impl From<MethodArg> for StorageMethod {
    fn from(arg: MethodArg) -> Self {
        match arg {
            MethodArg::Fast => StorageMethod::Fast,
            MethodArg::Circuit => StorageMethod::Circuit,
        }
    }
}

impl From<FormatArg> for OutputFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

#[derive(Subcommand)]
enum CliCommand {
    /// Store a pattern file and print the resulting superposition
    Store {
        /// Pattern file: one 0/1 pattern per line, '#' comments allowed
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Complete a partial pattern from a stored pattern file
    Recall {
        #[arg(long)]
        patterns: PathBuf,
        /// Partial pattern over 0, 1 and '?' wildcards
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the amplification round count
        #[arg(long)]
        iterations: Option<u32>,
        #[arg(long, value_enum, default_value_t)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Print the closed-form accuracy report for a pattern file and query
    Theory {
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        query: String,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Tabulate success probability against the amplification round count
    Sweep {
        /// Sweep recall of a stored pattern set
        #[arg(long, conflicts_with = "grover")]
        patterns: Option<PathBuf>,
        #[arg(long)]
        query: String,
        /// Sweep a plain search from the uniform superposition instead
        #[arg(long)]
        grover: bool,
        /// Register size for --grover sweeps
        #[arg(long, requires = "grover")]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
    /// Capacity sweep of the classical Hopfield baseline
    Hopfield {
        /// Network size (pattern length)
        #[arg(long, default_value_t = 16)]
        n: usize,
        /// Pattern counts to test
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,6,8,12,16")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
    },
}

impl Cli {
    fn into_config(self) -> RunConfig {
        match self.command {
            CliCommand::Store {
                patterns,
                method,
                format,
            } => {
                let mut cfg = RunConfig::new(Command::Store);
                cfg.patterns = Some(patterns);
                cfg.method = method.into();
                cfg.format = format.into();
                cfg
            }
            CliCommand::Recall {
                patterns,
                query,
                shots,
                seed,
                iterations,
                method,
                format,
            } => {
                let mut cfg = RunConfig::new(Command::Recall);
                cfg.patterns = Some(patterns);
                cfg.query = Some(query);
                cfg.shots = shots;
                cfg.seed = seed;
                cfg.iterations = iterations;
                cfg.method = method.into();
                cfg.format = format.into();
                cfg
            }
            CliCommand::Theory {
                patterns,
                query,
                format,
            } => {
                let mut cfg = RunConfig::new(Command::Theory);
                cfg.patterns = Some(patterns);
                cfg.query = Some(query);
                cfg.format = format.into();
                cfg
            }
            CliCommand::Sweep {
                patterns,
                query,
                grover,
                n,
                format,
            } => {
                let mut cfg = RunConfig::new(Command::Sweep);
                cfg.patterns = patterns;
                cfg.query = Some(query);
                cfg.grover = grover;
                cfg.register_size = n;
                cfg.format = format.into();
                cfg
            }
            CliCommand::Hopfield {
                n,
                m,
                trials,
                seed,
                format,
            } => {
                let mut cfg = RunConfig::new(Command::Hopfield);
                cfg.net_size = n;
                cfg.pattern_counts = m;
                cfg.trials = trials;
                cfg.seed = seed;
                cfg.format = format.into();
                cfg
            }
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match quam::cli::execute(&cli.into_config()) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Input(_) => 1,
                Error::Data(_) | Error::Invariant(_) => 2,
            };
            std::process::exit(code);
        }
    }
}

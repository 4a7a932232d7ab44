mod commands;
mod report;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "kraftlab", version, about = "Kraft-matrix analysis of finite-state encoders")]
struct Cli {
    /// Report format; text on a terminal, JSON otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Worker threads for parallel enumeration.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Cap on enumerated strings.
    #[arg(long, global = true, env = "KRAFTLAB_BUDGET")]
    budget: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Auto,
    Encoder,
    SiEncoder,
    Predictor,
    Quantizer,
    Family,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    Converted,
    Literal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a document against its schema and summarize it.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        kind: Kind,
    },
    /// Kraft-matrix necessity conditions, IL search and baseline comparison.
    Gki {
        encoder: PathBuf,
        /// Block lengths / matrix powers to check.
        #[arg(long = "lmax-powers", value_delimiter = ',', num_args = 1.., default_values_t = [1u64, 2, 4, 8, 16])]
        ells: Vec<u64>,
        #[arg(long = "il-depth", default_value_t = 8)]
        il_depth: usize,
    },
    /// Search for two inputs with equal outputs and end states.
    IlCheck {
        path: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Spectral radius of an encoder's Kraft matrix or of a matrix file.
    Spectral { path: PathBuf },
    /// Joint spectral radius bracket of a side-information Kraft family.
    Jsr {
        path: PathBuf,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Random words tried when the budget cuts the depth.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Individual-sequence compression lower bound.
    Bounds {
        encoder: PathBuf,
        sequence: PathBuf,
        #[arg(long = "ell", value_delimiter = ',', num_args = 1.., default_values_t = [1u64, 2, 3, 4, 5, 6, 7, 8])]
        ells: Vec<u64>,
        /// Start state name; defaults to the encoder's initial state.
        #[arg(long)]
        initial_state: Option<String>,
    },
    /// Incremental parse and the lower bound built on it.
    Lz {
        sequence: PathBuf,
        /// Take s and L_max from this encoder, and its alphabet for parsing.
        #[arg(long)]
        encoder: Option<PathBuf>,
        #[arg(long = "ell", value_delimiter = ',', num_args = 1.., default_values_t = [1u64, 2, 4, 8, 16, 32])]
        ells: Vec<u64>,
        /// Fixed epsilon instead of the default model.
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Run a finite-state predictor; loss lower bound and predictive code length.
    Predict {
        predictor: PathBuf,
        sequence: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        /// Block length of the predictive code.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long = "ell", value_delimiter = ',', num_args = 1.., default_values_t = [1u64, 2, 4, 8])]
        ells: Vec<u64>,
        /// Loss values rho(0), rho(1), ...; Hamming when absent.
        #[arg(long, value_delimiter = ',')]
        loss: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "converted")]
        regime: Regime,
    },
    /// Lossy Kraft chain for a quantizer followed by a block coder.
    Lossy {
        quantizer: PathBuf,
        coder: PathBuf,
        /// Distortion level overriding the quantizer's.
        #[arg(long = "D")]
        level: Option<f64>,
    },
    /// Minimum state Kraft sum against the baseline bound.
    Baseline {
        encoder: PathBuf,
        #[arg(long = "ell", value_delimiter = ',', num_args = 1.., default_values_t = [1u64, 2, 3, 4, 5, 6, 7, 8])]
        ells: Vec<u64>,
    },
}

pub struct Settings {
    pub seed: u64,
    pub budget: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let settings = Settings {
        seed: cli.seed,
        budget: cli.budget.unwrap_or(kraftlab::DEFAULT_BUDGET),
    };
    let report = match commands::run(&cli.command, &settings) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let format = cli.format.unwrap_or_else(|| {
        if cli.output.is_none() && std::io::stdout().is_terminal() {
            Format::Text
        } else {
            Format::Json
        }
    });
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n",
        Format::Text => report.to_text(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, rendered).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    ExitCode::from(report.exit_code() as u8)
}

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use chebbvp::harness::{self, OutputFormat};
use chebbvp::DerivScaling;

#[derive(Parser)]
#[command(name = "bvp", version, about = "Chebyshev collocation solver for linear boundary value problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a problem file and print y and its derivatives on a uniform grid
    Solve {
        file: PathBuf,
        /// Polynomial degree (defaults to the file's `n`, else 16)
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = harness::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Tabulate the error against the exact solution for a range of degrees
    Converge {
        file: PathBuf,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
    },
    /// Run the bundled worked examples against their accuracy thresholds
    Corpus {
        /// Directory holding ex1.bvp .. ex5.bvp
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // clap's own usage-error code (2) would collide with the singular-system code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(harness::EXIT_INVALID as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = match cli.command {
        Command::Solve {
            file,
            n,
            samples,
            format,
        } => {
            let format = match format {
                Format::Csv => OutputFormat::Csv,
                Format::Table => OutputFormat::Table,
            };
            harness::cmd_solve(&file, n, samples, format, &mut out, &mut err)
        }
        Command::Converge {
            file,
            n_min,
            n_max,
            step,
        } => harness::cmd_converge(&file, n_min, n_max, step, &mut out, &mut err),
        Command::Corpus { dir } => {
            let dir = dir.unwrap_or_else(harness::bundled_corpus_dir);
            harness::cmd_corpus(&dir, DerivScaling::ChainRule, &mut out, &mut err)
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}

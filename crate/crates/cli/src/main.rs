use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fpgt_core::{run, Error, InputSpec, MinSupport, OutputMode, RunConfig};

/// Mine closed frequent itemsets and top-k patterns over a sliding window
/// of a transaction stream.
///
/// Input is one transaction per line: comma-separated if the line contains a
/// comma, whitespace-separated otherwise. Blank lines and lines starting
/// with '#' are ignored.
#[derive(Debug, Parser)]
#[command(name = "fpgt", version)]
struct Args {
    /// Window size in transactions.
    #[arg(long)]
    window: usize,

    /// Transactions between mining runs once the window is full.
    #[arg(long, default_value_t = 1)]
    slide: usize,

    /// Fraction of the window (e.g. 0.2) or absolute count (e.g. 3).
    #[arg(long, default_value = "0.2", value_parser = parse_min_support)]
    min_support: MinSupport,

    #[arg(long, default_value_t = 10)]
    top_k: usize,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    output: Format,

    /// Also report frequent itemsets that are not closed.
    #[arg(long)]
    include_nonclosed: bool,

    /// Input file, or '-' for standard input.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn parse_min_support(s: &str) -> Result<MinSupport, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let args = Args::parse();
    let config = RunConfig {
        input: InputSpec::parse(&args.input),
        window: args.window,
        slide: args.slide,
        min_support: args.min_support,
        k: args.top_k,
        output: match args.output {
            Format::Json => OutputMode::JsonLines,
            Format::Text => OutputMode::Text,
        },
        include_nonclosed: args.include_nonclosed,
    };
    if let Err(e) = config.validate() {
        eprintln!("fpgt: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match run(&config, &mut out) {
        Ok(summary) => {
            if summary.source.malformed_lines > 0 {
                eprintln!(
                    "fpgt: skipped {} malformed line(s) of {} read",
                    summary.source.malformed_lines, summary.source.lines_read
                );
            }
            ExitCode::SUCCESS
        }
        Err(Error::InvalidConfig(msg)) => {
            eprintln!("fpgt: invalid configuration: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("fpgt: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}

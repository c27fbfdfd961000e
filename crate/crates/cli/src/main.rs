use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use knomial::{run, Command, Input, RunConfig};

/// Certified real-root isolation for sparse integer polynomials.
#[derive(Parser)]
#[command(name = "knomial", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Isolate all real roots.
    Isolate(Common),
    /// Refine an interval with a sign change to a given width.
    Refine {
        #[command(flatten)]
        common: Common,
        /// Endpoints as dyadics, "m*2^e,m*2^e".
        #[arg(long)]
        interval: String,
    },
    /// Check isolation against the Sturm oracle, for one polynomial or a random corpus.
    Verify(Common),
    /// Statistics over a grid of degrees and term counts.
    Bench(Common),
}

#[derive(Args)]
struct Common {
    /// Polynomial text, e.g. "x^3 - 2x + 1/2".
    #[arg(long, conflicts_with = "file")]
    expr: Option<String>,
    /// File holding polynomial text or JSON {"terms": [[exp, "coeff"], ...]}.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Output intervals narrower than 2^-bits.
    #[arg(long)]
    width_bits: Option<u64>,
    #[arg(long)]
    positive_only: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, short)]
    verbose: bool,
}

fn config(command: Command, c: Common) -> RunConfig {
    let input = match (c.expr, c.file) {
        (Some(e), _) => Some(Input::Expr(e)),
        (None, Some(f)) => Some(Input::File(f)),
        (None, None) => None,
    };
    RunConfig {
        command,
        input,
        width_bits: c.width_bits,
        positive_only: c.positive_only,
        json: c.json,
        stats: c.stats,
        seed: c.seed,
        count: c.count,
        verbose: c.verbose,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.command {
        Cmd::Isolate(c) => config(Command::Isolate, c),
        Cmd::Refine { common, interval } => config(Command::Refine { interval }, common),
        Cmd::Verify(c) => config(Command::Verify, c),
        Cmd::Bench(c) => config(Command::Bench, c),
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    match run(&cfg, &mut out, &mut err) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("knomial: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

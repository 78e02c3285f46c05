use std::fs::File;
use std::io::{self, BufReader, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use transpoly::cli::{run, OutputMode, RunOptions, Session};
use transpoly::DEFAULT_BUDGET;

/// Exact arithmetic and transfinite division on naked polynomials.
#[derive(Parser, Debug)]
#[command(name = "transpoly", version)]
struct Args {
    /// Successor steps allowed per limit segment [env: TRANSPOLY_BUDGET, default: 256]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Print values as JSON documents
    #[arg(long)]
    json: bool,
    /// Continue after a failing command
    #[arg(long)]
    keep_going: bool,
    /// Read commands from a file instead of standard input
    #[arg(long)]
    script: Option<PathBuf>,
}

fn budget(args: &Args) -> Result<usize, String> {
    if let Some(b) = args.budget {
        return Ok(b as usize);
    }
    match std::env::var("TRANSPOLY_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| format!("TRANSPOLY_BUDGET must be a positive integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let budget = match budget(&args) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mode = if args.json { OutputMode::Json } else { OutputMode::Text };
    let mut session = Session::new(budget, mode);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut err = io::stderr();
    let result = match &args.script {
        Some(path) => match File::open(path) {
            Ok(f) => {
                let opts = RunOptions { keep_going: args.keep_going, echo: true, prompt: false };
                run(&mut session, BufReader::new(f), &mut out, &mut err, opts)
            }
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => {
            let stdin = io::stdin();
            let tty = stdin.is_terminal();
            let opts = RunOptions { keep_going: args.keep_going, echo: !tty, prompt: tty };
            run(&mut session, stdin.lock(), &mut out, &mut err, opts)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

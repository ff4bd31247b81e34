use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use invgen::cli::{self, CmdOutput, Format, MethodChoice};
use invgen::oracle::OracleOptions;
use invgen::Result;

/// Invariably generating graphs of PSL(2, q).
#[derive(Parser)]
#[command(name = "invgen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Field {
    /// Field order, a prime power >= 4.
    #[arg(long)]
    q: Option<u64>,
    /// Characteristic, as an alternative to --q.
    #[arg(long, conflicts_with = "q")]
    p: Option<u64>,
    /// Extension degree, with --p.
    #[arg(long, requires = "p")]
    f: Option<u32>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the body here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugacy class inventory.
    Classes {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        output: Output,
    },
    /// Invariably generating class pairs.
    Psi2 {
        #[command(flatten)]
        field: Field,
        #[arg(long, value_enum, default_value = "structural")]
        method: MethodChoice,
        #[command(flatten)]
        output: Output,
    },
    /// The generating graph of PSL(2, q) or of a direct power.
    Graph {
        #[command(flatten)]
        field: Field,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Drop isolated vertices.
        #[arg(long)]
        plus: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Automorphism orbits on the pair table and component bounds.
    Beta {
        #[command(flatten)]
        field: Field,
        #[command(flatten)]
        output: Output,
    },
    /// Check suite over a range of q.
    Verify {
        #[arg(long, default_value = "4..13")]
        q_range: String,
        /// Also run the oracle on q = 16, 25, 27.
        #[arg(long)]
        extended: bool,
        #[command(flatten)]
        output: Output,
    },
}

fn run(command: Command) -> Result<(CmdOutput, Option<PathBuf>)> {
    let q = |f: &Field| cli::resolve_q(f.q, f.p, f.f);
    let oracle = OracleOptions::default();
    Ok(match command {
        Command::Classes { field, output } => (cli::cmd_classes(q(&field)?, output.format)?, output.out),
        Command::Psi2 { field, method, output } => {
            (cli::cmd_psi2(q(&field)?, method, output.format, oracle)?, output.out)
        }
        Command::Graph { field, power, plus, output } => {
            (cli::cmd_graph(q(&field)?, power, plus, output.format)?, output.out)
        }
        Command::Beta { field, output } => (cli::cmd_beta(q(&field)?, output.format)?, output.out),
        Command::Verify { q_range, extended, output } => {
            let (lo, hi) = cli::parse_range(&q_range)?;
            (cli::cmd_verify(lo, hi, extended, output.format, oracle)?, output.out)
        }
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    match run(args.command) {
        Ok((out, path)) => {
            match path {
                Some(p) => {
                    if let Err(e) = std::fs::write(&p, &out.body) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{}", out.body),
            }
            if let Some(s) = out.summary {
                eprintln!("{s}");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

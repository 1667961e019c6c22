mod commands;
mod error;
mod format;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subsetconv::{par, OptMode, ProductMode};

use commands::{ColorReport, HyperMode, RingArg, SteinerAlgo};
use error::{CliError, CliResult};

/// Subset convolution, subset-lattice products and the solvers built on
/// them.
///
/// Exit codes: 0 success, 1 usage error, 2 input format error, 3 infeasible
/// instance, 4 guard or overflow, 5 selftest failure.
#[derive(Debug, Parser)]
#[command(name = "subsetconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn product_mode(s: &str) -> Result<ProductMode, String> {
    s.parse().map_err(|e: subsetconv::Error| e.to_string())
}

fn opt_mode(s: &str) -> Result<OptMode, String> {
    s.parse().map_err(|e: subsetconv::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zeta transform of a table, or Möbius inversion with --invert.
    Zeta {
        #[arg(short = 'i')]
        input: PathBuf,
        #[arg(long)]
        invert: bool,
    },
    /// Ring-valued product of two tables.
    Conv {
        /// subset, cover, pack, icover, exact:<l> or xor.
        #[arg(long, default_value = "subset", value_parser = product_mode)]
        mode: ProductMode,
        #[arg(short = 'a')]
        a: PathBuf,
        #[arg(short = 'b')]
        b: PathBuf,
        #[arg(long, value_enum, default_value = "i64")]
        ring: RingArg,
    },
    /// Min-sum or max-sum product of two tables.
    Optconv {
        /// min or max.
        #[arg(long, default_value = "min", value_parser = opt_mode)]
        opt: OptMode,
        /// subset, cover, icover or exact:<l> (pack and xor also accepted).
        #[arg(long, default_value = "subset", value_parser = product_mode)]
        product: ProductMode,
        #[arg(short = 'a')]
        a: PathBuf,
        #[arg(short = 'b')]
        b: PathBuf,
    },
    /// Minimum Steiner tree.
    Steiner {
        #[arg(short = 'g')]
        graph: PathBuf,
        /// Comma-separated terminals.
        #[arg(short = 't', allow_hyphen_values = true)]
        terminals: String,
        #[arg(long, value_enum, default_value = "fast")]
        algo: SteinerAlgo,
    },
    /// Proper colorings, colorable induced subgraphs or the chromatic number.
    Color {
        #[arg(short = 'g')]
        graph: PathBuf,
        #[arg(short = 'k')]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "count")]
        report: ColorReport,
    },
    /// Ordered packings of k disjoint cliques of size at least l.
    Cliquepack {
        #[arg(short = 'g')]
        graph: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'l')]
        l: usize,
    },
    /// Expected leaf product of the random branching process.
    Branch {
        #[arg(short = 'i')]
        input: PathBuf,
        /// Split probability p/q.
        #[arg(long)]
        alpha: String,
    },
    /// Lightest k-vertex trees with leaves in the allowed set, by color coding.
    Pathway {
        #[arg(short = 'g')]
        graph: PathBuf,
        /// Comma-separated allowed leaves.
        #[arg(long, default_value = "")]
        leaves: String,
        #[arg(short = 'k')]
        k: usize,
        /// Failure probability p/q.
        #[arg(long, default_value = "1/20")]
        delta: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimum connected spanning subhypergraph or spanning hypertree.
    Hyper {
        #[arg(short = 'g')]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "mcsh")]
        mode: HyperMode,
    },
    /// Checks the fast kernels against the reference implementations.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
    },
}

fn threads() -> CliResult<()> {
    match std::env::var("SUBSETCONV_THREADS") {
        Err(_) => Ok(()),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(t) if t > 0 => {
                par::configure_threads(t);
                Ok(())
            }
            _ => Err(CliError::Usage(format!(
                "SUBSETCONV_THREADS must be a positive integer, got `{s}`"
            ))),
        },
    }
}

fn dispatch(command: Command) -> CliResult<String> {
    threads()?;
    match command {
        Command::Zeta { input, invert } => commands::zeta(&input, invert),
        Command::Conv { mode, a, b, ring } => commands::conv(&a, &b, mode, ring),
        Command::Optconv { opt, product, a, b } => commands::optconv(&a, &b, opt, product),
        Command::Steiner { graph, terminals, algo } => commands::steiner(&graph, &terminals, algo),
        Command::Color { graph, k, report } => commands::color(&graph, k, report),
        Command::Cliquepack { graph, k, l } => commands::cliquepack(&graph, k, l),
        Command::Branch { input, alpha } => commands::branch(&input, &alpha),
        Command::Pathway {
            graph,
            leaves,
            k,
            delta,
            seed,
        } => commands::pathway(&graph, &leaves, k, &delta, seed),
        Command::Hyper { graph, mode } => commands::hyper(&graph, mode),
        Command::Selftest { max_n } => selftest::run(max_n),
    }
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                CliError::Infeasible(text) => {
                    emit(text);
                    eprintln!("subsetconv: {e}");
                }
                CliError::SelfTest(text) => emit(&format!("{text}\n")),
                _ => eprintln!("subsetconv: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

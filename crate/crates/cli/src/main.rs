//! `abelcay`: Smith forms, Abelian Cayley digraphs, extremal searches.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "abelcay",
    version,
    about = "Dense Abelian Cayley digraphs and integer-matrix tools"
)]
pub struct Cli {
    /// Output format; not every command supports every format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Search budget in BFS vertex visits.
    #[arg(long, global = true, env = "ABELCAY_BUDGET")]
    pub budget: Option<u64>,

    /// Re-check results by BFS.
    #[arg(long, global = true)]
    pub verify: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Smith normal form of a matrix given as "a,b;c,d".
    Snf { matrix: String },

    /// The scaled circulant family of dimension n and scale m.
    Family {
        n: u64,
        #[arg(default_value_t = 1)]
        m: u64,
    },

    /// Diameter and distance distribution of a Cayley digraph.
    Diameter {
        /// Group such as Z84 or Z4xZ4.
        group: String,
        /// Generators; multi-component ones as "1,2".
        #[arg(required = true, allow_negative_numbers = true)]
        generators: Vec<String>,
    },

    /// Largest cyclic (or Abelian) digraph of degree d and diameter k.
    Search {
        d: u64,
        k: u64,
        /// Search all Abelian groups, not only cyclic ones.
        #[arg(long)]
        abelian: bool,
        /// Start the scan at this order instead of the proven bound.
        #[arg(long)]
        upper: Option<u64>,
        /// Witnesses to print.
        #[arg(long, default_value_t = 8)]
        max_witnesses: usize,
        /// Allow the identity and repeated generators.
        #[arg(long)]
        degenerate: bool,
    },

    /// Degree-3 density table for k = 1..kmax.
    Table {
        kmax: u64,
        /// Search NC_3,k up to this k; larger k use published values.
        #[arg(long, default_value_t = 4)]
        search_up_to: u64,
    },

    /// Minimum distance diagram of a matrix.
    Hyperl {
        /// Matrix literal; omit when using --mn.
        matrix: Option<String>,
        /// Use circ(n, -1, ..., -1) scaled by --m.
        #[arg(long, conflicts_with = "matrix")]
        mn: Option<u64>,
        #[arg(long, default_value_t = 1, requires = "mn")]
        m: u64,
        /// Class cap for the BFS.
        #[arg(long, default_value_t = abelcay::hyperl::DEFAULT_CLASS_CAP)]
        cap: u64,
    },

    /// Lower and upper bounds for degree d and diameter k.
    Bounds { d: u64, k: u64 },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                commands::EXIT_USAGE
            } else {
                0
            });
        }
    };
    let result = commands::run(&cli).and_then(|out| {
        out.warnings.iter().for_each(|w| eprintln!("warning: {w}"));
        match &cli.output {
            Some(path) => std::fs::write(path, &out.body)
                .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
            None => print!("{}", out.body),
        }
        Ok(out.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

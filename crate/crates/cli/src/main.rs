//! `wbcc`: command-line front end for the weak BCC-algebra workbench.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 property absent,
//! 3 not isomorphic.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use serde_json::Value;
use wbcc_core::enumerate::Filter;
use wbcc_core::properties::Scope;
use wbcc_core::{parse_table, Algebra};

#[derive(Parser)]
#[command(
    name = "wbcc",
    version,
    about = "Finite-model workbench for weak BCC-algebras"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for enumeration and audits (default: all processors).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms (i)-(iv); exit 2 when the table is not a weak BCC-algebra.
    Check { file: PathBuf },
    /// Full property vector of a weak BCC-algebra.
    Classify {
        file: PathBuf,
        /// Evaluate the identity catalogue under this scope instead of each
        /// identity's default.
        #[arg(long, value_parser = parse_scope)]
        scope: Option<Scope>,
    },
    /// Minimal elements, branches and greatest elements.
    Branches { file: PathBuf },
    /// The induced operation `x o y` (greatest element of A(x,y)).
    Circle { file: PathBuf },
    /// Audit theorems on files, a saved catalog, or a freshly enumerated order.
    #[command(group(ArgGroup::new("input").required(true).args(["file", "catalog", "order"])))]
    Audit {
        #[arg(long)]
        file: Vec<PathBuf>,
        #[arg(long, value_name = "DIR")]
        catalog: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        order: Option<usize>,
        /// Comma-separated theorem tags, or `all`.
        #[arg(long, default_value = "all")]
        theorems: String,
    },
    /// Enumerate all weak BCC-algebras of an order up to isomorphism.
    Enumerate {
        #[arg(long, value_name = "N")]
        order: usize,
        #[arg(long, value_parser = parse_filter)]
        filter: Option<Filter>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Search for an isomorphism between two tables; exit 3 when none exists.
    Iso { a: PathBuf, b: PathBuf },
}

fn parse_scope(s: &str) -> Result<Scope, String> {
    s.parse()
}

fn parse_filter(s: &str) -> Result<Filter, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// A finished command: the JSON report, its human rendering and the exit
/// code.
pub struct Outcome {
    pub command: &'static str,
    pub inputs: Vec<String>,
    pub result: Value,
    pub human: String,
    pub code: u8,
}

pub fn load(path: &Path) -> Result<Algebra, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let a = parse_table(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    if a.name().is_some() {
        return Ok(a);
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(a.with_name(stem))
}

fn run(cli: Cli) -> Result<Outcome, String> {
    match cli.command {
        Command::Check { file } => report::check(&file),
        Command::Classify { file, scope } => report::classify(&file, scope),
        Command::Branches { file } => report::branches(&file),
        Command::Circle { file } => report::circle(&file),
        Command::Audit {
            file,
            catalog,
            order,
            theorems,
        } => report::audit(&file, catalog.as_deref(), order, &theorems),
        Command::Enumerate { order, filter, out } => {
            report::enumerate(order, filter, out.as_deref())
        }
        Command::Iso { a, b } => report::iso(&a, &b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("wbcc: {e}");
            return ExitCode::from(1);
        }
    }
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                let doc = serde_json::json!({
                    "command": out.command,
                    "inputs": out.inputs,
                    "result": out.result,
                    "exit_code": out.code,
                });
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            } else {
                print!("{}", out.human);
            }
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("wbcc: {msg}");
            ExitCode::from(1)
        }
    }
}

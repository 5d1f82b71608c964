//! Command-line front end for exact vertex enumeration.

pub mod commands;
pub mod hpoly;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_decompose, cmd_modules, cmd_vertices, DecompChoice, DecomposeReport, Failure,
    ModuleOptions, ModulesReport, VertexOptions, VerticesReport,
};
pub use hpoly::HPolyFile;

#[derive(Debug, Parser)]
#[command(
    name = "bwenum",
    version,
    about = "Enumerate the vertices of {x : Sx = b, x >= 0} exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all vertices as exact rationals.
    Vertices {
        input: PathBuf,
        /// Append the row sum(x) = 1.
        #[arg(long)]
        normalize: bool,
        /// Strategy name (`auto` picks exhaustive search on small inputs) or a path to a decomposition file.
        #[arg(long, default_value = "auto")]
        decomp: DecompChoice,
        /// Compare against brute-force support enumeration.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        allow_unbounded: bool,
        #[arg(long, default_value_t = 8)]
        max_exhaustive: usize,
        #[arg(long, default_value_t = bwenum_core::oracle::DEFAULT_CAP)]
        oracle_cap: usize,
    },
    /// Report the variable set and k-module verdicts for column subsets.
    Modules {
        input: PathBuf,
        #[arg(short)]
        k: usize,
        /// Comma-separated column names; examine only this subset.
        #[arg(long, value_delimiter = ',')]
        subset: Option<Vec<String>>,
        /// Examine all subsets up to this size.
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(long)]
        normalize: bool,
        /// Cross-check every verdict against the kernel definition.
        #[arg(long)]
        check: bool,
    },
    /// Build a branch decomposition of the variable-set matroid.
    Decompose {
        input: PathBuf,
        /// Strategy name; `auto` picks exhaustive search on small inputs.
        #[arg(long, default_value = "auto")]
        strategy: DecompChoice,
        #[arg(long, default_value_t = 8)]
        max_exhaustive: usize,
        #[arg(long)]
        normalize: bool,
        /// Write the tree here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &Path) -> Result<HPolyFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    HPolyFile::parse(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| Failure::usage(e.to_string());
    match cmd {
        Command::Vertices {
            input,
            normalize,
            decomp,
            check,
            json,
            allow_unbounded,
            max_exhaustive,
            oracle_cap,
        } => {
            let file = read_input(&input)?;
            let opts = VertexOptions {
                normalize,
                decomp,
                check,
                allow_unbounded,
                max_exhaustive,
                oracle_cap,
            };
            let report = cmd_vertices(&file, &opts)?;
            for w in &report.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            if json {
                writeln!(out, "{}", report.to_json()).map_err(io)?;
            } else {
                write!(out, "{}", report.to_text()).map_err(io)?;
            }
            if let Some(c) = &report.check {
                if c.agrees() {
                    writeln!(err, "check: oracle agrees ({} vertices)", c.oracle_count)
                        .map_err(io)?;
                } else {
                    writeln!(
                        err,
                        "check: MISMATCH, {} oracle vertices missing, {} extra points",
                        c.missing.len(),
                        c.extra.len()
                    )
                    .map_err(io)?;
                }
            }
            Ok(report.exit_code())
        }
        Command::Modules {
            input,
            k,
            subset,
            max_size,
            normalize,
            check,
        } => {
            let file = read_input(&input)?;
            let report = cmd_modules(
                &file,
                &ModuleOptions {
                    k,
                    subset,
                    max_size,
                    normalize,
                    check,
                },
            )?;
            write!(out, "{}", report.to_text()).map_err(io)?;
            Ok(report.exit_code())
        }
        Command::Decompose {
            input,
            strategy,
            max_exhaustive,
            normalize,
            output,
        } => {
            if matches!(strategy, DecompChoice::File(_)) {
                return Err(Failure::usage(
                    "--strategy must be auto, exhaustive or greedy",
                ));
            }
            let file = read_input(&input)?;
            let report = cmd_decompose(&file, &strategy, max_exhaustive, normalize)?;
            let header = format!("# width: {}\n# k: {}\n", report.width, report.k);
            match output {
                Some(path) => {
                    std::fs::write(&path, format!("{header}{}", report.text)).map_err(io)?;
                    writeln!(out, "width: {}\nk: {}", report.width, report.k).map_err(io)?;
                }
                None => write!(out, "{header}{}", report.text).map_err(io)?,
            }
            Ok(commands::EXIT_OK)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::EXIT_USAGE
            } else {
                commands::EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}

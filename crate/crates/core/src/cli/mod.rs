//! Command-line front end.

mod commands;
mod output;

use crate::error::Result;
use crate::lattice::Group;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub use output::Report;

#[derive(Parser, Debug)]
#[command(name = "toral", version, about = "Algebraic models for rational toral G-spectra")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Circle, O2, SO3, Torus2 or SU3.
    #[arg(long, global = true, default_value = "SO3")]
    pub group: Group,
    /// Truncation: the cyclic subgroups C1..CN.
    #[arg(long = "N", global = true, default_value_t = 4)]
    pub n: usize,
    /// Degree window lo:hi.
    #[arg(long, global = true, env = "TORAL_WINDOW", default_value = "-24:8", allow_hyphen_values = true)]
    pub window: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Subgroups of the maximal torus and the cotoral order.
    Poset,
    /// Component structures on subgroups and flags.
    Structure {
        #[arg(long, default_value = "lie")]
        kind: String,
    },
    /// The ring diagrams R̃, R_inv and R_tw on the window.
    Rings,
    /// Quasi-coherence, extendedness and F-continuity of a module.
    CheckQce(ModuleArgs),
    /// Normality of a module given as a normal form over Q[c] or Q[d].
    Normal {
        /// Normal form, e.g. "F0, T2^2-, D1-".
        #[arg(long)]
        module: String,
        /// c (degree -2, with w) or d (degree -4, no w).
        #[arg(long, default_value = "c")]
        ring: String,
    },
    /// Injective resolution of a module.
    Resolve(ModuleArgs),
    /// Ext^{s,t}(X, Y).
    Ext(PairArgs),
    /// The Adams E2 page for [X, Y].
    E2(PairArgs),
    /// Algebraic images of cells.
    Cells {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        cell: Option<String>,
        #[arg(long, default_value = "G")]
        level: crate::diagram::module::Level,
    },
    /// Change of groups along an equal-rank inclusion H<=G.
    ChangeGroups {
        #[arg(long)]
        inclusion: String,
        /// theta_star, theta_upper_star or theta_shriek.
        #[arg(long, default_value = "theta_star")]
        which: String,
        /// Cell in the source category.
        #[arg(long)]
        cell: String,
    },
    /// Run the acceptance checks.
    Selftest {
        /// Reduce the random corpora for a quick run.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ModuleArgs {
    /// A cell (e.g. "sphere+idem:C2") or a module JSON file.
    #[arg(long)]
    pub module: String,
    #[arg(long, default_value = "G")]
    pub level: crate::diagram::module::Level,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long = "X")]
    pub x: String,
    #[arg(long = "Y")]
    pub y: String,
    #[arg(long, default_value = "G")]
    pub level: crate::diagram::module::Level,
    /// Internal degrees lo:hi; defaults from the window.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
}

pub fn parse_range(s: &str) -> Result<(i32, i32)> {
    let bad = || crate::Error::InvalidConfig(format!("range '{s}' should read lo:hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: i32 = a.trim().parse().map_err(|_| bad())?;
    let hi: i32 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(crate::Error::InvalidConfig(format!("empty range {lo}:{hi}")));
    }
    Ok((lo, hi))
}

/// Run a parsed command and return its rendered report with its exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    crate::par::set_jobs(cli.common.jobs);
    let report = commands::dispatch(&cli.common, &cli.command)?;
    Ok((report.render(cli.common.format), report.exit_code))
}

/// Entry point for the binary: parse, run, write, and map errors to exit
/// codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => match &cli.common.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                print!("{text}");
                code
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

//! Command-line front end for `drep-core`: the presentation file format,
//! representation point files, report tables and golden verification.

pub mod commands;
pub mod dsl;
pub mod rep;
pub mod report;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use drep_core::Limits;

pub use dsl::{parse, print, Dga, ParseError, PresentationFile};

/// Bundled example presentations, addressable by name instead of a path.
pub const EXAMPLES: &[(&str, &str)] = &[
    ("ex2d", include_str!("../data/ex2d.drep")),
    ("ex3d", include_str!("../data/ex3d.drep")),
    ("free1", include_str!("../data/free1.drep")),
    ("ground", include_str!("../data/ground.drep")),
    ("dual-numbers", include_str!("../data/dual_numbers.drep")),
    ("kxk", include_str!("../data/kxk.drep")),
];

pub fn example(name: &str) -> Option<&'static str> {
    EXAMPLES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

#[derive(Parser, Debug)]
#[command(name = "drep", version, about = "Derived representation schemes, cyclic homology and trace maps over Q")]
pub struct Cli {
    /// Worker threads for block computations (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a presentation file
    Check { file: PathBuf },
    /// Emit the representation algebra R_V (or the matrix reduction with --nc)
    Build {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        nc: bool,
    },
    /// Weight-truncated homology table
    Homology {
        file: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        nmax: u32,
        #[arg(long)]
        wmax: u32,
        #[arg(long, default_value_t = 0)]
        slack: u32,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Cyclic homology of a finite-dimensional or weight-truncated algebra
    Cyclic {
        file: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        wmax: Option<u32>,
        #[arg(long)]
        reduced: bool,
    },
    /// Trace maps from cyclic chains and the chain-map check
    Trace {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        wmax: u32,
        /// Print every trace value
        #[arg(long)]
        values: bool,
    },
    /// Derived tangent complex at a representation point
    Tangent {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rep: PathBuf,
        #[arg(long, default_value_t = 2)]
        nmax: u32,
    },
    /// Row exactness and square-zero checks for the periodicity bicomplexes
    Periodicity {
        file: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        wmax: u32,
    },
    /// Compare against a committed golden expectation
    Verify { name: String },
}

/// Result of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Ok
        } else {
            Status::Failed
        }
    }

    pub fn and(self, other: Status) -> Status {
        Status::from_bool(self == Status::Ok && other == Status::Ok)
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Block budget: `DREP_MAX_MB` megabytes at roughly 1 KiB per basis element.
pub fn limits_from_env() -> Limits {
    match std::env::var("DREP_MAX_MB").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        Some(mb) => Limits::new((mb.saturating_mul(1024)).max(1)),
        None => Limits::default(),
    }
}

/// Reads a presentation from a path, falling back to a bundled example name.
pub fn load(file: &Path) -> anyhow::Result<PresentationFile> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => match file.to_str().and_then(example) {
            Some(t) => t.to_string(),
            None => anyhow::bail!("cannot read {}: {e}", file.display()),
        },
    };
    dsl::parse(&text).map_err(|e| anyhow::anyhow!("{}:{e}", file.display()))
}

/// Runs one command, writing the report to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> i32 {
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let limits = limits_from_env();
    match commands::dispatch(cli.command, &limits, out) {
        Ok(Status::Ok) => EXIT_OK,
        Ok(Status::Failed) => EXIT_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

//! Command-line front end: reads semigroup tables, monoid families,
//! matrices and graphs, runs the engines in `crystal_core`, and prints a
//! human summary plus an optional JSON report.
//!
//! Exit codes: 0 ok, 1 a certificate failed, 2 bad input.

mod commands;
mod report;
mod schema;
mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Outcome, Report, Status};
pub use schema::schemas;
pub use suite::{verify_suite, CatalogSource, SuiteItem, SuiteKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "crystal", version, about = "Crystals, KMS states and K-theory quotients of scaled semigroups")]
pub struct Cli {
    /// Also write the JSON report to this path (`-` for stdout instead of the summary).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,

    /// Print the JSON schemas of every input and report format, then exit.
    #[arg(long)]
    pub emit_schema: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Crystal, boundary set and groupoid certificate of a finite scaled inverse semigroup.
    Crystal(CrystalArgs),
    /// Truncated partition function of a scaled monoid.
    Zeta(ZetaArgs),
    /// KMS state value on a spanning element.
    Kms(KmsArgs),
    /// Ground state value on a spanning element.
    Ground(GroundArgs),
    /// Smith forms, cokernels and quotient comparisons.
    #[command(subcommand)]
    Ktheory(KtheoryCommand),
    /// Runs the certificate and property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CrystalArgs {
    /// Cayley table file.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub table: Option<PathBuf>,
    /// Name of a built-in catalog semigroup, e.g. `B2(2)`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Largest number of nonzero idempotents for filter enumeration.
    #[arg(long, default_value_t = crystal_core::finite::DEFAULT_IDEMPOTENT_BOUND)]
    pub bound: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Free,
    Abelian,
    Axb,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Built-in family.
    #[arg(long, conflicts_with = "family_file", required_unless_present = "family_file")]
    pub family: Option<FamilyName>,
    /// Comma-separated generator weights, e.g. `2,3/2`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<String>,
    /// Family descriptor file `{"family": ..., "weights": [...]}`.
    #[arg(long)]
    pub family_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub beta: f64,
    /// Largest class scale included, as `p/q`.
    #[arg(long)]
    pub cutoff: Option<String>,
}

#[derive(Debug, Args)]
pub struct KmsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Query file `{"beta", "cutoff", "trace", "element"}`; flags override its fields.
    #[arg(long)]
    pub query: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub cutoff: Option<String>,
    /// Trace file `{"weights": [...], "angles": [[turns]]}`; defaults to the trivial character.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Spanning element as JSON, e.g. `{"s": [1, 1], "t": [0, 1]}`.
    #[arg(long)]
    pub element: Option<String>,
}

#[derive(Debug, Args)]
pub struct GroundArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub element: String,
}

#[derive(Debug, Subcommand)]
pub enum KtheoryCommand {
    /// Smith normal form `U A V = D` of an integer matrix.
    Smith {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Invariants of `Z^cols / rowspace`.
    Cokernel {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// `M/tM` and `M/(1-t)M` for a module over `Z[t]`.
    Quotients {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Rational dimensions of `M/tM` and `M/(1-t)M` with the hypotheses of the comparison.
    Circle {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Matrix induced on `Z^V` by a substitution of vertex projections.
    Graph {
        /// Graph file; defaults to the built-in six-vertex graph.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Substitution file; defaults to moving the edge `e`.
        #[arg(long)]
        substitution: Option<PathBuf>,
    },
    /// Cokernels of `1 - t` and `t` on the truncated orbit model.
    Dynam {
        #[arg(long)]
        cycle: usize,
        #[arg(long)]
        truncation: usize,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteKind::All)]
    pub suite: SuiteKind,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Directory of Cayley table files replacing the built-in catalog.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
}

pub(crate) fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Crystal(_) => "crystal",
        Command::Zeta(_) => "zeta",
        Command::Kms(_) => "kms",
        Command::Ground(_) => "ground",
        Command::Ktheory(_) => "ktheory",
        Command::Verify(_) => "verify",
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    if cli.emit_schema {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&schemas()).expect("schemas serialize"));
        return 0;
    }
    let Some(command) = &cli.command else {
        let _ = writeln!(err, "error: a subcommand is required (see --help)");
        return 2;
    };
    let name = command_name(command);
    let outcome = commands::dispatch(command)
        .unwrap_or_else(|e| Outcome { human: format!("error: {e}\n"), report: Report::error(name, e.to_string()) });
    let to_stdout = cli.json.as_deref() == Some(Path::new("-"));
    if outcome.report.status == Status::Error {
        let _ = write!(err, "{}", outcome.human);
    } else if !to_stdout {
        let _ = write!(out, "{}", outcome.human);
    }
    match cli.json.as_deref() {
        Some(p) if p == Path::new("-") => {
            let _ = write!(out, "{}", outcome.report.to_json());
        }
        Some(p) => {
            if let Err(e) = std::fs::write(p, outcome.report.to_json()) {
                let _ = writeln!(err, "error: cannot write {}: {e}", p.display());
                return 2;
            }
        }
        None => {}
    }
    outcome.report.status.exit_code()
}

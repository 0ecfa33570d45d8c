//! `schemoid`: command-line access to the schemoid toolkit.
//!
//! Constructions (`gen`, `embed-scheme`, `from-groupoid`, `to-groupoid`,
//! `thicken`, `extend`, `examples <name>`) always print interchange JSON so
//! they can be piped. Analyses print text, or a versioned JSON report with
//! `--json`. Exit codes: 0 success, 1 domain error, 2 usage error.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schemoid::Ring;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "schemoid",
    version,
    about = "Quasi-schemoids, association schemoids and their algebras"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit a versioned JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Coefficient field for algebras: Q, F2, F3, ...
    #[arg(long, global = true, default_value = "Q", value_parser = parse_ring)]
    pub ring: Ring,
    /// Seed for candidate ordering in isomorphism searches.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

fn parse_ring(s: &str) -> Result<Ring, String> {
    s.parse::<Ring>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a category, groupoid, scheme, schemoid or extension document.
    Validate { input: String },
    /// Structural report: unitality, (P), algebra unit, thinness.
    Analyze { input: String },
    /// Nonzero structure constants p^mu_{sigma,tau}.
    Constants { input: String },
    /// The schemoid algebra as a structure tensor.
    Algebra { input: String },
    /// Dimension of the Terwilliger algebra at an object.
    Terwilliger {
        input: String,
        /// Object name; defaults to the first object.
        #[arg(long)]
        object: Option<String>,
    },
    /// The complete-graph schemoid of a scheme or coherent configuration.
    EmbedScheme { input: String },
    /// The pair schemoid of a groupoid.
    FromGroupoid { input: String },
    /// The groupoid of blocks of a semi-thin association schemoid.
    ToGroupoid { input: String },
    /// Round trips between groupoids and thin schemoids, with witnesses.
    RoundtripCheck { input: String },
    /// Admissibility, multiplicities and the induced algebra map of a morphism.
    Admissible {
        source: String,
        target: String,
        functor: String,
    },
    /// Cohomology of a category with coefficients in a natural system.
    Cohomology {
        category: String,
        system: String,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// The linear extension classified by a 2-cocycle.
    Extend {
        /// A category, or a schemoid whose partition is lifted.
        category: String,
        system: String,
        cocycle: String,
    },
    /// Search for a section of an extension.
    Split { extension: String },
    /// Decide equivalence of two extensions over the same base.
    Equivalent { first: String, second: String },
    /// Thicken a scheme, or build a framed category from a transitive matrix.
    Thicken(ThickenArgs),
    /// Generate association schemes.
    #[command(subcommand)]
    Gen(GenCommand),
    /// List the example corpus or print one entry.
    Examples {
        name: Option<String>,
        /// Half-width of the zigzag window.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Re-verify every corpus entry against its recorded expectations.
    Selftest,
}

#[derive(Args, Debug)]
pub struct ThickenArgs {
    /// Scheme JSON (omit with --matrix).
    pub scheme: Option<String>,
    /// Thickness per class, comma separated; one value applies to all classes.
    #[arg(long, value_delimiter = ',', conflicts_with = "matrix")]
    pub z: Vec<usize>,
    /// Transitive matrix JSON (rows of hom-set sizes).
    #[arg(long, conflicts_with = "scheme")]
    pub matrix: Option<String>,
    /// Grouping of the non-frame morphisms.
    #[arg(long, value_enum, default_value_t = ResidualArg::Lump, requires = "matrix")]
    pub residual: ResidualArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualArg {
    Lump,
    Singletons,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Hamming scheme H(n, q).
    Hamming { n: usize, q: usize },
    /// Thin scheme of a group given by its Cayley table.
    GroupScheme {
        /// Cayley table as inline JSON, a path, or `-`.
        #[arg(required_unless_present = "cyclic")]
        table: Option<String>,
        /// Use the cyclic group of this order instead of a table.
        #[arg(long, conflicts_with = "table")]
        cyclic: Option<usize>,
    },
    /// Orbits on pairs of the group generated by permutations.
    Orbits {
        /// Number of points.
        n: usize,
        /// Generators as inline JSON `[[...], ...]`, a path, or `-`.
        generators: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.global.json;
    // a closed downstream pipe is not an error worth reporting
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli) {
        Ok(out) => {
            let _ = write!(stdout, "{out}");
            ExitCode::from(out.exit_code())
        }
        Err(failure) => {
            let diagnostic = failure.to_json();
            if json {
                let _ = writeln!(
                    stdout,
                    "{}",
                    serde_json::to_string_pretty(&diagnostic).expect("serializable")
                );
            }
            eprintln!("{failure}");
            if !json {
                eprintln!("{diagnostic}");
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

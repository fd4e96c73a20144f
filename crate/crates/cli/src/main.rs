//! `curveclass`: command-line frontend. Every command prints one JSON document
//! on standard output. Exit codes: 0 success, 1 domain error, 2 usage error.

mod cache;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "curveclass", version, about = "Exact divisor-class computations on rational and ruled surfaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Indentation of the JSON output; 0 prints a single line.
    #[arg(long, global = true, default_value_t = 2)]
    pub json_indent: usize,
    /// Directory for cached enumerations and orbits. Caching is off unless set.
    #[arg(long, global = true, env = "CURVECLASS_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Recompute cached results and fail if they differ.
    #[arg(long, global = true)]
    pub verify_cache: bool,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArg {
    /// Surface descriptor as JSON or a path to a JSON file, e.g.
    /// '{"kind":"rational_blowup","k":8}'.
    #[arg(long)]
    pub surface: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a surface: basis, Gram matrix, canonical class.
    Surface {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Numerical invariants of a class.
    Invariants {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
    },
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    #[command(subcommand)]
    Cremona(CremonaCmd),
    #[command(subcommand)]
    Sw(SwCmd),
    #[command(subcommand)]
    Nef(NefCmd),
    /// Decompositions of a class into multiples of pool classes.
    Decompose {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
        /// JSON array of class strings, inline or as a file path.
        #[arg(long)]
        pool: String,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        all_rational: bool,
        #[arg(long, default_value_t = curveclass::config::DEFAULT_MAX_MULTIPLICITY)]
        max_multiplicity: u32,
    },
    #[command(subcommand)]
    Fixtures(FixturesCmd),
    #[command(subcommand)]
    Cubic(CubicCmd),
}

#[derive(Subcommand, Debug)]
pub enum EnumerateCmd {
    /// Classes with e² = K·e = -1 represented by embedded spheres.
    Exceptional {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Classes with e² = -2, K·e = 0 (rational blowups with k ≤ 8).
    Roots {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Genus-zero classes of negative fiber degree on a ruled surface.
    RuledNegative {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
    /// Canonical forms of spherical classes, or the match for one class.
    Spherical {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CremonaCmd {
    Reduce {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
    },
    Equivalent {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class_a: String,
        #[arg(long)]
        class_b: String,
        #[arg(long, default_value_t = curveclass::cremona::DEFAULT_ORBIT_BOUND)]
        max_size: usize,
    },
    Orbit {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = curveclass::cremona::DEFAULT_ORBIT_BOUND)]
        max_size: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SwCmd {
    /// Forward-chaining deduction of SW statuses with justification chains.
    Deduce {
        #[command(flatten)]
        surface: SurfaceArg,
        /// JSON array of class strings, inline or as a file path.
        #[arg(long)]
        targets: String,
        /// JSON object {"positive_curve_classes": [...], "known_nonzero": [...]}.
        #[arg(long)]
        axioms: Option<String>,
    },
    /// The wall-crossing number of a class.
    WallCrossing {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum NefCmd {
    /// Search for classes pairing negatively with the target.
    Check {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        class: String,
        /// JSON array of classes with known nonzero SW invariant.
        #[arg(long)]
        pool: Option<String>,
        #[arg(long, default_value_t = curveclass::nef::DEFAULT_SEARCH_BOUND)]
        bound: i64,
        #[arg(long, default_value_t = curveclass::sw::DEFAULT_COEFFICIENT_BOUND)]
        tameness_bound: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum FixturesCmd {
    /// Run the built-in example fixtures.
    Run,
}

#[derive(Args, Debug, Clone)]
pub struct CubicArgs {
    /// Weierstrass coefficients "a,b" of y² = x³ + ax + b.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// JSON array of points, e.g. '[["0","0"],["1","0"]]' or "infinity".
    #[arg(long)]
    pub points: String,
    /// The zero of the addition law; defaults to the point at infinity.
    #[arg(long)]
    pub zero: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum CubicCmd {
    /// Third intersection of the line through two points.
    Third(CubicArgs),
    /// f₁ addition of two points with the chosen zero.
    Add(CubicArgs),
    /// Both sides of the associativity identity for three points.
    Assoc(CubicArgs),
    /// Conic through five points and its sixth intersection with the curve.
    Conic6(CubicArgs),
    /// Ninth base point of the pencil of cubics through eight plane points.
    Cb {
        /// JSON array of eight points [x, y] or [X, Y, Z].
        #[arg(long)]
        points: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let indent = cli.global.json_indent;
    let (doc, code) = match commands::run(cli) {
        Ok(v) => (v, ExitCode::SUCCESS),
        Err(e) => (e.to_json(), ExitCode::from(e.exit_code() as u8)),
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not an error for a filter-style tool
    let _ = writeln!(stdout, "{}", output::to_string(&doc, indent));
    code
}

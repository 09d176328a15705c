mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "syzygy",
    version,
    about = "Betti numbers of elliptic normal curves, their scrolls and secant varieties"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Characteristic of the prime field.
    #[arg(long, global = true, default_value_t = syzygy_core::exactlin::DEFAULT_PRIME)]
    pub prime: u64,
    /// Seed for every random choice (points, divisors, secant samples).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = OrientationArg::Paper)]
    pub orientation: OrientationArg,
    /// Directory for cached reports (overridden by SYZYGY_CACHE).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Coefficient a of y^2 = x^3 + a x + b.
    #[arg(long = "curve-a", global = true, default_value_t = 2, allow_negative_numbers = true)]
    pub curve_a: i64,
    /// Coefficient b of y^2 = x^3 + a x + b.
    #[arg(long = "curve-b", global = true, default_value_t = 3, allow_negative_numbers = true)]
    pub curve_b: i64,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// Degree of the elliptic normal curve (ambient P^{n-1}).
    #[arg(long)]
    pub n: Option<usize>,
    /// Secant parameter: Sec_{d-1} E and scrolls of degree-d divisors.
    #[arg(long)]
    pub d: Option<usize>,
    /// Genus for bielliptic curves.
    #[arg(long)]
    pub g: Option<usize>,
    /// Degree of a rational normal curve, or rows of a generic matrix.
    #[arg(long)]
    pub k: Option<usize>,
    /// Columns of a generic matrix.
    #[arg(long)]
    pub l: Option<usize>,
    /// Twist i of a strand term (the term sits at homological step i - d + 1).
    #[arg(long, alias = "i")]
    pub step: Option<usize>,
    /// Twist j for the cohomology table of Ω^i(j).
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<i64>,
    #[arg(long, default_value_t = 20)]
    pub max_bundles: usize,
    /// Random divisors per scroll check.
    #[arg(long, default_value_t = 3)]
    pub divisors: usize,
    #[arg(long, default_value_t = 20)]
    pub max_n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a closed formula.
    Formula {
        #[arg(value_enum)]
        what: FormulaKind,
        #[command(flatten)]
        params: Params,
    },
    /// Shortcut for `formula betti`.
    Betti(Params),
    /// Shortcut for `formula degree`.
    Degree(Params),
    /// Shortcut for `formula kpe`.
    Kpe(Params),
    /// Shortcut for `formula rf`.
    Rf(Params),
    /// Shortcut for `formula bott`.
    Bott(Params),
    /// Render a Betti diagram.
    Diagram {
        #[arg(value_enum)]
        kind: DiagramKind,
        #[command(flatten)]
        params: Params,
    },
    /// Run a verification suite; exit status 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationArg {
    Paper,
    Macaulay,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaKind {
    Betti,
    En,
    Degree,
    Kpe,
    Rf,
    Family,
    Det,
    Intersection,
    Bott,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramKind {
    Secant,
    Scroll,
    Cone,
    Bielliptic,
    Rf,
    Rnc,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Koszul,
    Span,
    Smoothness,
    Identities,
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Formula { what, params } => commands::formula(g, *what, params),
        Command::Betti(p) => commands::formula(g, FormulaKind::Betti, p),
        Command::Degree(p) => commands::formula(g, FormulaKind::Degree, p),
        Command::Kpe(p) => commands::formula(g, FormulaKind::Kpe, p),
        Command::Rf(p) => commands::formula(g, FormulaKind::Rf, p),
        Command::Bott(p) => commands::formula(g, FormulaKind::Bott, p),
        Command::Diagram { kind, params } => commands::diagram(g, *kind, params),
        Command::Verify { suite, params } => commands::verify(g, *suite, params),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.global.format {
                Format::Text => print!("{}", report.text()),
                Format::Json => print!("{}", report.json()),
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

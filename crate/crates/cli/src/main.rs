use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use render::Output;

#[derive(Parser, Debug)]
#[command(name = "laxalg", version, about = "Exact pseudo-differential operators and Gelfand-Dickey brackets")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Truncation depth: tails are kept down to D^-depth.
    #[arg(long, global = true, default_value_t = 6)]
    pub depth: u32,

    /// Random functional pairs per verification.
    #[arg(long, global = true, default_value_t = 10)]
    pub samples: usize,

    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, env = "LAXALG_FORMAT", default_value_t = Format::Text)]
    pub format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Commuting symbols in Xi and the dispersionless Adler map.
    #[arg(long, global = true)]
    pub classical: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose two operators.
    Mul { a: String, b: String },
    /// Invert a monic operator down to D^-depth.
    Inv { a: String },
    /// The Adler map J_L(X) = (LX)+ L - L (XL)+.
    Adler {
        #[arg(long)]
        lax: String,
        #[arg(long)]
        x: String,
    },
    /// The second bracket {F, G} at a Lax operator.
    Bracket {
        #[arg(long)]
        lax: String,
        #[arg(long = "F")]
        f: String,
        #[arg(long = "G")]
        g: String,
    },
    /// The Poisson operators D_ij of every certified pair of fields.
    Matrix {
        #[arg(long)]
        lax: String,
        /// Impose u1 = 0 (the first coefficient below the top must be absent).
        #[arg(long)]
        reduced: bool,
    },
    /// Complete a gradient on the u1 = 0 surface by solving res[X, L] = 0.
    ReduceGradient {
        #[arg(long)]
        lax: String,
        /// Take the gradient of this functional.
        #[arg(long = "F", conflicts_with = "component")]
        f: Option<String>,
        /// Give a component directly, as `slot=poly` (repeatable).
        #[arg(long)]
        component: Vec<String>,
    },
    /// Check a theorem mechanically.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub what: Theorem,
    #[arg(long = "A")]
    pub a: Option<String>,
    #[arg(long = "B")]
    pub b: Option<String>,
    #[arg(long)]
    pub lax: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    /// Truncation floor of the expanded operator (default: -depth).
    #[arg(long, allow_hyphen_values = true)]
    pub floor: Option<i32>,
    /// For theorem3: which half of the factorisation theorem.
    #[arg(long, value_enum, default_value_t = Case::Product)]
    pub case: Case,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    Theorem1,
    Theorem2,
    Theorem3,
    Kw,
    Kwy,
    Corollary2,
    Power,
    Jacobi,
    ReducedInverse,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Product,
    Inverse,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Mul { a, b } => commands::mul(&cli.global, a, b),
        Command::Inv { a } => commands::inv(&cli.global, a),
        Command::Adler { lax, x } => commands::adler(&cli.global, lax, x),
        Command::Bracket { lax, f, g } => commands::bracket(&cli.global, lax, f, g),
        Command::Matrix { lax, reduced } => commands::matrix(&cli.global, lax, *reduced),
        Command::ReduceGradient { lax, f, component } => {
            commands::reduce_gradient(&cli.global, lax, f.as_deref(), component)
        }
        Command::Verify(args) => commands::verify(&cli.global, args),
    };
    match result {
        Ok(out) => emit(&cli.global, out),
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("  window: tails truncated below D^-{}", cli.global.depth);
            ExitCode::from(2)
        }
    }
}

fn emit(global: &Global, out: Output) -> ExitCode {
    let code = match out.passed {
        Some(false) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    };
    let mut text = out.body;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &global.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    code
}

//! `ternfrac`: command-line front end for ternfrac-core.
//!
//! Results go to stdout, one record per line; messages go to stderr.
//! Exit codes: 0 success, 1 negative answer (no representation, failed
//! check), 2 usage error or refused by a cost guard, 3 run halted with a
//! checkpoint, 4 any other failure.

mod cmd;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ternfrac",
    version,
    about = "Ternary and binary Egyptian fractions: enumeration, counting, sums over primes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the k-term representations of num/den.
    Repr(ReprArgs),
    /// Print A_k(n).
    Count(CountArgs),
    /// Classify ternary representations of m/p as trivial, Type I or Type II.
    Classify(ClassifyArgs),
    /// Partial sums of A_2 and A_3 over primes, as CSV.
    Sum(SumArgs),
    /// Run an invariant suite.
    Verify(VerifyArgs),
    /// Report-only diagnostics.
    #[command(subcommand)]
    Diag(DiagCommand),
}

#[derive(Args)]
pub struct ReprArgs {
    #[arg(long)]
    pub num: u64,
    #[arg(long)]
    pub den: u64,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// brute, param (six-parameter witnesses) or structure (prime denominators)
    #[arg(long, default_value = "brute")]
    pub method: String,
    #[arg(long)]
    pub force: bool,
}

#[derive(Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    /// brute or structure (n must be prime)
    #[arg(long, default_value = "brute")]
    pub method: String,
    /// Also print the count restricted to numerators coprime to n.
    #[arg(long)]
    pub coprime: bool,
    #[arg(long)]
    pub force: bool,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub p: u64,
    /// Denominators of one triple; omit to classify every representation.
    #[arg(num_args = 3, value_names = ["M1", "M2", "M3"])]
    pub triple: Vec<u64>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Args)]
pub struct SumArgs {
    #[arg(long)]
    pub x_max: u64,
    /// Comma-separated ascending x values; default is powers of two from 64 plus x_max.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<u64>>,
    #[arg(long, default_value = "structure")]
    pub method: String,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Resume from and save progress to this file.
    #[arg(long)]
    pub checkpoint: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[arg(long)]
    pub force: bool,
    #[arg(long, hide = true)]
    pub batch_primes: Option<usize>,
    #[arg(long, hide = true)]
    pub halt_after_batches: Option<usize>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// lemma1, dichotomy, binary or structure
    #[arg(long)]
    pub suite: String,
    #[arg(long)]
    pub bound: Option<u64>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Subcommand)]
pub enum DiagCommand {
    /// sum_{a<=t} tau(n - a) / (t ln t)
    TauShift {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
    },
    /// Shift diagnostic at t = n/2 over random n.
    Sweep {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Coprime bilinear divisor sum, normalized.
    Bilinear {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        force: bool,
    },
    /// The binary-sum constant and the zeta(3) enclosure behind it.
    Constant,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Repr(a) => cmd::repr(&a),
        Command::Count(a) => cmd::count(&a),
        Command::Classify(a) => cmd::classify(&a),
        Command::Sum(a) => cmd::sum(&a),
        Command::Verify(a) => cmd::verify(&a),
        Command::Diag(d) => cmd::diag(&d),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(cmd::exit_code(&e))
        }
    }
}

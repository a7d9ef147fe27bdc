use std::path::PathBuf;
use std::process::ExitCode;

use brst::report::{run, to_csv, to_json, to_text, RunConfig, Suite};
use brst::{BrstError, Family};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "brst", about = "Exact anomalous BRST cohomology for simple Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural identity suite.
    Verify(Opts),
    /// Relative, bigraded, absolute and classical cohomology.
    Cohomology(Opts),
    /// The Laplacian residual experiment.
    Conjecture(Opts),
    /// Everything.
    All(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    CsvSummary,
    Text,
}

#[derive(Args)]
struct Opts {
    /// Algebra family (A, B, C, D, E, F, G).
    #[arg(long)]
    algebra: String,
    #[arg(long)]
    rank: usize,
    /// Highest weight in Dynkin labels, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    lambda: Vec<i64>,
    /// Anomaly weight chi in Dynkin labels, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    chi: Vec<i64>,
    /// Accept a dominant chi on a chamber wall.
    #[arg(long)]
    allow_singular_chi: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest slice dimension materialised.
    #[arg(long, env = "BRST_MAX_DIM", default_value_t = 1 << 16)]
    max_dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (suite, o) = match cli.command {
        Command::Verify(o) => (Suite::Identities, o),
        Command::Cohomology(o) => (Suite::Cohomology, o),
        Command::Conjecture(o) => (Suite::Conjecture, o),
        Command::All(o) => (Suite::All, o),
    };
    if let Some(n) = o.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool");
    }
    let family: Family = match o.algebra.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("--algebra: {e}");
            return ExitCode::from(4);
        }
    };
    let cfg = RunConfig {
        family,
        rank: o.rank,
        lambda: o.lambda,
        chi: o.chi,
        suite,
        allow_singular_chi: o.allow_singular_chi,
        max_dim: o.max_dim,
        seed: o.seed,
    };
    let start = std::time::Instant::now();
    let rep = match run(&cfg) {
        Ok(r) => r,
        Err(e @ (BrstError::Config(_) | BrstError::DimensionLimit { .. })) => {
            eprintln!("{e}");
            return ExitCode::from(4);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    eprintln!("finished in {:.2?}", start.elapsed());
    let body = match o.format {
        Format::Json => to_json(&rep),
        Format::CsvSummary => to_csv(&rep),
        Format::Text => to_text(&rep),
    };
    match &o.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, body) {
                eprintln!("writing {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(rep.exit_code() as u8)
}

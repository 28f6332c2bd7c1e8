mod commands;
mod corpus;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "logdiv", version, about = "Free divisors, Bernstein-Sato polynomials and Spencer complexes")]
struct Cli {
    /// Run the built-in example suite and assert its classification table.
    #[arg(long)]
    corpus: bool,
    /// Worker threads for --corpus.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the corpus report here instead of standard output.
    #[arg(long = "json", value_name = "OUT", requires = "corpus")]
    corpus_json: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Freeness, weights, Koszul and linear jacobian type.
    Classify(Opts),
    /// Logarithmic derivations and the Saito basis used by the other commands.
    Logder(Opts),
    /// The annihilators ζ_i of f^s and their total symbols.
    Theta(Opts),
    /// Kernel of the Rees map s ↦ f t, ξ_i ↦ f_i t.
    ReesKernel(Opts),
    /// Bernstein-Sato polynomial with an operator certificate.
    Bfunction(Opts),
    /// Exactness and specialization checks on a truncated Spencer complex.
    SpencerVerify(Opts),
    /// Integrability of a logarithmic connection.
    IlcCheck(Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Logder(_) => "logder",
            Command::Theta(_) => "theta",
            Command::ReesKernel(_) => "rees-kernel",
            Command::Bfunction(_) => "bfunction",
            Command::SpencerVerify(_) => "spencer-verify",
            Command::IlcCheck(_) => "ilc-check",
        }
    }

    fn opts(&self) -> &Opts {
        match self {
            Command::Classify(o)
            | Command::Logder(o)
            | Command::Theta(o)
            | Command::ReesKernel(o)
            | Command::Bfunction(o)
            | Command::SpencerVerify(o)
            | Command::IlcCheck(o) => o,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PairArg {
    Theta,
    Logder,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Polynomial, e.g. "x^2 - y^3".
    pub expr: Option<String>,
    /// Read the polynomial from a file.
    #[arg(long, value_name = "PATH", conflicts_with = "expr")]
    pub file: Option<PathBuf>,
    /// Declared variables, in ring order.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Variable weights making f weighted homogeneous.
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<i64>>,
    /// Weight bound W of the graded truncation.
    #[arg(long, value_name = "W")]
    pub trunc_weight: Option<i64>,
    /// Total-order bound N.
    #[arg(long, value_name = "N")]
    pub trunc_order: Option<u32>,
    /// x-degree bound M of the filtration box (non-homogeneous f).
    #[arg(long, value_name = "M")]
    pub x_degree: Option<u32>,
    /// Abort Gröbner computations past this total degree.
    #[arg(long, value_name = "D")]
    pub degree_cap: Option<u32>,
    /// Cancel Gröbner computations after this many seconds.
    #[arg(long, value_name = "SECS")]
    pub deadline: Option<f64>,
    /// Write the report here; a short summary goes to standard output.
    #[arg(long, value_name = "OUT")]
    pub json: Option<PathBuf>,
    /// Connection in JSON: {"rank": r, "matrices": [...]}, over the basis printed by logder.
    #[arg(long, value_name = "PATH")]
    pub ilc: Option<PathBuf>,
    /// Use the line bundle O(mD).
    #[arg(long, value_name = "M", allow_negative_numbers = true)]
    pub twist: Option<i64>,
    /// Lie-Rinehart pair for spencer-verify.
    #[arg(long, value_enum)]
    pub pair: Option<PairArg>,
    /// Write the truncated complex as plain-text matrices.
    #[arg(long, value_name = "PATH")]
    pub export: Option<PathBuf>,
    /// Add wall-clock timing outside the hashed body.
    #[arg(long)]
    pub timing: bool,
}

fn emit(report: &Report, out: Option<&PathBuf>) -> Result<(), String> {
    let text = report.to_pretty();
    let line = match out {
        Some(path) => {
            std::fs::write(path, format!("{text}\n")).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            report.summary()
        }
        None => text,
    };
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let (report, out, timing) = match (&cli.command, cli.corpus) {
        (Some(_), true) => {
            eprintln!("error: --corpus does not take a command");
            return ExitCode::from(1);
        }
        (None, false) => {
            eprintln!("error: a command or --corpus is required (see --help)");
            return ExitCode::from(1);
        }
        (None, true) => {
            if cli.jobs == 0 {
                eprintln!("error: --jobs must be at least 1");
                return ExitCode::from(1);
            }
            (corpus::run(cli.jobs), cli.corpus_json.clone(), false)
        }
        (Some(cmd), false) => {
            let opts = cmd.opts();
            (commands::run(cmd.name(), opts), opts.json.clone(), opts.timing)
        }
    };
    let mut report = report;
    if timing {
        report.set_timing(start.elapsed().as_secs_f64());
    }
    if let Some(m) = report.message() {
        eprintln!("{m}");
    }
    if let Err(e) = emit(&report, out.as_ref()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.code())
}

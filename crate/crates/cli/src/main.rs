mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;
use report::Builder;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Exact checks on finite groupoids, profunctors and spans.
#[derive(Debug, Parser)]
#[command(name = "gpdact", version)]
struct Cli {
    /// Output format of the report.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
    /// Record the time spent on each check; makes the report nondeterministic.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a groupoid, profunctor or span file and check its axioms.
    Validate { file: String },
    /// The snake equalities for a groupoid file or group shorthand.
    CheckAxioms { groupoid: String },
    /// Unitarity of δ and its partial transposes.
    CheckComplementary { group: String },
    /// Build λ and print its table.
    BuildLambda { group: String },
    /// Unitarity of λ and λ′ and the stepwise unitarity chain.
    CheckCommunication { group: String },
    /// Encrypt one plaintext with one key.
    Encrypt {
        group: String,
        #[arg(long)]
        plaintext: String,
        #[arg(long)]
        key: String,
    },
    /// Ciphertext counts for a plaintext under every key.
    Distribution {
        group: String,
        #[arg(long)]
        plaintext: String,
    },
    /// Retrieval of erased information under environment operations.
    Decohere {
        group: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// The matrix of a span file, with its naturality check.
    Quantize { span_file: String },
    /// Q on random natural spans and the σ/π identities.
    CheckQ {
        group: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Standard and character bases of Z/n are mutually unbiased.
    CheckMub { n: usize },
    /// Teleport a given state, or seeded random states, through Z/n.
    Teleport {
        n: usize,
        /// Comma-separated amplitudes such as `1,0` or `0.6,0.8i`.
        #[arg(long, conflicts_with = "seed")]
        state: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// State-vector dense coding over Z/n.
    DenseCode { n: usize },
    /// The dense coding equation as an equality of spans.
    DenseCodeSpan { group: String },
    /// The acceptance battery.
    Suite {
        /// Run over the whole catalog instead of a quick subset.
        #[arg(long)]
        catalog: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::CheckAxioms { .. } => "check-axioms",
            Command::CheckComplementary { .. } => "check-complementary",
            Command::BuildLambda { .. } => "build-lambda",
            Command::CheckCommunication { .. } => "check-communication",
            Command::Encrypt { .. } => "encrypt",
            Command::Distribution { .. } => "distribution",
            Command::Decohere { .. } => "decohere",
            Command::Quantize { .. } => "quantize",
            Command::CheckQ { .. } => "check-q",
            Command::CheckMub { .. } => "check-mub",
            Command::Teleport { .. } => "teleport",
            Command::DenseCode { .. } => "dense-code",
            Command::DenseCodeSpan { .. } => "dense-code-span",
            Command::Suite { .. } => "suite",
        }
    }
}

/// `--seed`, else `GPDACT_SEED`, else 0.
fn seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("GPDACT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("GPDACT_SEED is not an integer: `{v}`"))),
        Err(_) => Ok(0),
    }
}

fn run(cmd: &Command, b: &mut Builder) -> Result<(), CliError> {
    use commands as c;
    match cmd {
        Command::Validate { file } => c::validate(file, b),
        Command::CheckAxioms { groupoid } => c::check_axioms(groupoid, b),
        Command::CheckComplementary { group } => c::check_complementary(group, b),
        Command::BuildLambda { group } => c::build_lambda_cmd(group, b),
        Command::CheckCommunication { group } => c::check_communication(group, b),
        Command::Encrypt { group, plaintext, key } => c::encrypt(group, plaintext, key, b),
        Command::Distribution { group, plaintext } => c::distribution(group, plaintext, b),
        Command::Decohere { group, seed: s, trials } => c::decohere(group, seed(*s)?, *trials, b),
        Command::Quantize { span_file } => c::quantize_cmd(span_file, b),
        Command::CheckQ { group, seed: s } => c::check_q(group, seed(*s)?, b),
        Command::CheckMub { n } => c::check_mub_cmd(*n, b),
        Command::Teleport { n, state, seed: s } => {
            let s = if state.is_some() { 0 } else { seed(*s)? };
            c::teleport(*n, state.as_deref(), s, b)
        }
        Command::DenseCode { n } => c::dense_code(*n, b),
        Command::DenseCodeSpan { group } => c::dense_code_span(group, b),
        Command::Suite { catalog, seed: s } => c::suite(*catalog, seed(*s)?, b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut b = Builder::new(cli.command.name(), cli.timings);
    if let Err(e) = run(&cli.command, &mut b) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let report = b.finish();
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(text.as_bytes());
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

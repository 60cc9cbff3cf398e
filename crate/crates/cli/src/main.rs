mod cmd;
mod error;
mod output;
mod source;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::CliError;
use output::{Format, Output};

/// Zhu algebras, A(M) bimodules and filtered tensor products, computed
/// exactly over the rationals.
#[derive(Parser, Debug)]
#[command(name = "avfilt", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exit with status 3 when a truncation did not stabilize.
    #[arg(long, global = true)]
    require_certified: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degreewise dimensions of V, A(V), gr A(V) and V/C2(V).
    Dims(cmd::dims::DimsArgs),
    /// Run invariant suites.
    Verify(cmd::verify::VerifyArgs),
    /// Filtered tensor products, the graded swap and its lift.
    Tensor(cmd::tensor::TensorArgs),
    /// Rewrite random module states over strong generators and the bottom level.
    Rewrite(cmd::rewrite::RewriteArgs),
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Dims(a) => cmd::dims::run(a),
        Command::Verify(a) => cmd::verify::run(a, cli.seed),
        Command::Tensor(a) => cmd::tensor::run(a),
        Command::Rewrite(a) => cmd::rewrite::run(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| Ok((o.render(cli.format)?, o.exit_code(cli.require_certified))));
    match result {
        Ok((s, code)) => {
            let _ = std::io::stdout().write_all(s.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

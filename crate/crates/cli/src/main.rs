use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bvspaces::spaces::{DualKind, SpaceId};
use bvspaces_cli::commands::{self, CliError, Direction, Format, Output};
use bvspaces_cli::verify::Suite;
use clap::{Parser, Subcommand};

/// Exact summability computations on bv-type matrix domains.
#[derive(Parser)]
#[command(name = "bvspaces", version)]
struct Cli {
    /// Truncation size.
    #[arg(long, global = true, default_value_t = 64)]
    n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized verify instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the leading N×N block of a matrix.
    Matrix {
        #[arg(long)]
        spec: String,
    },
    /// Print the first N coordinates of a matrix transform.
    Transform {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        x: String,
    },
    /// Estimate membership of a sequence (or its transform) in a space.
    Membership {
        #[arg(long)]
        x: String,
        #[arg(long, value_parser = parse_space)]
        space: SpaceId,
        /// Triangle whose domain is tested instead of the space itself.
        #[arg(long)]
        domain: Option<String>,
    },
    /// Test a sequence against the alpha-, beta- or gamma-dual of a domain.
    Dual {
        #[arg(long)]
        a: String,
        #[arg(long, default_value = "C")]
        domain: String,
        #[arg(long, value_parser = parse_kind)]
        kind: DualKind,
    },
    /// Test a matrix for membership in a class (bv(T):Y) or (Y:bv(T)).
    Matclass {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "C")]
        domain: String,
        #[arg(long, value_parser = parse_space)]
        space: SpaceId,
    },
    /// Run the exact verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

fn parse_space(s: &str) -> Result<SpaceId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_kind(s: &str) -> Result<DualKind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let (n, format) = (cli.n, cli.format);
    match &cli.command {
        Command::Matrix { spec } => commands::matrix(spec, n, format),
        Command::Transform { spec, x } => commands::transform(spec, x, n, format),
        Command::Membership { x, space, domain } => commands::membership_cmd(x, *space, domain.as_deref(), n, format),
        Command::Dual { a, domain, kind } => commands::dual(a, domain, *kind, n, format),
        Command::Matclass { direction, spec, domain, space } => {
            commands::matclass(*direction, spec, domain, *space, n, format)
        }
        Command::Verify { suite } => commands::verify_cmd(*suite, n, cli.seed, format),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        Ok(out.success)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bvspaces: verification failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("bvspaces: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

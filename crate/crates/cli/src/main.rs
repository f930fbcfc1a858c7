use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etale_cli::run::{batch_exit_code, batch_json};
use etale_cli::{emit_report, run_batch, run_path, AnalysisRequest, CliError, Command, Format, PropertyArg};
use etale_core::groebner::Caps;

#[derive(Debug, Parser)]
#[command(name = "etale", version, about = "Decide unramified, smooth and etale affine schemes with certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Decide a property: unramified, smooth (of dimension --dim) or etale
    Check(Common),
    /// Tangent space, cotangent dimension and map differentials at a point
    Tangent(Common),
    /// Standard chart cover from the Jacobian minors
    Cover(Common),
    /// Kahler differential presentation, optionally its fiber at a point
    Kaehler(Common),
    /// Lifting census over finite test algebras (prime fields only)
    Lift(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PropertyFlag {
    Unramified,
    Smooth,
    Etale,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatFlag {
    Json,
    Text,
}

#[derive(Debug, Args)]
struct Common {
    /// Scheme file, or a directory of them for batch mode
    input: PathBuf,
    #[arg(long, value_enum)]
    property: Option<PropertyFlag>,
    #[arg(long)]
    dim: Option<usize>,
    /// Point name from the file, or comma-separated coordinates
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatFlag,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Caps::default().max_degree)]
    max_degree: u32,
    #[arg(long, default_value_t = Caps::default().max_basis)]
    max_basis: usize,
    /// JSON list of test extensions for `lift`
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Worker threads for batch mode
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Tangent(c) => (Command::Tangent, c),
        Cmd::Cover(c) => (Command::Cover, c),
        Cmd::Kaehler(c) => (Command::Kaehler, c),
        Cmd::Lift(c) => (Command::Lift, c),
    };
    let req = AnalysisRequest {
        command,
        property: common.property.map(|p| match p {
            PropertyFlag::Unramified => PropertyArg::Unramified,
            PropertyFlag::Smooth => PropertyArg::Smooth,
            PropertyFlag::Etale => PropertyArg::Etale,
        }),
        dim: common.dim,
        point: common.point.clone(),
        suite: common.suite.clone(),
        seed: common.seed,
        caps: Caps {
            max_basis: common.max_basis,
            max_degree: common.max_degree,
        },
    };
    let format = match common.format {
        FormatFlag::Json => Format::Json,
        FormatFlag::Text => Format::Text,
    };
    let mut stdout = std::io::stdout().lock();

    if common.input.is_dir() {
        let results = match run_batch(&req, &common.input, common.threads) {
            Ok(r) => r,
            Err(e) => return fail(&e),
        };
        match format {
            Format::Json => {
                let doc = serde_json::to_string_pretty(&batch_json(&results)).expect("values serialize");
                let _ = writeln!(stdout, "{doc}");
            }
            Format::Text => {
                for (name, r) in &results {
                    let _ = writeln!(stdout, "== {name}");
                    match r {
                        Ok(rep) => {
                            let _ = write!(stdout, "{}", emit_report(rep, format));
                        }
                        Err(e) => {
                            let _ = writeln!(stdout, "error: {e}");
                        }
                    }
                }
            }
        }
        return ExitCode::from(batch_exit_code(&results) as u8);
    }

    match run_path(&req, &common.input) {
        Ok(report) => {
            let _ = write!(stdout, "{}", emit_report(&report, format));
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

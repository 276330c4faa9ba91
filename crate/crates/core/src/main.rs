use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lattice_wigner::scenario::{run, validate, Command, ScenarioConfig, Severity};
use lattice_wigner::Error;

/// Matrix-valued lattice Wigner functions: build states, run dynamics and
/// compute negativity from a JSON scenario file.
#[derive(Parser)]
#[command(name = "latwig", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the Wigner matrix and marginals of the initial state.
    State(Common),
    /// Run continuous-time dynamics and write every snapshot.
    Evolve(Common),
    /// Run the discrete quantum walk and write every snapshot.
    Walk(Common),
    /// Write the negativity of every snapshot of the scenario's dynamics.
    Negativity(Common),
    /// Static checks only.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `outputs.directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Suppress progress and summary output.
    #[arg(long)]
    quiet: bool,
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        3
    } else if matches!(e, Error::Io(_)) {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, command) = match cli.command {
        Cmd::State(c) => (c, Some(Command::State)),
        Cmd::Evolve(c) => (c, Some(Command::Evolve)),
        Cmd::Walk(c) => (c, Some(Command::Walk)),
        Cmd::Negativity(c) => (c, Some(Command::Negativity)),
        Cmd::Validate(c) => (c, None),
    };
    let config = match ScenarioConfig::from_path(&common.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("latwig: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };

    let Some(command) = command else {
        let diagnostics = validate(&config);
        for d in &diagnostics {
            println!("{d}");
        }
        if !common.quiet && diagnostics.is_empty() {
            println!("ok: {}", common.config.display());
        }
        let failed = diagnostics.iter().any(|d| d.severity == Severity::Error);
        return ExitCode::from(if failed { 2 } else { 0 });
    };

    let out = common.out.or_else(|| config.outputs.directory.clone()).unwrap_or_else(|| PathBuf::from("out"));
    match run(&config, command, &out) {
        Ok(manifest) => {
            if !common.quiet {
                let d = &manifest.diagnostics;
                println!(
                    "wrote {} snapshot(s) to {} (boundary leak {:.3e}, hermiticity {:.3e})",
                    manifest.snapshots.len(),
                    out.display(),
                    d.boundary_leak,
                    d.max_hermiticity_error
                );
                if let Some(dev) = d.max_two_path_deviation {
                    println!("max closed-form vs RK4 deviation: {dev:.3e}");
                }
                if let Some(dev) = d.closed_form_deviation {
                    println!("max deviation from the analytic Wigner matrix: {dev:.3e}");
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("latwig: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

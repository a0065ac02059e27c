use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ladder_cavity::cli::{self, exit_code, Command, Flags, Profile, Streams, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "ladder-cavity", version, about = "Cavity field of a driven three-level ladder emitter")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// CSV destination; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Sweep worker threads.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Final time for `evolve`.
    #[arg(long, global = true, value_name = "T")]
    tmax: Option<f64>,
    /// Output spacing for `evolve`.
    #[arg(long, global = true, value_name = "DT")]
    stride: Option<f64>,
    /// Fixed Fock ladder (oracle ladder for `oracle` and `compare`).
    #[arg(long, global = true, value_name = "N")]
    nmax: Option<usize>,
    #[arg(long, global = true, value_enum)]
    profile: Option<ProfileArg>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Steady state of the reduced dressed-state equations.
    Steady,
    /// Time series of the reduced equations.
    Evolve,
    /// Two-parameter steady-state map.
    Sweep,
    /// Steady state of the full master equation.
    Oracle,
    /// Reduced model against the full master equation.
    Compare,
}

#[derive(ValueEnum, Clone, Copy)]
enum ProfileArg {
    Fast,
    Paper,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    ExitCode::from(run(args) as u8)
}

fn run(args: Args) -> i32 {
    let stderr = &mut std::io::stderr();
    let Some(path) = args.common.config else {
        let _ = writeln!(stderr, "error: --config PATH is required");
        return EXIT_USAGE;
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let flags = Flags {
        output: args.common.output,
        workers: args.common.workers,
        t_max: args.common.tmax,
        stride: args.common.stride,
        n_max: args.common.nmax,
        profile: args.common.profile.map(|p| match p {
            ProfileArg::Fast => Profile::Fast,
            ProfileArg::Paper => Profile::Paper,
        }),
    };
    let cfg = match cli::load(&text, &flags) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let command = match args.command {
        Cmd::Steady => Command::Steady,
        Cmd::Evolve => Command::Evolve,
        Cmd::Sweep => Command::Sweep,
        Cmd::Oracle => Command::Oracle,
        Cmd::Compare => Command::Compare,
    };
    let stdout = &mut std::io::stdout().lock();
    let outcome = cli::run(command, &cfg, &mut Streams { out: stdout, diag: stderr });
    if let Err(e) = &outcome {
        let _ = writeln!(stderr, "error: {e}");
    }
    let _ = stdout.flush();
    exit_code(&outcome)
}

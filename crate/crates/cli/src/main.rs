use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use glt_cli::{load_config, run, Command, RunError};

#[derive(Parser)]
#[command(
    name = "glt",
    version,
    about = "Spectral symbol extraction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Symbol coefficients a_jk for each estimation size.
    Extract(Common),
    /// Sorted spectrum against sorted symbol samples.
    Compare(Common),
    /// Imaginary residual, spectrum discrepancy and L2 error tables.
    Tables(Common),
    /// Weyl residuals for the default test functions.
    Weyl(Common),
    /// SVD-tail curves and a.c.s. distances to the locally Toeplitz approximant.
    Qcurve(Common),
    /// G-norms of LT(x^(-1/4), 1) and its square.
    Counterexample(Common),
    /// Every command listed under `commands` in the configuration.
    Run(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Extract(c) => (Some(Command::Extract), c),
        Cmd::Compare(c) => (Some(Command::Compare), c),
        Cmd::Tables(c) => (Some(Command::Tables), c),
        Cmd::Weyl(c) => (Some(Command::Weyl), c),
        Cmd::Qcurve(c) => (Some(Command::Qcurve), c),
        Cmd::Counterexample(c) => (Some(Command::Counterexample), c),
        Cmd::Run(c) => (None, c),
    };
    if let Some(k) = common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("glt: cannot set up {k} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = load_config(&common.config)
        .map_err(RunError::from)
        .and_then(|mut cfg| {
            if let Some(out) = common.out {
                cfg.output = out;
            }
            run(&cfg, command.as_slice())
        });
    match result {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("glt: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pairrank::shell::{self, Options};
use pairrank::tdeg::Oracle;

#[derive(Parser)]
#[command(name = "pairrank", version, about = "Geometric rank of imaginaries in pairs of algebraically closed fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a script and print its report.
    Run {
        file: PathBuf,
        /// Print the JSON report (default).
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Print one line per query.
        #[arg(long)]
        text: bool,
        /// jacobian, elim or both.
        #[arg(long, default_value = "jacobian")]
        oracle: Oracle,
        #[arg(long)]
        seed: Option<u64>,
        /// Step budget for each transcendence degree computation.
        #[arg(long)]
        budget: Option<usize>,
        /// Omit timings so reruns are byte-identical.
        #[arg(long)]
        stable: bool,
        /// Write the evaluated environment for a later `load`.
        #[arg(long, value_name = "FILE")]
        save_session: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        file,
        json: _,
        text,
        oracle,
        seed,
        budget,
        stable,
        save_session,
    } = Cli::parse().command;

    let src = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("pairrank: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let script = match shell::parse(&src, file.parent()) {
        Ok(s) => s,
        Err(d) => {
            eprintln!("{}:{d}", file.display());
            return ExitCode::from(d.exit_code() as u8);
        }
    };
    let mut options = Options {
        oracle,
        stable,
        ..Options::default()
    };
    if let Some(s) = seed {
        options.seed = s;
    }
    if let Some(b) = budget {
        options.budget = b;
    }
    let report = shell::run(&script, &options);
    if text {
        for line in &report.text {
            println!("{line}");
        }
    } else {
        println!("{}", report.to_json_string());
    }
    if let Some(path) = save_session {
        if let Err(e) = std::fs::write(&path, report.to_json_string() + "\n") {
            eprintln!("pairrank: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.exit_code as u8)
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use k3glue_cli::config::{default_config, parse_config, Command};
use k3glue_cli::run;

#[derive(Parser)]
#[command(name = "k3glue", version, about = "Checks for K3 surfaces glued from blown-up planes")]
struct Cli {
    command: Command,
    /// Scenario config (JSON); defaults are used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides output_path in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match &cli.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {}", path.display(), e);
                    return ExitCode::from(2);
                }
            };
            match parse_config(&text) {
                Ok(c) => c,
                Err(e) => {
                    for v in &e.violations {
                        eprintln!("config error at {}: {}", v.path, v.message);
                    }
                    return ExitCode::from(2);
                }
            }
        }
        None => default_config(cli.command),
    };
    if config.command != cli.command {
        eprintln!("config is for command {} but {} was requested", config.command, cli.command);
        return ExitCode::from(2);
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let out = cli.out.or_else(|| config.output_path.clone().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("k3glue-out"));
    let (report, timing) = run(&config);
    if let Err(e) = report.write(&out).and_then(|_| std::fs::write(out.join("timing.json"), serde_json::to_string_pretty(&timing).unwrap_or_default())) {
        eprintln!("cannot write to {}: {}", out.display(), e);
        return ExitCode::from(2);
    }
    for s in &report.sections {
        eprintln!("{:<10} {}", s.name, s.verdict);
        if cli.verbose > 0 {
            for c in &s.checks {
                eprintln!("    {:<7} {}: {}", c.verdict.to_string(), c.name, c.detail);
            }
        }
    }
    if cli.verbose > 1 {
        eprintln!("wall time {:.2} s", timing.total_seconds);
    }
    eprintln!("verdict {} ({})", report.verdict, out.join("report.json").display());
    ExitCode::from(report.exit_code() as u8)
}

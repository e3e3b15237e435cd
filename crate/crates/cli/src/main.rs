use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use labcli::config::{ExperimentConfig, OutputFormat, OutputSpec, EXPERIMENTS};
use labcli::experiments::{run_experiment, run_selftest};
use labcli::table::ExperimentReport;

/// Desk-scale experiment runner for Banach-lattice tensor squares.
#[derive(Parser)]
#[command(name = "labcli", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run {
        /// Path to the config (see README for the schema).
        config: String,
        /// Override the output path.
        #[arg(long)]
        out: Option<String>,
        /// Override the output format.
        #[arg(long, value_parser = parse_format)]
        format: Option<OutputFormat>,
        /// Override the seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the available experiments.
    ListExperiments,
    /// Run the exact-identity invariant suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format {other:?} (expected csv or json)")),
    }
}

fn print_summary(report: &ExperimentReport) {
    for clause in &report.summary {
        let tag = if clause.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {}: {}", clause.criterion, clause.detail);
    }
    for (phase, secs) in &report.timing {
        eprintln!("  {phase}: {secs:.3}s");
    }
}

fn cmd_run(
    config_path: &str,
    out: Option<String>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
) -> Result<bool> {
    let text = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading {config_path}"))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = seed {
        cfg.seed = Some(seed);
    }
    match (out, &mut cfg.output) {
        (Some(path), Some(spec)) => spec.path = path,
        (Some(path), slot @ None) => {
            *slot = Some(OutputSpec {
                path,
                format: format.unwrap_or(OutputFormat::Csv),
            })
        }
        _ => {}
    }
    if let (Some(fmt), Some(spec)) = (format, &mut cfg.output) {
        spec.format = fmt;
    }
    let report = run_experiment(&cfg)?;
    print_summary(&report);
    if let Some(outspec) = &cfg.output {
        eprintln!("wrote {}", outspec.path);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<bool> = match cli.command {
        Command::Run {
            config,
            out,
            format,
            seed,
        } => cmd_run(&config, out, format, seed),
        Command::ListExperiments => {
            for (name, blurb) in EXPERIMENTS {
                println!("{name:20} {blurb}");
            }
            Ok(true)
        }
        Command::Selftest { seed } => run_selftest(seed.unwrap_or(7)).map(|reports| {
            let mut all = true;
            for r in &reports {
                print_summary(r);
                all &= r.passed();
            }
            all
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

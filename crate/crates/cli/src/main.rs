use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};

use nosignal_core::{builtin, list_scenarios, run_config, CampaignReport, ScenarioConfig};

/// Exit status for configuration or runtime errors.
const EXIT_ERROR: u8 = 2;
/// Exit status when the campaign ran but at least one check failed.
const EXIT_CHECK_FAILED: u8 = 1;

#[derive(Parser)]
#[command(
    name = "nosignal",
    version,
    about = "Seeded no-signaling and no-cloning campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a config file or a built-in name.
    Run(RunArgs),
    /// List the built-in scenarios.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario config file (JSON).
    #[arg(long, conflicts_with_all = ["scenario", "seed"], required_unless_present = "scenario")]
    config: Option<PathBuf>,
    /// Built-in scenario name (see `nosignal list`).
    #[arg(long, requires = "seed")]
    scenario: Option<String>,
    /// Seed for a built-in scenario.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn load_config(args: &RunArgs) -> Result<ScenarioConfig> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        return ScenarioConfig::from_json_str(&text)
            .with_context(|| format!("invalid config {}", path.display()));
    }
    let name = args.scenario.as_deref().unwrap_or_default();
    let seed = args.seed.unwrap_or_default();
    Ok(builtin(name, seed)?)
}

fn render_csv(report: &CampaignReport) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["scenario_name", "trial", "metric", "value"])?;
    for (trial, value) in report.trial_values.iter().enumerate() {
        writer.write_record([
            report.config.name.as_str(),
            &trial.to_string(),
            report.trial_metric,
            &nosignal_core::report::format_float(*value),
        ])?;
    }
    Ok(writer.into_inner()?)
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn run(args: &RunArgs) -> Result<bool> {
    let config = load_config(args)?;
    info!(
        "running {} ({}) with seed {}",
        config.name,
        config.kind.as_str(),
        config.seed
    );
    let report = run_config(&config)?;
    for check in &report.checks {
        debug!(
            "check {}: value {} {} {} -> {}",
            check.name,
            check.value,
            check.comparison,
            check.threshold,
            if check.passed { "pass" } else { "fail" }
        );
    }
    let bytes = match args.format {
        Format::Json => report.to_json().into_bytes(),
        Format::Csv => render_csv(&report)?,
    };
    write_output(args.out.as_deref(), &bytes)?;
    let passed = report.passed();
    info!("{}: {}", config.name, if passed { "pass" } else { "fail" });
    Ok(passed)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("NOSIGNAL_LOG", "error"))
        .target(env_logger::Target::Stderr)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    match cli.command {
        Command::List => {
            print!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
        Command::Run(args) => match run(&args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
            Err(err) => {
                eprintln!("error: {err:#}");
                ExitCode::from(EXIT_ERROR)
            }
        },
    }
}

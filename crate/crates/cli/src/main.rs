use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use arealaw_cli::fuzz::fuzz_config;
use arealaw_cli::{exit_code, run_config, CheckReport, CliError, ExperimentConfig, ExperimentKind, Registry};
use clap::{Parser, Subcommand};

/// Checks of mutual-information area laws at desk scale.
///
/// Size caps: AREALAW_DIM_CAP (dense dimension, default 16384) and
/// AREALAW_ENUM_CAP (classical configurations, default 16777216).
#[derive(Parser)]
#[command(name = "arealaw", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Directory for the CSV and JSON reports; overrides the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the built-in presets (and custom ones from a directory).
    Presets {
        #[arg(long)]
        custom: Option<PathBuf>,
        /// Print the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment on randomly drawn instances.
    Fuzz {
        experiment: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_summary(report: &CheckReport) {
    let s = &report.summary;
    let mut out = format!(
        "{}: {} passed, {} failed (config {})\n",
        report.experiment,
        s.pass_count,
        s.fail_count,
        &report.config_digest[..12]
    );
    for (key, value) in &s.fits {
        let _ = writeln!(out, "  fit {key} = {value}");
    }
    for (key, value) in &s.verdicts {
        let _ = writeln!(out, "  verdict {key}: {value}");
    }
    for record in report.records.iter().filter(|r| !r.pass).take(20) {
        let _ = writeln!(
            out,
            "  FAIL {} {} lhs={} rhs={} slack={}",
            record.check, record.inputs, record.lhs, record.rhs, record.slack
        );
    }
    emit(&out);
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { config, output } => {
            let mut config = ExperimentConfig::load(&config)?;
            if output.is_some() {
                config.output = output;
            }
            let report = run_config(&config)?;
            print_summary(&report);
            Ok(exit_code(&report))
        }
        Command::Presets { custom, json } => {
            let registry = match custom {
                Some(dir) => Registry::with_custom_dir(&dir)?,
                None => Registry::builtin(),
            };
            let catalog = registry.catalog()?;
            if json {
                emit(&format!("{}\n", serde_json::to_string_pretty(&catalog).expect("catalog serializes")));
            } else {
                let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
                let mut out = format!(
                    "{:<28} {:<16} {:>3} {:>5} {:>3} {:>9} {:<5} description\n",
                    "name", "kind", "d", "sites", "D", "dim", "caps"
                );
                for p in catalog {
                    let kind = serde_json::to_value(p.kind).expect("kind serializes");
                    let _ = writeln!(
                        out,
                        "{:<28} {:<16} {:>3} {:>5} {:>3} {:>9} {:<5} {}{}",
                        p.name,
                        kind.as_str().unwrap_or_default(),
                        opt(p.local_dim.map(|v| v.to_string())),
                        opt(p.sites.map(|v| v.to_string())),
                        opt(p.bond_dim.map(|v| v.to_string())),
                        opt(p.dimension.map(|v| v.to_string())),
                        if p.within_caps { "ok" } else { "over" },
                        p.description,
                        if p.random { " [seeded]" } else { "" },
                    );
                }
                emit(&out);
            }
            Ok(0)
        }
        Command::Fuzz { experiment, seed, draws, output } => {
            let kind: ExperimentKind = experiment.parse()?;
            let mut config = fuzz_config(kind, seed, draws)?;
            config.output = output;
            let report = run_config(&config)?;
            print_summary(&report);
            Ok(exit_code(&report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("arealaw: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

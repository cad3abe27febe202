use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use kinam::report::{emit_report, emit_reports_csv, run_with_traces, Format, RunOptions, RunReport};
use kinam::scenario::{builtin, builtin_summary, parse_scenario, Scenario, BUILTIN};

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Residual checks for angular momentum operators of a charged particle.
#[derive(Parser)]
#[command(name = "kinam", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: OutputFormat,
    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Multiplies the approximate tolerances.
    #[arg(long, default_value_t = 1.0, global = true)]
    tolerance_scale: f64,
    /// Directory for propagation traces (CSV).
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    /// Lists the built-in scenarios and exits.
    #[arg(long)]
    list_scenarios: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact tensor contraction identities.
    VerifyTensors,
    /// Runs a scenario file, or a built-in scenario by name.
    Run { scenario: String },
    /// Runs every built-in scenario.
    RunAll,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("kinam: {msg}");
    ExitCode::from(2)
}

fn load(arg: &str) -> Result<Scenario, String> {
    let path = Path::new(arg);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{arg}: {e}"))?;
        parse_scenario(&text).map_err(|e| format!("{arg}: {} ({})", e, e.code()))
    } else {
        builtin(arg).ok_or_else(|| format!("{arg}: no such file or built-in scenario"))
    }
}

fn write_traces(dir: &Path, traces: &[(String, kinam::dynamics::PropagationTrace)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, t) in traces {
        let file = dir.join(format!("{}.csv", name.replace('/', "_")));
        std::fs::write(&file, t.to_csv())?;
        eprintln!("trace written to {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if !(cli.tolerance_scale.is_finite() && cli.tolerance_scale > 0.0) {
        return usage("--tolerance-scale must be a positive number");
    }
    if cli.list_scenarios {
        for (name, _) in BUILTIN {
            println!("{name:32} {}", builtin_summary(name).unwrap_or(""));
        }
        return ExitCode::SUCCESS;
    }
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
    };
    let opts = RunOptions {
        tolerance_scale: cli.tolerance_scale,
        seed: cli.seed,
    };
    let scenarios: Vec<Scenario> = match &cli.command {
        None => return usage("no command given (try --help)"),
        Some(Command::VerifyTensors) => vec![builtin("paper-tensors").expect("built in")],
        Some(Command::Run { scenario }) => match load(scenario) {
            Ok(s) => vec![s],
            Err(e) => return usage(e),
        },
        Some(Command::RunAll) => BUILTIN.iter().map(|(n, _)| builtin(n).expect("built in")).collect(),
    };
    let results: Vec<_> = scenarios.par_iter().map(|s| run_with_traces(s, &opts)).collect();
    let (reports, traces): (Vec<RunReport>, Vec<_>) = results.into_iter().unzip();
    if let Some(dir) = &cli.trace {
        if let Err(e) = write_traces(dir, &traces.concat()) {
            eprintln!("kinam: writing traces: {e}");
            return ExitCode::from(1);
        }
    }
    let out = match (format, reports.len()) {
        (_, 1) => emit_report(&reports[0], format),
        (Format::Json, _) => serde_json::to_string_pretty(&reports).expect("reports serialize"),
        (Format::Csv, _) => emit_reports_csv(&reports),
    };
    println!("{}", out.trim_end());
    if reports.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use archpair::error::Error;
use archpair::scenario::{load_scenario, run, Kind, Payload, RunOptions, Scenario};

#[derive(Parser)]
#[command(name = "archpair", version, about = "Archimedean pairings of rationally trivial cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario of any kind.
    Run(Common),
    Weil(Common),
    Tame(Common),
    Pair0(Common),
    Reciprocity0(Common),
    Projection0(Common),
    Witness(Common),
    Hmap(Common),
    Ledger(Common),
    Currents(Common),
    Pair1(Common),
    /// Run a suite; without --scenario, the bundled reference suite.
    Suite(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Defaults to text on standard output and json for --out.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_name = "REAL")]
    tol: Option<f64>,
    #[arg(long, value_name = "UINT")]
    seed: Option<u64>,
    #[arg(long, value_name = "UINT")]
    max_cells: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Command {
    fn split(self) -> (Option<Kind>, Common) {
        match self {
            Command::Run(c) => (None, c),
            Command::Weil(c) => (Some(Kind::Weil), c),
            Command::Tame(c) => (Some(Kind::Tame), c),
            Command::Pair0(c) => (Some(Kind::Pair0), c),
            Command::Reciprocity0(c) => (Some(Kind::Reciprocity0), c),
            Command::Projection0(c) => (Some(Kind::Projection0), c),
            Command::Witness(c) => (Some(Kind::Witness), c),
            Command::Hmap(c) => (Some(Kind::Hmap), c),
            Command::Ledger(c) => (Some(Kind::Ledger), c),
            Command::Currents(c) => (Some(Kind::Currents), c),
            Command::Pair1(c) => (Some(Kind::Pair1), c),
            Command::Suite(c) => (Some(Kind::Suite), c),
        }
    }
}

fn input_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("archpair: {e}");
    ExitCode::from(2)
}

fn scenario_for(kind: Option<Kind>, path: Option<&PathBuf>) -> Result<Scenario, Error> {
    let scenario = match (path, kind) {
        (Some(p), _) => load_scenario(p)?,
        (None, Some(Kind::Suite)) => Scenario {
            seed: 0,
            tol: None,
            label: Some("bundled reference suite".into()),
            payload: Payload::Suite(archpair::scenario::bundled_suite("reference")?),
        },
        (None, _) => return Err(Error::InvalidArgument("--scenario is required".into())),
    };
    if let Some(k) = kind {
        if scenario.kind() != k {
            return Err(Error::InvalidArgument(format!(
                "scenario has kind {}, subcommand expects {k}",
                scenario.kind()
            )));
        }
    }
    Ok(scenario)
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
    let (kind, common) = cli.command.split();
    if let Some(t) = common.tol {
        if !(t.is_finite() && t > 0.0) {
            return input_error("--tol must be a positive real");
        }
    }
    let scenario = match scenario_for(kind, common.scenario.as_ref()) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let opts = RunOptions {
        tol: common.tol,
        seed: common.seed,
        max_cells: common.max_cells,
    };
    let report = run(&scenario, &opts);
    let format = common
        .format
        .unwrap_or(if common.out.is_some() { Format::Json } else { Format::Text });
    let rendered = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                return input_error(format!("cannot write {}: {e}", path.display()));
            }
            print!("{}", report.to_text().lines().last().map(|l| format!("{l}\n")).unwrap_or_default());
        }
        None => print!("{rendered}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

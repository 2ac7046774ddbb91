use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nearfield_core::{fit_abs_sinusoid, fit_quadratic, run_scenario, Error, ScenarioConfig, ScenarioId};

#[derive(Parser)]
#[command(name = "nearfield", version, about = "Near-field microwave qubit scenarios and fits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV (stdout unless --out is given).
    Run {
        scenario: String,
        /// TOML config file, or a CSV produced by a previous run.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override one key, e.g. `--set field.z0_um=950`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fit a model to two columns of a CSV and print the result as JSON.
    Fit {
        model: Model,
        #[arg(long = "in")]
        input: PathBuf,
        /// Abscissa column (default: first column).
        #[arg(long)]
        x: Option<String>,
        /// Ordinate column (default: second column).
        #[arg(long)]
        y: Option<String>,
    },
    /// List scenario ids with their CSV columns.
    ListScenarios,
}

#[derive(Copy, Clone, ValueEnum)]
enum Model {
    Quadratic,
    AbsSinusoid,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownScenario { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            config,
            set,
            out,
            seed,
        } => run(&scenario, config.as_deref(), set, out.as_deref(), seed),
        Command::Fit { model, input, x, y } => fit(model, &input, x.as_deref(), y.as_deref()),
        Command::ListScenarios => {
            for id in ScenarioId::ALL {
                println!(
                    "{:<14} {}  [{}]",
                    id.as_str(),
                    id.description(),
                    id.columns().join(", ")
                );
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(
    scenario: &str,
    config: Option<&Path>,
    mut set: Vec<String>,
    out: Option<&Path>,
    seed: Option<u64>,
) -> Result<(), Failure> {
    let id: ScenarioId = scenario.parse()?;
    let text = match config {
        Some(path) => Some(fs::read_to_string(path).map_err(|e| io_err(path, e))?),
        None => None,
    };
    if let Some(seed) = seed {
        set.push(format!("seed={seed}"));
    }
    let cfg = ScenarioConfig::resolve(id, text.as_deref(), &set)?;
    let data = run_scenario(&cfg)?;
    let csv = data.to_csv();
    match out {
        Some(path) => {
            fs::write(path, csv).map_err(|e| io_err(path, e))?;
            if let Some(summary) = &data.summary {
                let sidecar = path.with_extension("fit.json");
                let body = serde_json::to_string_pretty(summary).expect("summary serializes");
                fs::write(&sidecar, body + "\n").map_err(|e| io_err(&sidecar, e))?;
            }
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn fit(model: Model, input: &Path, x: Option<&str>, y: Option<&str>) -> Result<(), Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(input)
        .map_err(|e| io_err(input, e))?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| io_err(input, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    let column = |name: Option<&str>, default: usize| -> Result<usize, Failure> {
        match name {
            Some(n) => headers
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| Failure::Usage(format!("no column `{n}` in {}", input.display()))),
            None if default < headers.len() => Ok(default),
            None => Err(Failure::Usage(format!(
                "{} needs at least two columns",
                input.display()
            ))),
        }
    };
    let (ix, iy) = (column(x, 0)?, column(y, 1)?);
    let mut samples = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| io_err(input, e))?;
        let cell = |i: usize| -> Result<f64, Failure> {
            let raw = record.get(i).unwrap_or("");
            raw.parse()
                .map_err(|_| Failure::Invalid(format!("row {}: `{raw}` is not a number", line + 1)))
        };
        samples.push((cell(ix)?, cell(iy)?));
    }
    let result = match model {
        Model::Quadratic => fit_quadratic(&samples)?,
        Model::AbsSinusoid => fit_abs_sinusoid(&samples)?,
    };
    println!("{}", serde_json::to_string_pretty(&result).expect("fit serializes"));
    Ok(())
}

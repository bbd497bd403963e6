mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sssl_core::channel::{received_power_dbm, ShadowingSource};
use sssl_core::format::sig6;
use sssl_core::harness::{
    monte_carlo, summary_csv, summary_table, sweep, write_atomic, write_run_artifacts, Axis,
    HarnessError, SweepPoint,
};
use sssl_core::Position3D;

use config::{Overrides, ScenarioFile};

const THREADS_ENV: &str = "SSSL_SIM_THREADS";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(
    name = "sssl-sim",
    version,
    about = "UAV signal-source search and localization simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Scenario JSON file. Built-in defaults when omitted.
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Monte-Carlo run; writes trace, binned, CDF and report artifacts.
    Run(Common),
    /// One run per point of the Cartesian product of the given axes.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated axes from strategy, placement, altitude, antenna.
        #[arg(long, value_delimiter = ',', value_name = "AXES")]
        axes: Vec<String>,
    },
    /// Theoretical and one noisy RSS draw against horizontal distance.
    RssProfile(Common),
    /// Prints the resolved scenario as JSON.
    PrintConfig(Common),
}

fn resolve(common: &Common) -> Result<ScenarioFile, CliError> {
    let mut file = ScenarioFile::load(common.scenario.as_deref())?;
    common.overrides.apply(&mut file);
    Ok(file)
}

fn threads() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Config(format!(
                "{THREADS_ENV} must be a non-negative integer, got `{v}`"
            ))
        }),
    }
}

fn cmd_run(file: &ScenarioFile) -> Result<(), CliError> {
    run_once(file).map(|_| ())
}

/// Runs the scenario as-is and writes its artifacts.
fn run_once(file: &ScenarioFile) -> Result<SweepPoint, CliError> {
    let scenario = file.scenario();
    let prepared = scenario.prepare()?;
    let run = monte_carlo(&prepared, &scenario.seeds.seeds(), threads()?)?;
    let dir = &file.output_dir;
    let written = write_run_artifacts(dir, &run.traces, &run.report).map_err(io_err(dir))?;
    for path in written {
        println!("{}", path.display());
    }
    Ok(SweepPoint {
        scenario,
        report: run.report,
    })
}

fn cmd_sweep(file: &ScenarioFile, axes: &[String]) -> Result<(), CliError> {
    let axes: Vec<Axis> = axes
        .iter()
        .filter(|a| !a.is_empty())
        .map(|a| a.parse::<Axis>().map_err(CliError::Config))
        .collect::<Result<_, _>>()?;
    let points = if axes.is_empty() {
        vec![run_once(file)?]
    } else {
        sweep(&file.scenario(), &axes, threads()?)?
    };
    let dir = &file.output_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("summary.csv");
    write_atomic(&path, &summary_csv(&summary_table(&points))).map_err(io_err(&path))?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_rss_profile(file: &ScenarioFile) -> Result<(), CliError> {
    let scenario = file.scenario();
    let prepared = scenario.prepare()?;
    let inversion = prepared.inverter.config();
    let seed = scenario.seeds.seeds().first().copied().unwrap_or(0);
    let mut noise = ShadowingSource::new(seed);
    let tx = Position3D::new(0.0, 0.0, scenario.target.height_m);

    let mut csv = String::from("d_2d,theoretical_rss_dbm,sample_noisy_rss_dbm\n");
    let steps = (inversion.d_max_m - inversion.d_min_m).floor() as usize;
    for k in 0..=steps {
        let d = inversion.d_min_m + k as f64;
        let rx = Position3D::new(d, 0.0, prepared.plan.altitude());
        let rss = received_power_dbm(&tx, &rx, &scenario.channel)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let noisy = rss - noise.sample_db(scenario.channel.shadowing_std_db);
        csv.push_str(&format!("{},{},{}\n", sig6(d), sig6(rss), sig6(noisy)));
    }
    let dir = &file.output_dir;
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let path = dir.join("rss_profile.csv");
    write_atomic(&path, &csv).map_err(io_err(&path))?;
    println!("{}", path.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(common) => cmd_run(&resolve(&common)?),
        Command::Sweep { common, axes } => cmd_sweep(&resolve(&common)?, &axes),
        Command::RssProfile(common) => cmd_rss_profile(&resolve(&common)?),
        Command::PrintConfig(common) => {
            print!("{}", resolve(&common)?.to_json());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sssl-sim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

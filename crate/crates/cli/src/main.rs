use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gsmc::harness::{
    compare_report, emit_csv, emit_plot_script, run_scenario, Chart, ControllerId, ScenarioConfig, Trajectory,
    REPORT_THRESHOLDS,
};
use gsmc::verify;
use gsmc::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_CUT_LOCUS: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gsmc",
    version,
    about = "Geometric sliding-mode attitude control simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    #[value(name = "paper-2023")]
    Builtin2023,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured scenario and write its CSV and plot script
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run GSMC, LSF and PD+ on a preset scenario and print a comparison
    Compare {
        #[arg(long, value_enum)]
        preset: Preset,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        scenario: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a preset scenario as a config file
    PrintConfig {
        #[arg(long, value_enum, default_value = "paper-2023")]
        preset: Preset,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), default_value_t = 1)]
        scenario: u8,
        #[arg(long, default_value = "GSMC")]
        controller: ControllerId,
        #[arg(long, default_value = "SO3")]
        chart: Chart,
    },
    /// Run the self-check battery
    Verify,
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_cut_locus() { EXIT_CUT_LOCUS } else { EXIT_CONFIG };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("{}: {e}", dir.display()),
    })
}

fn check_completed(label: &str, run: &Trajectory) -> Result<(), Failure> {
    match &run.abort {
        None => Ok(()),
        Some(abort) => Err(Failure {
            code: EXIT_CUT_LOCUS,
            message: format!("{label}: aborted at t = {:.3} s: {}", abort.time, abort.error),
        }),
    }
}

fn simulate(config: &Path, out: &Path) -> Result<(), Failure> {
    let text = fs::read_to_string(config).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("{}: {e}", config.display()),
    })?;
    let cfg = ScenarioConfig::from_text(&text).map_err(|e| Failure {
        code: EXIT_CONFIG,
        message: format!("{}: {e}", config.display()),
    })?;
    create_dir(out)?;
    let label = cfg.controller_id.label();
    let run = run_scenario(&cfg)?;
    let csv = PathBuf::from(format!("{}.csv", label.to_lowercase()));
    emit_csv(&run.samples, &out.join(&csv))?;
    emit_plot_script(&[(label.to_string(), csv.clone())], &out.join("plot.py"))?;
    if let Some(last) = run.samples.last() {
        println!(
            "{label} ({}): t = {:.2} s, Psi = {:.3e}, energy = {:.4}",
            cfg.chart, last.t, last.psi, last.energy
        );
    }
    println!("wrote {}", out.join(csv).display());
    check_completed(label, &run)
}

fn compare(scenario: u8, out: &Path) -> Result<(), Failure> {
    create_dir(out)?;
    let mut runs = Vec::new();
    let mut files = Vec::new();
    let mut aborted = Ok(());
    for id in ControllerId::ALL {
        let cfg = ScenarioConfig::preset(scenario, id, Chart::So3)?;
        let run = run_scenario(&cfg)?;
        let csv = PathBuf::from(format!("scenario{scenario}_{}.csv", id.label().to_lowercase()));
        emit_csv(&run.samples, &out.join(&csv))?;
        if aborted.is_ok() {
            aborted = check_completed(id.label(), &run);
        }
        files.push((id.label().to_string(), csv));
        runs.push((id.label().to_string(), run.samples));
    }
    emit_plot_script(&files, &out.join(format!("scenario{scenario}_plot.py")))?;
    let report = compare_report(&runs, &REPORT_THRESHOLDS)?;
    println!("scenario {scenario}");
    print!("{report}");
    aborted
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, out } => simulate(&config, &out),
        Command::Compare {
            preset: Preset::Builtin2023,
            scenario,
            out,
        } => compare(scenario, &out),
        Command::PrintConfig {
            preset: Preset::Builtin2023,
            scenario,
            controller,
            chart,
        } => {
            print!("{}", ScenarioConfig::preset(scenario, controller, chart)?.to_text());
            Ok(())
        }
        Command::Verify => {
            let checks = verify::run_all();
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} passed, {failed} failed", checks.len() - failed);
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure {
                    code: EXIT_VERIFY,
                    message: format!("{failed} check(s) failed"),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share the config exit code; clap's own default (2) is taken
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

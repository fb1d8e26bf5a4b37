use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use fct_drem::plot::{emit_plots, PlotSpec};
use fct_drem::runner::{run_scenario, RunOutcome};
use fct_drem::scenario::parse_scenario;
use fct_drem::{bundled, Error, ScenarioF64};

#[derive(Debug, Parser)]
#[command(name = "fctsim", version, about = "Run FCT-DREM estimation scenarios and write CSV trajectories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run every bundled scenario.
    RunAll {
        #[command(flatten)]
        common: Common,
    },
    /// Print the bundled scenario names.
    List,
}

#[derive(Debug, Args)]
struct Common {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Override the integration step (ct) or sampling time (dt).
    #[arg(long)]
    step: Option<f64>,
    /// Override the simulated horizon in seconds.
    #[arg(long)]
    horizon: Option<f64>,
}

fn execute(scn: &ScenarioF64, out: &Path) -> Result<(RunOutcome<f64>, PathBuf), Error> {
    let outcome = run_scenario(scn, out)?;
    let plot = emit_plots(&PlotSpec::from_scenario(scn), &outcome.table, out)?;
    Ok((outcome, plot))
}

fn describe(scn: &ScenarioF64, outcome: &RunOutcome<f64>, plot: &Path) -> String {
    let mut s = format!(
        "{}: {} rows -> {}, {}, {}",
        scn.name,
        outcome.table.len(),
        outcome.trajectory_path.display(),
        outcome.summary_path.display(),
        plot.display()
    );
    for r in &outcome.reports {
        let hit = r.hit_time.map(|t| format!("{t:.3} s")).unwrap_or_else(|| "not reached".into());
        s.push_str(&format!("\n  {:<24} |err| <= {:e} from {}", r.estimator, r.epsilon, hit));
    }
    s
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::List => {
            for name in bundled::names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::Run { scenario, common } => {
            let scn = parse_scenario(&scenario)?.with_overrides(common.step, common.horizon)?;
            let (outcome, plot) = execute(&scn, &common.out)?;
            println!("{}", describe(&scn, &outcome, &plot));
            Ok(())
        }
        Command::RunAll { common } => {
            let scenarios = bundled::names()
                .map(|name| bundled::load::<f64>(name)?.with_overrides(common.step, common.horizon))
                .collect::<Result<Vec<_>, _>>()?;
            let results: Vec<_> = scenarios
                .par_iter()
                .map(|scn| execute(scn, &common.out).map(|(o, p)| describe(scn, &o, &p)))
                .collect();
            let mut errors = Vec::new();
            for r in results {
                match r {
                    Ok(text) => println!("{text}"),
                    Err(e) => errors.push(e),
                }
            }
            // the worst failure decides the exit code; main reports it
            errors.sort_by_key(|e| std::cmp::Reverse(e.exit_code()));
            let mut errors = errors.into_iter();
            let worst = errors.next();
            for e in errors {
                eprintln!("error: {e}");
            }
            worst.map_or(Ok(()), Err)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

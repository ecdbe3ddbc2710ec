use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ddsense::scenario::Scenario;
use ddsense::{
    emit_csv, emit_plot, run_point, run_sweep, selfcheck, PlotColumn, PointError, SweepError,
};
use ddsense_core::Error as CoreError;

/// Cramér–Rao bounds for delay-Doppler sensing with OFDM and OTFS waveforms.
#[derive(Debug, Parser)]
#[command(name = "ddsense", version)]
struct Cli {
    /// Override the pilot seed of the scenario.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bounds for every scheme at the scenario's fixed configuration.
    Crlb { scenario: PathBuf },
    /// Sweep the scenario's axis and write a CSV (and optionally SVG plots).
    Sweep {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write delay and Doppler SVG charts.
        #[arg(long)]
        plot: bool,
    },
    /// Run the built-in oracle, finite-difference and Fisher-matrix checks.
    Selfcheck,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Crlb { scenario } => crlb(&scenario, cli.seed),
        Command::Sweep {
            scenario,
            out,
            plot,
        } => sweep(&scenario, &out, plot, cli.seed),
        Command::Selfcheck => Ok(selfcheck_cmd()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn crlb(path: &Path, seed: Option<u64>) -> Result<u8, SweepError> {
    let scenario = Scenario::load(path)?;
    let outcomes = run_point(&scenario, seed.unwrap_or(scenario.pilot_seed));
    println!(
        "{:<14} {:>4} {:>13} {:>13} {:>13} {:>13} {:>11}",
        "scheme", "path", "crlb_tau_s2", "crlb_nu_hz2", "crlb_amp", "crlb_phase", "condition"
    );
    let mut code = 0;
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                for (i, p) in r.paths.iter().enumerate() {
                    println!(
                        "{:<14} {:>4} {:>13.4e} {:>13.4e} {:>13.4e} {:>13.4e} {:>11.3e}",
                        o.scheme.name(),
                        i + 1,
                        p.tau,
                        p.nu,
                        p.amp,
                        p.phase,
                        r.condition
                    );
                }
            }
            Err(e) => {
                println!("{:<14} error: {e}", o.scheme.name());
                let c = match e {
                    PointError::Invalid(_) => 1,
                    PointError::Numerical(
                        CoreError::SingularFim { .. } | CoreError::IndefiniteFim { .. },
                    ) => 2,
                    PointError::Numerical(_) => 1,
                };
                code = code.max(c);
            }
        }
    }
    Ok(code)
}

fn sweep(path: &Path, out: &Path, plot: bool, seed: Option<u64>) -> Result<u8, SweepError> {
    let scenario = Scenario::load(path)?;
    let rows = run_sweep(&scenario, seed.unwrap_or(scenario.pilot_seed))?;
    std::fs::create_dir_all(out)?;
    let stem = scenario.output.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "sweep".into())
    });
    let csv = out.join(format!("{stem}.csv"));
    emit_csv(&rows, &csv)?;
    println!("wrote {} ({} rows)", csv.display(), rows.len());
    if plot {
        for (suffix, column) in [("tau", PlotColumn::Tau), ("nu", PlotColumn::Nu)] {
            let svg = out.join(format!("{stem}_{suffix}.svg"));
            emit_plot(&rows, &svg, column)?;
            println!("wrote {}", svg.display());
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} row(s) carry errors; see the error column");
    }
    Ok(0)
}

fn selfcheck_cmd() -> u8 {
    let lines = selfcheck::run_all();
    for l in &lines {
        println!("{l}");
    }
    u8::from(!lines.iter().all(|l| l.pass))
}

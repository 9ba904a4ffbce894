//! `thz-irs`: run trials and sweeps of the multi-IRS THz association
//! simulator from a declarative TOML config, with flag overrides.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid config,
//! 3 infeasible instance, 4 exhaustive-search cap exceeded.

mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use thz_irs_core::baselines::Algorithm;
use thz_irs_core::config::{load_config, ExperimentConfig};
use thz_irs_core::error::Error;
use thz_irs_core::experiments::{
    emit_csv, emit_plot, generate_scenario, run_trial, sweep, SummaryPoint, SweepOutcome,
    SweepVariable, TrialResult,
};

#[derive(Parser)]
#[command(
    name = "thz-irs",
    version,
    about = "Multi-IRS terahertz network association simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every requested algorithm once on a single seeded scenario.
    Run(RunOpts),
    /// Sweep transmit power (dBm) over seeded trials.
    SweepPower(SweepOpts),
    /// Sweep the per-IRS element count over seeded trials.
    SweepElements(SweepOpts),
    /// Parse and validate a config file, reporting problems.
    ValidateConfig {
        /// TOML config file; defaults are validated when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run the built-in oracle suites (golden values, stability, phasing,
    /// determinism) and report pass/fail per check.
    Selftest,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// TOML config file (defaults apply when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated algorithms: proposed,es,pes,gs,ra,pra.
    #[arg(long, value_delimiter = ',')]
    algos: Option<Vec<String>>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Output artifacts: csv or csv+plot.
    #[arg(long, default_value = "csv", value_parser = ["csv", "csv+plot"])]
    format: String,
    /// Override scenario k (= number of sources = destinations).
    #[arg(long)]
    k: Option<usize>,
    /// Override scenario n (= number of IRS panels).
    #[arg(long)]
    n: Option<usize>,
    /// Override scenario l (= number of destinations).
    #[arg(long)]
    l: Option<usize>,
    /// Override elements per IRS (perfect square).
    #[arg(long)]
    elements: Option<usize>,
    /// Override transmit power in dBm.
    #[arg(long)]
    tx_power_dbm: Option<f64>,
    /// Worker threads for trial execution (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args, Clone)]
struct RunOpts {
    #[command(flatten)]
    common: CommonOpts,
}

#[derive(Args, Clone)]
struct SweepOpts {
    #[command(flatten)]
    common: CommonOpts,
    /// Comma-separated swept values (dBm or element counts).
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Trials per swept value.
    #[arg(long)]
    trials: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> ExitCode {
    match e {
        Error::InvalidConfig(_) | Error::InvalidInput(_) => ExitCode::from(2),
        Error::Infeasible(_) => ExitCode::from(3),
        Error::CapExceeded { .. } => ExitCode::from(4),
        _ => ExitCode::from(1),
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Run(opts) => cmd_run(opts),
        Command::SweepPower(opts) => cmd_sweep(opts, SweepVariable::TxPower),
        Command::SweepElements(opts) => cmd_sweep(opts, SweepVariable::ElementsPerIrs),
        Command::ValidateConfig { config } => cmd_validate(config),
        Command::Selftest => Ok(selftest::run()),
    }
}

/// Load the config (or defaults) and apply flag overrides.
fn effective_config(common: &CommonOpts) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.scenario.seed = seed;
    }
    if let Some(k) = common.k {
        cfg.scenario.k = k;
        cfg.scenario.l = common.l.unwrap_or(k);
    }
    if let Some(n) = common.n {
        cfg.scenario.n = n;
    }
    if let Some(l) = common.l {
        cfg.scenario.l = l;
    }
    if let Some(elements) = common.elements {
        cfg.scenario.elements_per_irs = elements;
    }
    if let Some(p) = common.tx_power_dbm {
        cfg.scenario.radio.tx_power_dbm = p;
    }
    if let Some(algos) = &common.algos {
        cfg.sweep.algorithms = algos
            .iter()
            .map(|s| s.parse::<Algorithm>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    }
    Ok(cfg)
}

fn init_workers(workers: Option<usize>) -> Result<(), Error> {
    if let Some(w) = workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
    }
    Ok(())
}

fn ensure_out_dir(dir: &PathBuf) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.clone(), e))
}

/// Exit code reflecting per-algorithm failures: 4 if any cell hit the
/// exhaustive-search cap, 1 for other failures, 0 when everything ran.
fn failure_exit(trials: &[TrialResult]) -> ExitCode {
    let mut saw_failure = false;
    let mut saw_cap = false;
    for trial in trials {
        for o in &trial.outcomes {
            if let Err(msg) = &o.result {
                saw_failure = true;
                eprintln!(
                    "warning: seed {} algorithm {} failed: {msg}",
                    trial.seed, o.algorithm
                );
                if msg.contains("candidate cap exceeded") {
                    saw_cap = true;
                }
            }
        }
    }
    if saw_cap {
        ExitCode::from(4)
    } else if saw_failure {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_run(opts: RunOpts) -> Result<ExitCode, Error> {
    let cfg = effective_config(&opts.common)?;
    cfg.scenario.validate()?;
    init_workers(opts.common.workers)?;
    ensure_out_dir(&opts.common.out)?;

    let scenario = generate_scenario(&cfg.scenario)?;
    let trial = run_trial(
        &scenario,
        &cfg.sweep.algorithms,
        cfg.scenario.seed,
        cfg.scenario.es_candidate_cap as u128,
        SweepVariable::TxPower,
        cfg.scenario.radio.tx_power_dbm,
    )?;

    println!(
        "scenario: K={} N={} L={} M={} seed={} P={} dBm",
        cfg.scenario.k,
        cfg.scenario.n,
        cfg.scenario.l,
        cfg.scenario.elements_per_irs,
        cfg.scenario.seed,
        cfg.scenario.radio.tx_power_dbm
    );
    println!(
        "{:<10} {:>16} {:>16} {:>10} {:>10} {:>9}",
        "algorithm", "sum rate (b/s/Hz)", "throughput (b/s)", "proposals", "candidates", "wall ms"
    );
    for o in &trial.outcomes {
        match &o.result {
            Ok(m) => println!(
                "{:<10} {:>16.6e} {:>16.4e} {:>10} {:>10} {:>9.3}",
                o.algorithm.tag(),
                m.sum_rate_bps_hz,
                m.throughput_bps,
                m.proposals,
                m.candidates,
                m.wall_ms
            ),
            Err(e) => println!("{:<10} failed: {e}", o.algorithm.tag()),
        }
    }

    let trials = vec![trial];
    let csv_path = opts.common.out.join("run.csv");
    emit_csv(&trials, &csv_path)?;
    println!("wrote {}", csv_path.display());
    if opts.common.format == "csv+plot" {
        let summary: Vec<SummaryPoint> = trials[0]
            .outcomes
            .iter()
            .filter_map(|o| {
                o.result.as_ref().ok().map(|m| SummaryPoint {
                    variable: SweepVariable::TxPower,
                    value: trials[0].swept_value,
                    algorithm: o.algorithm,
                    mean_bps_hz: m.sum_rate_bps_hz,
                    stderr_bps_hz: 0.0,
                    trials_ok: 1,
                })
            })
            .collect();
        if !summary.is_empty() {
            let svg_path = opts.common.out.join("run.svg");
            emit_plot(&summary, &svg_path)?;
            println!("wrote {}", svg_path.display());
        }
    }
    Ok(failure_exit(&trials))
}

fn cmd_sweep(opts: SweepOpts, variable: SweepVariable) -> Result<ExitCode, Error> {
    let mut cfg = effective_config(&opts.common)?;
    // The subcommand pins the variable; config values carry over only when
    // they were written for the same variable.
    if cfg.sweep.variable != variable && opts.values.is_none() {
        cfg.sweep.values = match variable {
            SweepVariable::TxPower => vec![5.0, 10.0, 15.0, 20.0, 25.0],
            SweepVariable::ElementsPerIrs => vec![16.0, 64.0, 256.0, 1024.0],
        };
    }
    cfg.sweep.variable = variable;
    if let Some(values) = opts.values {
        cfg.sweep.values = values;
    }
    if let Some(trials) = opts.trials {
        cfg.sweep.trials = trials;
    }
    cfg.validate()?;
    init_workers(opts.common.workers)?;
    ensure_out_dir(&opts.common.out)?;

    let outcome = sweep(&cfg.scenario, &cfg.sweep)?;
    print_summary(&outcome);

    let stem = match variable {
        SweepVariable::TxPower => "sweep_power",
        SweepVariable::ElementsPerIrs => "sweep_elements",
    };
    let csv_path = opts.common.out.join(format!("{stem}.csv"));
    emit_csv(&outcome.trials, &csv_path)?;
    println!("wrote {}", csv_path.display());
    if opts.common.format == "csv+plot" {
        let svg_path = opts.common.out.join(format!("{stem}.svg"));
        emit_plot(&outcome.summary, &svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(failure_exit(&outcome.trials))
}

fn print_summary(outcome: &SweepOutcome) {
    println!(
        "{:<18} {:>12} {:<10} {:>14} {:>12} {:>8}",
        "variable", "value", "algorithm", "mean (b/s/Hz)", "stderr", "trials"
    );
    for p in &outcome.summary {
        println!(
            "{:<18} {:>12} {:<10} {:>14.6e} {:>12.4e} {:>8}",
            p.variable.as_str(),
            p.value,
            p.algorithm.tag(),
            p.mean_bps_hz,
            p.stderr_bps_hz,
            p.trials_ok
        );
    }
    if outcome.failures > 0 {
        println!(
            "skipped {} failed (trial, algorithm) cells",
            outcome.failures
        );
    }
}

fn cmd_validate(config: Option<PathBuf>) -> Result<ExitCode, Error> {
    let cfg = match &config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.validate()?;
    match &config {
        Some(path) => println!("config OK: {}", path.display()),
        None => println!("config OK: built-in defaults"),
    }
    println!(
        "scenario: K={} N={} L={} M={} area {}x{} m, f_c={} GHz, B={} GHz, P={} dBm, seed={}",
        cfg.scenario.k,
        cfg.scenario.n,
        cfg.scenario.l,
        cfg.scenario.elements_per_irs,
        cfg.scenario.area_width_m,
        cfg.scenario.area_depth_m,
        cfg.scenario.radio.carrier_frequency_hz / 1e9,
        cfg.scenario.radio.bandwidth_hz / 1e9,
        cfg.scenario.radio.tx_power_dbm,
        cfg.scenario.seed
    );
    println!(
        "sweep: {} over {:?}, {} trials, algorithms {:?}",
        cfg.sweep.variable.as_str(),
        cfg.sweep.values,
        cfg.sweep.trials,
        cfg.sweep
            .algorithms
            .iter()
            .map(|a| a.tag())
            .collect::<Vec<_>>()
    );
    Ok(ExitCode::SUCCESS)
}

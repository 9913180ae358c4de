//! `ranklab`: run ranking-estimator sweeps, verification suites, and
//! heuristic-vs-oracle comparisons from the command line, emitting
//! plot-ready CSV artifacts.
//!
//! Every invocation writes `summary.csv` plus one CSV per sweep/check into
//! the output directory. Exit codes: 0 on success with all checks passing,
//! 1 when a check suite fails, 2 on usage or configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ranklab_core::checks::{emit_check_csv, run_check};
use ranklab_core::harness::{
    consistency_condition_value, emit_csv, preset_consistent, preset_counterexample_quartic,
    preset_counterexample_superlight, run_sweep, ConditionReading, ExperimentConfig, SweepReport,
};
use ranklab_core::oracle::oracle_agreement;
use ranklab_core::Error;

/// Laboratory for empirical-Bayes ranking estimators: sweeps, checks, and
/// oracle comparisons with CSV output.
#[derive(Parser)]
#[command(name = "ranklab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML config file.
    Simulate {
        /// Path to the experiment config (keys mirror ExperimentConfig).
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Seed override (default: RANKLAB_SEED, then the config's seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a built-in experiment preset: consistent, quartic, superlight.
    Preset {
        /// Preset name.
        #[arg(long)]
        preset: String,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Seed override (default: RANKLAB_SEED, then the preset's seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a verification suite: conjugate, sandwich, inequality, lemma24,
    /// pmbound41, pmbound43, taildom.
    Check {
        /// Check suite name.
        #[arg(long)]
        preset: String,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Seed for the randomized suites (default: RANKLAB_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare posterior-mean ranking against the brute-force Bayes
    /// permutation on random instances.
    OracleCompare {
        /// Instance size (2..=8).
        #[arg(long, default_value_t = 5)]
        p: usize,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Output directory for CSV artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Seed (default: RANKLAB_SEED, then 0).
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Simulate { config, out, seed } => {
            let text = std::fs::read_to_string(&config).map_err(|e| {
                Error::Config(format!("cannot read config {}: {e}", config.display()))
            })?;
            let mut cfg: ExperimentConfig =
                toml::from_str(&text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
            cfg.seed = resolve_seed(seed, cfg.seed)?;
            run_and_emit_sweep(&cfg, "sweep", &out)
        }
        Command::Preset { preset, out, seed } => {
            let mut cfg = preset_config(&preset)?;
            cfg.seed = resolve_seed(seed, cfg.seed)?;
            run_and_emit_sweep(&cfg, &preset, &out)
        }
        Command::Check { preset, out, seed } => {
            let seed = resolve_seed(seed, 0)?;
            let corrupt = std::env::var("RANKLAB_CORRUPT_FOOTRULE").is_ok_and(|v| v == "1");
            let report = run_check(&preset, seed, corrupt)?;
            std::fs::create_dir_all(&out)?;
            let csv_name = format!("{}.csv", report.name);
            emit_check_csv(&report, &out.join(&csv_name))?;
            let (passed, failed, skipped) = report.counts();
            let mut rows = SummaryRows::new();
            let item = format!("check:{}", report.name);
            rows.int(&item, "passed", passed as u64);
            rows.int(&item, "failed", failed as u64);
            rows.int(&item, "skipped", skipped as u64);
            rows.int(&item, "seed", seed);
            rows.text(
                &item,
                "verdict",
                if report.passed() { "PASS" } else { "FAIL" },
            );
            rows.text(&item, "csv", &csv_name);
            rows.write(&out)?;
            println!("{}", report.summary_line());
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("{}", report.summary_line());
                for case in report
                    .cases
                    .iter()
                    .filter(|c| {
                        !matches!(
                            c.status,
                            ranklab_core::checks::CaseStatus::Passed
                                | ranklab_core::checks::CaseStatus::SkippedPrecondition
                        )
                    })
                    .take(10)
                {
                    eprintln!(
                        "  failed case {}: observed {:.6e} vs bound {:.6e}",
                        case.label, case.observed, case.bound
                    );
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::OracleCompare {
            p,
            instances,
            out,
            seed,
        } => {
            let seed = resolve_seed(seed, 0)?;
            let report = oracle_agreement(p, instances, seed)?;
            std::fs::create_dir_all(&out)?;
            let csv_name = "oracle_compare.csv";
            let mut csv =
                String::from("instance,agree,heuristic_mean,heuristic_se,oracle_mean,oracle_se\n");
            for c in &report.per_instance {
                csv.push_str(&format!(
                    "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                    c.instance,
                    c.agree,
                    c.heuristic.mean,
                    c.heuristic.std_error,
                    c.oracle.mean,
                    c.oracle.std_error
                ));
            }
            std::fs::write(out.join(csv_name), csv)?;
            let mut rows = SummaryRows::new();
            rows.int("oracle-compare", "p", p as u64);
            rows.int("oracle-compare", "instances", instances as u64);
            rows.int("oracle-compare", "agreements", report.agreements as u64);
            rows.int(
                "oracle-compare",
                "disagreements",
                report.disagreements.len() as u64,
            );
            rows.float("oracle-compare", "agreement", report.agreement_rate());
            rows.float(
                "oracle-compare",
                "max_gap_over_se",
                report.max_gap_over_se(),
            );
            rows.text(
                "oracle-compare",
                "all_within_3se",
                if report.all_within(3.0) {
                    "true"
                } else {
                    "false"
                },
            );
            rows.int("oracle-compare", "seed", seed);
            rows.text("oracle-compare", "csv", csv_name);
            rows.write(&out)?;
            println!(
                "oracle-compare: agreement {:.4} over {} instances (p={})",
                report.agreement_rate(),
                instances,
                p
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Seed priority: `--seed` flag, then `RANKLAB_SEED`, then the fallback.
fn resolve_seed(flag: Option<u64>, fallback: u64) -> Result<u64, Error> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("RANKLAB_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| Error::Config(format!("RANKLAB_SEED is not a valid seed: {text:?}"))),
        Err(_) => Ok(fallback),
    }
}

fn preset_config(name: &str) -> Result<ExperimentConfig, Error> {
    match name {
        "consistent" => Ok(preset_consistent()),
        "quartic" => Ok(preset_counterexample_quartic()),
        "superlight" => Ok(preset_counterexample_superlight()),
        other => Err(Error::Config(format!(
            "unknown preset `{other}` (expected one of: consistent, quartic, superlight)"
        ))),
    }
}

fn run_and_emit_sweep(cfg: &ExperimentConfig, name: &str, out: &Path) -> Result<ExitCode, Error> {
    let report = run_sweep(cfg)?;
    std::fs::create_dir_all(out)?;
    let csv_name = format!("{name}.csv");
    emit_csv(&report, &out.join(&csv_name))?;
    let rows = sweep_summary_rows(cfg, &report, name, &csv_name)?;
    rows.write(out)?;
    println!(
        "{name}: {} cells over {} sizes, seed {} -> {}",
        report.cells.len(),
        cfg.p_schedule.len(),
        report.seed,
        csv_name
    );
    Ok(ExitCode::SUCCESS)
}

fn sweep_summary_rows(
    cfg: &ExperimentConfig,
    report: &SweepReport,
    name: &str,
    csv_name: &str,
) -> Result<SummaryRows, Error> {
    let item = format!("sweep:{name}");
    let mut rows = SummaryRows::new();
    rows.int(&item, "cells", report.cells.len() as u64);
    rows.int(
        &item,
        "aborted_replicates",
        report.aborted_replicates as u64,
    );
    rows.int(&item, "replicates", cfg.replicates as u64);
    rows.int(&item, "seed", report.seed);
    rows.text(&item, "csv", csv_name);
    // the vanishing-condition diagnostics under both moment readings
    for &p in &cfg.p_schedule {
        for reading in [
            ConditionReading::CubeRootOfMean,
            ConditionReading::MeanOfCubeRoot,
        ] {
            let v = consistency_condition_value(&cfg.sigma_law, p, &cfg.scaling, reading)?;
            rows.float(&item, &format!("condition@p={p}:{}", reading.label()), v);
        }
    }
    Ok(rows)
}

/// Accumulates `item,metric,value` rows and writes them as `summary.csv`
/// (the single writer for every run's summary).
struct SummaryRows {
    rows: Vec<(String, String, String)>,
}

impl SummaryRows {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }
    fn int(&mut self, item: &str, metric: &str, value: u64) {
        self.rows
            .push((item.into(), metric.into(), value.to_string()));
    }
    fn float(&mut self, item: &str, metric: &str, value: f64) {
        self.rows
            .push((item.into(), metric.into(), format!("{value:.16e}")));
    }
    fn text(&mut self, item: &str, metric: &str, value: &str) {
        self.rows.push((item.into(), metric.into(), value.into()));
    }
    fn write(&self, out_dir: &Path) -> Result<(), Error> {
        let mut text = String::from("item,metric,value\n");
        for (item, metric, value) in &self.rows {
            text.push_str(&format!("{item},{metric},{value}\n"));
        }
        std::fs::write(out_dir.join("summary.csv"), text)?;
        Ok(())
    }
}

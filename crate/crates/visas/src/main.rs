//! Operator CLI: simulate scenario flights, replay logs through the
//! detector, sweep window sizes, and summarize verdict files.
//!
//! Exit codes: 0 success / no spoofing, 1 operational error, 2 spoofing
//! suspected (`detect` only).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use visas::attack;
use visas::detector::{run_stream, verdicts_to_csv, VerdictReason, WindowConfig};
use visas::metrics::{self, sweep_to_csv};
use visas::plot::{line_chart, Series};
use visas::scenario::load_scenario;
use visas::simulator::{fly, generate_terrain};
use visas::telemetry::{read_log, write_log};

#[derive(Parser)]
#[command(name = "visas", version, about = "GPS spoofing detection via camera/GPS cross-validation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct WindowFlags {
    /// Samples used to fit the model.
    #[arg(long)]
    window: Option<usize>,
    /// Samples verified against each fitted model.
    #[arg(long)]
    verify: Option<usize>,
    /// Alert threshold in meters.
    #[arg(long)]
    threshold: Option<f64>,
    /// Similarity floor (percent) below which the detector re-anchors.
    #[arg(long = "min-corr")]
    min_corr: Option<f64>,
    /// Use the one-sided rule (alert only when predicted > reported).
    #[arg(long = "one-sided", default_value_t = false)]
    one_sided: bool,
}

impl WindowFlags {
    fn apply(&self, base: WindowConfig) -> WindowConfig {
        WindowConfig {
            n: self.window.unwrap_or(base.n),
            q: self.verify.unwrap_or(base.q),
            alert_threshold: self.threshold.unwrap_or(base.alert_threshold),
            min_correlation: self.min_corr.unwrap_or(base.min_correlation),
            one_sided: self.one_sided || base.one_sided,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario: generate terrain, fly the plan, apply any attack,
    /// write the flight log, and run the detector.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario's terrain seed (VISAS_SEED also works).
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        window: WindowFlags,
    },
    /// Replay a flight log through the detector.
    Detect {
        #[arg(long)]
        log: PathBuf,
        /// Verdict CSV destination (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep every k-th record, simulating a faster flight.
        #[arg(long, default_value_t = 1)]
        downsample: usize,
        #[command(flatten)]
        window: WindowFlags,
    },
    /// Sweep window sizes over a benign log and pick the best via e(alpha).
    Sweep {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Window sizes, comma-separated (e.g. 2,3,4,5,6,7,8).
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8")]
        sizes: Vec<usize>,
        /// Alert thresholds in meters, comma-separated.
        #[arg(long, value_delimiter = ',', default_value = "0.6,0.8,1,1.2,1.4,1.6,2,2.4")]
        thresholds: Vec<f64>,
        /// Mix between average (alpha=1) and maximum (alpha=0) error.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[command(flatten)]
        window: WindowFlags,
    },
    /// Summarize a verdict CSV.
    Report {
        #[arg(long)]
        verdicts: PathBuf,
        /// Known attack onset index, for detection-delay statistics.
        #[arg(long = "attack-start")]
        attack_start: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn env_seed() -> Option<u64> {
    std::env::var("VISAS_SEED").ok().and_then(|v| v.parse().ok())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Simulate { scenario, out, seed, window } => cmd_simulate(&scenario, &out, seed, &window),
        Command::Detect { log, out, downsample, window } => cmd_detect(&log, out.as_deref(), downsample, &window),
        Command::Sweep { log, out, sizes, thresholds, alpha, window } => {
            cmd_sweep(&log, &out, &sizes, &thresholds, alpha, &window)
        }
        Command::Report { verdicts, attack_start } => cmd_report(&verdicts, attack_start),
    }
}

fn cmd_simulate(
    scenario_path: &Path,
    out: &Path,
    seed: Option<u64>,
    flags: &WindowFlags,
) -> Result<ExitCode, String> {
    let mut scenario = load_scenario(scenario_path).map_err(|e| e.to_string())?;
    if let Some(s) = seed.or_else(env_seed) {
        scenario.terrain.seed = s;
    }
    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;

    let terrain = generate_terrain(&scenario.terrain).map_err(|e| e.to_string())?;
    let benign = fly(&scenario.plan, &terrain, &scenario.camera, scenario.origin).map_err(|e| e.to_string())?;
    let samples = match &scenario.attack {
        Some(spec) => attack::inject(&benign, spec).map_err(|e| e.to_string())?,
        None => benign,
    };

    let log_dir = out.join("log");
    write_log(&samples, &log_dir, "sim-drone", scenario.plan.sample_rate).map_err(|e| e.to_string())?;

    let cfg = flags.apply(scenario.window.unwrap_or_default());
    cfg.validate()?;
    let verdicts = run_stream(&samples, &cfg);
    let csv_path = out.join("verdicts.csv");
    fs::write(&csv_path, verdicts_to_csv(&verdicts)).map_err(|e| e.to_string())?;

    let flagged = verdicts.iter().filter(|v| v.flagged).count();
    let resets = verdicts.iter().filter(|v| v.reason == VerdictReason::ModelReset).count();
    let mut summary = format!(
        "scenario: {}\nterrain seed: {}\nsamples: {}\nverdicts: {}\nflagged: {}\nmodel resets: {}\n",
        scenario_path.display(),
        scenario.terrain.seed,
        samples.len(),
        verdicts.len(),
        flagged,
        resets,
    );
    match metrics::evaluate_flight(&samples, cfg.min_correlation) {
        Ok(fit) => summary.push_str(&format!(
            "flight fit: distance = {:.4}*similarity + {:.4}\nrmse: {:.4}\nr2: {:.4}\nmae: {:.4}\nin-scope range: {:.1} m over {} samples\n",
            fit.slope, fit.intercept, fit.rmse, fit.r2, fit.mae, fit.in_scope_range, fit.points,
        )),
        Err(e) => summary.push_str(&format!("flight fit unavailable: {e}\n")),
    }
    fs::write(out.join("summary.txt"), &summary).map_err(|e| e.to_string())?;
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_detect(
    log: &Path,
    out: Option<&Path>,
    downsample: usize,
    flags: &WindowFlags,
) -> Result<ExitCode, String> {
    let samples = read_log(log)
        .and_then(|r| r.with_downsample(downsample))
        .and_then(|r| r.collect_samples())
        .map_err(|e| e.to_string())?;
    let cfg = flags.apply(WindowConfig::default());
    cfg.validate()?;
    let verdicts = run_stream(&samples, &cfg);
    let csv = verdicts_to_csv(&verdicts);
    match out {
        Some(path) => fs::write(path, &csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    let flagged = verdicts.iter().filter(|v| v.flagged).count();
    eprintln!("{} verdicts, {} flagged", verdicts.len(), flagged);
    Ok(if flagged > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn cmd_sweep(
    log: &Path,
    out: &Path,
    sizes: &[usize],
    thresholds: &[f64],
    alpha: f64,
    flags: &WindowFlags,
) -> Result<ExitCode, String> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(format!("alpha {alpha} outside [0, 1]"));
    }
    let samples = read_log(log).and_then(|r| r.collect_samples()).map_err(|e| e.to_string())?;
    let base = flags.apply(WindowConfig::default());
    let q = base.q;
    let results = metrics::window_sweep(&samples, sizes, q, thresholds, &base).map_err(|e| e.to_string())?;

    fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    fs::write(out.join("sweep.csv"), sweep_to_csv(&results)).map_err(|e| e.to_string())?;

    let avg: Vec<(f64, f64)> =
        results.iter().map(|r| (r.window_size as f64, r.avg_prediction_error)).collect();
    let max: Vec<(f64, f64)> =
        results.iter().map(|r| (r.window_size as f64, r.max_prediction_error)).collect();
    let error_svg = line_chart(
        "Prediction error vs window size",
        "window size (samples)",
        "error (m)",
        &[Series { label: "average", points: &avg }, Series { label: "maximum", points: &max }],
    );
    fs::write(out.join("error_vs_window.svg"), error_svg).map_err(|e| e.to_string())?;

    let fpr_series: Vec<(String, Vec<(f64, f64)>)> = results
        .iter()
        .map(|r| (format!("n={}", r.window_size), r.fpr_by_threshold.clone()))
        .collect();
    let series: Vec<Series<'_>> = fpr_series
        .iter()
        .map(|(label, points)| Series { label, points })
        .collect();
    let fpr_svg = line_chart("FPR vs alert threshold", "threshold (m)", "FPR", &series);
    fs::write(out.join("fpr_vs_threshold.svg"), fpr_svg).map_err(|e| e.to_string())?;

    let chosen = metrics::optimal_window(&results, alpha).ok_or("no sweep results")?;
    println!("chosen window: {chosen} (alpha = {alpha})");
    for r in &results {
        println!(
            "n={}: avg {:.4} m, max {:.4} m, e(alpha) {:.4}",
            r.window_size,
            r.avg_prediction_error,
            r.max_prediction_error,
            metrics::window_score(r, alpha)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(verdicts_path: &Path, attack_start: Option<usize>) -> Result<ExitCode, String> {
    let text = fs::read_to_string(verdicts_path)
        .map_err(|e| format!("cannot read {}: {e}", verdicts_path.display()))?;
    let mut total = 0usize;
    let mut flagged = 0usize;
    let mut resets = 0usize;
    let mut abstained = 0usize;
    let mut first_flag: Option<usize> = None;
    let mut errors: Vec<f64> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(format!("{}:{}: malformed verdict row", verdicts_path.display(), lineno + 1));
        }
        total += 1;
        let index: usize = fields[0].parse().map_err(|_| format!("bad index on line {}", lineno + 1))?;
        match fields[7] {
            "SpoofSuspected" => {
                flagged += 1;
                first_flag.get_or_insert(index);
            }
            "ModelReset" => resets += 1,
            "ZeroVarianceFrame" => abstained += 1,
            _ => {}
        }
        if let Ok(e) = fields[5].parse::<f64>() {
            errors.push(e.abs());
        }
    }
    println!("verdicts: {total}");
    println!("flagged: {flagged}");
    println!("model resets: {resets}");
    println!("abstained (zero variance): {abstained}");
    if !errors.is_empty() {
        let avg = errors.iter().sum::<f64>() / errors.len() as f64;
        let max = errors.iter().cloned().fold(0.0, f64::max);
        println!("avg |error|: {avg:.4} m");
        println!("max |error|: {max:.4} m");
    }
    if let Some(start) = attack_start {
        match first_flag.filter(|&i| i >= start) {
            Some(i) => println!("detected: yes (delay {} samples)", i - start),
            None => println!("detected: no"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

//! Command-line front end: preset grids, config files, power tables, plots.

mod config;
mod output;
mod plot;
mod presets;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use permutest_core::harness::{run_scenario, PowerReport};
use permutest_core::perm::PvalueMode;

use crate::config::RunConfig;
use crate::output::OutputWriter;

#[derive(Parser)]
#[command(name = "permutest", version, about = "Two-sample signal detection: permutation-test power simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PvalueArg {
    Paper,
    AddOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a TOML config; writes power.csv and a manifest.
    Run {
        /// Preset name (see `list-presets`) or path to a config file.
        target: String,
        /// Master seed; the whole run is a pure function of config + seed.
        #[arg(long, default_value_t = 1729)]
        seed: u64,
        /// Override the config's replication count.
        #[arg(long)]
        reps: Option<u32>,
        /// Override the config's permutation count.
        #[arg(long)]
        perms: Option<u32>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Override the config's test level.
        #[arg(long)]
        alpha: Option<f64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the config's p-value convention.
        #[arg(long, value_enum)]
        pvalue_mode: Option<PvalueArg>,
        /// Override the config's randomized tie-breaking switch.
        #[arg(long, value_enum)]
        tie_break: Option<Toggle>,
    },
    /// List the embedded scenario grids.
    ListPresets,
    /// Render dot plots (one SVG per scenario) from a power.csv.
    Plot {
        csv: PathBuf,
        /// Output directory (default: next to the input file).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the fast property checks.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            target,
            seed,
            reps,
            perms,
            threads,
            alpha,
            out,
            pvalue_mode,
            tie_break,
        } => {
            let resolved = match resolve_config(&target) {
                Ok(r) => r,
                Err(message) => {
                    eprintln!("config error: {message}");
                    return ExitCode::from(1);
                }
            };
            let mut cfg = match RunConfig::parse(&resolved.text) {
                Ok(c) => c,
                Err(message) => {
                    eprintln!("config error in {}: {message}", resolved.name);
                    return ExitCode::from(1);
                }
            };
            if let Some(reps) = reps {
                cfg.replications = reps;
            }
            if let Some(perms) = perms {
                cfg.permutations = perms;
            }
            if let Some(alpha) = alpha {
                cfg.alpha = alpha;
            }
            if let Some(mode) = pvalue_mode {
                cfg.pvalue_mode = match mode {
                    PvalueArg::Paper => PvalueMode::PaperExact,
                    PvalueArg::AddOne => PvalueMode::AddOne,
                };
            }
            if let Some(tb) = tie_break {
                cfg.tie_break = matches!(tb, Toggle::On);
            }
            let worker_threads = threads.unwrap_or_else(num_cpus);
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(worker_threads)
                .build_global()
            {
                eprintln!("config error: thread pool: {e}");
                return ExitCode::from(1);
            }
            match run(&cfg, &resolved, seed, &out, worker_threads) {
                Ok(()) => ExitCode::SUCCESS,
                Err(RunError::Config(message)) => {
                    eprintln!("config error: {message}");
                    ExitCode::from(1)
                }
                Err(RunError::Runtime(message)) => {
                    eprintln!("runtime error: {message}");
                    ExitCode::from(2)
                }
            }
        }
        Command::ListPresets => {
            for preset in presets::PRESETS {
                println!("{:<8} {}", preset.name, preset.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Plot { csv, out } => match run_plot(&csv, out.as_deref()) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("plot error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Selftest => {
            let mut failures = 0;
            for (name, outcome) in permutest_core::selftest::run_fast_checks() {
                match outcome {
                    Ok(()) => println!("ok   {name}"),
                    Err(message) => {
                        failures += 1;
                        println!("FAIL {name}: {message}");
                    }
                }
            }
            if failures == 0 {
                println!("selftest: all checks passed");
                ExitCode::SUCCESS
            } else {
                println!("selftest: {failures} check(s) failed");
                ExitCode::from(1)
            }
        }
    }
}

struct ResolvedConfig {
    name: String,
    text: String,
}

fn resolve_config(target: &str) -> Result<ResolvedConfig, String> {
    if let Some(preset) = presets::find(target) {
        return Ok(ResolvedConfig {
            name: preset.name.to_string(),
            text: preset.toml.to_string(),
        });
    }
    let path = PathBuf::from(target);
    if path.exists() {
        let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(ResolvedConfig {
            name: target.to_string(),
            text,
        });
    }
    let known: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
    Err(format!(
        "'{target}' is neither a preset nor a readable file; presets are: {}",
        known.join(", ")
    ))
}

enum RunError {
    Config(String),
    Runtime(String),
}

fn run(
    cfg: &RunConfig,
    resolved: &ResolvedConfig,
    seed: u64,
    out: &std::path::Path,
    threads: usize,
) -> Result<(), RunError> {
    let scenarios = cfg.scenarios().map_err(RunError::Config)?;
    let mut report = PowerReport::default();
    for scenario in &scenarios {
        eprintln!(
            "running {} at effect {} ({} replications x {} permutations, {} statistics)",
            scenario.id,
            scenario.signal.effect(),
            scenario.replications,
            scenario.permutations,
            scenario.statistics.len()
        );
        let cell = run_scenario(scenario, seed).map_err(|e| {
            RunError::Runtime(format!(
                "scenario {} at effect {}: {e}",
                scenario.id,
                scenario.signal.effect()
            ))
        })?;
        report.merge(cell);
    }
    let mut writer = OutputWriter::new(out)
        .map_err(|e| RunError::Runtime(format!("{e:#}")))?;
    let csv = output::power_csv(&report);
    let path = writer
        .write("power.csv", csv.as_bytes())
        .map_err(|e| RunError::Runtime(format!("{e:#}")))?;
    println!("wrote {}", path.display());
    let manifest = writer
        .finish(&resolved.name, &resolved.text, seed, threads)
        .map_err(|e| RunError::Runtime(format!("{e:#}")))?;
    println!("wrote {}", manifest.display());
    Ok(())
}

fn run_plot(csv: &std::path::Path, out: Option<&std::path::Path>) -> anyhow::Result<Vec<PathBuf>> {
    let text = fs::read_to_string(csv)?;
    let rows = plot::parse_power_csv(&text)?;
    let dir = out
        .map(PathBuf::from)
        .or_else(|| csv.parent().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    let mut written = Vec::new();
    for id in plot::scenario_ids(&rows) {
        let scenario_rows: Vec<plot::CsvRow> =
            rows.iter().filter(|r| r.scenario == id).cloned().collect();
        let svg = plot::render_scenario(&id, &scenario_rows);
        let path = dir.join(format!("{id}.svg"));
        fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}

fn num_cpus() -> usize {
    std::thread::available_parallelism()
        .map(std::num::NonZeroUsize::get)
        .unwrap_or(1)
}

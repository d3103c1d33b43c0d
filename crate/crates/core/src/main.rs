use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rogue_zeno::scenario::{list_presets, load_config, preset, run_scenario, ScenarioConfig};
use rogue_zeno::Error;

/// Default parent directory for scenario outputs when neither `--out` nor
/// the config's `[output] dir` is given.
const OUT_DIR_ENV: &str = "ROGUE_ZENO_OUT_DIR";

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERIC: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rogue-zeno",
    version,
    about = "NLSE rogue waves under repeated window measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the time step.
        #[arg(long)]
        dt: Option<f64>,
        /// Override the number of grid points.
        #[arg(long)]
        grid: Option<usize>,
        /// Record surfaces at every step instead of every 50th.
        #[arg(long)]
        full_snapshots: bool,
    },
    /// List the built-in presets.
    ListPresets,
    /// Parse and validate a scenario file without running it.
    Validate { config: PathBuf },
}

fn output_dir(explicit: Option<PathBuf>, config: &ScenarioConfig) -> PathBuf {
    explicit
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| {
            let parent =
                std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("out"), PathBuf::from);
            parent.join(&config.name)
        })
}

fn fail(err: &Error) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(if err.is_config() {
        EXIT_CONFIG
    } else {
        EXIT_NUMERIC
    })
}

fn run(config: &ScenarioConfig, out: &Path) -> ExitCode {
    match run_scenario(config, out) {
        Ok(manifest) => {
            for f in &manifest.files {
                println!("{:<28} {:>9} rows x {} cols", f.path, f.rows, f.columns);
            }
            println!(
                "wrote {} files to {} in {:.2}s",
                manifest.files.len(),
                out.display(),
                manifest.wall_clock_seconds
            );
            ExitCode::SUCCESS
        }
        Err(failure) => fail(&failure.error),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match cli.command {
        Command::Run { config, out } => match load_config(&config) {
            Ok(cfg) => {
                let dir = output_dir(out, &cfg);
                run(&cfg, &dir)
            }
            Err(e) => fail(&e),
        },
        Command::Preset {
            name,
            out,
            dt,
            grid,
            full_snapshots,
        } => {
            let mut cfg = match preset(&name) {
                Ok(cfg) => cfg,
                Err(e) => return fail(&e),
            };
            if let Some(dt) = dt {
                cfg.solver.dt = dt;
            }
            if let Some(points) = grid {
                cfg.grid.points = points;
            }
            if full_snapshots {
                cfg.solver.record_every = 1;
            }
            if let Err(e) = cfg.validate() {
                return fail(&e);
            }
            let dir = output_dir(out, &cfg);
            run(&cfg, &dir)
        }
        Command::ListPresets => {
            for p in list_presets() {
                println!("{:<18} {}", p.name, p.description);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load_config(&config) {
            Ok(cfg) => {
                println!(
                    "{}: ok ({} phase(s), M = {}, dt = {})",
                    config.display(),
                    cfg.phases.len(),
                    cfg.grid.points,
                    cfg.solver.dt
                );
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
    }
}

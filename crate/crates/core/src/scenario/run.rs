//! Scenario execution and CSV export.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Phase, ScenarioConfig};
use crate::analytic::sample_on_grid;
use crate::grid::{ComplexField, Grid};
use crate::solver::{Ssfm, SsfmParams};
use crate::spectrum::spectrogram;
use crate::zeno::{analytic_survival, run_zeno, MeasurementRecord, ZenoSchedule};
use crate::{Error, Result};

pub const FIELD_SURFACE_HEADER: &str = "t,x,abs_psi,re_psi,im_psi";
pub const SPECTRUM_SURFACE_HEADER: &str = "t,k,db";
pub const PROBABILITY_HEADER: &str =
    "N,n,t_n,survival,cumulative,analytic_survival,analytic_cumulative";
pub const BACKGROUND_HEADER: &str = "N,n,t_n,background";
pub const PROFILE_HEADER: &str = "N,t,x,abs_psi,re_psi,im_psi";

/// Records of one Zeno phase.
#[derive(Debug, Clone)]
pub struct ZenoPhaseOutcome {
    pub phase_index: usize,
    pub schedule: ZenoSchedule,
    pub records: Vec<MeasurementRecord>,
    pub first_projection: ComplexField,
}

/// Everything one scenario member produced, in memory.
#[derive(Debug, Clone)]
pub struct MemberOutcome {
    /// Sweep value, if this member belongs to a sweep.
    pub sweep_measurements: Option<usize>,
    pub final_field: ComplexField,
    /// Decimated states for the field/spectrum surfaces, starting with the
    /// initial condition.
    pub surface: Vec<ComplexField>,
    pub zeno: Vec<ZenoPhaseOutcome>,
    /// Field time at the end of each phase.
    pub phase_end_times: Vec<f64>,
}

impl MemberOutcome {
    /// `N` of the last Zeno phase, or 0 for measurement-free runs.
    pub fn measurement_count(&self) -> usize {
        self.zeno.last().map_or(0, |z| z.schedule.num_measurements)
    }
}

fn run_member(
    config: &ScenarioConfig,
    grid: &Arc<Grid>,
    sweep: Option<usize>,
) -> Result<MemberOutcome> {
    let record_surface = config.outputs.field_surface || config.outputs.spectrum_surface;
    let params = SsfmParams {
        record_every: if record_surface {
            config.solver.record_every
        } else {
            0
        },
        ..config.solver
    };
    let mut ssfm = Ssfm::new(grid.clone());
    let mut field = sample_on_grid(&config.initial, grid, config.t0)?;
    let mut surface = Vec::new();
    if params.record_every > 0 {
        surface.push(field.clone());
    }
    let mut zeno = Vec::new();
    let mut phase_end_times = Vec::with_capacity(config.phases.len());

    for (index, phase) in config.phases.iter().enumerate() {
        let t_start = config.phase_start(index);
        match *phase {
            Phase::Free { t_end } => {
                let evo = ssfm.evolve(field, t_end, &params)?;
                surface.extend(evo.snapshots);
                field = evo.field;
            }
            Phase::Zeno {
                t_end,
                window,
                measurements,
                normalize,
                prepare,
            } => {
                let n = match sweep {
                    Some(n) => n,
                    None => measurements.resolve(t_end - t_start, params.dt)?,
                };
                let mut schedule = ZenoSchedule::new(window, t_start, t_end, n)?
                    .with_normalization(normalize)
                    .prepared(prepare);
                let steps = schedule.steps_per_measurement(params.dt)?;
                schedule.snapshot_every = if params.record_every == 0 {
                    0
                } else {
                    (params.record_every / steps).max(1)
                };
                let run = run_zeno(&mut ssfm, field, &schedule, &params)?;
                surface.extend(run.snapshots);
                zeno.push(ZenoPhaseOutcome {
                    phase_index: index,
                    schedule,
                    records: run.records,
                    first_projection: run.first_projection,
                });
                field = run.field;
            }
        }
        field.time = phase.t_end();
        phase_end_times.push(field.time);
    }

    Ok(MemberOutcome {
        sweep_measurements: sweep,
        final_field: field,
        surface,
        zeno,
        phase_end_times,
    })
}

/// Runs every member of `config` (sweep members in parallel) without
/// writing anything.
pub fn execute(config: &ScenarioConfig) -> Result<Vec<MemberOutcome>> {
    config.validate()?;
    let grid = Arc::new(config.grid.build()?);
    config
        .members()
        .into_par_iter()
        .map(|sweep| run_member(config, &grid, sweep))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct EmittedFile {
    pub path: String,
    pub rows: usize,
    pub columns: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedGrid {
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberSummary {
    pub measurements: usize,
    pub final_time: f64,
    pub cumulative_survival: Option<f64>,
    pub peak_abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub tool_version: String,
    pub config: ScenarioConfig,
    pub grid: ResolvedGrid,
    pub solver: SsfmParams,
    pub output_dir: PathBuf,
    pub wall_clock_seconds: f64,
    pub files: Vec<EmittedFile>,
    pub members: Vec<MemberSummary>,
    pub error: Option<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

/// A failed run: the error plus whatever the manifest recorded up to it.
#[derive(Debug)]
pub struct RunFailure {
    pub error: Error,
    pub manifest: Box<RunManifest>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scenario `{}` failed: {}",
            self.manifest.scenario, self.error
        )
    }
}

impl std::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
    rows: usize,
    columns: usize,
}

impl CsvFile {
    fn create(path: PathBuf, header: &str) -> Result<Self> {
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{header}").map_err(|e| Error::io(&path, e))?;
        Ok(CsvFile {
            path,
            out,
            rows: 0,
            columns: header.split(',').count(),
        })
    }

    fn row(&mut self, line: fmt::Arguments<'_>) -> Result<()> {
        self.out
            .write_fmt(line)
            .and_then(|_| self.out.write_all(b"\n"))
            .map_err(|e| Error::io(&self.path, e))?;
        self.rows += 1;
        Ok(())
    }

    fn finish(mut self, dir: &Path) -> Result<EmittedFile> {
        self.out.flush().map_err(|e| Error::io(&self.path, e))?;
        let name = self
            .path
            .strip_prefix(dir)
            .unwrap_or(&self.path)
            .to_string_lossy()
            .into_owned();
        Ok(EmittedFile {
            path: name,
            rows: self.rows,
            columns: self.columns,
        })
    }
}

fn suffix(member: &MemberOutcome) -> String {
    member
        .sweep_measurements
        .map_or_else(String::new, |n| format!("_N{n}"))
}

fn write_field_surface(dir: &Path, member: &MemberOutcome) -> Result<EmittedFile> {
    let mut csv = CsvFile::create(
        dir.join(format!("field_surface{}.csv", suffix(member))),
        FIELD_SURFACE_HEADER,
    )?;
    for snap in &member.surface {
        for (x, z) in snap.grid().positions().zip(snap.values()) {
            csv.row(format_args!(
                "{:?},{:?},{:?},{:?},{:?}",
                snap.time,
                x,
                z.norm(),
                z.re,
                z.im
            ))?;
        }
    }
    csv.finish(dir)
}

fn write_spectrum_surface(dir: &Path, member: &MemberOutcome) -> Result<EmittedFile> {
    let mut csv = CsvFile::create(
        dir.join(format!("spectrum_surface{}.csv", suffix(member))),
        SPECTRUM_SURFACE_HEADER,
    )?;
    if !member.surface.is_empty() {
        for frame in spectrogram(&member.surface)? {
            for (k, db) in frame.wavenumbers_centered.iter().zip(&frame.magnitude_db) {
                csv.row(format_args!("{:?},{:?},{:?}", frame.time, k, db))?;
            }
        }
    }
    csv.finish(dir)
}

// Floats go through `{:?}`: shortest round-trip text, exponent form at the extremes.
fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |v| format!("{v:?}"))
}

fn write_probability_tables(dir: &Path, members: &[MemberOutcome]) -> Result<Vec<EmittedFile>> {
    let mut prob = CsvFile::create(dir.join("probability_table.csv"), PROBABILITY_HEADER)?;
    let mut bg = CsvFile::create(dir.join("background.csv"), BACKGROUND_HEADER)?;
    for member in members {
        for phase in &member.zeno {
            let n_total = phase.schedule.num_measurements;
            let per = analytic_survival(phase.schedule.duration(), n_total).ok();
            for r in &phase.records {
                let cum = per.map(|p| p.powi(r.index as i32));
                prob.row(format_args!(
                    "{},{},{:?},{:?},{:?},{},{}",
                    n_total,
                    r.index,
                    r.time,
                    r.survival,
                    r.cumulative,
                    fmt_opt(per),
                    fmt_opt(cum)
                ))?;
                bg.row(format_args!(
                    "{},{},{:?},{:?}",
                    n_total, r.index, r.time, r.background
                ))?;
            }
        }
    }
    Ok(vec![prob.finish(dir)?, bg.finish(dir)?])
}

fn write_profiles(dir: &Path, members: &[MemberOutcome]) -> Result<EmittedFile> {
    let mut csv = CsvFile::create(dir.join("profiles.csv"), PROFILE_HEADER)?;
    for member in members {
        let f = &member.final_field;
        let n = member.measurement_count();
        for (x, z) in f.grid().positions().zip(f.values()) {
            csv.row(format_args!(
                "{},{:?},{:?},{:?},{:?},{:?}",
                n,
                f.time,
                x,
                z.norm(),
                z.re,
                z.im
            ))?;
        }
    }
    csv.finish(dir)
}

fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<()> {
    let path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(manifest).expect("manifest serialises");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
}

fn emit(config: &ScenarioConfig, dir: &Path, manifest: &mut RunManifest) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let members = execute(config)?;
    manifest.members = members
        .iter()
        .map(|m| MemberSummary {
            measurements: m.measurement_count(),
            final_time: m.final_field.time,
            cumulative_survival: m
                .zeno
                .last()
                .and_then(|z| z.records.last())
                .map(|r| r.cumulative),
            peak_abs: m.final_field.max_abs(),
        })
        .collect();
    for member in &members {
        if config.outputs.field_surface {
            manifest.files.push(write_field_surface(dir, member)?);
        }
        if config.outputs.spectrum_surface {
            manifest.files.push(write_spectrum_surface(dir, member)?);
        }
    }
    let has_zeno = config.phases.iter().any(Phase::is_zeno);
    if config.outputs.probability_table && has_zeno {
        manifest
            .files
            .extend(write_probability_tables(dir, &members)?);
    }
    if config.outputs.profile_snapshots {
        manifest.files.push(write_profiles(dir, &members)?);
    }
    Ok(())
}

/// Runs `config`, writes the requested CSV files and `manifest.json` into
/// `out_dir`, and returns the manifest.
///
/// On failure the manifest written so far (with `error` set) is still
/// saved when possible and returned inside [`RunFailure`].
pub fn run_scenario(
    config: &ScenarioConfig,
    out_dir: &Path,
) -> std::result::Result<RunManifest, RunFailure> {
    let started = Instant::now();
    let grid = config.grid.build().ok();
    let mut manifest = RunManifest {
        scenario: config.name.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        grid: ResolvedGrid {
            points: config.grid.points,
            x_min: config.grid.x_min,
            x_max: config.grid.x_max,
            dx: grid.as_ref().map_or(f64::NAN, |g| g.dx()),
        },
        solver: config.solver,
        output_dir: out_dir.to_path_buf(),
        wall_clock_seconds: 0.0,
        files: Vec::new(),
        members: Vec::new(),
        error: None,
    };
    log::info!("running `{}` into {}", config.name, out_dir.display());
    let outcome = emit(config, out_dir, &mut manifest);
    manifest.wall_clock_seconds = started.elapsed().as_secs_f64();
    if let Err(e) = &outcome {
        manifest.error = Some(e.to_string());
    }
    let saved = write_manifest(out_dir, &manifest);
    match (outcome, saved) {
        (Ok(()), Ok(())) => Ok(manifest),
        (Err(error), _) | (Ok(()), Err(error)) => Err(RunFailure {
            error,
            manifest: Box::new(manifest),
        }),
    }
}

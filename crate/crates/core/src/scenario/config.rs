//! Scenario files.
//!
//! TOML with a fixed set of sections; unknown keys are rejected. Example:
//!
//! ```toml
//! name = "peregrine-zeno"
//!
//! [initial]
//! solution = "peregrine"        # plane-wave | akhmediev-breather | peregrine | akhmediev-peregrine
//! t0 = -5.0
//! # a = 0.45                    # akhmediev-breather only
//!
//! [grid]
//! points = 2048                 # power of two
//! x_min = -20.0
//! x_max = 20.0
//! # periods = 4                 # akhmediev-breather only: domain of exactly this many periods
//!
//! [solver]
//! dt = 1e-3
//! splitting = "lie"             # lie | strang
//! record_every = 50             # field/spectrum surface cadence in steps
//!
//! [[phase]]
//! kind = "free"
//! t_end = 0.0
//!
//! [[phase]]
//! kind = "zeno"
//! t_end = 5.0
//! window = [-7.5, 7.5]
//! measurements = "every-step"   # or an integer N
//! normalize = "raw"             # normalized | raw
//! prepare = true
//!
//! [sweep]                       # optional: rerun with each N for the single zeno phase
//! measurements = [10, 50, 100]
//!
//! [output]
//! dir = "out/peregrine-zeno"
//! field_surface = true
//! spectrum_surface = true
//! probability_table = true
//! profile_snapshots = false
//! ```
//!
//! `initial = "peregrine"` is accepted as shorthand for a table with only
//! `solution` set. Omitted sections take their defaults; with no phases the
//! scenario is one free phase up to `t = 5`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticSolution, BreatherParams};
use crate::grid::{Grid, Window};
use crate::solver::{step_count, Splitting, SsfmParams, DEFAULT_DT};
use crate::zeno::Normalization;
use crate::{Error, Result};

pub const DEFAULT_POINTS: usize = 2048;
pub const DEFAULT_X_MIN: f64 = -20.0;
pub const DEFAULT_X_MAX: f64 = 20.0;
pub const DEFAULT_T0: f64 = -5.0;
pub const DEFAULT_T_END: f64 = 5.0;
pub const DEFAULT_RECORD_EVERY: usize = 50;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    initial: RawInitial,
    grid: Option<RawGrid>,
    solver: Option<RawSolver>,
    #[serde(default)]
    phase: Vec<RawPhase>,
    sweep: Option<RawSweep>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawInitial {
    Name(String),
    Table(RawInitialTable),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitialTable {
    solution: String,
    a: Option<f64>,
    t0: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    points: Option<usize>,
    x_min: Option<f64>,
    x_max: Option<f64>,
    periods: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    dt: Option<f64>,
    splitting: Option<Splitting>,
    record_every: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhase {
    kind: String,
    t_end: f64,
    window: Option<[f64; 2]>,
    measurements: Option<MeasurementCount>,
    normalize: Option<Normalization>,
    prepare: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    measurements: Vec<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    field_surface: Option<bool>,
    spectrum_surface: Option<bool>,
    probability_table: Option<bool>,
    profile_snapshots: Option<bool>,
}

/// Number of measurements in a Zeno phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasurementCount {
    Count(usize),
    Every(EveryStep),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EveryStep {
    EveryStep,
}

impl MeasurementCount {
    pub const EVERY_STEP: MeasurementCount = MeasurementCount::Every(EveryStep::EveryStep);

    /// Resolves to a concrete `N` for an interval of length `duration`.
    pub fn resolve(&self, duration: f64, dt: f64) -> Result<usize> {
        match *self {
            MeasurementCount::Count(n) => Ok(n),
            MeasurementCount::Every(_) => step_count(duration, dt),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Phase {
    Free {
        t_end: f64,
    },
    Zeno {
        t_end: f64,
        window: Window,
        measurements: MeasurementCount,
        normalize: Normalization,
        prepare: bool,
    },
}

impl Phase {
    pub fn t_end(&self) -> f64 {
        match *self {
            Phase::Free { t_end } | Phase::Zeno { t_end, .. } => t_end,
        }
    }

    pub fn is_zeno(&self) -> bool {
        matches!(self, Phase::Zeno { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.points, self.x_min, self.x_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Outputs {
    pub field_surface: bool,
    pub spectrum_surface: bool,
    pub probability_table: bool,
    pub profile_snapshots: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            field_surface: true,
            spectrum_surface: true,
            probability_table: true,
            profile_snapshots: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub initial: AnalyticSolution,
    pub t0: f64,
    pub grid: GridSpec,
    /// `record_every` sets the surface cadence.
    pub solver: SsfmParams,
    pub phases: Vec<Phase>,
    /// Measurement counts to sweep over for the single Zeno phase.
    pub sweep: Option<Vec<usize>>,
    pub outputs: Outputs,
    pub output_dir: Option<PathBuf>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_solution(name: &str, a: Option<f64>) -> Result<AnalyticSolution> {
    let sol = match name {
        "plane-wave" | "planewave" => AnalyticSolution::PlaneWave,
        "peregrine" => AnalyticSolution::Peregrine,
        "akhmediev-peregrine" => AnalyticSolution::AkhmedievPeregrine,
        "akhmediev-breather" => {
            let a = a.ok_or_else(|| config_err("akhmediev-breather needs parameter `a`"))?;
            AnalyticSolution::AkhmedievBreather { a }
        }
        other => return Err(config_err(format!("unknown initial solution `{other}`"))),
    };
    if a.is_some() && !matches!(sol, AnalyticSolution::AkhmedievBreather { .. }) {
        return Err(config_err(format!(
            "parameter `a` does not apply to `{name}`"
        )));
    }
    Ok(sol)
}

/// Symmetric domain spanning `periods` breather periods.
pub fn breather_domain(a: f64, periods: u32) -> Result<(f64, f64)> {
    let half = 0.5 * periods as f64 * BreatherParams::new(a)?.period();
    Ok((-half, half))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        let (solution, a, t0) = match raw.initial {
            RawInitial::Name(name) => (name, None, None),
            RawInitial::Table(t) => (t.solution, t.a, t.t0),
        };
        let initial = parse_solution(&solution, a)?;
        initial.validate().map_err(|e| config_err(e.to_string()))?;

        let g = raw.grid.unwrap_or_default();
        let (x_min, x_max) = match g.periods {
            Some(periods) => {
                if g.x_min.is_some() || g.x_max.is_some() {
                    return Err(config_err("[grid] `periods` excludes `x_min`/`x_max`"));
                }
                let AnalyticSolution::AkhmedievBreather { a } = initial else {
                    return Err(config_err(
                        "[grid] `periods` needs an akhmediev-breather initial state",
                    ));
                };
                if periods == 0 {
                    return Err(config_err("[grid] `periods` must be positive"));
                }
                breather_domain(a, periods)?
            }
            None => (
                g.x_min.unwrap_or(DEFAULT_X_MIN),
                g.x_max.unwrap_or(DEFAULT_X_MAX),
            ),
        };
        let grid = GridSpec {
            points: g.points.unwrap_or(DEFAULT_POINTS),
            x_min,
            x_max,
        };

        let s = raw.solver.unwrap_or_default();
        let solver = SsfmParams {
            dt: s.dt.unwrap_or(DEFAULT_DT),
            splitting: s.splitting.unwrap_or_default(),
            record_every: s.record_every.unwrap_or(DEFAULT_RECORD_EVERY),
        };

        let mut phases = Vec::with_capacity(raw.phase.len().max(1));
        for (i, p) in raw.phase.into_iter().enumerate() {
            let label = i + 1;
            let phase = match p.kind.as_str() {
                "free" => {
                    if p.window.is_some()
                        || p.measurements.is_some()
                        || p.normalize.is_some()
                        || p.prepare.is_some()
                    {
                        return Err(config_err(format!(
                            "phase {label} (free) takes only `t_end`"
                        )));
                    }
                    Phase::Free { t_end: p.t_end }
                }
                "zeno" => {
                    let [left, right] = p.window.ok_or_else(|| {
                        config_err(format!("phase {label} (zeno) needs `window`"))
                    })?;
                    Phase::Zeno {
                        t_end: p.t_end,
                        window: Window::new(left, right)?,
                        measurements: p.measurements.ok_or_else(|| {
                            config_err(format!("phase {label} (zeno) needs `measurements`"))
                        })?,
                        normalize: p.normalize.unwrap_or_default(),
                        prepare: p.prepare.unwrap_or(false),
                    }
                }
                other => return Err(config_err(format!("phase {label}: unknown kind `{other}`"))),
            };
            phases.push(phase);
        }
        if phases.is_empty() {
            phases.push(Phase::Free {
                t_end: DEFAULT_T_END,
            });
        }

        let o = raw.output.unwrap_or_default();
        let d = Outputs::default();
        let outputs = Outputs {
            field_surface: o.field_surface.unwrap_or(d.field_surface),
            spectrum_surface: o.spectrum_surface.unwrap_or(d.spectrum_surface),
            probability_table: o.probability_table.unwrap_or(d.probability_table),
            profile_snapshots: o.profile_snapshots.unwrap_or(d.profile_snapshots),
        };

        let config = ScenarioConfig {
            name: raw.name.unwrap_or_else(|| "scenario".to_string()),
            initial,
            t0: t0.unwrap_or(DEFAULT_T0),
            grid,
            solver,
            phases,
            sweep: raw.sweep.map(|s| s.measurements),
            outputs,
            output_dir: o.dir,
        };
        config.validate()?;
        Ok(config)
    }

    /// Structural and numerical checks; every message names the offending
    /// phase where there is one.
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid.build()?;
        self.initial.validate()?;
        self.solver.validate()?;
        if !self.t0.is_finite() {
            return Err(config_err("initial time must be finite"));
        }
        let dt = self.solver.dt;
        let mut t_prev = self.t0;
        for (i, phase) in self.phases.iter().enumerate() {
            let label = i + 1;
            let t_end = phase.t_end();
            if t_end.is_nan() || t_end <= t_prev {
                return Err(config_err(format!(
                    "phase {label}: t_end = {t_end} must exceed the previous boundary {t_prev}"
                )));
            }
            let duration = t_end - t_prev;
            match *phase {
                Phase::Free { .. } => {
                    step_count(duration, dt).map_err(|_| {
                        config_err(format!(
                            "phase {label} (free): interval {duration} is not a whole number of steps of dt = {dt}"
                        ))
                    })?;
                }
                Phase::Zeno {
                    window,
                    measurements,
                    ..
                } => {
                    grid.window_indices(&window)
                        .map_err(|e| config_err(format!("phase {label} (zeno): {e}")))?;
                    let counts = match (&self.sweep, measurements) {
                        (Some(sweep), _) => sweep.clone(),
                        (None, m) => vec![m.resolve(duration, dt).map_err(|_| {
                            config_err(format!("phase {label} (zeno): interval {duration} is not a whole number of steps of dt = {dt}"))
                        })?],
                    };
                    for n in counts {
                        if n == 0 {
                            return Err(config_err(format!(
                                "phase {label} (zeno): N must be positive"
                            )));
                        }
                        step_count(duration / n as f64, dt).map_err(|_| {
                            config_err(format!(
                                "phase {label} (zeno): interval {duration} / N = {n} is not a whole number of steps of dt = {dt}"
                            ))
                        })?;
                    }
                }
            }
            t_prev = t_end;
        }
        if let Some(sweep) = &self.sweep {
            if sweep.is_empty() {
                return Err(config_err("[sweep] needs at least one measurement count"));
            }
            let zeno_phases = self.phases.iter().filter(|p| p.is_zeno()).count();
            if zeno_phases != 1 {
                return Err(config_err(format!(
                    "[sweep] needs exactly one zeno phase, found {zeno_phases}"
                )));
            }
        }
        Ok(())
    }

    /// Start time of phase `index`.
    pub fn phase_start(&self, index: usize) -> f64 {
        if index == 0 {
            self.t0
        } else {
            self.phases[index - 1].t_end()
        }
    }

    /// Measurement counts to run: one entry per sweep member, or a single
    /// `None` when there is no sweep.
    pub fn members(&self) -> Vec<Option<usize>> {
        match &self.sweep {
            Some(s) => s.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ScenarioConfig::parse(&text)
}

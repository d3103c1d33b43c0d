//! Repeated projective observation of the wave on a spatial window.
//!
//! One cycle: evolve over `(t_end - t_start)/N`, record the fraction of the
//! density inside the window, zero the field outside it and (optionally)
//! renormalise the remainder to unit window density.

use serde::{Deserialize, Serialize};

use crate::grid::{ComplexField, Window};
use crate::solver::{step_count, Ssfm, SsfmParams};
use crate::{Complex64, Error, Result};

/// Window densities at or below this cannot be renormalised.
pub const MIN_WINDOW_DENSITY: f64 = 1e-300;

const SURVIVAL_PREFACTOR: f64 = 0.12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide by the square root of the window density after projecting.
    #[default]
    Normalized,
    /// Zero the exterior only.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZenoSchedule {
    pub window: Window,
    pub t_start: f64,
    pub t_end: f64,
    pub num_measurements: usize,
    pub normalize: Normalization,
    /// Project once at `t_start`, before the first evolution interval.
    /// The preparation is not counted as a measurement.
    pub prepare: bool,
    /// Keep the post-projection state after every `snapshot_every`-th
    /// measurement; 0 keeps none.
    pub snapshot_every: usize,
}

impl ZenoSchedule {
    pub fn new(window: Window, t_start: f64, t_end: f64, num_measurements: usize) -> Result<Self> {
        let schedule = ZenoSchedule {
            window,
            t_start,
            t_end,
            num_measurements,
            normalize: Normalization::Normalized,
            prepare: false,
            snapshot_every: 1,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn with_normalization(mut self, normalize: Normalization) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn prepared(mut self, prepare: bool) -> Self {
        self.prepare = prepare;
        self
    }

    pub fn with_snapshot_every(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_start.is_finite() && self.t_end.is_finite()) || self.t_end <= self.t_start {
            return Err(Error::InvalidParameter(format!(
                "observation interval [{}, {}] is empty",
                self.t_start, self.t_end
            )));
        }
        if self.num_measurements == 0 {
            return Err(Error::InvalidParameter(
                "need at least one measurement".into(),
            ));
        }
        Window::new(self.window.left, self.window.right).map(|_| ())
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn interval(&self) -> f64 {
        self.duration() / self.num_measurements as f64
    }

    /// Instant of the `n`-th measurement, `n` in `1..=N`.
    pub fn measurement_time(&self, n: usize) -> f64 {
        self.t_start + n as f64 * self.interval()
    }

    /// Steps of size `dt` between consecutive measurements.
    pub fn steps_per_measurement(&self, dt: f64) -> Result<usize> {
        step_count(self.interval(), dt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub index: usize,
    pub time: f64,
    /// Fraction of the pre-measurement density inside the window.
    pub survival: f64,
    /// Product of `survival` over measurements `1..=index`.
    pub cumulative: f64,
    /// Median `|ψ|` over the middle half of the window, after projection.
    pub background: f64,
}

/// Projects `field` onto `window`.
///
/// Returns the projected field and the survival fraction
/// `∫_window |ψ|² / ∫_domain |ψ|²` of the input.
pub fn project(
    field: &ComplexField,
    window: &Window,
    normalize: Normalization,
) -> Result<(ComplexField, f64)> {
    let range = field.grid().window_indices(window)?;
    let dx = field.grid().dx();
    let total = field.total_density();
    let inside: f64 = field.values()[range.clone()]
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        * dx;
    if total <= MIN_WINDOW_DENSITY {
        return Err(Error::StateLost { density: total });
    }
    let scale = match normalize {
        Normalization::Raw => 1.0,
        Normalization::Normalized => {
            if inside <= MIN_WINDOW_DENSITY {
                return Err(Error::StateLost { density: inside });
            }
            1.0 / inside.sqrt()
        }
    };
    let mut out = ComplexField::zeros(field.grid().clone(), field.time);
    for (dst, src) in out.values_mut()[range.clone()]
        .iter_mut()
        .zip(&field.values()[range])
    {
        *dst = *src * scale;
    }
    out.check_finite()?;
    Ok((out, inside / total))
}

fn window_background(field: &ComplexField, window: &Window) -> f64 {
    let quarter = 0.25 * window.width();
    let inner = Window {
        left: window.center() - quarter,
        right: window.center() + quarter,
    };
    let Ok(range) = field.grid().window_indices(&inner) else {
        return f64::NAN;
    };
    let mut mags: Vec<f64> = field.values()[range]
        .iter()
        .map(|z: &Complex64| z.norm())
        .collect();
    mags.sort_by(|a, b| a.total_cmp(b));
    let n = mags.len();
    if n % 2 == 1 {
        mags[n / 2]
    } else {
        0.5 * (mags[n / 2 - 1] + mags[n / 2])
    }
}

#[derive(Debug, Clone)]
pub struct ZenoRun {
    pub field: ComplexField,
    pub records: Vec<MeasurementRecord>,
    /// Post-projection states at the cadence set by `snapshot_every`.
    pub snapshots: Vec<ComplexField>,
    /// The state right after the first projection (the preparation, when
    /// enabled; otherwise measurement 1).
    pub first_projection: ComplexField,
}

impl ZenoRun {
    pub fn cumulative(&self) -> f64 {
        self.records.last().map_or(1.0, |r| r.cumulative)
    }
}

/// Runs the evolve/measure cycle `schedule.num_measurements` times.
pub fn run_zeno(
    ssfm: &mut Ssfm,
    initial: ComplexField,
    schedule: &ZenoSchedule,
    params: &SsfmParams,
) -> Result<ZenoRun> {
    schedule.validate()?;
    params.validate()?;
    if (initial.time - schedule.t_start).abs() > 1e-9 * schedule.duration().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "initial state is at t = {}, schedule starts at {}",
            initial.time, schedule.t_start
        )));
    }
    schedule.steps_per_measurement(params.dt)?;
    let window = schedule.window;
    initial.grid().window_indices(&window)?;

    let step_params = SsfmParams {
        record_every: 0,
        ..*params
    };
    let mut field = initial;
    field.time = schedule.t_start;
    let mut first_projection = None;
    if schedule.prepare {
        let (prepared, _) = project(&field, &window, schedule.normalize)?;
        field = prepared;
        first_projection = Some(field.clone());
    }

    let n_total = schedule.num_measurements;
    let mut records = Vec::with_capacity(n_total);
    let mut snapshots = Vec::new();
    let mut cumulative = 1.0;
    for n in 1..=n_total {
        let t_n = schedule.measurement_time(n);
        field = ssfm.evolve(field, t_n, &step_params)?.field;
        let (projected, survival) = project(&field, &window, schedule.normalize)?;
        field = projected;
        cumulative *= survival;
        records.push(MeasurementRecord {
            index: n,
            time: t_n,
            survival,
            cumulative,
            background: window_background(&field, &window),
        });
        if first_projection.is_none() {
            first_projection = Some(field.clone());
        }
        if schedule.snapshot_every > 0 && n % schedule.snapshot_every == 0 {
            snapshots.push(field.clone());
        }
    }
    field.time = schedule.t_end;
    Ok(ZenoRun {
        field,
        records,
        snapshots,
        first_projection: first_projection.expect("at least one projection"),
    })
}

/// Closed-form per-measurement survival `1 - 0.12 (4/π)² (2πt/N)^{3/2}`
/// for a free particle observed `N` times over a total time `t`.
pub fn analytic_survival(t: f64, n: usize) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) || n == 0 {
        return Err(Error::OutOfValidity { t, n });
    }
    let ratio = 4.0 / std::f64::consts::PI;
    let tau = 2.0 * std::f64::consts::PI * t / n as f64;
    let p = 1.0 - SURVIVAL_PREFACTOR * ratio * ratio * tau.powf(1.5);
    if p <= 0.0 {
        return Err(Error::OutOfValidity { t, n });
    }
    Ok(p)
}

/// `analytic_survival(t, N)^N`.
pub fn analytic_cumulative(t: f64, n: usize) -> Result<f64> {
    Ok(analytic_survival(t, n)?.powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{sample_on_grid, AnalyticSolution};
    use crate::grid::Grid;
    use std::sync::Arc;

    fn unit(grid: &Arc<Grid>) -> ComplexField {
        ComplexField::from_fn(grid.clone(), 0.0, |_| Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn uniform_raw_projection() {
        let grid = Grid::shared(2048, -20.0, 20.0).unwrap();
        let w = Window::symmetric(5.0).unwrap();
        let (out, p) = project(&unit(&grid), &w, Normalization::Raw).unwrap();
        assert!((p - 0.25).abs() <= grid.dx() / 40.0);
        for (z, x) in out.values().iter().zip(grid.positions()) {
            let expected = if (-5.0..=5.0).contains(&x) { 1.0 } else { 0.0 };
            assert_eq!(z.re, expected);
        }
    }

    #[test]
    fn full_window_normalized() {
        let grid = Grid::shared(512, -20.0, 20.0).unwrap();
        let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, 0.3).unwrap();
        let (out, p) = project(&f, &grid.full_window(), Normalization::Normalized).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
        assert!((out.total_density() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn raw_projection_is_idempotent() {
        let grid = Grid::shared(512, -20.0, 20.0).unwrap();
        let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, 0.0).unwrap();
        let w = Window::new(-3.3, 1.7).unwrap();
        let (once, _) = project(&f, &w, Normalization::Raw).unwrap();
        let (twice, p) = project(&once, &w, Normalization::Raw).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(once.values(), twice.values());
    }

    #[test]
    fn lost_state() {
        let grid = Grid::shared(64, -1.0, 1.0).unwrap();
        let zero = ComplexField::zeros(grid, 0.0);
        let w = Window::symmetric(0.5).unwrap();
        assert!(matches!(
            project(&zero, &w, Normalization::Normalized),
            Err(Error::StateLost { .. })
        ));
    }

    #[test]
    fn survival_formula_values() {
        assert!((analytic_survival(2.0, 100).unwrap() - 0.99133).abs() < 1e-5);
        assert!((analytic_survival(2.0, 10).unwrap() - 0.72594).abs() < 1e-4);
        assert_eq!(analytic_survival(0.0, 17).unwrap(), 1.0);
        assert!((analytic_cumulative(2.0, 100).unwrap() - 0.4187).abs() < 1e-3);
        assert_eq!(analytic_cumulative(0.0, 5).unwrap(), 1.0);
        assert!(analytic_cumulative(2.0, 1000).unwrap() > analytic_cumulative(2.0, 100).unwrap());
        assert!(matches!(
            analytic_survival(50.0, 1),
            Err(Error::OutOfValidity { .. })
        ));
        assert!(analytic_survival(-1.0, 1).is_err());
        assert!(analytic_survival(1.0, 0).is_err());
    }

    #[test]
    fn single_full_window_measurement_is_plain_evolution() {
        let grid = Grid::shared(256, -20.0, 20.0).unwrap();
        let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, 0.0).unwrap();
        let params = SsfmParams::default();
        let mut ssfm = Ssfm::new(grid.clone());
        let plain = ssfm.evolve(f.clone(), 0.1, &params).unwrap().field;
        let schedule = ZenoSchedule::new(grid.full_window(), 0.0, 0.1, 1)
            .unwrap()
            .with_normalization(Normalization::Raw);
        let run = run_zeno(&mut ssfm, f, &schedule, &params).unwrap();
        assert_eq!(run.records.len(), 1);
        assert!((run.cumulative() - 1.0).abs() < 1e-15);
        for (a, b) in run.field.values().iter().zip(plain.values()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn schedule_validation() {
        let w = Window::symmetric(1.0).unwrap();
        assert!(ZenoSchedule::new(w, 1.0, 1.0, 3).is_err());
        assert!(ZenoSchedule::new(w, 0.0, 1.0, 0).is_err());
        let s = ZenoSchedule::new(w, 0.0, 2.0, 10).unwrap();
        assert!((s.measurement_time(10) - 2.0).abs() < 1e-15);
        assert_eq!(s.steps_per_measurement(1e-3).unwrap(), 200);
        assert!(ZenoSchedule::new(w, 0.0, 5.0, 7)
            .unwrap()
            .steps_per_measurement(1e-3)
            .is_err());
    }

    #[test]
    fn run_rejects_misaligned_start() {
        let grid = Grid::shared(64, -5.0, 5.0).unwrap();
        let f = unit(&grid);
        let schedule = ZenoSchedule::new(Window::symmetric(1.0).unwrap(), 1.0, 2.0, 10).unwrap();
        let mut ssfm = Ssfm::new(grid);
        assert!(run_zeno(&mut ssfm, f, &schedule, &SsfmParams::default()).is_err());
    }
}

//! Split-step Fourier integration of `iψ_t + ½ψ_xx + |ψ|²ψ = 0`.
//!
//! One step of size `dt` composes two exactly solvable flows:
//!
//! * nonlinear: `ψ ← exp(i|ψ|²dt) ψ`, pointwise with `|ψ|` frozen at the start of the substep;
//! * linear: `ψ̂_k ← exp(-ik²dt/2) ψ̂_k` in Fourier space.
//!
//! [`Splitting::Lie`] applies nonlinear then linear (two FFTs per step).
//! [`Splitting::Strang`] applies half linear, nonlinear, half linear.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fft::FourierPair;
use crate::grid::{ComplexField, Grid};
use crate::{Complex64, Error, Result};

pub const DEFAULT_DT: f64 = 1e-3;

/// Relative mismatch (in units of `dt`) tolerated when turning a time
/// interval into a whole number of steps.
const COMMENSURATE_TOL: f64 = 0.5e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    /// First order, nonlinear then linear.
    #[default]
    Lie,
    /// Second order, symmetric.
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsfmParams {
    pub dt: f64,
    pub splitting: Splitting,
    /// Snapshot every `record_every` steps during [`Ssfm::evolve`]; 0 records nothing.
    pub record_every: usize,
}

impl Default for SsfmParams {
    fn default() -> Self {
        SsfmParams {
            dt: DEFAULT_DT,
            splitting: Splitting::Lie,
            record_every: 0,
        }
    }
}

impl SsfmParams {
    pub fn new(dt: f64, splitting: Splitting) -> Result<Self> {
        let params = SsfmParams {
            dt,
            splitting,
            record_every: 0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Number of whole steps of size `dt` in `interval`.
///
/// Fails unless `interval` is non-negative and within `0.5e-6·dt` of a
/// multiple of `dt`.
pub fn step_count(interval: f64, dt: f64) -> Result<usize> {
    if dt.is_nan() || dt <= 0.0 || !interval.is_finite() || interval < -COMMENSURATE_TOL * dt {
        return Err(Error::Incommensurate { interval, dt });
    }
    let n = (interval / dt).round();
    if (n * dt - interval).abs() > COMMENSURATE_TOL * dt {
        return Err(Error::Incommensurate { interval, dt });
    }
    Ok(n as usize)
}

/// In place: `ψ_i ← exp(i|ψ_i|²dt) ψ_i`.
pub fn nonlinear_substep(values: &mut [Complex64], dt: f64) {
    for z in values.iter_mut() {
        let phase = z.norm_sqr() * dt;
        let (s, c) = phase.sin_cos();
        *z *= Complex64::new(c, s);
    }
}

/// Result of [`Ssfm::evolve`].
#[derive(Debug, Clone)]
pub struct Evolution {
    pub field: ComplexField,
    pub snapshots: Vec<ComplexField>,
}

/// Stepper bound to one grid. Owns FFT plans, scratch and cached
/// dispersion multipliers, so use one instance per thread.
pub struct Ssfm {
    grid: Arc<Grid>,
    fft: FourierPair,
    // (dt bits, exp(-ik²dt/2)/M)
    multipliers: Vec<(u64, Vec<Complex64>)>,
}

impl Ssfm {
    const CACHE_SLOTS: usize = 4;

    pub fn new(grid: Arc<Grid>) -> Self {
        let fft = FourierPair::new(grid.num_points());
        Ssfm {
            grid,
            fft,
            multipliers: Vec::with_capacity(Self::CACHE_SLOTS),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Total FFTs executed by this stepper.
    pub fn fft_count(&self) -> u64 {
        self.fft.transform_count()
    }

    fn check_grid(&self, field: &ComplexField) -> Result<()> {
        if Arc::ptr_eq(field.grid(), &self.grid) || **field.grid() == *self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn multiplier_index(&mut self, dt: f64) -> usize {
        let key = dt.to_bits();
        if let Some(i) = self.multipliers.iter().position(|(k, _)| *k == key) {
            return i;
        }
        let scale = 1.0 / self.grid.num_points() as f64;
        let table = self
            .grid
            .wavenumbers()
            .iter()
            .map(|k| Complex64::from_polar(scale, -0.5 * k * k * dt))
            .collect();
        if self.multipliers.len() == Self::CACHE_SLOTS {
            self.multipliers.remove(0);
        }
        self.multipliers.push((key, table));
        self.multipliers.len() - 1
    }

    fn linear_in_place(&mut self, values: &mut [Complex64], dt: f64) {
        let idx = self.multiplier_index(dt);
        self.fft.forward(values);
        for (z, m) in values.iter_mut().zip(&self.multipliers[idx].1) {
            *z *= m;
        }
        self.fft.inverse_unscaled(values);
    }

    /// In place: exact dispersive flow over `dt`. Does not touch `field.time`.
    pub fn linear_substep(&mut self, field: &mut ComplexField, dt: f64) -> Result<()> {
        self.check_grid(field)?;
        self.linear_in_place(field.values_mut(), dt);
        Ok(())
    }

    /// One step of signed size `dt`, advancing `field.time` by `dt`.
    ///
    /// For Lie splitting a negative `dt` applies the substeps in reverse
    /// order (linear, then nonlinear), so `step_by(-dt)` undoes `step_by(dt)`.
    pub fn step_by(
        &mut self,
        field: &mut ComplexField,
        dt: f64,
        splitting: Splitting,
    ) -> Result<()> {
        self.check_grid(field)?;
        let values = field.values_mut();
        match splitting {
            Splitting::Lie if dt >= 0.0 => {
                nonlinear_substep(values, dt);
                self.linear_in_place(values, dt);
            }
            Splitting::Lie => {
                self.linear_in_place(values, dt);
                nonlinear_substep(values, dt);
            }
            Splitting::Strang => {
                self.linear_in_place(values, 0.5 * dt);
                nonlinear_substep(values, dt);
                self.linear_in_place(values, 0.5 * dt);
            }
        }
        field.time += dt;
        Ok(())
    }

    pub fn step(&mut self, field: &mut ComplexField, params: &SsfmParams) -> Result<()> {
        self.step_by(field, params.dt, params.splitting)
    }

    /// Advances `field` to `t_end` in whole steps, snapshotting every
    /// `params.record_every` steps.
    pub fn evolve(
        &mut self,
        mut field: ComplexField,
        t_end: f64,
        params: &SsfmParams,
    ) -> Result<Evolution> {
        params.validate()?;
        self.check_grid(&field)?;
        let t0 = field.time;
        let steps = step_count(t_end - t0, params.dt)?;
        let mut snapshots = Vec::new();
        for i in 1..=steps {
            self.step(&mut field, params)?;
            field.time = t0 + i as f64 * params.dt;
            if params.record_every > 0 && i % params.record_every == 0 {
                field.check_finite()?;
                snapshots.push(field.clone());
            }
        }
        field.time = t_end;
        if let Some(last) = snapshots.last_mut() {
            if steps % params.record_every == 0 {
                last.time = t_end;
            }
        }
        field.check_finite()?;
        Ok(Evolution { field, snapshots })
    }
}

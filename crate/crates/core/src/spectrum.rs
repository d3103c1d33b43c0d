//! Centred Fourier spectra of fields and snapshot sequences.
//!
//! Magnitudes are those of the unnormalised forward transform (see
//! [`crate::fft`]), so `dx·Σ|ψ_i|² = (dx/M)·Σ|ψ̂_k|²`. The dB scale is
//! relative to the largest bin of each frame.

use serde::Serialize;

use crate::fft::FourierPair;
use crate::grid::ComplexField;
use crate::{Error, Result};

/// Bins below `max · DB_FLOOR_RATIO` are reported at [`DB_FLOOR`].
pub const DB_FLOOR_RATIO: f64 = 1e-12;
pub const DB_FLOOR: f64 = -240.0;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumFrame {
    pub time: f64,
    /// Monotone from `-π/dx` up to `π/dx - dk`.
    pub wavenumbers_centered: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub magnitude_db: Vec<f64>,
}

impl SpectrumFrame {
    /// Number of bins at or above `threshold_db`.
    pub fn bandwidth(&self, threshold_db: f64) -> usize {
        self.magnitude_db
            .iter()
            .filter(|&&db| db >= threshold_db)
            .count()
    }

    /// Index of `k = 0` in the centred arrays.
    pub fn zero_index(&self) -> usize {
        self.wavenumbers_centered.len() / 2
    }
}

fn to_db(magnitude: &[f64]) -> Vec<f64> {
    let max = magnitude.iter().copied().fold(0.0, f64::max);
    magnitude
        .iter()
        .map(|&m| {
            if m == max {
                0.0
            } else if m < max * DB_FLOOR_RATIO {
                DB_FLOOR
            } else {
                20.0 * (m / max).log10()
            }
        })
        .collect()
}

fn frame_with(fft: &mut FourierPair, field: &ComplexField) -> Result<SpectrumFrame> {
    field.check_finite()?;
    if field.values().iter().all(|z| z.norm_sqr() == 0.0) {
        return Err(Error::ZeroField);
    }
    let m = field.values().len();
    let half = m / 2;
    let mut buf = field.values().to_vec();
    fft.forward(&mut buf);
    // fftshift: index j of the centred array holds FFT bin (j + M/2) mod M.
    let ks = field.grid().wavenumbers();
    let wavenumbers_centered = (0..m).map(|j| ks[(j + half) % m]).collect();
    let magnitude: Vec<f64> = (0..m).map(|j| buf[(j + half) % m].norm()).collect();
    let magnitude_db = to_db(&magnitude);
    Ok(SpectrumFrame {
        time: field.time,
        wavenumbers_centered,
        magnitude,
        magnitude_db,
    })
}

pub fn power_spectrum(field: &ComplexField) -> Result<SpectrumFrame> {
    let mut fft = FourierPair::new(field.values().len());
    frame_with(&mut fft, field)
}

/// One frame per snapshot; all snapshots must share a grid.
pub fn spectrogram(snapshots: &[ComplexField]) -> Result<Vec<SpectrumFrame>> {
    let first = snapshots
        .first()
        .ok_or_else(|| Error::InvalidParameter("spectrogram of an empty snapshot list".into()))?;
    if snapshots.iter().any(|s| !s.same_grid(first)) {
        return Err(Error::GridMismatch);
    }
    let mut fft = FourierPair::new(first.values().len());
    snapshots.iter().map(|s| frame_with(&mut fft, s)).collect()
}

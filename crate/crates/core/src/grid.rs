//! Uniform periodic lattice, its Fourier dual, and windowed density integrals.

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::Serialize;

use crate::{Complex64, Error, Result};

/// Tolerance, in units of `dx`, used when snapping window edges onto lattice
/// points. Edges that coincide with a sample up to rounding include it.
const SNAP_EPS: f64 = 1e-9;

/// Periodic domain `[x_min, x_max)` sampled at `num_points` points.
///
/// `wavenumbers` follow the FFT layout: `0, 1, ..., M/2-1, -M/2, ..., -1`
/// times `2π/(x_max - x_min)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    num_points: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    #[serde(skip)]
    wavenumbers: Vec<f64>,
}

impl Grid {
    pub fn new(num_points: usize, x_min: f64, x_max: f64) -> Result<Self> {
        if num_points < 16 || !num_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "num_points = {num_points} must be a power of two and at least 16"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::InvalidGrid(format!(
                "domain [{x_min}, {x_max}) is empty or not finite"
            )));
        }
        let length = x_max - x_min;
        let m = num_points as i64;
        let wavenumbers = (0..m)
            .map(|j| {
                let signed = if j < m / 2 { j } else { j - m };
                2.0 * PI * signed as f64 / length
            })
            .collect();
        Ok(Grid {
            num_points,
            x_min,
            x_max,
            dx: length / num_points as f64,
            wavenumbers,
        })
    }

    /// Shorthand for `Arc::new(Grid::new(..)?)`.
    pub fn shared(num_points: usize, x_min: f64, x_max: f64) -> Result<Arc<Self>> {
        Grid::new(num_points, x_min, x_max).map(Arc::new)
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.num_points).map(move |i| self.x(i))
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// The whole domain as a window; its right edge is `x_max` itself.
    pub fn full_window(&self) -> Window {
        Window {
            left: self.x_min,
            right: self.x_max,
        }
    }

    /// Indices of the samples with `left <= x_i <= right`.
    pub fn window_indices(&self, window: &Window) -> Result<RangeInclusive<usize>> {
        let invalid = |reason: &str| Error::InvalidWindow {
            left: window.left,
            right: window.right,
            reason: reason.to_string(),
        };
        let tol = SNAP_EPS * self.dx;
        if window.left < self.x_min - tol || window.right > self.x_max + tol {
            return Err(invalid("window extends outside the domain"));
        }
        let lo = ((window.left - self.x_min) / self.dx - SNAP_EPS)
            .ceil()
            .max(0.0) as usize;
        let hi = ((window.right - self.x_min) / self.dx + SNAP_EPS).floor() as usize;
        let hi = hi.min(self.num_points - 1);
        let strictly_inside = (lo..=hi)
            .filter(|&i| {
                let x = self.x(i);
                x > window.left + tol && x < window.right - tol
            })
            .count();
        if lo > hi || strictly_inside < 2 {
            return Err(invalid("fewer than two grid points inside"));
        }
        Ok(lo..=hi)
    }
}

/// Closed observation interval `[left, right]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub left: f64,
    pub right: f64,
}

impl Window {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        if !(left.is_finite() && right.is_finite()) || left >= right {
            return Err(Error::InvalidWindow {
                left,
                right,
                reason: "need finite edges with left < right".into(),
            });
        }
        Ok(Window { left, right })
    }

    /// `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64) -> Result<Self> {
        Window::new(-half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.right - self.left
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.left + self.right)
    }
}

/// Complex amplitude sampled on a grid at one instant.
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
    pub time: f64,
}

impl ComplexField {
    pub fn new(grid: Arc<Grid>, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.num_points() {
            return Err(Error::LengthMismatch {
                expected: grid.num_points(),
                got: values.len(),
            });
        }
        let field = ComplexField { grid, values, time };
        field.check_finite()?;
        Ok(field)
    }

    pub fn from_fn(grid: Arc<Grid>, time: f64, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.positions().map(f).collect();
        ComplexField::new(grid, values, time)
    }

    pub fn zeros(grid: Arc<Grid>, time: f64) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.num_points()];
        ComplexField { grid, values, time }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Mutable access for in-place operators. Callers are responsible for
    /// leaving the values finite.
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn check_finite(&self) -> Result<()> {
        if self
            .values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite { time: self.time })
        }
    }

    /// `dx · Σ|ψ_i|²` over the whole lattice.
    pub fn total_density(&self) -> f64 {
        self.grid.dx() * self.values.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Index and value of the largest `|ψ|`.
    pub fn peak(&self) -> (usize, f64) {
        self.values.iter().map(|z| z.norm()).enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, a)| if a > best.1 { (i, a) } else { best },
        )
    }

    pub fn same_grid(&self, other: &ComplexField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }
}

/// Rectangle-rule integral of `|ψ|²` over the samples inside `window`.
pub fn integrate_density(field: &ComplexField, window: &Window) -> Result<f64> {
    let range = field.grid().window_indices(window)?;
    let sum: f64 = field.values()[range].iter().map(|z| z.norm_sqr()).sum();
    Ok(sum * field.grid().dx())
}

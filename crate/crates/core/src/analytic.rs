//! Closed-form NLSE solutions on the unit plane-wave background.
//!
//! All three rogue-wave solutions share the carrier `exp(it)` and are even
//! in `x`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grid::{ComplexField, Grid};
use crate::{Complex64, Error, Result};

const SINGULAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnalyticSolution {
    PlaneWave,
    AkhmedievBreather { a: f64 },
    Peregrine,
    AkhmedievPeregrine,
}

impl AnalyticSolution {
    pub fn akhmediev_breather(a: f64) -> Result<Self> {
        let sol = AnalyticSolution::AkhmedievBreather { a };
        sol.validate()?;
        Ok(sol)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            AnalyticSolution::AkhmedievBreather { a } => BreatherParams::new(a).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<Complex64> {
        match *self {
            AnalyticSolution::PlaneWave => Ok(eval_plane_wave(x, t)),
            AnalyticSolution::AkhmedievBreather { a } => eval_akhmediev_breather(a, x, t),
            AnalyticSolution::Peregrine => Ok(eval_peregrine(x, t)),
            AnalyticSolution::AkhmedievPeregrine => eval_akhmediev_peregrine(x, t),
        }
    }

    /// Spatial period for the breather, `None` for the localised solutions.
    pub fn spatial_period(&self) -> Option<f64> {
        match *self {
            AnalyticSolution::AkhmedievBreather { a } => {
                BreatherParams::new(a).ok().map(|p| p.period())
            }
            _ => None,
        }
    }
}

impl fmt::Display for AnalyticSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticSolution::PlaneWave => write!(f, "plane wave"),
            AnalyticSolution::AkhmedievBreather { a } => write!(f, "Akhmediev breather (a = {a})"),
            AnalyticSolution::Peregrine => write!(f, "Peregrine soliton"),
            AnalyticSolution::AkhmedievPeregrine => write!(f, "Akhmediev-Peregrine soliton"),
        }
    }
}

/// Derived breather constants: spatial frequency `λ = 2√(1-2a)` and
/// growth rate `b = √(8a(1-2a))`.
#[derive(Debug, Clone, Copy)]
pub struct BreatherParams {
    pub a: f64,
    pub lambda: f64,
    pub growth: f64,
}

impl BreatherParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "Akhmediev breather needs 0 < a < 0.5, got {a}"
            )));
        }
        let s = 1.0 - 2.0 * a;
        Ok(BreatherParams {
            a,
            lambda: 2.0 * s.sqrt(),
            growth: (8.0 * a * s).sqrt(),
        })
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.lambda
    }
}

fn carrier(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

pub fn eval_plane_wave(_x: f64, t: f64) -> Complex64 {
    carrier(t)
}

pub fn eval_akhmediev_breather(a: f64, x: f64, t: f64) -> Result<Complex64> {
    let p = BreatherParams::new(a)?;
    let (ch, sh) = ((p.growth * t).cosh(), (p.growth * t).sinh());
    let denom = (2.0 * a).sqrt() * (p.lambda * x).cos() - ch;
    if denom.abs() < SINGULAR_TOL {
        return Err(Error::Singularity { x, t });
    }
    let num = Complex64::new(2.0 * (1.0 - 2.0 * a) * ch, p.growth * sh);
    Ok((1.0 + num / denom) * carrier(t))
}

pub fn eval_peregrine(x: f64, t: f64) -> Complex64 {
    let denom = 1.0 + 4.0 * x * x + 4.0 * t * t;
    (1.0 - 4.0 * Complex64::new(1.0, 2.0 * t) / denom) * carrier(t)
}

pub fn eval_akhmediev_peregrine(x: f64, t: f64) -> Result<Complex64> {
    let (x2, t2) = (x * x, t * t);
    let (x4, t4) = (x2 * x2, t2 * t2);
    let g = 3.0 / 8.0 - 3.0 * x2 - 2.0 * x4 - 9.0 * t2 - 10.0 * t4 - 12.0 * x2 * t2;
    let h = 15.0 / 4.0 + 6.0 * x2 - 4.0 * x4 - 2.0 * t2 - 4.0 * t4 - 8.0 * x2 * t2;
    let d = (0.75
        + 9.0 * x2
        + 4.0 * x4
        + 16.0 / 3.0 * x4 * x2
        + 33.0 * t2
        + 36.0 * t4
        + 16.0 / 3.0 * t4 * t2
        - 24.0 * x2 * t2
        + 16.0 * x4 * t2
        + 16.0 * x2 * t4)
        / 8.0;
    if d.abs() < SINGULAR_TOL {
        return Err(Error::Singularity { x, t });
    }
    Ok((1.0 + Complex64::new(g, t * h) / d) * carrier(t))
}

/// Samples `solution` at time `t` on every lattice point.
pub fn sample_on_grid(
    solution: &AnalyticSolution,
    grid: &Arc<Grid>,
    t: f64,
) -> Result<ComplexField> {
    solution.validate()?;
    let values = grid
        .positions()
        .map(|x| solution.eval(x, t))
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(grid.clone(), values, t)
}

/// `|iψ_t + ½ψ_xx + |ψ|²ψ|` at `(x, t)` using second-order central
/// differences of step `h` in both variables.
///
/// Works on any `Fn(x, t) -> ψ` so a deliberately wrong candidate can be
/// checked as well; see [`nlse_residual`] for the named solutions.
pub fn nlse_residual_of<F>(psi: F, x: f64, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    if !(1e-5..=1e-2).contains(&h) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step {h} outside [1e-5, 1e-2]"
        )));
    }
    let centre = psi(x, t)?;
    let psi_t = (psi(x, t + h)? - psi(x, t - h)?) / (2.0 * h);
    let psi_xx = (psi(x + h, t)? - 2.0 * centre + psi(x - h, t)?) / (h * h);
    let residual = Complex64::i() * psi_t + 0.5 * psi_xx + centre.norm_sqr() * centre;
    Ok(residual.norm())
}

pub fn nlse_residual(solution: &AnalyticSolution, x: f64, t: f64, h: f64) -> Result<f64> {
    solution.validate()?;
    nlse_residual_of(|x, t| solution.eval(x, t), x, t, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plane_wave_values() {
        let z = eval_plane_wave(3.7, 0.0);
        assert_eq!((z.re, z.im), (1.0, 0.0));
        let z = eval_plane_wave(0.0, PI / 2.0);
        assert!(z.re.abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
        assert!((eval_plane_wave(-4.0, 2.0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn breather_centre_value() {
        let z = eval_akhmediev_breather(0.45, 0.0, 0.0).unwrap();
        let expected = 1.0 + 0.2 / (0.9f64.sqrt() - 1.0);
        assert!((z.re - expected).abs() < 1e-12);
        assert!(z.im.abs() < 1e-15);
        assert!((z.norm() - (1.0 + 2.0 * 0.9f64.sqrt())).abs() < 1e-12);
        assert!((z.norm() - 2.8974).abs() < 1e-4);
    }

    #[test]
    fn breather_period() {
        let p = BreatherParams::new(0.45).unwrap();
        assert!((p.period() - PI / 0.1f64.sqrt()).abs() < 1e-12);
        assert!((p.period() - 9.9346).abs() < 1e-4);
        for &(x, t) in &[(0.3, 0.2), (-1.7, 1.1), (4.0, -2.5)] {
            let a = eval_akhmediev_breather(0.45, x, t).unwrap();
            let b = eval_akhmediev_breather(0.45, x + p.period(), t).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn breather_approaches_peregrine() {
        let ab = eval_akhmediev_breather(0.4999, 0.3, 0.2).unwrap();
        let pe = eval_peregrine(0.3, 0.2);
        assert!((ab - pe).norm() < 5e-3, "{ab} vs {pe}");
    }

    #[test]
    fn breather_parameter_guard() {
        for a in [0.0, 0.5, -0.1, 0.7, f64::NAN] {
            assert!(matches!(
                eval_akhmediev_breather(a, 0.0, 0.0),
                Err(Error::InvalidParameter(_))
            ));
        }
        assert!(AnalyticSolution::akhmediev_breather(0.5).is_err());
    }

    #[test]
    fn peregrine_values() {
        let z = eval_peregrine(0.0, 0.0);
        assert_eq!((z.re, z.im), (-3.0, 0.0));
        let z = eval_peregrine(0.5, 0.0);
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let tail = (eval_peregrine(20.0, 0.0) - eval_plane_wave(20.0, 0.0)).norm();
        assert!((tail - 4.0 / 1601.0).abs() < 1e-15);
        assert!((tail - 2.5e-3).abs() < 1e-4);
    }

    #[test]
    fn akhmediev_peregrine_values() {
        let z = eval_akhmediev_peregrine(0.0, 0.0).unwrap();
        assert!((z - Complex64::new(5.0, 0.0)).norm() < 1e-12);
        assert!((eval_akhmediev_peregrine(200.0, 0.0).unwrap().norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn akhmediev_peregrine_at_one_one_matches_exact_rationals() {
        // At x = t = 1 every term is rational:
        // G = -285/8, H = -33/4, D = 1217/96.
        let (g, h, d): (f64, f64, f64) = (-285.0 / 8.0, -33.0 / 4.0, 1217.0 / 96.0);
        assert!((g / d + 3420.0 / 1217.0).abs() < 1e-15);
        let bracket = Complex64::new(1.0 - 3420.0 / 1217.0, -792.0 / 1217.0);
        assert!((bracket - (1.0 + Complex64::new(g, h) / d)).norm() < 1e-15);
        let expected = bracket * Complex64::new(1f64.cos(), 1f64.sin());
        let z = eval_akhmediev_peregrine(1.0, 1.0).unwrap();
        assert!((z - expected).norm() < 1e-12, "{z} vs {expected}");
    }

    #[test]
    fn sampling() {
        let grid = Grid::shared(2048, -20.0, 20.0).unwrap();
        let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, -5.0).unwrap();
        let m = f.max_abs();
        assert!(m > 1.0 && m < 3.0, "{m}");
        assert_eq!(f.time, -5.0);

        let f = sample_on_grid(&AnalyticSolution::PlaneWave, &grid, 0.0).unwrap();
        assert!(f.values().iter().all(|z| *z == Complex64::new(1.0, 0.0)));

        let ab = AnalyticSolution::akhmediev_breather(0.45).unwrap();
        let f = sample_on_grid(&ab, &grid, 0.0).unwrap();
        let (i, peak) = f.peak();
        assert_eq!(i, 1024); // x = 0 sits exactly on the lattice
        assert!((peak - 2.8974).abs() < 1e-4);

        let bad = AnalyticSolution::AkhmedievBreather { a: 0.6 };
        assert!(sample_on_grid(&bad, &grid, 0.0).is_err());
    }

    #[test]
    fn residual_examples() {
        let r = nlse_residual(&AnalyticSolution::Peregrine, 0.3, 0.7, 1e-3).unwrap();
        assert!(r < 1e-4, "{r}");
        let r = nlse_residual(&AnalyticSolution::PlaneWave, 1.3, -0.4, 1e-3).unwrap();
        assert!(r < 1e-6, "{r}");
        let scaled =
            nlse_residual_of(|x, t| Ok(1.1 * eval_peregrine(x, t)), 0.0, 0.0, 1e-3).unwrap();
        assert!(scaled > 0.1, "{scaled}");
        assert!(nlse_residual(&AnalyticSolution::Peregrine, 0.0, 0.0, 0.1).is_err());
    }
}

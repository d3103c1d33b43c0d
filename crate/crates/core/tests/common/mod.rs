#![allow(dead_code)]

use std::sync::Arc;

use rogue_zeno::grid::{ComplexField, Grid};
use rogue_zeno::Complex64;

/// Adaptive Simpson quadrature, independent of anything in the crate.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 50)
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

/// Max |a - b| over samples whose position satisfies `keep`.
pub fn max_err_where(a: &ComplexField, b: &[Complex64], keep: impl Fn(f64) -> bool) -> f64 {
    a.grid()
        .positions()
        .zip(a.values().iter().zip(b))
        .filter(|(x, _)| keep(*x))
        .map(|(_, (u, v))| (u - v).norm())
        .fold(0.0, f64::max)
}

pub fn default_grid() -> Arc<Grid> {
    Grid::shared(2048, -20.0, 20.0).unwrap()
}

/// Smooth periodic field made of a handful of low modes with fixed
/// pseudo-random coefficients.
pub fn smooth_random_field(grid: &Arc<Grid>, seed: u64) -> ComplexField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, Complex64)> = (1..=8)
        .map(|m| {
            let k = grid.wavenumbers()[m];
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) / m as f64;
            (k, c)
        })
        .collect();
    ComplexField::from_fn(grid.clone(), 0.0, |x| {
        let mut z = Complex64::new(0.8, 0.0);
        for (k, c) in &modes {
            z += c * Complex64::from_polar(1.0, k * x)
                + c.conj() * 0.5 * Complex64::from_polar(1.0, -2.0 * k * x);
        }
        z
    })
    .unwrap()
}

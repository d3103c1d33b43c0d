mod common;

use proptest::prelude::*;
use rogue_zeno::analytic::{sample_on_grid, AnalyticSolution};
use rogue_zeno::grid::{integrate_density, ComplexField, Window};
use rogue_zeno::solver::{Ssfm, SsfmParams};
use rogue_zeno::zeno::{project, run_zeno, Normalization, ZenoRun, ZenoSchedule};

use common::default_grid;

fn peregrine_run(n: usize, snapshots: bool) -> ZenoRun {
    let grid = default_grid();
    let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, 0.0).unwrap();
    let schedule = ZenoSchedule::new(Window::symmetric(0.8).unwrap(), 0.0, 2.0, n)
        .unwrap()
        .prepared(true)
        .with_snapshot_every(usize::from(snapshots));
    run_zeno(&mut Ssfm::new(grid), f, &schedule, &SsfmParams::default()).unwrap()
}

#[test]
fn cumulative_survival_grows_with_measurement_rate() {
    let values: Vec<f64> = [10, 100, 1000]
        .iter()
        .map(|&n| peregrine_run(n, false).cumulative())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
    let values: Vec<f64> = [10, 50, 100, 500]
        .iter()
        .map(|&n| peregrine_run(n, false).cumulative())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn spec_convention_without_preparation_is_also_monotone() {
    let grid = default_grid();
    let mut last = 0.0;
    for n in [10, 100, 1000] {
        let f = sample_on_grid(&AnalyticSolution::Peregrine, &grid, 0.0).unwrap();
        let schedule = ZenoSchedule::new(Window::symmetric(0.8).unwrap(), 0.0, 2.0, n).unwrap();
        let run = run_zeno(
            &mut Ssfm::new(grid.clone()),
            f,
            &schedule,
            &SsfmParams::default(),
        )
        .unwrap();
        assert!(run.cumulative() > last);
        last = run.cumulative();
    }
}

#[test]
fn bookkeeping() {
    let run = peregrine_run(100, true);
    assert_eq!(run.records.len(), 100);
    assert_eq!(run.snapshots.len(), 100);
    let mut product = 1.0;
    for (i, r) in run.records.iter().enumerate() {
        assert_eq!(r.index, i + 1);
        assert!((r.time - 0.02 * (i + 1) as f64).abs() < 1e-12);
        assert!(r.survival > 0.0 && r.survival <= 1.0);
        product *= r.survival;
        assert!((r.cumulative - product).abs() <= 1e-12 * product);
        assert!(r.background.is_finite());
    }
    assert!(run
        .records
        .windows(2)
        .all(|w| w[1].cumulative <= w[0].cumulative));
    let w = Window::symmetric(0.8).unwrap();
    for s in &run.snapshots {
        assert!((integrate_density(s, &w).unwrap() - 1.0).abs() < 1e-12);
    }
    assert_eq!(run.field.time, 2.0);
}

#[test]
fn raw_observation_only_removes_density() {
    let grid = default_grid();
    let f = sample_on_grid(&AnalyticSolution::PlaneWave, &grid, 0.0).unwrap();
    let mut density = f.total_density();
    let schedule = ZenoSchedule::new(Window::symmetric(2.0).unwrap(), 0.0, 2.0, 100)
        .unwrap()
        .with_normalization(Normalization::Raw)
        .with_snapshot_every(1);
    let run = run_zeno(&mut Ssfm::new(grid), f, &schedule, &SsfmParams::default()).unwrap();
    let first = run.records.first().unwrap().background;
    assert!((first - 1.0).abs() < 1e-2, "{first}");
    // Evolution conserves the total, projection keeps the window fraction.
    for (r, s) in run.records.iter().zip(&run.snapshots) {
        let after = s.total_density();
        assert!((after - density * r.survival).abs() <= 1e-9 * density);
        assert!(after <= density * (1.0 + 1e-12));
        density = after;
    }
}

/// Largest change between consecutive post-measurement states.
fn max_consecutive_change(run: &ZenoRun) -> f64 {
    let mut prev: &ComplexField = &run.first_projection;
    let mut worst: f64 = 0.0;
    for s in &run.snapshots {
        let d = s
            .values()
            .iter()
            .zip(prev.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(d);
        prev = s;
    }
    worst
}

#[test]
fn frequent_measurement_freezes_consecutive_profiles() {
    let coarse = max_consecutive_change(&peregrine_run(10, true));
    let fine = max_consecutive_change(&peregrine_run(1000, true));
    assert!(fine < coarse / 5.0, "N=1000: {fine}, N=10: {coarse}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent(t in -3.0f64..3.0, l in -15.0f64..5.0, w in 0.5f64..10.0) {
        let grid = default_grid();
        let f = sample_on_grid(&AnalyticSolution::AkhmedievPeregrine, &grid, t).unwrap();
        let window = Window::new(l, l + w).unwrap();
        let (once, _) = project(&f, &window, Normalization::Raw).unwrap();
        let (twice, p) = project(&once, &window, Normalization::Raw).unwrap();
        prop_assert_eq!(once.values(), twice.values());
        prop_assert_eq!(p, 1.0);

        let (normed, _) = project(&f, &window, Normalization::Normalized).unwrap();
        prop_assert!((integrate_density(&normed, &window).unwrap() - 1.0).abs() < 1e-12);
    }
}

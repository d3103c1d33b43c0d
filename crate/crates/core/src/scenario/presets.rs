//! Built-in scenarios reproducing the figure experiments, plus smoke tests.

use serde::Serialize;

use super::config::{
    breather_domain, GridSpec, MeasurementCount, Outputs, Phase, ScenarioConfig, DEFAULT_POINTS,
    DEFAULT_RECORD_EVERY, DEFAULT_X_MAX, DEFAULT_X_MIN,
};
use crate::analytic::AnalyticSolution;
use crate::grid::Window;
use crate::solver::{Splitting, SsfmParams, DEFAULT_DT};
use crate::zeno::Normalization;
use crate::{Error, Result};

/// Breather parameter used throughout the figure presets.
pub const BREATHER_A: f64 = 0.45;
/// Measurement counts swept in the profile and probability presets.
pub const SWEEP_COUNTS: [usize; 5] = [10, 50, 100, 500, 1000];

#[derive(Debug, Clone, Serialize)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

const PRESETS: &[PresetInfo] = &[
    PresetInfo {
        name: "fig1a",
        description: "Akhmediev breather a=0.45, free evolution t=-5..5",
    },
    PresetInfo {
        name: "fig1",
        description: "Akhmediev breather a=0.45, Zeno window [-7.5,7.5], t=0..5",
    },
    PresetInfo {
        name: "fig2",
        description: "Akhmediev breather a=0.45, Zeno window [-5,5], t=0..5",
    },
    PresetInfo {
        name: "fig3a",
        description: "Peregrine, free evolution t=-5..5",
    },
    PresetInfo {
        name: "fig3",
        description: "Peregrine, Zeno window [-7.5,7.5], t=0..5",
    },
    PresetInfo {
        name: "fig4",
        description: "Peregrine, raw profiles after N measurements in [-0.8,0.8], t=0..2",
    },
    PresetInfo {
        name: "fig5",
        description: "Peregrine, survival probability in [-0.8,0.8], t=0..2, N sweep",
    },
    PresetInfo {
        name: "fig6a",
        description: "Akhmediev-Peregrine, free evolution t=-5..5",
    },
    PresetInfo {
        name: "fig6",
        description: "Akhmediev-Peregrine, Zeno window [-7.5,7.5], t=0..5",
    },
    PresetInfo {
        name: "fig7",
        description: "Akhmediev-Peregrine, raw profiles after N measurements in [-1.7,1.7], t=0..2",
    },
    PresetInfo {
        name: "fig8",
        description: "Akhmediev-Peregrine, survival probability in [-0.8,0.8], t=0..2, N sweep",
    },
    PresetInfo {
        name: "planewave-smoke",
        description: "Plane wave on a small grid, free then Zeno, all outputs",
    },
    PresetInfo {
        name: "peregrine-smoke",
        description: "Peregrine on a small grid, short free and Zeno phases",
    },
];

pub fn list_presets() -> &'static [PresetInfo] {
    PRESETS
}

fn base(name: &str, initial: AnalyticSolution, t0: f64) -> ScenarioConfig {
    let (x_min, x_max) = match initial {
        AnalyticSolution::AkhmedievBreather { a } => {
            breather_domain(a, 4).expect("preset breather parameter is valid")
        }
        _ => (DEFAULT_X_MIN, DEFAULT_X_MAX),
    };
    ScenarioConfig {
        name: name.to_string(),
        initial,
        t0,
        grid: GridSpec {
            points: DEFAULT_POINTS,
            x_min,
            x_max,
        },
        solver: SsfmParams {
            dt: DEFAULT_DT,
            splitting: Splitting::Lie,
            record_every: DEFAULT_RECORD_EVERY,
        },
        phases: vec![Phase::Free { t_end: 5.0 }],
        sweep: None,
        outputs: Outputs {
            field_surface: true,
            spectrum_surface: true,
            probability_table: true,
            profile_snapshots: false,
        },
        output_dir: None,
    }
}

fn window(half: f64) -> Window {
    Window::symmetric(half).expect("preset window is valid")
}

/// Free run to t = 0, then per-step raw observation on `[-half, half]` to t = 5.
fn observed(name: &str, initial: AnalyticSolution, half: f64) -> ScenarioConfig {
    let mut c = base(name, initial, -5.0);
    c.phases = vec![
        Phase::Free { t_end: 0.0 },
        Phase::Zeno {
            t_end: 5.0,
            window: window(half),
            measurements: MeasurementCount::EVERY_STEP,
            normalize: Normalization::Raw,
            prepare: true,
        },
    ];
    c
}

/// Observation from t = 0 to t = 2 on `[-half, half]`, swept over N.
fn sweep(
    name: &str,
    initial: AnalyticSolution,
    half: f64,
    normalize: Normalization,
    profiles: bool,
) -> ScenarioConfig {
    let mut c = base(name, initial, 0.0);
    c.phases = vec![Phase::Zeno {
        t_end: 2.0,
        window: window(half),
        measurements: MeasurementCount::Count(SWEEP_COUNTS[0]),
        normalize,
        prepare: true,
    }];
    c.sweep = Some(SWEEP_COUNTS.to_vec());
    c.outputs = Outputs {
        field_surface: false,
        spectrum_surface: false,
        probability_table: true,
        profile_snapshots: profiles,
    };
    c
}

pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let ab = AnalyticSolution::AkhmedievBreather { a: BREATHER_A };
    let pe = AnalyticSolution::Peregrine;
    let ap = AnalyticSolution::AkhmedievPeregrine;
    let config = match name {
        "fig1a" => base(name, ab, -5.0),
        "fig1" => observed(name, ab, 7.5),
        "fig2" => observed(name, ab, 5.0),
        "fig3a" => base(name, pe, -5.0),
        "fig3" => observed(name, pe, 7.5),
        "fig4" => sweep(name, pe, 0.8, Normalization::Raw, true),
        "fig5" => sweep(name, pe, 0.8, Normalization::Normalized, false),
        "fig6a" => base(name, ap, -5.0),
        "fig6" => observed(name, ap, 7.5),
        "fig7" => sweep(name, ap, 1.7, Normalization::Raw, true),
        "fig8" => sweep(name, ap, 0.8, Normalization::Normalized, false),
        "planewave-smoke" => {
            let mut c = base(name, AnalyticSolution::PlaneWave, 0.0);
            c.grid.points = 256;
            c.phases = vec![
                Phase::Free { t_end: 1.0 },
                Phase::Zeno {
                    t_end: 2.0,
                    window: window(5.0),
                    measurements: MeasurementCount::Count(10),
                    normalize: Normalization::Normalized,
                    prepare: false,
                },
            ];
            c.outputs.profile_snapshots = true;
            c
        }
        "peregrine-smoke" => {
            let mut c = base(name, pe, -1.0);
            c.grid.points = 512;
            c.phases = vec![
                Phase::Free { t_end: 0.0 },
                Phase::Zeno {
                    t_end: 0.5,
                    window: window(2.0),
                    measurements: MeasurementCount::Count(50),
                    normalize: Normalization::Normalized,
                    prepare: true,
                },
            ];
            c.outputs.profile_snapshots = true;
            c
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    debug_assert!(config.validate().is_ok(), "preset {name} must validate");
    Ok(config)
}

//! Experiment configuration, figure presets and CSV export.

mod config;
mod presets;
mod run;

pub use config::{
    breather_domain, load_config, EveryStep, GridSpec, MeasurementCount, Outputs, Phase,
    ScenarioConfig, DEFAULT_POINTS, DEFAULT_RECORD_EVERY, DEFAULT_T0, DEFAULT_T_END, DEFAULT_X_MAX,
    DEFAULT_X_MIN,
};
pub use presets::{list_presets, preset, PresetInfo, BREATHER_A, SWEEP_COUNTS};
pub use run::{
    execute, run_scenario, EmittedFile, MemberOutcome, MemberSummary, ResolvedGrid, RunFailure,
    RunManifest, ZenoPhaseOutcome, BACKGROUND_HEADER, FIELD_SURFACE_HEADER, MANIFEST_FILE,
    PROBABILITY_HEADER, PROFILE_HEADER, SPECTRUM_SURFACE_HEADER,
};

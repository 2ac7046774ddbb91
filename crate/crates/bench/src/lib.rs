//! Shared inputs for the benchmarks.

use nearfield_core::{ScenarioConfig, ScenarioId, TransitionRabis};

/// Resolved defaults for `id`, panicking on bad overrides.
pub fn config(id: ScenarioId, overrides: &[&str]) -> ScenarioConfig {
    let overrides: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ScenarioConfig::resolve(id, None, &overrides).expect("benchmark config is valid")
}

/// Rabi frequencies under a single-waveguide drive at the probe point, so
/// every line is driven.
pub fn single_waveguide_rabis() -> TransitionRabis {
    let cfg = config(ScenarioId::Fig3c, &[]);
    cfg.rabis_at(cfg.probe.z_um, &cfg.drive().expect("valid drive"))
        .expect("probe inside trap")
}

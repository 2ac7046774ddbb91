//! Named experiments that turn a [`ScenarioConfig`] into a table.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::field::MHZ;
use crate::fit::{fit_abs_sinusoid, fit_quadratic};
use crate::ion::{drive_scan, spectrum_scan};
use crate::pulse::{excitation_profile_of, repeated_population, scaling_order_over, SequenceKind};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    #[serde(rename = "fig3b")]
    Fig3b,
    #[serde(rename = "fig3c")]
    Fig3c,
    #[serde(rename = "fig4b")]
    Fig4b,
    #[serde(rename = "fig5")]
    Fig5,
    #[serde(rename = "fig6")]
    Fig6,
    #[serde(rename = "fig7")]
    Fig7,
    #[serde(rename = "scaling-check")]
    ScalingCheck,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 7] = [
        ScenarioId::Fig3b,
        ScenarioId::Fig3c,
        ScenarioId::Fig4b,
        ScenarioId::Fig5,
        ScenarioId::Fig6,
        ScenarioId::Fig7,
        ScenarioId::ScalingCheck,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::Fig3b => "fig3b",
            ScenarioId::Fig3c => "fig3c",
            ScenarioId::Fig4b => "fig4b",
            ScenarioId::Fig5 => "fig5",
            ScenarioId::Fig6 => "fig6",
            ScenarioId::Fig7 => "fig7",
            ScenarioId::ScalingCheck => "scaling-check",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ScenarioId::Fig3b => "Rabi flopping on the clock line at probe.z_um",
            ScenarioId::Fig3c => "microwave spectrum over the three F=1 lines",
            ScenarioId::Fig4b => "transition Rabi frequencies against relative waveguide phase",
            ScenarioId::Fig5 => "clock Rabi frequency along the trap axis",
            ScenarioId::Fig6 => "single-gate excitation against pulse-area scale",
            ScenarioId::Fig7 => "population after n repeated X gates along the trap axis",
            ScenarioId::ScalingCheck => "per-gate infidelity against amplitude error",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            ScenarioId::Fig3b => &["t_us", "p_f1"],
            ScenarioId::Fig3c => &["detuning_mhz", "p_f1"],
            ScenarioId::Fig4b => &[
                "phi_r_rad",
                "rabi_clock_mhz",
                "rabi_sigma_plus_mhz",
                "rabi_sigma_minus_mhz",
            ],
            ScenarioId::Fig5 => &["z_um", "rabi_mhz"],
            ScenarioId::Fig6 => &["scale", "p_simple", "p_sk1", "p_bb1"],
            ScenarioId::Fig7 => &["z_um", "n", "p_f1"],
            ScenarioId::ScalingCheck => &["epsilon", "infidelity_simple", "infidelity_sk1", "infidelity_bb1"],
        }
    }

    /// Columns holding measured populations: detection and shot noise apply.
    fn population_columns(self) -> &'static [usize] {
        match self {
            ScenarioId::Fig3b | ScenarioId::Fig3c => &[1],
            ScenarioId::Fig6 => &[1, 2, 3],
            ScenarioId::Fig7 => &[2],
            _ => &[],
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario {
                name: s.to_owned(),
                valid: ScenarioId::ALL
                    .iter()
                    .map(|id| id.as_str())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
    }
}

/// A scenario result: numeric table, resolved config and optional fit summary.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub config: ScenarioConfig,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Option<Value>,
}

impl Dataset {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// CSV text: echoed config header, column names, then rows.
    pub fn to_csv(&self) -> String {
        let mut out = self.config.echo_header();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip form; scientific notation outside `[1e-4, 1e15)`.
pub fn format_value(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Dataset> {
    cfg.validate()?;
    let id = cfg.scenario;
    let (mut rows, summary) = match id {
        ScenarioId::Fig3b => (rabi_flop(cfg)?, None),
        ScenarioId::Fig3c => (spectrum(cfg)?, None),
        ScenarioId::Fig4b => phase_scan(cfg)?,
        ScenarioId::Fig5 => axial_profile(cfg)?,
        ScenarioId::Fig6 => (excitation(cfg)?, None),
        ScenarioId::Fig7 => (repeated_gates(cfg)?, None),
        ScenarioId::ScalingCheck => scaling(cfg)?,
    };
    measure(cfg, id.population_columns(), &mut rows)?;
    Ok(Dataset {
        config: cfg.clone(),
        columns: id.columns().iter().map(|c| c.to_string()).collect(),
        rows,
        summary,
    })
}

/// Applies readout error, then binomial shot noise in row-major order.
fn measure(cfg: &ScenarioConfig, columns: &[usize], rows: &mut [Vec<f64>]) -> Result<()> {
    if columns.is_empty() {
        return Ok(());
    }
    let detection = cfg.detection()?;
    let shots = cfg.noise.shots;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for row in rows.iter_mut() {
        for &k in columns {
            let p = detection.apply(row[k])?;
            row[k] = if shots > 0 {
                let dist = Binomial::new(shots, p).map_err(|e| Error::invalid("noise.shots", e.to_string()))?;
                dist.sample(&mut rng) as f64 / shots as f64
            } else {
                p
            };
        }
    }
    Ok(())
}

fn rabi_flop(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    let rabis = cfg.rabis_at(cfg.probe.z_um, &cfg.drive()?)?;
    let ts = cfg.grid.t_us.values();
    let secs: Vec<f64> = ts.iter().map(|t| t * 1e-6).collect();
    let p = drive_scan(&secs, &rabis, cfg.ion.detuning_mhz * MHZ, &cfg.system()?)?;
    Ok(ts.into_iter().zip(p).map(|(t, p)| vec![t, p]).collect())
}

fn spectrum(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    let rabis = cfg.rabis_at(cfg.probe.z_um, &cfg.drive()?)?;
    let ds = cfg.grid.detuning_mhz.values();
    let rad: Vec<f64> = ds.iter().map(|d| d * MHZ).collect();
    let p = spectrum_scan(&rad, cfg.probe.pulse_us.map(|t| t * 1e-6), &rabis, &cfg.system()?)?;
    Ok(ds.into_iter().zip(p).map(|(d, p)| vec![d, p]).collect())
}

fn phase_scan(cfg: &ScenarioConfig) -> Result<(Vec<Vec<f64>>, Option<Value>)> {
    let rows = cfg
        .grid
        .phi_r_rad
        .values()
        .into_par_iter()
        .map(|phi| {
            let r = cfg.rabis_at(cfg.probe.z_um, &cfg.drive_with_relative_phase(phi)?)?;
            let (c, p, m) = r.magnitudes();
            Ok(vec![phi, c / MHZ, p / MHZ, m / MHZ])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fits = serde_json::Map::new();
    for (k, name) in ["clock", "sigma_plus", "sigma_minus"].into_iter().enumerate() {
        let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[k + 1])).collect();
        let entry = match fit_abs_sinusoid(&samples) {
            Ok(fit) => serde_json::to_value(fit).expect("fit serializes"),
            Err(e) => json!({ "error": e.to_string() }),
        };
        fits.insert(name.to_owned(), entry);
    }
    Ok((rows, Some(Value::Object(fits))))
}

fn axial_profile(cfg: &ScenarioConfig) -> Result<(Vec<Vec<f64>>, Option<Value>)> {
    let profile = cfg.profile()?;
    let rows = cfg
        .grid
        .z_um
        .values()
        .into_iter()
        .map(|z| Ok(vec![z, profile.rabi(z)? / MHZ]))
        .collect::<Result<Vec<_>>>()?;
    let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    let summary = match fit_quadratic(&samples) {
        Ok(fit) => json!({ "quadratic": fit }),
        Err(e) => json!({ "quadratic": { "error": e.to_string() } }),
    };
    Ok((rows, Some(summary)))
}

fn excitation(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    let scales = cfg.grid.scale.values();
    let mut cols = Vec::with_capacity(3);
    for kind in SequenceKind::ALL {
        cols.push(excitation_profile_of(&cfg.sequence_of(kind)?, &scales)?);
    }
    Ok(scales
        .iter()
        .enumerate()
        .map(|(i, &s)| vec![s, cols[0][i], cols[1][i], cols[2][i]])
        .collect())
}

fn repeated_gates(cfg: &ScenarioConfig) -> Result<Vec<Vec<f64>>> {
    let profile = cfg.profile()?;
    let seq = cfg.sequence_of(cfg.sequence.kind)?;
    let n_max = cfg.grid.n_max;
    let blocks = cfg
        .grid
        .z_um
        .values()
        .into_par_iter()
        .map(|z| {
            let eps = profile.amplitude_error(z)?;
            (0..=n_max)
                .map(|n| Ok(vec![z, f64::from(n), repeated_population(&seq, n, eps)?]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(blocks.into_iter().flatten().collect())
}

fn scaling(cfg: &ScenarioConfig) -> Result<(Vec<Vec<f64>>, Option<Value>)> {
    let eps = cfg.grid.epsilon.log_values();
    let mut fits = Vec::with_capacity(3);
    let mut summary = serde_json::Map::new();
    for kind in SequenceKind::ALL {
        let fit = scaling_order_over(kind, &eps)?;
        summary.insert(
            kind.as_str().to_owned(),
            json!({
                "exponent": fit.exponent,
                "prefactor": fit.prefactor,
                "expected_order": kind.expected_order(),
            }),
        );
        fits.push(fit);
    }
    let rows = eps
        .iter()
        .enumerate()
        .map(|(i, &e)| vec![e, fits[0].samples[i].1, fits[1].samples[i].1, fits[2].samples[i].1])
        .collect();
    Ok((rows, Some(Value::Object(summary))))
}

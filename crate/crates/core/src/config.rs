//! Scenario configuration: one TOML tree with sections `field`, `drive`,
//! `ion`, `detection`, `sequence`, `probe`, `grid` and `noise`.
//!
//! Resolution order is scenario defaults, then a config file, then
//! `key=value` overrides. Unknown keys are rejected by full dotted path.
//! The resolved tree is echoed as a `# `-prefixed header in every dataset,
//! and that header can be fed back in as a config file.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::field::{
    superpose_field, CouplingConstants, DriveSettings, ProfileShape, RabiProfile, TransitionRabis, WaveguideMode,
    HYPERFINE_GHZ, MHZ,
};
use crate::ion::{DetectionModel, HyperfineSystem};
use crate::pulse::{build_sequence, log_spaced, PulseSequence, SequenceKind};
use crate::scenario::ScenarioId;

/// First line of an echoed configuration header.
pub const ECHO_MARKER: &str = "# nearfield resolved configuration";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Quadratic,
    Cosine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// mT/A for waveguides 1 and 2
    pub beta_x: [f64; 2],
    pub beta_y: [f64; 2],
    pub z0_um: f64,
    /// Peak qubit Rabi frequency, Omega / 2pi in MHz.
    pub omega_max_mhz: f64,
    pub shape: ShapeKind,
    pub curvature_per_um2: f64,
    pub lambda_g_um: f64,
    pub traveling_fraction: f64,
    pub g_sigma: f64,
    pub trap_extent_um: [f64; 2],
    /// Scale field-derived Rabi frequencies so the balanced reference drive
    /// reaches `omega_max_mhz` at the antinode.
    pub calibrate_to_profile: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    pub current_a: [f64; 2],
    pub phase_rad: [f64; 2],
    pub frequency_ghz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IonConfig {
    pub static_field_mt: f64,
    /// Overrides the splitting derived from `static_field_mt`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_zeeman_mhz: Option<f64>,
    pub detuning_mhz: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub p_dark_given_bright: f64,
    pub p_bright_given_dark: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceConfig {
    pub kind: SequenceKind,
    pub theta_over_pi: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub z_um: f64,
    /// Spectrum probe duration; defaults to the pi time of the strongest line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse_us: Option<f64>,
}

/// Inclusive `(start, stop, points)` sweep.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid(pub f64, pub f64, pub usize);

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let Grid(start, stop, points) = *self;
        match points {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..points)
                .map(|k| {
                    if k == points - 1 {
                        stop
                    } else {
                        start + (stop - start) * k as f64 / (points - 1) as f64
                    }
                })
                .collect(),
        }
    }

    pub fn log_values(&self) -> Vec<f64> {
        log_spaced(self.0, self.1, self.2)
    }

    fn validate(&self, key: &str) -> Result<()> {
        if !(self.0.is_finite() && self.1.is_finite()) {
            return Err(Error::invalid(key, "grid bounds must be finite"));
        }
        if self.2 == 0 {
            return Err(Error::invalid(key, "grid needs at least one point"));
        }
        Ok(())
    }

    fn min(&self) -> f64 {
        self.0.min(self.1)
    }

    fn max(&self) -> f64 {
        self.0.max(self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub t_us: Grid,
    pub detuning_mhz: Grid,
    pub phi_r_rad: Grid,
    pub z_um: Grid,
    pub scale: Grid,
    pub n_max: u32,
    /// Log-spaced.
    pub epsilon: Grid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Binomial shots per population point; 0 disables sampling.
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioId,
    pub seed: u64,
    pub field: FieldConfig,
    pub drive: DriveConfig,
    pub ion: IonConfig,
    pub detection: DetectionConfig,
    pub sequence: SequenceConfig,
    pub probe: ProbeConfig,
    pub grid: GridConfig,
    pub noise: NoiseConfig,
}

impl ScenarioConfig {
    /// Defaults for `scenario`. Sweep ranges not fixed by the experiment
    /// (scale in `[0, 2]`, z in `[157, 1757]` um) are assumptions.
    pub fn defaults(scenario: ScenarioId) -> Self {
        let mut cfg = ScenarioConfig {
            scenario,
            seed: 0,
            field: FieldConfig {
                beta_x: [0.08, 0.08],
                beta_y: [0.17, -0.17],
                z0_um: 957.0,
                omega_max_mhz: 0.52,
                shape: ShapeKind::Quadratic,
                curvature_per_um2: RabiProfile::anchored_curvature(),
                lambda_g_um: RabiProfile::anchored_wavelength(),
                traveling_fraction: 0.0,
                g_sigma: CouplingConstants::default().g_sigma,
                trap_extent_um: [0.0, 1914.0],
                calibrate_to_profile: true,
            },
            drive: DriveConfig {
                current_a: [0.1, 0.1],
                phase_rad: [0.0, PI],
                frequency_ghz: HYPERFINE_GHZ,
            },
            ion: IonConfig {
                static_field_mt: 0.74,
                delta_zeeman_mhz: None,
                detuning_mhz: 0.0,
            },
            detection: DetectionConfig {
                p_dark_given_bright: 0.0,
                p_bright_given_dark: 0.0,
            },
            sequence: SequenceConfig {
                kind: SequenceKind::Simple,
                theta_over_pi: 1.0,
                phi: 0.0,
            },
            probe: ProbeConfig {
                z_um: 300.0,
                pulse_us: None,
            },
            grid: GridConfig {
                t_us: Grid(0.0, 5.0, 501),
                detuning_mhz: Grid(-15.0, 15.0, 601),
                phi_r_rad: Grid(0.0, 2.0 * PI, 73),
                z_um: Grid(157.0, 1757.0, 161),
                scale: Grid(0.0, 2.0, 201),
                n_max: 55,
                epsilon: Grid(1e-3, 3e-2, 16),
            },
            noise: NoiseConfig { shots: 0 },
        };
        match scenario {
            ScenarioId::Fig3c => {
                // one waveguide driven: all three lines visible
                cfg.drive.current_a = [0.1, 0.0];
                cfg.drive.phase_rad = [0.0, 0.0];
            }
            ScenarioId::Fig4b => cfg.probe.z_um = 957.0,
            _ => {}
        }
        cfg
    }

    /// Resolves defaults, an optional TOML file body and `key=value` overrides.
    pub fn resolve(scenario: ScenarioId, file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut table = Table::try_from(Self::defaults(scenario)).map_err(|e| Error::ConfigParse(e.to_string()))?;
        if let Some(text) = file {
            let body = extract_echoed_config(text).unwrap_or_else(|| text.to_owned());
            let parsed: Table = body
                .parse()
                .map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
            merge(&mut table, parsed);
        }
        for spec in overrides {
            let (key, value) = parse_override(spec)?;
            set_path(&mut table, &key, value)?;
        }
        table.insert("scenario".into(), Value::String(scenario.as_str().into()));

        let mut unknown = Vec::new();
        let cfg: ScenarioConfig =
            serde_ignored::deserialize(Value::Table(table), |path| unknown.push(path.to_string()))
                .map_err(|e: toml::de::Error| Error::ConfigParse(e.to_string()))?;
        if let Some(key) = unknown.into_iter().next() {
            return Err(Error::UnknownKey(key));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The resolved configuration as `# `-prefixed lines, starting with
    /// [`ECHO_MARKER`].
    pub fn echo_header(&self) -> String {
        let mut out = String::from(ECHO_MARKER);
        out.push('\n');
        for line in self.to_toml().lines() {
            if line.is_empty() {
                out.push_str("#\n");
            } else {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        for (key, v) in [
            ("field.beta_x", f.beta_x[0]),
            ("field.beta_x", f.beta_x[1]),
            ("field.beta_y", f.beta_y[0]),
            ("field.beta_y", f.beta_y[1]),
        ] {
            require(key, v.is_finite(), "must be finite")?;
        }
        require(
            "field.omega_max_mhz",
            f.omega_max_mhz > 0.0 && f.omega_max_mhz.is_finite(),
            "must be positive",
        )?;
        require(
            "field.curvature_per_um2",
            f.curvature_per_um2 >= 0.0 && f.curvature_per_um2.is_finite(),
            "must be non-negative",
        )?;
        require(
            "field.lambda_g_um",
            f.lambda_g_um > 0.0 && f.lambda_g_um.is_finite(),
            "must be positive",
        )?;
        require(
            "field.traveling_fraction",
            (0.0..1.0).contains(&f.traveling_fraction),
            "must lie in [0, 1)",
        )?;
        require(
            "field.g_sigma",
            f.g_sigma >= 0.0 && f.g_sigma.is_finite(),
            "must be non-negative",
        )?;
        let [lo, hi] = f.trap_extent_um;
        require(
            "field.trap_extent_um",
            lo.is_finite() && hi.is_finite() && lo < hi,
            "needs finite lo < hi",
        )?;
        require(
            "field.z0_um",
            (lo..=hi).contains(&f.z0_um),
            "must lie inside field.trap_extent_um",
        )?;

        let d = &self.drive;
        for i in d.current_a {
            require(
                "drive.current_a",
                i >= 0.0 && i.is_finite(),
                "currents must be non-negative",
            )?;
        }
        for p in d.phase_rad {
            require("drive.phase_rad", p.is_finite(), "must be finite")?;
        }
        require(
            "drive.frequency_ghz",
            d.frequency_ghz > 0.0 && d.frequency_ghz.is_finite(),
            "must be positive",
        )?;

        let ion = &self.ion;
        require(
            "ion.static_field_mt",
            ion.static_field_mt >= 0.0 && ion.static_field_mt.is_finite(),
            "must be non-negative",
        )?;
        if let Some(dz) = ion.delta_zeeman_mhz {
            require(
                "ion.delta_zeeman_mhz",
                dz >= 0.0 && dz.is_finite(),
                "must be non-negative",
            )?;
        }
        require("ion.detuning_mhz", ion.detuning_mhz.is_finite(), "must be finite")?;

        for (key, p) in [
            ("detection.p_dark_given_bright", self.detection.p_dark_given_bright),
            ("detection.p_bright_given_dark", self.detection.p_bright_given_dark),
        ] {
            require(key, (0.0..=1.0).contains(&p), "must be a probability")?;
        }

        let s = &self.sequence;
        require(
            "sequence.theta_over_pi",
            (0.0..=4.0).contains(&s.theta_over_pi),
            "must lie in [0, 4]",
        )?;
        require("sequence.phi", s.phi.is_finite(), "must be finite")?;

        require(
            "probe.z_um",
            (lo..=hi).contains(&self.probe.z_um),
            "must lie inside field.trap_extent_um",
        )?;
        if let Some(t) = self.probe.pulse_us {
            require("probe.pulse_us", t > 0.0 && t.is_finite(), "must be positive")?;
        }

        let g = &self.grid;
        for (key, grid) in [
            ("grid.t_us", &g.t_us),
            ("grid.detuning_mhz", &g.detuning_mhz),
            ("grid.phi_r_rad", &g.phi_r_rad),
            ("grid.z_um", &g.z_um),
            ("grid.scale", &g.scale),
            ("grid.epsilon", &g.epsilon),
        ] {
            grid.validate(key)?;
        }
        require("grid.t_us", g.t_us.min() >= 0.0, "durations must be non-negative")?;
        require("grid.scale", g.scale.min() >= 0.0, "scales must be non-negative")?;
        require(
            "grid.epsilon",
            g.epsilon.min() > 0.0,
            "log-spaced errors must be positive",
        )?;
        require(
            "grid.z_um",
            g.z_um.min() >= lo && g.z_um.max() <= hi,
            "must lie inside field.trap_extent_um",
        )?;

        // building the models catches remaining unphysical combinations
        let profile = self.profile()?;
        for (key, z) in [
            ("grid.z_um", g.z_um.min()),
            ("grid.z_um", g.z_um.max()),
            ("probe.z_um", self.probe.z_um),
        ] {
            profile.axial_scale(z).map_err(|e| Error::invalid(key, e.to_string()))?;
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<RabiProfile> {
        let f = &self.field;
        let shape = match f.shape {
            ShapeKind::Quadratic => ProfileShape::Quadratic {
                curvature_per_um2: f.curvature_per_um2,
            },
            ShapeKind::Cosine => ProfileShape::Cosine {
                lambda_g_um: f.lambda_g_um,
            },
        };
        RabiProfile::new(
            f.z0_um,
            f.omega_max_mhz * MHZ,
            shape,
            f.traveling_fraction,
            (f.trap_extent_um[0], f.trap_extent_um[1]),
        )
        .map_err(|e| Error::invalid("field", e.to_string()))
    }

    pub fn modes(&self) -> [WaveguideMode; 2] {
        let f = &self.field;
        [
            WaveguideMode {
                beta_x: f.beta_x[0],
                beta_y: f.beta_y[0],
            },
            WaveguideMode {
                beta_x: f.beta_x[1],
                beta_y: f.beta_y[1],
            },
        ]
    }

    pub fn constants(&self) -> CouplingConstants {
        CouplingConstants {
            g_sigma: self.field.g_sigma,
            ..CouplingConstants::default()
        }
    }

    pub fn drive(&self) -> Result<DriveSettings> {
        self.drive_with_relative_phase(self.drive.phase_rad[1] - self.drive.phase_rad[0])
    }

    /// Configured currents with `phi_2 = phi_1 + phi_r`.
    pub fn drive_with_relative_phase(&self, phi_r: f64) -> Result<DriveSettings> {
        let d = &self.drive;
        DriveSettings::new(
            d.current_a,
            [d.phase_rad[0], d.phase_rad[0] + phi_r],
            d.frequency_ghz * 1e3 * MHZ,
        )
        .map_err(|e| Error::invalid("drive", e.to_string()))
    }

    pub fn system(&self) -> Result<HyperfineSystem> {
        let sys = HyperfineSystem::from_static_field(self.ion.static_field_mt)
            .map_err(|e| Error::invalid("ion.static_field_mt", e.to_string()))?;
        match self.ion.delta_zeeman_mhz {
            Some(dz) => sys
                .with_zeeman_splitting(dz * MHZ)
                .map_err(|e| Error::invalid("ion.delta_zeeman_mhz", e.to_string())),
            None => Ok(sys),
        }
    }

    pub fn detection(&self) -> Result<DetectionModel> {
        DetectionModel::new(self.detection.p_dark_given_bright, self.detection.p_bright_given_dark)
            .map_err(|e| Error::invalid("detection", e.to_string()))
    }

    pub fn sequence_of(&self, kind: SequenceKind) -> Result<PulseSequence> {
        build_sequence(kind, self.sequence.theta_over_pi * PI, self.sequence.phi)
            .map_err(|e| Error::invalid("sequence", e.to_string()))
    }

    /// Field-to-Rabi scale factor; see [`FieldConfig::calibrate_to_profile`].
    pub fn calibration(&self) -> Result<f64> {
        if !self.field.calibrate_to_profile {
            return Ok(1.0);
        }
        let profile = self.profile()?;
        let current = self.drive.current_a[0].max(self.drive.current_a[1]);
        let reference = DriveSettings::balanced(current, PI).map_err(|e| Error::invalid("drive", e.to_string()))?;
        let (_, by) = superpose_field(profile.z0_um(), &reference, &self.modes(), &profile)?;
        let clock = by.norm() * self.constants().rabi_per_mt();
        Ok(if clock > 0.0 { profile.omega_max() / clock } else { 0.0 })
    }

    /// Calibrated transition Rabi frequencies at `z_um` under `drive`.
    pub fn rabis_at(&self, z_um: f64, drive: &DriveSettings) -> Result<TransitionRabis> {
        let raw = crate::field::transition_rabi(z_um, drive, &self.modes(), &self.profile()?, &self.constants())?;
        Ok(raw.scaled(self.calibration()?))
    }
}

fn require(key: &str, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(key, reason))
    }
}

/// Returns the TOML body of an echoed header, if `text` starts with one.
pub fn extract_echoed_config(text: &str) -> Option<String> {
    let mut lines = text.lines();
    if lines.next()?.trim_end() != ECHO_MARKER {
        return None;
    }
    let mut body = String::new();
    for line in lines {
        let Some(rest) = line.strip_prefix('#') else { break };
        body.push_str(rest.strip_prefix(' ').unwrap_or(rest));
        body.push('\n');
    }
    Some(body)
}

fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn parse_override(spec: &str) -> Result<(String, Value)> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::ConfigParse(format!("override `{spec}` is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(Error::ConfigParse(format!("override `{spec}` has an empty key")));
    }
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_owned()));
    Ok((key.to_owned(), value))
}

fn set_path(table: &mut Table, key: &str, value: Value) -> Result<()> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().expect("split yields one part");
    let mut cur = table;
    for (depth, part) in parts.iter().enumerate() {
        let entry = cur
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(Error::invalid(parts[..=depth].join("."), "is a value, not a section")),
        };
    }
    cur.insert(last.to_owned(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_for_every_scenario() {
        for id in ScenarioId::ALL {
            ScenarioConfig::defaults(id).validate().unwrap();
            ScenarioConfig::resolve(id, None, &[]).unwrap();
        }
    }

    #[test]
    fn overrides_apply_by_dotted_key() {
        let cfg = ScenarioConfig::resolve(
            ScenarioId::Fig7,
            None,
            &[
                "sequence.kind=bb1".into(),
                "grid.z_um=[300.0, 1600.0, 14]".into(),
                "seed = 9".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.sequence.kind, SequenceKind::Bb1);
        assert_eq!(cfg.grid.z_um, Grid(300.0, 1600.0, 14));
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn file_values_merge_over_defaults() {
        let text = "[field]\nomega_max_mhz = 0.6\n\n[ion]\ndelta_zeeman_mhz = 8.0\n";
        let cfg = ScenarioConfig::resolve(ScenarioId::Fig5, Some(text), &[]).unwrap();
        assert_eq!(cfg.field.omega_max_mhz, 0.6);
        assert_eq!(cfg.field.z0_um, 957.0);
        assert_eq!(cfg.ion.delta_zeeman_mhz, Some(8.0));
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = ScenarioConfig::resolve(ScenarioId::Fig5, None, &["field.bogus=1".into()]).unwrap_err();
        assert_eq!(err, Error::UnknownKey("field.bogus".into()));
        let err = ScenarioConfig::resolve(ScenarioId::Fig5, Some("colour = 3\n"), &[]).unwrap_err();
        assert_eq!(err, Error::UnknownKey("colour".into()));
    }

    #[test]
    fn unphysical_values_name_the_key() {
        for (spec, key) in [
            ("field.omega_max_mhz=-0.5", "field.omega_max_mhz"),
            ("drive.current_a=[-0.1, 0.1]", "drive.current_a"),
            ("detection.p_dark_given_bright=1.5", "detection.p_dark_given_bright"),
            ("field.traveling_fraction=1.0", "field.traveling_fraction"),
            ("grid.z_um=[-100.0, 500.0, 5]", "grid.z_um"),
            ("sequence.theta_over_pi=5", "sequence.theta_over_pi"),
        ] {
            match ScenarioConfig::resolve(ScenarioId::Fig7, None, &[spec.into()]) {
                Err(Error::InvalidParameter { key: k, .. }) => assert_eq!(k, key, "{spec}"),
                other => panic!("{spec}: {other:?}"),
            }
        }
    }

    #[test]
    fn quadratic_validity_checked_on_grid() {
        let err =
            ScenarioConfig::resolve(ScenarioId::Fig7, None, &["field.curvature_per_um2=1e-5".into()]).unwrap_err();
        assert!(
            matches!(err, Error::InvalidParameter { ref key, .. } if key == "grid.z_um"),
            "{err:?}"
        );
    }

    #[test]
    fn echo_round_trips() {
        let cfg = ScenarioConfig::resolve(
            ScenarioId::Fig3c,
            None,
            &["ion.delta_zeeman_mhz=9.5".into(), "probe.pulse_us=1.5".into()],
        )
        .unwrap();
        let header = cfg.echo_header();
        let text = format!("{header}detuning_mhz,p_f1\n0,0\n");
        let back = ScenarioConfig::resolve(ScenarioId::Fig3c, Some(&text), &[]).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn malformed_override_rejected() {
        assert!(matches!(
            ScenarioConfig::resolve(ScenarioId::Fig5, None, &["novalue".into()]),
            Err(Error::ConfigParse(_))
        ));
        assert!(matches!(
            ScenarioConfig::resolve(ScenarioId::Fig5, None, &["field.z0_um=abc".into()]),
            Err(Error::ConfigParse(_))
        ));
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = Grid(157.0, 1757.0, 161);
        let v = g.values();
        assert_eq!(v.len(), 161);
        assert_eq!(v[0], 157.0);
        assert_eq!(v[80], 957.0);
        assert_eq!(v[160], 1757.0);
        assert_eq!(Grid(2.0, 9.0, 1).values(), vec![2.0]);
    }

    #[test]
    fn calibration_maps_reference_drive_to_peak() {
        let cfg = ScenarioConfig::defaults(ScenarioId::Fig4b);
        let drive = cfg.drive_with_relative_phase(PI).unwrap();
        let r = cfg.rabis_at(957.0, &drive).unwrap();
        assert!((r.clock.norm() / MHZ - 0.52).abs() < 1e-12);
    }
}

//! Two-waveguide microwave field model.
//!
//! Each waveguide `k` contributes `(x beta_x,k + y beta_y,k) I_k(z) cos(w t + phi_k)`.
//! Fields are carried as complex phasors: the physical field is
//! `Re[B e^{i w t}]`. The static quantization field points along `y`, so the
//! `y` phasor is the pi-polarized component and `x` splits evenly into the
//! two sigma components.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};

/// Bohr magneton over Planck's constant, MHz per mT.
pub const BOHR_MHZ_PER_MT: f64 = 13.996;
/// Hyperfine qubit splitting of 171Yb+, GHz.
pub const HYPERFINE_GHZ: f64 = 12.64;

/// `2 pi * 1e6`: converts MHz (cycles) to rad/s.
pub const MHZ: f64 = TAU * 1e6;

/// Field coefficients of one waveguide mode, mT per A.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveguideMode {
    pub beta_x: f64,
    pub beta_y: f64,
}

impl WaveguideMode {
    /// The symmetric pair: equal `beta_x`, opposite `beta_y`.
    pub fn symmetric_pair(beta_x: f64, beta_y: f64) -> [WaveguideMode; 2] {
        [
            WaveguideMode { beta_x, beta_y },
            WaveguideMode {
                beta_x,
                beta_y: -beta_y,
            },
        ]
    }

    pub fn default_pair() -> [WaveguideMode; 2] {
        Self::symmetric_pair(0.08, 0.17)
    }
}

/// Peak currents, source phases and the shared drive frequency.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DriveSettings {
    currents: [f64; 2],
    phases: [f64; 2],
    omega_mw: f64,
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl DriveSettings {
    /// Currents in A, phases in rad (wrapped into `[0, 2pi)`), `omega_mw` in rad/s.
    pub fn new(currents: [f64; 2], phases: [f64; 2], omega_mw: f64) -> Result<Self> {
        for &i in &currents {
            ensure_finite("waveguide current", i)?;
            if i < 0.0 {
                return Err(Error::out_of_range("waveguide current", i, "[0, inf) A"));
            }
        }
        for &p in &phases {
            ensure_finite("waveguide phase", p)?;
        }
        ensure_finite("drive frequency", omega_mw)?;
        Ok(DriveSettings {
            currents,
            phases: phases.map(wrap_phase),
            omega_mw,
        })
    }

    /// Equal currents on both waveguides with relative phase `phi_r`.
    pub fn balanced(current: f64, phi_r: f64) -> Result<Self> {
        Self::new([current, current], [0.0, phi_r], HYPERFINE_GHZ * 1e3 * MHZ)
    }

    /// Current on the first waveguide only.
    pub fn single(current: f64) -> Result<Self> {
        Self::new([current, 0.0], [0.0, 0.0], HYPERFINE_GHZ * 1e3 * MHZ)
    }

    pub fn currents(&self) -> [f64; 2] {
        self.currents
    }

    pub fn phases(&self) -> [f64; 2] {
        self.phases
    }

    pub fn omega_mw(&self) -> f64 {
        self.omega_mw
    }

    /// `phi_2 - phi_1`, wrapped into `[0, 2pi)`.
    pub fn relative_phase(&self) -> f64 {
        wrap_phase(self.phases[1] - self.phases[0])
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum ProfileShape {
    /// `s(z) = 1 - c (z - z0)^2`, `c` in um^-2.
    Quadratic { curvature_per_um2: f64 },
    /// `s(z) = (1 - f)|cos(2 pi (z - z0) / lambda_g)| + f`.
    Cosine { lambda_g_um: f64 },
}

/// Axial Rabi-frequency model around the standing-wave antinode.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RabiProfile {
    z0_um: f64,
    omega_max: f64,
    shape: ProfileShape,
    traveling_fraction: f64,
    extent_um: (f64, f64),
}

/// Amplitude deviation observed 657 um from the antinode.
pub const ANCHOR_OFFSET_UM: f64 = 957.0 - 300.0;
pub const ANCHOR_DEVIATION: f64 = 0.06;

impl RabiProfile {
    /// `omega_max` in rad/s; `extent_um` is the inclusive trap region.
    pub fn new(
        z0_um: f64,
        omega_max: f64,
        shape: ProfileShape,
        traveling_fraction: f64,
        extent_um: (f64, f64),
    ) -> Result<Self> {
        ensure_finite("z0_um", z0_um)?;
        ensure_finite("omega_max", omega_max)?;
        if omega_max < 0.0 {
            return Err(Error::out_of_range("omega_max", omega_max, "[0, inf) rad/s"));
        }
        match shape {
            ProfileShape::Quadratic { curvature_per_um2 } => {
                ensure_finite("curvature_per_um2", curvature_per_um2)?;
                if curvature_per_um2 < 0.0 {
                    return Err(Error::out_of_range("curvature_per_um2", curvature_per_um2, "[0, inf)"));
                }
            }
            ProfileShape::Cosine { lambda_g_um } => {
                ensure_finite("lambda_g_um", lambda_g_um)?;
                if lambda_g_um <= 0.0 {
                    return Err(Error::out_of_range("lambda_g_um", lambda_g_um, "(0, inf)"));
                }
            }
        }
        if !(0.0..1.0).contains(&traveling_fraction) {
            return Err(Error::out_of_range("traveling_fraction", traveling_fraction, "[0, 1)"));
        }
        let (lo, hi) = extent_um;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::out_of_range(
                "trap extent lower bound",
                lo,
                format!("(-inf, {hi})"),
            ));
        }
        if !(lo..=hi).contains(&z0_um) {
            return Err(Error::out_of_range("z0_um", z0_um, format!("[{lo}, {hi}] um")));
        }
        Ok(RabiProfile {
            z0_um,
            omega_max,
            shape,
            traveling_fraction,
            extent_um,
        })
    }

    /// Curvature giving a 6% deficit 657 um from the antinode.
    pub fn anchored_curvature() -> f64 {
        ANCHOR_DEVIATION / (ANCHOR_OFFSET_UM * ANCHOR_OFFSET_UM)
    }

    /// Guided wavelength whose cosine profile gives the same 6% anchor.
    pub fn anchored_wavelength() -> f64 {
        TAU * ANCHOR_OFFSET_UM / (1.0 - ANCHOR_DEVIATION).acos()
    }

    pub fn z0_um(&self) -> f64 {
        self.z0_um
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn shape(&self) -> ProfileShape {
        self.shape
    }

    pub fn traveling_fraction(&self) -> f64 {
        self.traveling_fraction
    }

    pub fn extent_um(&self) -> (f64, f64) {
        self.extent_um
    }

    pub fn with_omega_max(mut self, omega_max: f64) -> Self {
        self.omega_max = omega_max;
        self
    }

    fn check_in_extent(&self, z_um: f64) -> Result<()> {
        let (lo, hi) = self.extent_um;
        if z_um.is_finite() && (lo..=hi).contains(&z_um) {
            Ok(())
        } else {
            Err(Error::out_of_range(
                "z_um",
                z_um,
                format!("trap extent [{lo}, {hi}] um"),
            ))
        }
    }

    /// Dimensionless current scale `s(z)` with `s(z0) = 1`.
    pub fn axial_scale(&self, z_um: f64) -> Result<f64> {
        self.check_in_extent(z_um)?;
        let dz = z_um - self.z0_um;
        match self.shape {
            ProfileShape::Quadratic { curvature_per_um2 } => {
                let s = 1.0 - curvature_per_um2 * dz * dz;
                if s <= 0.0 {
                    return Err(Error::out_of_range(
                        "quadratic axial scale",
                        s,
                        "(0, 1]; z is beyond the quadratic model's validity",
                    ));
                }
                Ok(s)
            }
            ProfileShape::Cosine { lambda_g_um } => {
                let f = self.traveling_fraction;
                Ok((1.0 - f) * (TAU * dz / lambda_g_um).cos().abs() + f)
            }
        }
    }

    /// Qubit Rabi frequency `Omega(z)` in rad/s.
    pub fn rabi(&self, z_um: f64) -> Result<f64> {
        Ok(self.omega_max * self.axial_scale(z_um)?)
    }

    /// Effective amplitude error `[Omega(z) - Omega(z0)] / Omega(z0)`.
    pub fn amplitude_error(&self, z_um: f64) -> Result<f64> {
        Ok(self.axial_scale(z_um)? - 1.0)
    }
}

impl Default for RabiProfile {
    fn default() -> Self {
        RabiProfile::new(
            957.0,
            0.52 * MHZ,
            ProfileShape::Quadratic {
                curvature_per_um2: Self::anchored_curvature(),
            },
            0.0,
            (0.0, 1914.0),
        )
        .expect("default profile is valid")
    }
}

/// Free-function form of [`RabiProfile::axial_scale`].
pub fn axial_scale(z_um: f64, profile: &RabiProfile) -> Result<f64> {
    profile.axial_scale(z_um)
}

/// Field phasors `(B_x, B_y)` in mT at axial position `z_um`.
pub fn superpose_field(
    z_um: f64,
    drive: &DriveSettings,
    modes: &[WaveguideMode; 2],
    profile: &RabiProfile,
) -> Result<(C64, C64)> {
    let s = profile.axial_scale(z_um)?;
    let mut bx = C64::new(0.0, 0.0);
    let mut by = C64::new(0.0, 0.0);
    for ((&current, &phase), mode) in drive.currents.iter().zip(&drive.phases).zip(modes) {
        let carrier = C64::from_polar(current * s, phase);
        bx += carrier * mode.beta_x;
        by += carrier * mode.beta_y;
    }
    Ok((bx, by))
}

/// Spherical components relative to the `y` quantization axis, mT.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PolarizationComponents {
    pub b_pi: C64,
    pub b_sigma_plus: C64,
    pub b_sigma_minus: C64,
}

impl PolarizationComponents {
    pub fn power(&self) -> f64 {
        self.b_pi.norm_sqr() + self.b_sigma_plus.norm_sqr() + self.b_sigma_minus.norm_sqr()
    }
}

/// Decomposes `(B_x, B_y)` with the quantization axis along `y`. The third
/// transverse axis carries no field in this geometry.
pub fn polarization_components(bx: C64, by: C64) -> PolarizationComponents {
    let bz = C64::new(0.0, 0.0);
    let i = C64::i();
    PolarizationComponents {
        b_pi: by,
        b_sigma_plus: (bx - i * bz) * FRAC_1_SQRT_2,
        b_sigma_minus: (bx + i * bz) * FRAC_1_SQRT_2,
    }
}

/// Converts field to angular Rabi frequency.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingConstants {
    /// `mu_B / h`, MHz per mT.
    pub bohr_mhz_per_mt: f64,
    /// Relative matrix-element factor of the `Delta m_F = +-1` couplings.
    pub g_sigma: f64,
}

impl Default for CouplingConstants {
    fn default() -> Self {
        CouplingConstants {
            bohr_mhz_per_mt: BOHR_MHZ_PER_MT,
            g_sigma: std::f64::consts::SQRT_2,
        }
    }
}

impl CouplingConstants {
    /// rad/s per mT.
    pub fn rabi_per_mt(&self) -> f64 {
        self.bohr_mhz_per_mt * MHZ
    }
}

/// Complex Rabi frequencies (rad/s) of the three transitions out of
/// `|F=0, 0>`; the argument carries the drive phase.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TransitionRabis {
    pub clock: C64,
    pub sigma_plus: C64,
    pub sigma_minus: C64,
}

impl TransitionRabis {
    pub fn clock_only(omega: f64, phase: f64) -> Self {
        TransitionRabis {
            clock: C64::from_polar(omega, phase),
            sigma_plus: C64::new(0.0, 0.0),
            sigma_minus: C64::new(0.0, 0.0),
        }
    }

    /// `(|clock|, |sigma+|, |sigma-|)`.
    pub fn magnitudes(&self) -> (f64, f64, f64) {
        (self.clock.norm(), self.sigma_plus.norm(), self.sigma_minus.norm())
    }

    pub fn strongest(&self) -> f64 {
        let (a, b, c) = self.magnitudes();
        a.max(b).max(c)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TransitionRabis {
            clock: self.clock * factor,
            sigma_plus: self.sigma_plus * factor,
            sigma_minus: self.sigma_minus * factor,
        }
    }

    /// Shifts the phase of every coupling by `phi`.
    pub fn rephased(&self, phi: f64) -> Self {
        let r = C64::from_polar(1.0, phi);
        TransitionRabis {
            clock: self.clock * r,
            sigma_plus: self.sigma_plus * r,
            sigma_minus: self.sigma_minus * r,
        }
    }

    pub fn from_components(pol: &PolarizationComponents, constants: &CouplingConstants) -> Self {
        let k = constants.rabi_per_mt();
        TransitionRabis {
            clock: pol.b_pi * k,
            sigma_plus: pol.b_sigma_plus * (k * constants.g_sigma),
            sigma_minus: pol.b_sigma_minus * (k * constants.g_sigma),
        }
    }
}

/// Rabi frequencies of the clock and sigma transitions at `z_um`.
pub fn transition_rabi(
    z_um: f64,
    drive: &DriveSettings,
    modes: &[WaveguideMode; 2],
    profile: &RabiProfile,
    constants: &CouplingConstants,
) -> Result<TransitionRabis> {
    let (bx, by) = superpose_field(z_um, drive, modes, profile)?;
    Ok(TransitionRabis::from_components(
        &polarization_components(bx, by),
        constants,
    ))
}

/// Linear-regime Rabi frequency after `attenuation_db` of source attenuation.
pub fn attenuation_to_rabi(attenuation_db: f64, reference: f64) -> Result<f64> {
    ensure_finite("attenuation_db", attenuation_db)?;
    if attenuation_db < 0.0 {
        return Err(Error::out_of_range("attenuation_db", attenuation_db, "[0, inf) dB"));
    }
    Ok(reference * 10f64.powf(-attenuation_db / 20.0))
}

/// Wraps `phi` into `[0, 2pi)`.
pub fn normalize_phase(phi: f64) -> f64 {
    wrap_phase(phi)
}

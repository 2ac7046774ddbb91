//! Ground-manifold dynamics of a 171Yb+ ion in the rotating-wave approximation.
//!
//! States are ordered `[|F=0,0>, |F=1,-1>, |F=1,0>, |F=1,+1>]`. In the frame
//! rotating at the drive frequency, the `F=1` sublevels sit at
//! `-(Delta - m_F delta_Z)` and each transition out of `|F=0,0>` couples with
//! half its complex Rabi frequency.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{ensure_finite, Error, Result};
use crate::field::{TransitionRabis, BOHR_MHZ_PER_MT, HYPERFINE_GHZ, MHZ};
use crate::quantum::{Basis, Hamiltonian, Level, StateVector};

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HyperfineSystem {
    /// Qubit splitting, rad/s.
    pub omega_hf: f64,
    /// Linear Zeeman splitting of the `F=1` sublevels, rad/s.
    pub delta_zeeman: f64,
    /// Static field along the quantization axis, mT.
    pub static_field_mt: f64,
}

impl HyperfineSystem {
    /// Zeeman splitting from the linear Zeeman effect with `g_F = 1`.
    pub fn from_static_field(static_field_mt: f64) -> Result<Self> {
        ensure_finite("static_field_mt", static_field_mt)?;
        if static_field_mt < 0.0 {
            return Err(Error::out_of_range("static_field_mt", static_field_mt, "[0, inf) mT"));
        }
        Ok(HyperfineSystem {
            omega_hf: HYPERFINE_GHZ * 1e3 * MHZ,
            delta_zeeman: BOHR_MHZ_PER_MT * static_field_mt * MHZ,
            static_field_mt,
        })
    }

    /// Replaces the derived Zeeman splitting (rad/s).
    pub fn with_zeeman_splitting(mut self, delta_zeeman: f64) -> Result<Self> {
        ensure_finite("delta_zeeman", delta_zeeman)?;
        if delta_zeeman < 0.0 {
            return Err(Error::out_of_range("delta_zeeman", delta_zeeman, "[0, inf) rad/s"));
        }
        self.delta_zeeman = delta_zeeman;
        Ok(self)
    }
}

impl Default for HyperfineSystem {
    fn default() -> Self {
        Self::from_static_field(0.74).expect("default field is valid")
    }
}

/// RWA Hamiltonian (rad/s) for drive detuning `detuning` from the clock line.
pub fn rwa_hamiltonian(rabis: &TransitionRabis, detuning: f64, system: &HyperfineSystem) -> Result<Hamiltonian> {
    ensure_finite("detuning", detuning)?;
    ensure_finite("delta_zeeman", system.delta_zeeman)?;
    for (name, z) in [
        ("clock Rabi frequency", rabis.clock),
        ("sigma+ Rabi frequency", rabis.sigma_plus),
        ("sigma- Rabi frequency", rabis.sigma_minus),
    ] {
        ensure_finite(name, z.re)?;
        ensure_finite(name, z.im)?;
    }
    let b = Basis::Hyperfine;
    let ground = b.index_of(Level::F0M0).unwrap();
    let dz = system.delta_zeeman;
    let mut h = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
    for (level, m_f, coupling) in [
        (Level::F1Mm1, -1.0, rabis.sigma_minus),
        (Level::F1M0, 0.0, rabis.clock),
        (Level::F1Mp1, 1.0, rabis.sigma_plus),
    ] {
        let i = b.index_of(level).unwrap();
        h[(i, i)] = C64::new(-(detuning - m_f * dz), 0.0);
        h[(i, ground)] = coupling * 0.5;
        h[(ground, i)] = coupling.conj() * 0.5;
    }
    Hamiltonian::new(h)
}

/// `F=1` population after driving `|down>` for each duration (s).
pub fn drive_scan(
    durations: &[f64],
    rabis: &TransitionRabis,
    detuning: f64,
    system: &HyperfineSystem,
) -> Result<Vec<f64>> {
    if durations.is_empty() {
        return Ok(Vec::new());
    }
    for &t in durations {
        ensure_finite("duration", t)?;
        if t < 0.0 {
            return Err(Error::NegativeDuration(t));
        }
    }
    let prop = rwa_hamiltonian(rabis, detuning, system)?.propagator();
    let psi0 = StateVector::ground(Basis::Hyperfine);
    durations
        .par_iter()
        .map(|&t| {
            let psi = prop.at(t).apply(&psi0)?;
            Ok(psi.upper_manifold_population().clamp(0.0, 1.0))
        })
        .collect()
}

/// Pi time of the strongest line, or zero when nothing is driven.
pub fn strongest_pi_time(rabis: &TransitionRabis) -> f64 {
    let omega = rabis.strongest();
    if omega > 0.0 {
        PI / omega
    } else {
        0.0
    }
}

/// `F=1` population after a square pulse at each detuning (rad/s). The pulse
/// defaults to the pi time of the strongest line.
pub fn spectrum_scan(
    detunings: &[f64],
    pulse_time: Option<f64>,
    rabis: &TransitionRabis,
    system: &HyperfineSystem,
) -> Result<Vec<f64>> {
    let t = pulse_time.unwrap_or_else(|| strongest_pi_time(rabis));
    ensure_finite("pulse time", t)?;
    if t < 0.0 {
        return Err(Error::NegativeDuration(t));
    }
    let psi0 = StateVector::ground(Basis::Hyperfine);
    detunings
        .par_iter()
        .map(|&delta| {
            let u = rwa_hamiltonian(rabis, delta, system)?.evolution(t);
            Ok(u.apply(&psi0)?.upper_manifold_population().clamp(0.0, 1.0))
        })
        .collect()
}

/// Two-parameter state-misclassification map.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct DetectionModel {
    p_dark_given_bright: f64,
    p_bright_given_dark: f64,
}

fn check_probability(name: &'static str, p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::out_of_range(name, p, "[0, 1]"))
    }
}

impl DetectionModel {
    pub fn new(p_dark_given_bright: f64, p_bright_given_dark: f64) -> Result<Self> {
        Ok(DetectionModel {
            p_dark_given_bright: check_probability("p_dark_given_bright", p_dark_given_bright)?,
            p_bright_given_dark: check_probability("p_bright_given_dark", p_bright_given_dark)?,
        })
    }

    pub fn p_dark_given_bright(&self) -> f64 {
        self.p_dark_given_bright
    }

    pub fn p_bright_given_dark(&self) -> f64 {
        self.p_bright_given_dark
    }

    /// Observed bright probability for true `F=1` population `p_true`.
    pub fn apply(&self, p_true: f64) -> Result<f64> {
        let p = check_probability("p_true", p_true)?;
        Ok(p * (1.0 - self.p_dark_given_bright) + (1.0 - p) * self.p_bright_given_dark)
    }

    /// Inverse of [`apply`](Self::apply); requires the two error rates to sum below one.
    pub fn invert(&self, p_obs: f64) -> Result<f64> {
        check_probability("p_obs", p_obs)?;
        let contrast = 1.0 - self.p_dark_given_bright - self.p_bright_given_dark;
        if contrast <= 0.0 {
            return Err(Error::out_of_range(
                "detection contrast",
                contrast,
                "(0, 1]; error rates must sum below one",
            ));
        }
        Ok((p_obs - self.p_bright_given_dark) / contrast)
    }
}

pub fn apply_detection(p_true: f64, model: &DetectionModel) -> Result<f64> {
    model.apply(p_true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{transition_rabi, CouplingConstants, DriveSettings, RabiProfile, WaveguideMode};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn profile_rabis(drive: DriveSettings) -> TransitionRabis {
        let p = RabiProfile::default();
        transition_rabi(
            957.0,
            &drive,
            &WaveguideMode::default_pair(),
            &p,
            &CouplingConstants::default(),
        )
        .unwrap()
    }

    #[test]
    fn default_zeeman_splitting() {
        let sys = HyperfineSystem::default();
        assert_relative_eq!(sys.delta_zeeman / MHZ, 10.357, max_relative = 1e-4);
    }

    #[test]
    fn clock_only_is_two_level_rabi() {
        let omega = 2.0 * PI * 0.3e6;
        let rabis = TransitionRabis::clock_only(omega, 0.4);
        let ts: Vec<f64> = (0..50).map(|k| k as f64 * 0.17e-6).collect();
        let p = drive_scan(&ts, &rabis, 0.0, &HyperfineSystem::default()).unwrap();
        for (t, p) in ts.iter().zip(p) {
            assert!((p - (omega * t / 2.0).sin().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn pi_time_at_measured_rabi_frequency() {
        let omega = 2.0 * PI * 0.49e6;
        let rabis = TransitionRabis::clock_only(omega, 0.0);
        let t_pi = strongest_pi_time(&rabis);
        assert!((t_pi * 1e6 - 1.02).abs() < 5e-3, "{t_pi}");
        let p = drive_scan(&[0.0, t_pi], &rabis, 0.0, &HyperfineSystem::default()).unwrap();
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sigma_minus_line_resonates_at_minus_zeeman() {
        // Oracle: two-level generalized Rabi formula on the m_F = -1 block.
        let sys = HyperfineSystem::default();
        let omega = 2.0 * PI * 0.2e6;
        let rabis = TransitionRabis {
            clock: C64::new(0.0, 0.0),
            sigma_plus: C64::new(0.0, 0.0),
            sigma_minus: C64::from_polar(omega, 1.1),
        };
        for offset in [0.0, 0.3 * omega, -0.7 * omega] {
            let delta = -sys.delta_zeeman + offset;
            let ts = [0.4e-6, 1.3e-6, 2.5e-6];
            let p = drive_scan(&ts, &rabis, delta, &sys).unwrap();
            for (t, p) in ts.iter().zip(p) {
                let w = (omega * omega + offset * offset).sqrt();
                let expected = omega * omega / (w * w) * (w * t / 2.0).sin().powi(2);
                assert!((p - expected).abs() < 1e-10, "{p} vs {expected}");
            }
        }
    }

    #[test]
    fn balanced_drive_fully_inverts_in_four_levels() {
        let rabis = profile_rabis(DriveSettings::balanced(0.1, PI).unwrap());
        let t_pi = PI / rabis.clock.norm();
        let p = drive_scan(&[t_pi], &rabis, 0.0, &HyperfineSystem::default()).unwrap();
        assert!(p[0] >= 0.999);
    }

    #[test]
    fn empty_scan_is_empty() {
        let rabis = TransitionRabis::clock_only(1.0, 0.0);
        assert!(drive_scan(&[], &rabis, 0.0, &HyperfineSystem::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn non_finite_inputs_rejected() {
        let rabis = TransitionRabis::clock_only(f64::NAN, 0.0);
        assert!(rwa_hamiltonian(&rabis, 0.0, &HyperfineSystem::default()).is_err());
        let rabis = TransitionRabis::clock_only(1.0, 0.0);
        assert!(rwa_hamiltonian(&rabis, f64::INFINITY, &HyperfineSystem::default()).is_err());
    }

    fn detuning_grid(center: f64, half_width: f64, points: usize) -> Vec<f64> {
        (0..points)
            .map(|k| center - half_width + 2.0 * half_width * k as f64 / (points - 1) as f64)
            .collect()
    }

    fn peak_near(center: f64, half_width: f64, rabis: &TransitionRabis, sys: &HyperfineSystem) -> (f64, f64) {
        let grid = detuning_grid(center, half_width, 2001);
        let p = spectrum_scan(&grid, None, rabis, sys).unwrap();
        let (i, &h) = p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        (grid[i], h)
    }

    #[test]
    fn single_waveguide_spectrum_has_three_lines() {
        let sys = HyperfineSystem::default();
        let rabis = profile_rabis(DriveSettings::single(0.1).unwrap());
        let dz = sys.delta_zeeman;
        let (c, hc) = peak_near(0.0, 0.3 * dz, &rabis, &sys);
        let (m, hm) = peak_near(-dz, 0.3 * dz, &rabis, &sys);
        let (p, hp) = peak_near(dz, 0.3 * dz, &rabis, &sys);
        assert!(hc > 0.99, "{hc}");
        assert!(hm > 0.1 && hp > 0.1);
        assert!(hc > hm && hc > hp);
        let bound = rabis.strongest().powi(2) / dz;
        assert!(c.abs() < bound);
        assert!((m + dz).abs() < bound);
        assert!((p - dz).abs() < bound);
    }

    #[test]
    fn balanced_spectrum_suppresses_side_lines() {
        let sys = HyperfineSystem::default();
        let rabis = profile_rabis(DriveSettings::balanced(0.1, PI).unwrap());
        let dz = sys.delta_zeeman;
        let (_, hc) = peak_near(0.0, 0.3 * dz, &rabis, &sys);
        let (_, hm) = peak_near(-dz, 0.3 * dz, &rabis, &sys);
        let (_, hp) = peak_near(dz, 0.3 * dz, &rabis, &sys);
        assert!(hc > 0.999);
        // what remains near the side lines is the off-resonant clock wing
        let clock = TransitionRabis {
            sigma_plus: C64::new(0.0, 0.0),
            sigma_minus: C64::new(0.0, 0.0),
            ..rabis
        };
        let (_, wm) = peak_near(-dz, 0.3 * dz, &clock, &sys);
        let (_, wp) = peak_near(dz, 0.3 * dz, &clock, &sys);
        assert!((hm - wm).abs() < 1e-6 && (hp - wp).abs() < 1e-6, "{hm} {wm} {hp} {wp}");
    }

    #[test]
    fn undriven_spectrum_is_flat() {
        let rabis = TransitionRabis::clock_only(0.0, 0.0);
        let grid = detuning_grid(0.0, 20.0 * MHZ, 101);
        let p = spectrum_scan(&grid, Some(1e-6), &rabis, &HyperfineSystem::default()).unwrap();
        assert!(p.iter().all(|&x| x == 0.0));
        let p = spectrum_scan(&grid, None, &rabis, &HyperfineSystem::default()).unwrap();
        assert!(p.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn weak_drive_line_pulling_is_bounded() {
        let sys = HyperfineSystem::default();
        let dz = sys.delta_zeeman;
        let omega = dz / 10.0;
        let rabis = TransitionRabis {
            clock: C64::new(omega, 0.0),
            sigma_plus: C64::new(0.6 * omega, 0.0),
            sigma_minus: C64::new(0.4 * omega, 0.0),
        };
        let bound = omega * omega / dz;
        // grid step 2 * 0.05 dz / 2000 = bound / 200
        for line in [-dz, 0.0, dz] {
            let (peak, _) = peak_near(line, 0.05 * dz, &rabis, &sys);
            assert!((peak - line).abs() < bound, "line {line}: {peak}");
        }
    }

    #[test]
    fn detection_map() {
        let ideal = DetectionModel::default();
        assert_eq!(ideal.apply(0.37).unwrap(), 0.37);
        let m = DetectionModel::new(0.02, 0.0).unwrap();
        assert_relative_eq!(m.apply(1.0).unwrap(), 0.98);
        assert!(m.apply(1.2).is_err());
        assert!(DetectionModel::new(-0.1, 0.0).is_err());
        assert!(DetectionModel::new(0.6, 0.5).unwrap().invert(0.5).is_err());
    }

    proptest! {
        #[test]
        fn detection_round_trip(a in 0.0..0.45f64, b in 0.0..0.45f64, p in 0.0..=1.0f64) {
            let m = DetectionModel::new(a, b).unwrap();
            let back = m.invert(m.apply(p).unwrap()).unwrap();
            prop_assert!((back - p).abs() < 1e-12);
        }

        #[test]
        fn detection_is_affine(a in 0.0..1.0f64, b in 0.0..1.0f64, x in 0.0..=1.0f64, y in 0.0..=1.0f64, lam in 0.0..=1.0f64) {
            let m = DetectionModel::new(a, b).unwrap();
            let lhs = m.apply(lam * x + (1.0 - lam) * y).unwrap();
            let rhs = lam * m.apply(x).unwrap() + (1.0 - lam) * m.apply(y).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-15);
        }

        #[test]
        fn populations_sum_to_one(
            c in 0.0..5.0f64, sp in 0.0..5.0f64, sm in 0.0..5.0f64,
            delta in -15.0..15.0f64, t in 0.0..4.0f64,
        ) {
            let rabis = TransitionRabis {
                clock: C64::new(c * MHZ, 0.0),
                sigma_plus: C64::from_polar(sp * MHZ, 0.3),
                sigma_minus: C64::from_polar(sm * MHZ, -1.2),
            };
            let h = rwa_hamiltonian(&rabis, delta * MHZ, &HyperfineSystem::default()).unwrap();
            let psi = h.evolution(t * 1e-6).apply(&StateVector::ground(Basis::Hyperfine)).unwrap();
            let pops = psi.populations();
            prop_assert!((pops.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for p in pops {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
            }
        }
    }
}

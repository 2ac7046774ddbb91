//! Composite pulse sequences robust to systematic amplitude error.
//!
//! A sequence is an ordered list of `R(theta_j, phi_j)` rotations. A
//! fractional Rabi-frequency error `eps` scales every pulse area by
//! `(1 + eps)`. SK1 appends two `2pi` corrections to the target rotation;
//! BB1 prepends a `pi, 2pi, pi` block. Both use the correction phase
//! `phi_1 = arccos(-theta / 4pi)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::field::TransitionRabis;
use crate::fit::fit_power_law;
use crate::ion::{rwa_hamiltonian, HyperfineSystem};
use crate::quantum::{compose, gate_infidelity, Basis, Level, StateVector, Unitary};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Simple,
    Sk1,
    Bb1,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 3] = [SequenceKind::Simple, SequenceKind::Sk1, SequenceKind::Bb1];

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceKind::Simple => "simple",
            SequenceKind::Sk1 => "sk1",
            SequenceKind::Bb1 => "bb1",
        }
    }

    /// Leading power of `eps` in the per-gate infidelity.
    pub fn expected_order(self) -> u32 {
        match self {
            SequenceKind::Simple => 2,
            SequenceKind::Sk1 => 4,
            SequenceKind::Bb1 => 6,
        }
    }
}

impl fmt::Display for SequenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "simple" => Ok(SequenceKind::Simple),
            "sk1" => Ok(SequenceKind::Sk1),
            "bb1" => Ok(SequenceKind::Bb1),
            _ => Err(Error::invalid(
                "sequence.kind",
                format!("`{s}` is not one of simple, sk1, bb1"),
            )),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Pulse {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    kind: SequenceKind,
    pulses: Vec<Pulse>,
    target_theta: f64,
    target_phi: f64,
}

impl PulseSequence {
    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn target_theta(&self) -> f64 {
        self.target_theta
    }

    pub fn target_phi(&self) -> f64 {
        self.target_phi
    }

    pub fn total_area(&self) -> f64 {
        self.pulses.iter().map(|p| p.theta).sum()
    }

    /// The ideal rotation this sequence implements.
    pub fn target(&self) -> Unitary {
        rotation(self.target_theta, self.target_phi)
    }

    /// Composite unitary with every pulse area multiplied by `scale >= 0`.
    pub fn scaled_unitary(&self, scale: f64) -> Result<Unitary> {
        ensure_finite("pulse area scale", scale)?;
        if scale < 0.0 {
            return Err(Error::out_of_range("pulse area scale", scale, "[0, inf)"));
        }
        let units: Vec<Unitary> = self.pulses.iter().map(|p| rotation(p.theta * scale, p.phi)).collect();
        compose(&units)
    }

    /// Composite unitary under amplitude error `err`.
    pub fn unitary(&self, err: AmplitudeError) -> Unitary {
        self.scaled_unitary(1.0 + err.value())
            .expect("1 + eps > 0 and rotations are unitary")
    }
}

/// Fractional Rabi-frequency error `eps > -1`.
#[derive(Copy, Clone, Debug, PartialEq, PartialOrd)]
pub struct AmplitudeError(f64);

impl AmplitudeError {
    pub const NONE: AmplitudeError = AmplitudeError(0.0);

    pub fn new(epsilon: f64) -> Result<Self> {
        ensure_finite("epsilon", epsilon)?;
        if epsilon <= -1.0 {
            return Err(Error::out_of_range("epsilon", epsilon, "(-1, inf)"));
        }
        Ok(AmplitudeError(epsilon))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `R(theta, phi) = exp[-i (theta/2)(cos phi sigma_x + sin phi sigma_y)]`.
pub fn rotation(theta: f64, phi: f64) -> Unitary {
    let (s, c) = (0.5 * theta).sin_cos();
    let off = C64::new(0.0, -s);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c, 0.0),
            off * C64::from_polar(1.0, -phi),
            off * C64::from_polar(1.0, phi),
            C64::new(c, 0.0),
        ],
    );
    Unitary::from_matrix(m).expect("rotation is unitary")
}

/// Correction phase `arccos(-theta / 4pi)` shared by SK1 and BB1.
pub fn correction_phase(theta: f64) -> Result<f64> {
    if !(0.0..=4.0 * PI).contains(&theta) {
        return Err(Error::out_of_range("theta", theta, "[0, 4pi]"));
    }
    Ok((-theta / (4.0 * PI)).acos())
}

pub fn build_sequence(kind: SequenceKind, theta: f64, phi: f64) -> Result<PulseSequence> {
    ensure_finite("theta", theta)?;
    ensure_finite("phi", phi)?;
    if theta < 0.0 {
        return Err(Error::out_of_range("theta", theta, "[0, 4pi]"));
    }
    let p = |theta, phi| Pulse { theta, phi };
    let pulses = match kind {
        SequenceKind::Simple => vec![p(theta, phi)],
        SequenceKind::Sk1 => {
            let phi1 = correction_phase(theta)?;
            vec![p(theta, phi), p(2.0 * PI, phi - phi1), p(2.0 * PI, phi + phi1)]
        }
        SequenceKind::Bb1 => {
            let phi1 = correction_phase(theta)?;
            vec![
                p(PI, phi + phi1),
                p(2.0 * PI, phi + 3.0 * phi1),
                p(PI, phi + phi1),
                p(theta, phi),
            ]
        }
    };
    Ok(PulseSequence {
        kind,
        pulses,
        target_theta: theta,
        target_phi: phi,
    })
}

/// The logical X gate, `R(pi, 0)`, built with `kind`.
pub fn x_gate(kind: SequenceKind) -> PulseSequence {
    build_sequence(kind, PI, 0.0).expect("pi is a valid target")
}

pub fn sequence_unitary(seq: &PulseSequence, err: AmplitudeError) -> Unitary {
    seq.unitary(err)
}

/// Closed-form fidelity after `n` gates, clamped to `[0, 1]`:
/// simple `|cos(eps pi n / 2)|`, SK1 `1 - (15/128) pi^4 eps^4 n`,
/// BB1 `1 - (5/1024) pi^6 eps^6 n`.
pub fn analytic_fidelity(kind: SequenceKind, epsilon: f64, n: u32) -> f64 {
    let n = f64::from(n);
    let f = match kind {
        SequenceKind::Simple => (epsilon * PI * n / 2.0).cos().abs(),
        SequenceKind::Sk1 => 1.0 - 15.0 / 128.0 * PI.powi(4) * epsilon.powi(4) * n,
        SequenceKind::Bb1 => 1.0 - 5.0 / 1024.0 * PI.powi(6) * epsilon.powi(6) * n,
    };
    f.clamp(0.0, 1.0)
}

/// `F=1` population after `n` logical X gates from `|down>` on a bare qubit.
pub fn repeated_gate_population(kind: SequenceKind, n: u32, epsilon: f64) -> Result<f64> {
    repeated_population(&x_gate(kind), n, epsilon)
}

/// `F=1` population after `n` applications of `seq` from `|down>`.
pub fn repeated_population(seq: &PulseSequence, n: u32, epsilon: f64) -> Result<f64> {
    let u = seq.unitary(AmplitudeError::new(epsilon)?);
    let mut psi = StateVector::ground(Basis::Qubit);
    for _ in 0..n {
        psi = u.apply(&psi)?;
    }
    Ok(psi.population(Level::F1M0).clamp(0.0, 1.0))
}

/// Four-level setting for gates: nominal (error-free) Rabi frequencies,
/// drive detuning and level structure. Pulse durations are set from the
/// nominal clock Rabi frequency.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HyperfineContext {
    pub rabis: TransitionRabis,
    pub detuning: f64,
    pub system: HyperfineSystem,
}

impl HyperfineContext {
    /// Hyperfine propagator of `seq` with every coupling scaled by `1 + eps`.
    pub fn sequence_unitary(&self, seq: &PulseSequence, epsilon: f64) -> Result<Unitary> {
        let err = AmplitudeError::new(epsilon)?;
        let omega = self.rabis.clock.norm();
        if omega <= 0.0 {
            return Err(Error::out_of_range("clock Rabi frequency", omega, "(0, inf) rad/s"));
        }
        let mut units = Vec::with_capacity(seq.pulses.len());
        for pulse in &seq.pulses {
            let rabis = self.rabis.scaled(1.0 + err.value()).rephased(pulse.phi);
            let h = rwa_hamiltonian(&rabis, self.detuning, &self.system)?;
            units.push(h.evolution(pulse.theta / omega));
        }
        if units.is_empty() {
            return Ok(Unitary::identity(Basis::Hyperfine));
        }
        compose(&units)
    }
}

/// [`repeated_gate_population`] in the full hyperfine manifold.
pub fn repeated_gate_population_hyperfine(
    kind: SequenceKind,
    n: u32,
    epsilon: f64,
    context: &HyperfineContext,
) -> Result<f64> {
    let u = context.sequence_unitary(&x_gate(kind), epsilon)?;
    let mut psi = StateVector::ground(Basis::Hyperfine);
    for _ in 0..n {
        psi = u.apply(&psi)?;
    }
    Ok(psi.upper_manifold_population().clamp(0.0, 1.0))
}

/// `F=1` population after one logical X with all pulse areas scaled by each `s`.
pub fn excitation_profile(kind: SequenceKind, scales: &[f64]) -> Result<Vec<f64>> {
    excitation_profile_of(&x_gate(kind), scales)
}

/// `F=1` population after one application of `seq` with areas scaled by each `s`.
pub fn excitation_profile_of(seq: &PulseSequence, scales: &[f64]) -> Result<Vec<f64>> {
    let psi0 = StateVector::ground(Basis::Qubit);
    scales
        .par_iter()
        .map(|&s| {
            let psi = seq.scaled_unitary(s)?.apply(&psi0)?;
            Ok(psi.population(Level::F1M0).clamp(0.0, 1.0))
        })
        .collect()
}

/// Log-log fit of per-gate infidelity against amplitude error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub kind: SequenceKind,
    pub exponent: f64,
    pub prefactor: f64,
    /// `(eps, 1 - F)` samples used in the fit.
    pub samples: Vec<(f64, f64)>,
}

/// Infidelities below this are treated as numerically unresolved.
pub const INFIDELITY_FLOOR: f64 = 1e-14;

/// Per-gate infidelity of the logical X under amplitude error `epsilon`.
pub fn gate_error(kind: SequenceKind, epsilon: f64) -> Result<f64> {
    let seq = x_gate(kind);
    gate_infidelity(&seq.unitary(AmplitudeError::new(epsilon)?), &seq.target())
}

pub fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..points)
                .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp())
                .collect()
        }
    }
}

/// Fits `1 - F ~ A eps^p` over the given amplitude errors.
pub fn scaling_order_over(kind: SequenceKind, epsilons: &[f64]) -> Result<ScalingFit> {
    let samples = epsilons
        .iter()
        .map(|&e| Ok((e, gate_error(kind, e)?)))
        .collect::<Result<Vec<_>>>()?;
    if samples.iter().all(|&(_, inf)| inf < INFIDELITY_FLOOR) {
        return Err(Error::DegenerateFit(format!(
            "{kind} infidelity stays below {INFIDELITY_FLOOR:e} over the whole range; raise the lower epsilon bound"
        )));
    }
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(e, inf)| e > 0.0 && inf > 0.0)
        .collect();
    let (exponent, prefactor) = fit_power_law(&usable)?;
    Ok(ScalingFit {
        kind,
        exponent,
        prefactor,
        samples,
    })
}

/// Default scaling fit: 16 log-spaced points over `eps` in `[1e-3, 3e-2]`.
pub fn scaling_order(kind: SequenceKind) -> Result<ScalingFit> {
    scaling_order_over(kind, &log_spaced(1e-3, 3e-2, 16))
}

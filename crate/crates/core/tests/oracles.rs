//! Library results checked against independent implementations.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use nearfield_core::fit::fit_quadratic;
use nearfield_core::pulse::{correction_phase, repeated_gate_population, SequenceKind};
use nearfield_core::RabiProfile;

/// `w - i (x sx + y sy + z sz)` as `[w, x, y, z]`.
type Quat = [f64; 4];

fn rot(theta: f64, phi: f64) -> Quat {
    let (s, c) = (theta / 2.0).sin_cos();
    [c, s * phi.cos(), s * phi.sin(), 0.0]
}

/// `b * a`: `a` acts first.
fn after(a: Quat, b: Quat) -> Quat {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        b0 * a0 - (b1 * a1 + b2 * a2 + b3 * a3),
        b0 * a1 + a0 * b1 + (b2 * a3 - b3 * a2),
        b0 * a2 + a0 * b2 + (b3 * a1 - b1 * a3),
        b0 * a3 + a0 * b3 + (b1 * a2 - b2 * a1),
    ]
}

fn gate(kind: SequenceKind, eps: f64) -> Quat {
    let k = 1.0 + eps;
    let p1 = (-PI / (4.0 * PI)).acos();
    let pulses: Vec<(f64, f64)> = match kind {
        SequenceKind::Simple => vec![(PI, 0.0)],
        SequenceKind::Sk1 => vec![(PI, 0.0), (2.0 * PI, -p1), (2.0 * PI, p1)],
        SequenceKind::Bb1 => vec![(PI, p1), (2.0 * PI, 3.0 * p1), (PI, p1), (PI, 0.0)],
    };
    pulses
        .into_iter()
        .fold([1.0, 0.0, 0.0, 0.0], |u, (theta, phi)| after(u, rot(k * theta, phi)))
}

fn population(kind: SequenceKind, n: u32, eps: f64) -> f64 {
    let g = gate(kind, eps);
    let u = (0..n).fold([1.0, 0.0, 0.0, 0.0], |u, _| after(u, g));
    u[1] * u[1] + u[2] * u[2]
}

#[test]
fn correction_phase_matches_closed_form() {
    assert!((correction_phase(PI).unwrap() - (-0.25f64).acos()).abs() < 1e-15);
}

#[test]
fn repeated_gates_match_quaternion_composition() {
    for kind in SequenceKind::ALL {
        for eps in [-0.0892, -0.06, -0.01, 0.0, 0.03, 0.06] {
            for n in [1, 2, 7, 30, 55] {
                let lib = repeated_gate_population(kind, n, eps).unwrap();
                let oracle = population(kind, n, eps);
                assert!(
                    (lib - oracle).abs() < 1e-12,
                    "{kind} eps={eps} n={n}: {lib} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn bb1_after_55_gates() {
    let p = repeated_gate_population(SequenceKind::Bb1, 55, 0.06).unwrap();
    assert!((p - 0.9991704925706224).abs() < 1e-10, "{p}");
    let p = repeated_gate_population(SequenceKind::Sk1, 55, -0.06).unwrap();
    assert!((p - 0.98706).abs() < 1e-5, "{p}");
}

#[test]
fn noisy_profile_fit_locates_antinode() {
    let profile = RabiProfile::default();
    let noise = Normal::new(0.0, 0.01).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<(f64, f64)> = (0..50)
        .map(|k| {
            let z = 157.0 + 1600.0 * k as f64 / 49.0;
            (z, profile.rabi(z).unwrap() * (1.0 + noise.sample(&mut rng)))
        })
        .collect();
    let fit = fit_quadratic(&samples).unwrap();
    let z0 = fit.get("z0_um").unwrap();
    assert!((z0 - 957.0).abs() <= 15.0, "{z0}");
}

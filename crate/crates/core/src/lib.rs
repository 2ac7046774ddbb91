//! Near-field microwave control of a hyperfine trapped-ion qubit: field
//! model, four-level dynamics, composite pulses, fits and scenario runner.

pub mod config;
pub mod error;
pub mod field;
pub mod fit;
pub mod ion;
pub mod pulse;
pub mod quantum;
pub mod scenario;

pub use config::{Grid, ScenarioConfig};
pub use error::{Error, Result};
pub use field::{
    axial_scale, polarization_components, superpose_field, transition_rabi, CouplingConstants, DriveSettings,
    PolarizationComponents, ProfileShape, RabiProfile, TransitionRabis, WaveguideMode, MHZ,
};
pub use fit::{fit_abs_sinusoid, fit_quadratic, FitParameter, FitResult};
pub use ion::{drive_scan, rwa_hamiltonian, spectrum_scan, DetectionModel, HyperfineSystem};
pub use pulse::{
    analytic_fidelity, build_sequence, repeated_gate_population, scaling_order, sequence_unitary, AmplitudeError,
    PulseSequence, SequenceKind,
};
pub use quantum::{
    compose, evolve_piecewise, gate_fidelity, gate_infidelity, propagate, Basis, Hamiltonian, HamiltonianSegment,
    Level, StateVector, Unitary,
};
pub use scenario::{run_scenario, Dataset, ScenarioId};

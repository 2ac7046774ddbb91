//! Small-dimension complex linear algebra for qubit (2) and hyperfine
//! manifold (4) problems.
//!
//! Everything here is exact up to floating-point rounding: propagators of
//! piecewise-constant Hamiltonians are built from a closed-form Pauli
//! decomposition (2x2) or a Hermitian eigendecomposition (4x4), never by
//! time stepping. Unitaries are never phase-normalized, so `R(2pi) = -I`
//! composes correctly; only phase-invariant metrics are exposed.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{ensure_finite, Error, Result};

/// Maximum entry of `U^dagger U - I` accepted for a unitary.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Maximum entry of `H - H^dagger`, relative to `max(1, max|H|)`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Accepted deviation of an initial state's norm from 1.
pub const NORMALIZATION_TOL: f64 = 1e-10;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Ground-manifold level of the hyperfine ion.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// `|F=0, m_F=0>`, the qubit `|down>`.
    F0M0,
    F1Mm1,
    /// `|F=1, m_F=0>`, the qubit `|up>`.
    F1M0,
    F1Mp1,
}

impl Level {
    pub fn in_upper_manifold(self) -> bool {
        !matches!(self, Level::F0M0)
    }
}

/// Ordered set of levels a state or operator is expressed in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `[|down>, |up>]`
    Qubit,
    /// `[|F=0,0>, |F=1,-1>, |F=1,0>, |F=1,+1>]`
    Hyperfine,
}

impl Basis {
    pub fn levels(self) -> &'static [Level] {
        match self {
            Basis::Qubit => &[Level::F0M0, Level::F1M0],
            Basis::Hyperfine => &[Level::F0M0, Level::F1Mm1, Level::F1M0, Level::F1Mp1],
        }
    }

    pub fn dim(self) -> usize {
        self.levels().len()
    }

    pub fn from_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Basis::Qubit),
            4 => Ok(Basis::Hyperfine),
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn index_of(self, level: Level) -> Option<usize> {
        self.levels().iter().position(|&l| l == level)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    basis: Basis,
}

impl StateVector {
    pub fn new(basis: Basis, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: basis.dim(),
                found: amplitudes.len(),
            });
        }
        let state = StateVector {
            amplitudes: DVector::from_vec(amplitudes),
            basis,
        };
        let norm = state.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(state)
    }

    /// The basis state `level`; `None` when the level is not part of `basis`.
    pub fn basis_state(basis: Basis, level: Level) -> Option<Self> {
        let idx = basis.index_of(level)?;
        let mut amplitudes = DVector::from_element(basis.dim(), ZERO);
        amplitudes[idx] = ONE;
        Some(StateVector { amplitudes, basis })
    }

    /// `|F=0, m_F=0>`, present in both bases.
    pub fn ground(basis: Basis) -> Self {
        Self::basis_state(basis, Level::F0M0).expect("F0M0 is in every basis")
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, level: Level) -> Option<C64> {
        self.basis.index_of(level).map(|i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Population of `level`, zero for levels outside the basis.
    pub fn population(&self, level: Level) -> f64 {
        self.amplitude(level).map_or(0.0, |a| a.norm_sqr())
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Total population of the `F=1` manifold.
    pub fn upper_manifold_population(&self) -> f64 {
        self.basis
            .levels()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(l, _)| l.in_upper_manifold())
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    matrix: DMatrix<C64>,
}

impl Unitary {
    pub fn identity(basis: Basis) -> Self {
        let d = basis.dim();
        Unitary {
            matrix: DMatrix::identity(d, d),
        }
    }

    /// Validates shape (2x2 or 4x4) and unitarity.
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::UnsupportedDimension(matrix.nrows().max(matrix.ncols())));
        }
        Basis::from_dim(matrix.nrows())?;
        let u = Unitary { matrix };
        let dev = u.unitarity_deviation();
        if dev.is_nan() || dev >= UNITARITY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn basis(&self) -> Basis {
        Basis::from_dim(self.dim()).expect("validated on construction")
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `max |U^dagger U - I|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.matrix.adjoint() * &self.matrix - DMatrix::<C64>::identity(d, d)))
    }

    /// `e^{i alpha} U`.
    pub fn with_global_phase(&self, alpha: f64) -> Unitary {
        Unitary {
            matrix: &self.matrix * C64::from_polar(1.0, alpha),
        }
    }

    /// `later * self`: apply `self` first, then `later`.
    pub fn then(&self, later: &Unitary) -> Result<Unitary> {
        if later.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                index: 1,
                expected: self.dim(),
                found: later.dim(),
            });
        }
        Ok(Unitary {
            matrix: &later.matrix * &self.matrix,
        })
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: self.dim(),
                found: state.basis.dim(),
            });
        }
        Ok(StateVector {
            amplitudes: &self.matrix * &state.amplitudes,
            basis: state.basis,
        })
    }

    /// The `{|down>, |up>}` block of a 4x4 hyperfine operator. Rejected when
    /// the operator leaks population out of the qubit subspace.
    pub fn qubit_block(&self) -> Result<Unitary> {
        match self.basis() {
            Basis::Qubit => Ok(self.clone()),
            Basis::Hyperfine => {
                let idx = [
                    Basis::Hyperfine.index_of(Level::F0M0).unwrap(),
                    Basis::Hyperfine.index_of(Level::F1M0).unwrap(),
                ];
                let block = DMatrix::from_fn(2, 2, |r, c| self.matrix[(idx[r], idx[c])]);
                Unitary::from_matrix(block)
            }
        }
    }

    /// Embeds a qubit operator into the hyperfine basis, acting as the
    /// identity on `|F=1, m_F=+-1>`.
    pub fn embed_in_hyperfine(&self) -> Unitary {
        if self.basis() == Basis::Hyperfine {
            return self.clone();
        }
        let down = Basis::Hyperfine.index_of(Level::F0M0).unwrap();
        let up = Basis::Hyperfine.index_of(Level::F1M0).unwrap();
        let mut m = DMatrix::identity(4, 4);
        for (r, &ri) in [down, up].iter().enumerate() {
            for (c, &ci) in [down, up].iter().enumerate() {
                m[(ri, ci)] = self.matrix[(r, c)];
            }
        }
        Unitary { matrix: m }
    }
}

/// Time-ordered product of `units`, earliest first: returns `U_n ... U_2 U_1`.
/// The empty product is the qubit identity.
pub fn compose(units: &[Unitary]) -> Result<Unitary> {
    let Some(first) = units.first() else {
        return Ok(Unitary::identity(Basis::Qubit));
    };
    let dim = first.dim();
    let mut acc = first.matrix.clone();
    for (index, u) in units.iter().enumerate().skip(1) {
        if u.dim() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found: u.dim(),
            });
        }
        acc = &u.matrix * acc;
    }
    Unitary::from_matrix(acc)
}

/// A validated Hermitian generator in angular-frequency units (rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<C64>,
}

impl Hamiltonian {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::UnsupportedDimension(matrix.nrows().max(matrix.ncols())));
        }
        Basis::from_dim(matrix.nrows())?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("Hamiltonian entry"));
        }
        let dev = max_abs(&(&matrix - matrix.adjoint()));
        if dev > HERMITICITY_TOL * max_abs(&matrix).max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Hamiltonian { matrix })
    }

    pub fn zero(basis: Basis) -> Self {
        let d = basis.dim();
        Hamiltonian {
            matrix: DMatrix::from_element(d, d, ZERO),
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Precomputes the decomposition used to evaluate `exp(-iHt)` for many `t`.
    pub fn propagator(&self) -> Propagator {
        let m = &self.matrix;
        if self.dim() == 2 {
            // H = b I + a . sigma
            let b = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
            let az = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
            let lower = 0.5 * (m[(1, 0)] + m[(0, 1)].conj());
            Propagator::Pauli { b, az, lower }
        } else {
            // Symmetrize away rounding-level anti-Hermitian parts first.
            let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(herm);
            Propagator::Spectral {
                values: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            }
        }
    }

    /// `exp(-i H t)`.
    pub fn evolution(&self, duration: f64) -> Unitary {
        self.propagator().at(duration)
    }
}

/// Cached decomposition of a Hamiltonian for repeated `exp(-iHt)` evaluation.
#[derive(Clone, Debug)]
pub enum Propagator {
    /// `H = b I + a . sigma` with `a_z` and the lower off-diagonal `a_x + i a_y`.
    Pauli { b: f64, az: f64, lower: C64 },
    /// `H = V diag(values) V^dagger`.
    Spectral { values: Vec<f64>, vectors: DMatrix<C64> },
}

impl Propagator {
    pub fn at(&self, t: f64) -> Unitary {
        match self {
            Propagator::Pauli { b, az, lower } => {
                let a = (az * az + lower.norm_sqr()).sqrt();
                let (sin_at, cos_at) = (a * t).sin_cos();
                // sin(|a| t) / |a|, continuous at |a| = 0
                let s = if a > 0.0 { sin_at / a } else { t };
                let phase = C64::from_polar(1.0, -b * t);
                let m = DMatrix::from_row_slice(
                    2,
                    2,
                    &[
                        phase * C64::new(cos_at, -s * az),
                        phase * (-I * s * lower.conj()),
                        phase * (-I * s * lower),
                        phase * C64::new(cos_at, s * az),
                    ],
                );
                Unitary { matrix: m }
            }
            Propagator::Spectral { values, vectors } => {
                let d = values.len();
                let mut scaled = vectors.clone();
                for (j, &lambda) in values.iter().enumerate() {
                    let f = C64::from_polar(1.0, -lambda * t);
                    for i in 0..d {
                        scaled[(i, j)] *= f;
                    }
                }
                Unitary {
                    matrix: scaled * vectors.adjoint(),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSegment {
    hamiltonian: Hamiltonian,
    duration: f64,
}

impl HamiltonianSegment {
    pub fn new(hamiltonian: Hamiltonian, duration: f64) -> Result<Self> {
        ensure_finite("segment duration", duration)?;
        if duration < 0.0 {
            return Err(Error::NegativeDuration(duration));
        }
        Ok(HamiltonianSegment { hamiltonian, duration })
    }

    /// Validates both the matrix and the duration.
    pub fn from_matrix(matrix: DMatrix<C64>, duration: f64) -> Result<Self> {
        Self::new(Hamiltonian::new(matrix)?, duration)
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn unitary(&self) -> Unitary {
        self.hamiltonian.evolution(self.duration)
    }
}

/// Propagator of a piecewise-constant schedule, earliest segment first.
pub fn propagate(segments: &[HamiltonianSegment]) -> Result<Unitary> {
    let units: Vec<Unitary> = segments.iter().map(HamiltonianSegment::unitary).collect();
    compose(&units)
}

/// `psi = prod_k exp(-i H_k t_k) psi0`.
pub fn evolve_piecewise(segments: &[HamiltonianSegment], psi0: &StateVector) -> Result<StateVector> {
    let dim = psi0.basis.dim();
    let mut psi = psi0.clone();
    for (index, seg) in segments.iter().enumerate() {
        if seg.hamiltonian.dim() != dim {
            return Err(Error::DimensionMismatch {
                index,
                expected: dim,
                found: seg.hamiltonian.dim(),
            });
        }
        psi = seg.unitary().apply(&psi)?;
    }
    Ok(psi)
}

fn qubit_pair<'a>(u: &'a Unitary, v: &'a Unitary) -> Result<(&'a DMatrix<C64>, &'a DMatrix<C64>)> {
    for (index, w) in [u, v].into_iter().enumerate() {
        if w.dim() != 2 {
            return Err(Error::DimensionMismatch {
                index,
                expected: 2,
                found: w.dim(),
            });
        }
    }
    Ok((&u.matrix, &v.matrix))
}

/// `|Tr(U^dagger V)| / 2` on 2x2 unitaries. Project 4x4 evolutions with
/// [`Unitary::qubit_block`] first.
pub fn gate_fidelity(u: &Unitary, v: &Unitary) -> Result<f64> {
    let (a, b) = qubit_pair(u, v)?;
    let w = a.adjoint() * b;
    Ok((0.5 * (w[(0, 0)] + w[(1, 1)]).norm()).min(1.0))
}

/// `1 - gate_fidelity(U, V)`, evaluated without cancellation.
///
/// Writing `U^dagger V = e^{ig}(c I - i s n.sigma)`, the infidelity is
/// `s^2 / (1 + |c|)`, where `s^2` comes from the traceless part and keeps full
/// relative precision down to infidelities far below machine epsilon.
pub fn gate_infidelity(u: &Unitary, v: &Unitary) -> Result<f64> {
    let (a, b) = qubit_pair(u, v)?;
    let w = a.adjoint() * b;
    let c = (0.5 * (w[(0, 0)] + w[(1, 1)])).norm();
    // Tr(W sigma_k)/2 for k = x, y, z
    let sx = 0.5 * (w[(0, 1)] + w[(1, 0)]);
    let sy = 0.5 * I * (w[(0, 1)] - w[(1, 0)]);
    let sz = 0.5 * (w[(0, 0)] - w[(1, 1)]);
    let s2 = sx.norm_sqr() + sy.norm_sqr() + sz.norm_sqr();
    Ok((s2 / (1.0 + c.min(1.0))).clamp(0.0, 1.0))
}

/// Pauli matrices as plain complex matrices.
pub mod pauli {
    use super::*;

    pub fn identity() -> DMatrix<C64> {
        DMatrix::identity(2, 2)
    }

    pub fn x() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn y() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
    }

    pub fn z() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }
}

//! One- and two-qubit states in dense form.
//!
//! Single-qubit states use the half-norm Bloch convention
//! `ρ = ½I + r·σ` with `|r| ≤ 1/2`. Two-qubit operators are ordered
//! system ⊗ environment, so the basis index of `|s, e⟩` is `2s + e`.

use nalgebra::{Complex, Matrix2, Matrix4, Vector3};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Slack allowed on `|r| ≤ 1/2` and on eigenvalue positivity.
pub const POSITIVITY_TOL: f64 = 1e-12;
/// Slack allowed on Hermiticity and unit trace when validating inputs.
pub const VALIDATION_TOL: f64 = 1e-12;
pub const UNITARITY_TOL: f64 = 1e-13;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Pauli operator `σ_k`, with `σ_0 = I`.
///
/// # Panics
/// If `k > 3`.
pub fn pauli(k: usize) -> Matrix2<C64> {
    match k {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {k} out of range"),
    }
}

/// Kronecker product of two 2×2 operators, left factor in the high bit.
pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn hermiticity_defect<const N: usize>(
    m: &nalgebra::SMatrix<C64, N, N>,
) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// A qubit state given by its Bloch vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    r: Vector3<f64>,
}

impl QubitState {
    pub fn new(r: Vector3<f64>) -> Result<Self> {
        let norm = r.norm();
        if !norm.is_finite() || norm > 0.5 + POSITIVITY_TOL {
            return Err(Error::UnphysicalState { norm });
        }
        Ok(Self { r })
    }

    pub fn from_components(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Vector3::new(x, y, z))
    }

    /// The maximally mixed state `½I`.
    pub fn maximally_mixed() -> Self {
        Self { r: Vector3::zeros() }
    }

    pub fn bloch(&self) -> Vector3<f64> {
        self.r
    }

    /// `Tr ρ² = ½ + 2|r|²`.
    pub fn purity(&self) -> f64 {
        0.5 + 2.0 * self.r.norm_squared()
    }

    pub fn distance(&self, other: &QubitState) -> f64 {
        (self.r - other.r).norm()
    }

    /// `⟨1|ρ|1⟩ = ½ − r_z`.
    pub fn excited_population(&self) -> f64 {
        0.5 - self.r.z
    }

    /// `⟨0|ρ|0⟩ = ½ + r_z`.
    pub fn ground_population(&self) -> f64 {
        0.5 + self.r.z
    }

    /// `Tr(ρ σ_x) = 2 r_x`.
    pub fn sigma_x_expectation(&self) -> f64 {
        2.0 * self.r.x
    }
}

/// A validated 2×2 density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m: Matrix2<C64>,
}

impl DensityMatrix {
    pub fn new(m: Matrix2<C64>) -> Result<Self> {
        let deviation = hermiticity_defect(&m);
        if !(deviation <= VALIDATION_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        // Eigenvalues of ½I + r·σ are ½ ± |r|.
        let min_eigenvalue = 0.5 * trace - bloch_components(&m).norm();
        if min_eigenvalue < -POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { m })
    }

    pub(crate) fn from_raw(m: Matrix2<C64>) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.m
    }
}

fn bloch_components(m: &Matrix2<C64>) -> Vector3<f64> {
    Vector3::from_fn(|k, _| 0.5 * (pauli(k + 1) * m).trace().re)
}

/// `ρ = ½I + r_x σ_x + r_y σ_y + r_z σ_z`.
pub fn bloch_to_density(s: &QubitState) -> DensityMatrix {
    let r = s.r;
    let m = pauli(0).scale(0.5)
        + pauli(1).scale(r.x)
        + pauli(2).scale(r.y)
        + pauli(3).scale(r.z);
    DensityMatrix { m }
}

/// `r_k = ½ Tr(σ_k ρ)`.
pub fn density_to_bloch(d: &DensityMatrix) -> QubitState {
    QubitState { r: bloch_components(&d.m) }
}

/// A validated two-qubit density operator, ordered system ⊗ environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    m: Matrix4<C64>,
}

impl TwoQubitState {
    pub fn new(m: Matrix4<C64>) -> Result<Self> {
        let deviation = hermiticity_defect(&m);
        if !(deviation <= VALIDATION_TOL) {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        let min_eigenvalue = crate::linalg::hermitian_eigenvalues4(&m)[0];
        if min_eigenvalue < -POSITIVITY_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }
}

/// A validated two-qubit unitary acting on system ⊗ environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitUnitary {
    u: Matrix4<C64>,
}

impl TwoQubitUnitary {
    pub fn new(u: Matrix4<C64>) -> Result<Self> {
        let deviation = (u * u.adjoint() - Matrix4::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if !(deviation <= UNITARITY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { u })
    }

    pub(crate) fn from_raw(u: Matrix4<C64>) -> Self {
        Self { u }
    }

    pub fn identity() -> Self {
        Self { u: Matrix4::identity() }
    }

    /// The SWAP gate `S|ψ⟩⊗|φ⟩ = |φ⟩⊗|ψ⟩`.
    pub fn swap() -> Self {
        Self { u: swap_matrix() }
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.u
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, state: &TwoQubitState) -> TwoQubitState {
        let m = self.u * state.m * self.u.adjoint();
        // Exact Hermitian part; conjugation only adds rounding noise.
        TwoQubitState { m: (m + m.adjoint()).scale(0.5) }
    }
}

/// `Tr_env` of an arbitrary (not necessarily positive) two-qubit operator.
pub(crate) fn trace_out_environment(m: &Matrix4<C64>) -> Matrix2<C64> {
    Matrix2::from_fn(|a, b| m[(2 * a, 2 * b)] + m[(2 * a + 1, 2 * b + 1)])
}

pub(crate) fn swap_matrix() -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| {
        let (si, ei) = (i / 2, i % 2);
        if j == 2 * ei + si {
            ONE
        } else {
            ZERO
        }
    })
}

/// Which tensor slot survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    System,
    Environment,
}

/// `a ⊗ b`, system slot first.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> TwoQubitState {
    TwoQubitState { m: kron2(&a.m, &b.m) }
}

pub fn partial_trace(s: &TwoQubitState, keep: Slot) -> DensityMatrix {
    let m = &s.m;
    let reduced = match keep {
        Slot::System => trace_out_environment(m),
        Slot::Environment => Matrix2::from_fn(|a, b| m[(a, b)] + m[(2 + a, 2 + b)]),
    };
    DensityMatrix::from_raw(reduced)
}

//! Affine (Pauli transfer) representation of qubit channels.
//!
//! A channel acts on the column `(1/2, r_x, r_y, r_z)` by plain matrix
//! multiplication. Entry `[j][k]` is `½ Tr(σ_j E[σ_k])` with `σ_0 = I`.

use std::ops::Mul;

use nalgebra::{Complex, Matrix2, Matrix3, Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues4;
use crate::qubit::{kron2, pauli, QubitState, C64};

/// Tolerance on the `(1, 0, 0, 0)` first row.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

const BINARY_POWER_THRESHOLD: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    m: Matrix4<f64>,
}

impl TransferMatrix {
    /// Validates the first row against `(1, 0, 0, 0)` and stores it exactly.
    pub fn new(mut m: Matrix4<f64>) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite transfer matrix entry".into()));
        }
        let deviation = (m[(0, 0)] - 1.0)
            .abs()
            .max(m[(0, 1)].abs())
            .max(m[(0, 2)].abs())
            .max(m[(0, 3)].abs());
        if deviation > TRACE_PRESERVATION_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        m.set_row(0, &nalgebra::RowVector4::new(1.0, 0.0, 0.0, 0.0));
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self { m: Matrix4::identity() }
    }

    /// Builds the matrix `[[1, 0], [translation, linear]]`. Note that the
    /// Bloch vector is shifted by `translation / 2`.
    pub fn from_blocks(translation: Vector3<f64>, linear: Matrix3<f64>) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 1>(1, 0).copy_from(&translation);
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(&linear);
        Self { m }
    }

    pub(crate) fn from_raw(m: Matrix4<f64>) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn linear(&self) -> Matrix3<f64> {
        self.m.fixed_view::<3, 3>(1, 1).into_owned()
    }

    /// First column below the diagonal entry.
    pub fn translation(&self) -> Vector3<f64> {
        self.m.fixed_view::<3, 1>(1, 0).into_owned()
    }

    /// `r ↦ T r + translation / 2`, without any positivity check.
    pub fn apply_bloch(&self, r: &Vector3<f64>) -> Vector3<f64> {
        let v = self.m * Vector4::new(0.5, r.x, r.y, r.z);
        Vector3::new(v[1], v[2], v[3])
    }

    /// Action on a general operator `X = Σ_k x_k σ_k`.
    pub fn act(&self, x: &Matrix2<C64>) -> Matrix2<C64> {
        let coeffs: [C64; 4] = std::array::from_fn(|k| (pauli(k) * x).trace() * 0.5);
        let mut out = Matrix2::zeros();
        for j in 0..4 {
            let cj: C64 = (0..4).map(|k| coeffs[k] * self.m[(j, k)]).sum();
            out += pauli(j) * cj;
        }
        out
    }

    pub fn compose(&self, after: &TransferMatrix) -> TransferMatrix {
        TransferMatrix { m: after.m * self.m }
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        TransferMatrix { m: self.m * rhs.m }
    }
}

/// Normalized Choi matrix `(E ⊗ I)[|Φ⁺⟩⟨Φ⁺|]`, output slot first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChoiMatrix {
    m: Matrix4<C64>,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.m)
    }
}

/// Reconstructs the transfer matrix of a linear action on 2×2 operators.
pub fn tomography<F>(action: F) -> Result<TransferMatrix>
where
    F: Fn(&Matrix2<C64>) -> Matrix2<C64>,
{
    let mut m = Matrix4::zeros();
    for k in 0..4 {
        let image = action(&pauli(k));
        for j in 0..4 {
            m[(j, k)] = 0.5 * (pauli(j) * image).trace().re;
        }
    }
    TransferMatrix::new(m)
}

/// `(1/2, r′) = E · (1/2, r)`. Fails only when a non-CP channel pushes the
/// state out of the Bloch ball.
pub fn apply(e: &TransferMatrix, s: &QubitState) -> Result<QubitState> {
    QubitState::new(e.apply_bloch(&s.bloch()))
}

pub fn power(e: &TransferMatrix, n: u32) -> TransferMatrix {
    if n > BINARY_POWER_THRESHOLD {
        power_by_squaring(e, n)
    } else {
        power_by_loop(e, n)
    }
}

pub(crate) fn power_by_loop(e: &TransferMatrix, n: u32) -> TransferMatrix {
    let mut acc = Matrix4::identity();
    for _ in 0..n {
        acc *= e.m;
    }
    TransferMatrix { m: acc }
}

pub(crate) fn power_by_squaring(e: &TransferMatrix, mut n: u32) -> TransferMatrix {
    let mut acc = Matrix4::identity();
    let mut base = e.m;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base = base * base;
        n >>= 1;
    }
    TransferMatrix { m: acc }
}

pub fn to_choi(e: &TransferMatrix) -> ChoiMatrix {
    let mut m = Matrix4::<C64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut unit = Matrix2::<C64>::zeros();
            unit[(i, j)] = Complex::new(1.0, 0.0);
            m += kron2(&e.act(&unit), &unit);
        }
    }
    ChoiMatrix { m: m.scale(0.5) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpVerdict {
    pub completely_positive: bool,
    pub min_eigenvalue: f64,
}

/// Complete positivity through the Choi spectrum: true iff the smallest
/// eigenvalue is at least `-tol`.
pub fn is_completely_positive(e: &TransferMatrix, tol: f64) -> CpVerdict {
    let min_eigenvalue = to_choi(e).eigenvalues()[0];
    CpVerdict { completely_positive: min_eigenvalue >= -tol, min_eigenvalue }
}

//! Operator (GKS) form of qubit generators.
//!
//! The master equation reads
//! `ρ̇ = −i[H, ρ] + ½ Σ_jk c_jk ([σ_j, ρσ_k] + [σ_jρ, σ_k])` with
//! `H = Σ_k h_k σ_k` and the Hermitian coefficient matrix `c = d − i e`.

use nalgebra::{Complex, Matrix3, Matrix4, Vector3, Vector4};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, max_abs_diff};
use crate::qubit::{QubitState, POSITIVITY_TOL};
use crate::semigroup::{GeneratorMatrix, GENERATOR_ROW_TOL};

const SYMMETRY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LindbladForm {
    h: Vector3<f64>,
    d: Matrix3<f64>,
    e: Matrix3<f64>,
}

impl LindbladForm {
    /// `d` must be symmetric and `e` antisymmetric (to 1e-13).
    pub fn new(h: Vector3<f64>, d: Matrix3<f64>, e: Matrix3<f64>) -> Result<Self> {
        if max_abs_diff(&d, &d.transpose()) > SYMMETRY_TOL {
            return Err(Error::InvalidArgument("d is not symmetric".into()));
        }
        if max_abs_diff(&e, &(-e.transpose())) > SYMMETRY_TOL {
            return Err(Error::InvalidArgument("e is not antisymmetric".into()));
        }
        Ok(Self { h, d, e })
    }

    pub fn h(&self) -> &Vector3<f64> {
        &self.h
    }

    pub fn d(&self) -> &Matrix3<f64> {
        &self.d
    }

    pub fn e(&self) -> &Matrix3<f64> {
        &self.e
    }

    /// `c = d − i e`.
    pub fn c(&self) -> Matrix3<Complex<f64>> {
        Matrix3::from_fn(|j, k| Complex::new(self.d[(j, k)], -self.e[(j, k)]))
    }
}

pub fn lindblad_from_generator(g: &GeneratorMatrix) -> Result<LindbladForm> {
    let m = g.matrix();
    let deviation = m.row(0).amax();
    if deviation > GENERATOR_ROW_TOL {
        return Err(Error::NotGenerator { deviation });
    }
    let q = |j: usize, k: usize| m[(j, k)] / 4.0;

    let h = Vector3::new(q(3, 2) - q(2, 3), q(1, 3) - q(3, 1), q(2, 1) - q(1, 2));

    let (e23, e31, e12) = (q(1, 0), q(2, 0), q(3, 0));
    let e = Matrix3::new(
        0.0, e12, -e31, //
        -e12, 0.0, e23, //
        e31, -e23, 0.0,
    );

    let d11 = -q(2, 2) - q(3, 3) + q(1, 1);
    let d22 = -q(1, 1) - q(3, 3) + q(2, 2);
    let d33 = -q(1, 1) - q(2, 2) + q(3, 3);
    let d12 = q(1, 2) + q(2, 1);
    let d23 = q(2, 3) + q(3, 2);
    let d13 = q(1, 3) + q(3, 1);
    let d = Matrix3::new(
        d11, d12, d13, //
        d12, d22, d23, //
        d13, d23, d33,
    );
    Ok(LindbladForm { h, d, e })
}

pub fn generator_from_lindblad(l: &LindbladForm) -> GeneratorMatrix {
    let (h, d, e) = (&l.h, &l.d, &l.e);
    let m = Matrix4::new(
        0.0, 0.0, 0.0, 0.0,
        4.0 * e[(1, 2)],
        -2.0 * d[(1, 1)] - 2.0 * d[(2, 2)],
        2.0 * d[(0, 1)] - 2.0 * h[2],
        2.0 * d[(0, 2)] + 2.0 * h[1],
        4.0 * e[(2, 0)],
        2.0 * d[(0, 1)] + 2.0 * h[2],
        -2.0 * d[(0, 0)] - 2.0 * d[(2, 2)],
        2.0 * d[(1, 2)] - 2.0 * h[0],
        4.0 * e[(0, 1)],
        2.0 * d[(2, 0)] - 2.0 * h[1],
        2.0 * d[(2, 1)] + 2.0 * h[0],
        -2.0 * d[(0, 0)] - 2.0 * d[(1, 1)],
    );
    GeneratorMatrix::new(m).expect("first row is zero by construction")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GksVerdict {
    pub completely_positive: bool,
    /// Ascending eigenvalues of `c`.
    pub eigenvalues: [f64; 3],
}

/// The semigroup is completely positive iff `c ≥ 0`; the smallest eigenvalue
/// may dip to `-1e-12`.
pub fn gks_positivity(l: &LindbladForm) -> GksVerdict {
    let eigenvalues = hermitian_eigenvalues(&l.c());
    GksVerdict { completely_positive: eigenvalues[0] >= -POSITIVITY_TOL, eigenvalues }
}

/// Fixed-step classical Runge–Kutta integration of `(1/2, r)` under the
/// generator of `l`. Returns the raw Bloch vector without a positivity check.
pub fn integrate_bloch(l: &LindbladForm, initial: &Vector3<f64>, t: f64, dt: f64) -> Result<Vector3<f64>> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t = {t} must be finite and nonnegative")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be positive")));
    }
    let mut v = Vector4::new(0.5, initial.x, initial.y, initial.z);
    if t == 0.0 {
        return Ok(*initial);
    }
    let g = *generator_from_lindblad(l).matrix();
    // Land exactly on t; a ratio within rounding of an integer is not rounded up.
    let steps = ((t / dt) - 1e-9).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    for _ in 0..steps {
        let k1 = g * v;
        let k2 = g * (v + k1 * (h / 2.0));
        let k3 = g * (v + k2 * (h / 2.0));
        let k4 = g * (v + k3 * h);
        v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(Vector3::new(v[1], v[2], v[3]))
}

/// Integrates the master equation of `l` from `initial` up to time `t`.
pub fn integrate_master_equation(l: &LindbladForm, initial: &QubitState, t: f64, dt: f64) -> Result<QubitState> {
    QubitState::new(integrate_bloch(l, &initial.bloch(), t, dt)?)
}

//! Matrix functions on fixed 4×4 real matrices.

use nalgebra::{Complex, DMatrix, Matrix4, SMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::qubit::C64;

/// Eigenvalues below this magnitude make a map non-invertible.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Largest eigenvector condition number accepted by [`logm`].
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e8;
/// Imaginary residue of a real matrix logarithm that may be discarded.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

const CLUSTER_TOL: f64 = 1e-8;

pub fn max_abs_diff<const R: usize, const C: usize>(
    a: &SMatrix<f64, R, C>,
    b: &SMatrix<f64, R, C>,
) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Sorted (ascending) eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<const N: usize>(m: &SMatrix<C64, N, N>) -> [f64; N] {
    let hermitian = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(DMatrix::from_iterator(N, N, hermitian.iter().copied()));
    let mut values = [0.0; N];
    for (slot, v) in values.iter_mut().zip(eig.eigenvalues.iter()) {
        *slot = *v;
    }
    values.sort_by(f64::total_cmp);
    values
}

pub fn hermitian_eigenvalues4(m: &Matrix4<C64>) -> [f64; 4] {
    hermitian_eigenvalues(m)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

fn one_norm(m: &Matrix4<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with the degree-13 diagonal
/// Padé approximant.
pub fn expm(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(squarings));
    let id = Matrix4::<f64>::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let b = &PADE13;
    let u_inner = a6 * (a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9]))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + id.scale(b[1]);
    let u = a * u_inner;
    let v = a6 * (a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8]))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + id.scale(b[0]);
    let mut r = (v - u)
        .lu()
        .solve(&(v + u))
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = r * r;
    }
    r
}

/// Principal logarithm of a real 4×4 matrix through its complex
/// eigendecomposition.
///
/// Fails with [`Error::NonInvertible`] when an eigenvalue vanishes, with
/// [`Error::BranchAmbiguity`] when an eigenvalue lies on the closed negative
/// real axis, and with [`Error::Defective`] when the eigenvectors do not form
/// a well-conditioned basis.
pub fn logm(m: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let scale = m.norm().max(1.0);
    let eigenvalues: Vec<C64> = m.complex_eigenvalues().iter().copied().collect();

    for lambda in &eigenvalues {
        if lambda.norm() <= SINGULAR_TOL * scale {
            return Err(Error::NonInvertible);
        }
        if lambda.re < 0.0 && lambda.im.abs() <= SINGULAR_TOL * lambda.norm() {
            return Err(Error::BranchAmbiguity);
        }
    }

    let clusters = cluster(&eigenvalues, scale);
    let mc: Matrix4<C64> = m.map(|x| Complex::new(x, 0.0));
    let mut basis = Matrix4::<C64>::zeros();
    let mut logs = [C64::new(0.0, 0.0); 4];
    let mut col = 0;
    for (center, size) in clusters {
        let shifted = mc - Matrix4::identity() * center;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        // Geometric multiplicity must match the cluster size.
        if svd.singular_values[order[size - 1]] > 1e-6 * scale {
            return Err(Error::Defective { condition: f64::INFINITY });
        }
        for &idx in order.iter().take(size) {
            let v = v_t.row(idx).adjoint();
            basis.set_column(col, &v);
            logs[col] = center.ln();
            col += 1;
        }
    }

    let singular = basis.svd(false, false).singular_values;
    let smax = singular.max();
    let smin = singular.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= MAX_EIGENVECTOR_CONDITION) {
        return Err(Error::Defective { condition });
    }
    let inverse = basis.try_inverse().ok_or(Error::Defective { condition })?;
    let diag = Matrix4::from_diagonal(&nalgebra::Vector4::from(logs));
    let log = basis * diag * inverse;

    let residue = log.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residue > IMAGINARY_RESIDUE_TOL {
        return Err(Error::BranchAmbiguity);
    }
    Ok(log.map(|z| z.re))
}

/// Groups numerically coincident eigenvalues, returning (mean, multiplicity).
fn cluster(values: &[C64], scale: f64) -> Vec<(C64, usize)> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for &v in values {
        let tol = CLUSTER_TOL * scale.max(v.norm());
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|&u| (u - v).norm() <= tol))
        {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let n = g.len();
            let sum: C64 = g.iter().sum();
            (sum / n as f64, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn taylor_expm(a: &Matrix4<f64>) -> Matrix4<f64> {
        // Independent reference: plain Taylor series with many terms after
        // scaling by 2^-10.
        let s = 10;
        let a = a.scale(0.5f64.powi(s));
        let mut term = Matrix4::identity();
        let mut sum = Matrix4::identity();
        for k in 1..40 {
            term = term * a / k as f64;
            sum += term;
        }
        for _ in 0..s {
            sum = sum * sum;
        }
        sum
    }

    #[test]
    fn expm_of_zero_is_identity() {
        assert_eq!(expm(&Matrix4::zeros()), Matrix4::identity());
    }

    #[test]
    fn expm_matches_taylor_reference() {
        let a = Matrix4::new(
            0.0, 0.0, 0.0, 0.0, //
            0.3, -1.2, 2.5, 0.1, //
            -0.7, -2.5, -1.2, 0.4, //
            1.1, 0.2, -0.3, -3.0,
        );
        for scale in [0.01, 1.0, 7.0] {
            let m = a.scale(scale);
            let reference = taylor_expm(&m);
            let rel = max_abs_diff(&expm(&m), &reference) / reference.amax().max(1.0);
            assert!(rel < 1e-13, "scale {scale}: {rel}");
        }
    }

    #[test]
    fn rotation_generator_exponentiates_to_rotation() {
        let theta = 0.9;
        let mut g = Matrix4::zeros();
        g[(1, 2)] = theta;
        g[(2, 1)] = -theta;
        let e = expm(&g);
        assert!((e[(1, 1)] - theta.cos()).abs() < 1e-15);
        assert!((e[(1, 2)] - theta.sin()).abs() < 1e-15);
        assert!((e[(2, 1)] + theta.sin()).abs() < 1e-15);
    }

    #[test]
    fn logm_inverts_expm() {
        let g = Matrix4::new(
            0.0, 0.0, 0.0, 0.0, //
            0.2, -0.5, 0.8, 0.0, //
            -0.1, -0.8, -0.5, 0.0, //
            0.3, 0.0, 0.0, -0.9,
        );
        let l = logm(&expm(&g)).unwrap();
        assert!(max_abs_diff(&l, &g) < 1e-12);
    }

    #[test]
    fn logm_handles_repeated_eigenvalues() {
        assert_eq!(logm(&Matrix4::identity()).unwrap(), Matrix4::zeros());
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 0.5, 0.5, 0.5));
        let l = logm(&d).unwrap();
        assert!((l[(2, 2)] - 0.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn logm_error_paths() {
        let singular = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0));
        assert_eq!(logm(&singular), Err(Error::NonInvertible));
        let negative = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -0.5, 1.0, 1.0));
        assert_eq!(logm(&negative), Err(Error::BranchAmbiguity));
        let mut jordan = Matrix4::identity();
        jordan[(1, 2)] = 1.0;
        assert!(matches!(logm(&jordan), Err(Error::Defective { .. })));
    }

    #[test]
    fn hermitian_eigenvalues_sorted() {
        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(3.0, -1.0, 2.0, 0.0))
            .map(|x| C64::new(x, 0.0));
        assert_eq!(hermitian_eigenvalues4(&m), [-1.0, 0.0, 2.0, 3.0]);
    }
}

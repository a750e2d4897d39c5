//! Continuous interpolation of collision dynamics.
//!
//! The n-collision channel `E^n` is embedded in a one-parameter family
//! `E_t = exp(tG)` with `E_{nτ} = E^n`. Rate formulas are evaluated in a
//! frame whose z axis points along the reservoir Bloch vector; every
//! matrix handed back to callers is expressed in the original axes.

use nalgebra::{Matrix3, Matrix4, Rotation3, Vector3};

use crate::channels::TransferMatrix;
use crate::collisions::{set_rotation_block, CollisionSpec, Interaction};
use crate::error::{Error, Result};
use crate::linalg::{expm, logm, max_abs_diff, SINGULAR_TOL};
use crate::qubit::QubitState;

/// Tolerance on the vanishing first row of a generator.
pub const GENERATOR_ROW_TOL: f64 = 1e-10;
const FRAME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMatrix {
    m: Matrix4<f64>,
}

impl GeneratorMatrix {
    /// Validates the first row against zero and stores it exactly.
    pub fn new(mut m: Matrix4<f64>) -> Result<Self> {
        if !m.iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite generator entry".into()));
        }
        let deviation = m.row(0).amax();
        if deviation > GENERATOR_ROW_TOL {
            return Err(Error::NotGenerator { deviation });
        }
        m.set_row(0, &nalgebra::RowVector4::zeros());
        Ok(Self { m })
    }

    pub fn zero() -> Self {
        Self { m: Matrix4::zeros() }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    /// `exp(t G)`.
    pub fn exp(&self, t: f64) -> TransferMatrix {
        TransferMatrix::new(expm(&self.m.scale(t))).expect("exponential of a generator is trace preserving")
    }
}

/// Rotation taking the reservoir Bloch vector onto `(0, 0, w)`, `w = |t| ≥ 0`.
///
/// A vanishing Bloch vector yields the identity frame. A vector along `-z`
/// uses the rotation by π about x.
pub fn align_basis(reservoir: &QubitState) -> (Matrix3<f64>, f64) {
    let t = reservoir.bloch();
    let w = t.norm();
    if w == 0.0 {
        return (Matrix3::identity(), 0.0);
    }
    let n = t / w;
    let z = Vector3::z();
    let frame = if n.z < -1.0 + 1e-12 {
        Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0))
    } else {
        Rotation3::rotation_between(&n, &z)
            .map(|r| *r.matrix())
            .unwrap_or_else(Matrix3::identity)
    };
    (frame, w)
}

fn embed(frame: &Matrix3<f64>) -> Matrix4<f64> {
    let mut f = Matrix4::identity();
    f.fixed_view_mut::<3, 3>(1, 1).copy_from(frame);
    f
}

/// Rates of the homogenization semigroup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizationRates {
    gamma1: f64,
    gamma2: f64,
    omega: f64,
    w: f64,
    frame: Matrix3<f64>,
}

impl HomogenizationRates {
    /// `frame` maps the original Bloch axes to the aligned ones. The bound
    /// `Γ₂ ≥ Γ₁/2` is not enforced here; see [`Self::satisfies_rate_bound`].
    pub fn from_parts(gamma1: f64, gamma2: f64, omega: f64, w: f64, frame: Matrix3<f64>) -> Result<Self> {
        for (name, v) in [("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} = {v} must be finite and nonnegative")));
            }
        }
        if !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("omega = {omega} must be finite")));
        }
        if !(w.abs() <= 0.5 + FRAME_TOL) {
            return Err(Error::InvalidArgument(format!("|w| = {} exceeds 1/2", w.abs())));
        }
        let orth = max_abs_diff(&(frame.transpose() * frame), &Matrix3::identity());
        if !(orth <= FRAME_TOL) || (frame.determinant() - 1.0).abs() > FRAME_TOL {
            return Err(Error::InvalidArgument("frame is not a proper rotation".into()));
        }
        Ok(Self { gamma1, gamma2, omega, w, frame })
    }

    /// Rates with the fixed point at `reservoir`, frame from [`align_basis`].
    pub fn toward(reservoir: &QubitState, gamma1: f64, gamma2: f64, omega: f64) -> Result<Self> {
        let (frame, w) = align_basis(reservoir);
        Self::from_parts(gamma1, gamma2, omega, w, frame)
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn frame(&self) -> &Matrix3<f64> {
        &self.frame
    }

    /// `Γ₁ ≤ 2Γ₂` up to `1e-12`.
    pub fn satisfies_rate_bound(&self) -> bool {
        self.gamma1 <= 2.0 * self.gamma2 + 1e-12
    }

    pub fn with_gamma2(&self, gamma2: f64) -> Result<Self> {
        Self::from_parts(self.gamma1, gamma2, self.omega, self.w, self.frame)
    }

    fn in_original_axes(&self, aligned: Matrix4<f64>) -> Matrix4<f64> {
        let f = embed(&self.frame);
        f.transpose() * aligned * f
    }

    fn aligned_map(&self, t: f64) -> Matrix4<f64> {
        let decay = (-self.gamma1 * t).exp();
        let coherence = (-self.gamma2 * t).exp();
        let (sin, cos) = (self.omega * t).sin_cos();
        let mut m = Matrix4::identity();
        set_rotation_block(&mut m, 1, coherence * cos, coherence * sin);
        m[(3, 3)] = decay;
        m[(3, 0)] = 2.0 * self.w * (1.0 - decay);
        m
    }

    fn aligned_generator(&self) -> Matrix4<f64> {
        let mut g = Matrix4::zeros();
        set_rotation_block(&mut g, 1, -self.gamma2, self.omega);
        g[(3, 3)] = -self.gamma1;
        g[(3, 0)] = 2.0 * self.w * self.gamma1;
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DephasingAxis {
    X,
    Z,
}

impl DephasingAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            DephasingAxis::X => "x",
            DephasingAxis::Z => "z",
        }
    }

    pub fn unit(&self) -> Vector3<f64> {
        match self {
            DephasingAxis::X => Vector3::x(),
            DephasingAxis::Z => Vector3::z(),
        }
    }

    /// First index of the rotating 2×2 block in the 4×4 representation.
    fn block(&self) -> usize {
        match self {
            DephasingAxis::X => 2,
            DephasingAxis::Z => 1,
        }
    }
}

/// Rates of the pure-dephasing semigroups produced by partial CNOT collisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceRates {
    gamma: f64,
    omega: f64,
    axis: DephasingAxis,
}

impl DecoherenceRates {
    pub fn new(gamma: f64, omega: f64, axis: DephasingAxis) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("gamma = {gamma} must be finite and nonnegative")));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("omega = {omega} must be finite")));
        }
        Ok(Self { gamma, omega, axis })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn axis(&self) -> DephasingAxis {
        self.axis
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.omega, self.axis)
    }
}

/// Either kind of rates, as produced by [`rates_for`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rates {
    Homogenization(HomogenizationRates),
    Decoherence(DecoherenceRates),
}

impl From<HomogenizationRates> for Rates {
    fn from(r: HomogenizationRates) -> Self {
        Rates::Homogenization(r)
    }
}

impl From<DecoherenceRates> for Rates {
    fn from(r: DecoherenceRates) -> Self {
        Rates::Decoherence(r)
    }
}

/// A continuous one-parameter family of channels with a known generator.
pub trait ContinuousFamily {
    /// `E_t`. Negative `t` gives the (generally non-CP) inverse family.
    fn map_at(&self, t: f64) -> TransferMatrix;

    fn generator(&self) -> GeneratorMatrix;

    /// Max-entry norm of `E_t E_s − E_{t+s}`.
    fn semigroup_defect(&self, t: f64, s: f64) -> Result<f64> {
        if !(t >= 0.0 && s >= 0.0) {
            return Err(Error::InvalidArgument(format!("times must be nonnegative, got t = {t}, s = {s}")));
        }
        let product = self.map_at(t) * self.map_at(s);
        Ok(max_abs_diff(product.matrix(), self.map_at(t + s).matrix()))
    }
}

impl ContinuousFamily for HomogenizationRates {
    fn map_at(&self, t: f64) -> TransferMatrix {
        TransferMatrix::from_raw(self.in_original_axes(self.aligned_map(t)))
    }

    fn generator(&self) -> GeneratorMatrix {
        GeneratorMatrix { m: self.in_original_axes(self.aligned_generator()) }
    }
}

impl ContinuousFamily for DecoherenceRates {
    fn map_at(&self, t: f64) -> TransferMatrix {
        let e = (-self.gamma * t).exp();
        let (sin, cos) = (self.omega * t).sin_cos();
        let mut m = Matrix4::identity();
        set_rotation_block(&mut m, self.axis.block(), e * cos, e * sin);
        TransferMatrix::from_raw(m)
    }

    fn generator(&self) -> GeneratorMatrix {
        let mut m = Matrix4::zeros();
        set_rotation_block(&mut m, self.axis.block(), -self.gamma, self.omega);
        GeneratorMatrix { m }
    }
}

impl ContinuousFamily for Rates {
    fn map_at(&self, t: f64) -> TransferMatrix {
        match self {
            Rates::Homogenization(r) => r.map_at(t),
            Rates::Decoherence(r) => r.map_at(t),
        }
    }

    fn generator(&self) -> GeneratorMatrix {
        match self {
            Rates::Homogenization(r) => r.generator(),
            Rates::Decoherence(r) => r.generator(),
        }
    }
}

pub fn continuous_map(rates: &impl ContinuousFamily, t: f64) -> TransferMatrix {
    rates.map_at(t)
}

pub fn generator_analytic(rates: &impl ContinuousFamily) -> GeneratorMatrix {
    rates.generator()
}

pub fn semigroup_defect(rates: &impl ContinuousFamily, t: f64, s: f64) -> Result<f64> {
    rates.semigroup_defect(t, s)
}

/// Clears the sign of a zero so reports never show `-0`.
fn unsigned_zero(x: f64) -> f64 {
    x + 0.0
}

/// Closed-form homogenization rates of a partial-swap collision.
///
/// `Γ₁ = −(2/τ) ln c`, `Γ₂ = −(1/τ) ln(c √(c² + 4s²w²))` and
/// `Ω = atan2(2ws, c)/τ`. The full swap (`c = 0`) has no finite rates.
pub fn homogenization_rates(spec: &CollisionSpec) -> Result<HomogenizationRates> {
    if spec.interaction() != Interaction::PartialSwap {
        return Err(Error::InvalidSpec(format!(
            "homogenization rates need a partial swap, got {}",
            spec.interaction()
        )));
    }
    let c = spec.cos_eta();
    let s = spec.sin_eta();
    if spec.eta() >= std::f64::consts::FRAC_PI_2 || c < SINGULAR_TOL {
        return Err(Error::NonInvertible);
    }
    let tau = spec.tau();
    let (frame, w) = align_basis(&spec.reservoir());
    // c² + 4s²w² = 1 − s²(1 − 4w²)
    let radial = (-(s * s) * (1.0 - 4.0 * w * w)).ln_1p();
    let gamma1 = unsigned_zero(-2.0 * c.ln() / tau);
    let gamma2 = unsigned_zero(-(c.ln() + 0.5 * radial) / tau);
    let omega = (2.0 * w * s).atan2(c) / tau;
    HomogenizationRates::from_parts(gamma1, gamma2.max(0.0), omega, w, frame)
}

/// Dephasing rates of the partial-CNOT collisions.
///
/// For the system as target, `Γ = −(1/τ) ln √(1 − 4s²ξ₁₁ξ₀₀)` about x; as
/// control, `Γ = −(1/τ) ln √(c² + s²⟨σ_x⟩²)` about z. The rotation angle per
/// collision is the principal argument of the 2×2 block eigenvalue.
pub fn decoherence_rates(spec: &CollisionSpec) -> Result<DecoherenceRates> {
    let c = spec.cos_eta();
    let s = spec.sin_eta();
    let xi = spec.reservoir();
    let (contraction_sq, a, b, axis) = match spec.interaction() {
        Interaction::CnotTarget => {
            let xi11 = xi.excited_population();
            let xi00 = xi.ground_population();
            (
                1.0 - 4.0 * s * s * xi11 * xi00,
                1.0 - 2.0 * s * s * xi11,
                2.0 * c * s * xi11,
                DephasingAxis::X,
            )
        }
        Interaction::CnotControl => {
            let sx = xi.sigma_x_expectation();
            (c * c + s * s * sx * sx, c * c + s * s * sx, c * s * (1.0 - sx), DephasingAxis::Z)
        }
        Interaction::PartialSwap => {
            return Err(Error::InvalidSpec("decoherence rates need a partial CNOT".into()));
        }
    };
    if !(contraction_sq > SINGULAR_TOL) {
        return Err(Error::NonInvertible);
    }
    let tau = spec.tau();
    let gamma = unsigned_zero(-0.5 * contraction_sq.ln() / tau).max(0.0);
    let omega = unsigned_zero(b.atan2(a) / tau);
    DecoherenceRates::new(gamma, omega, axis)
}

/// Rates matching the interaction family of `spec`.
pub fn rates_for(spec: &CollisionSpec) -> Result<Rates> {
    match spec.interaction() {
        Interaction::PartialSwap => homogenization_rates(spec).map(Rates::from),
        _ => decoherence_rates(spec).map(Rates::from),
    }
}

/// `(1/τ) log E` on the principal branch.
pub fn generator_numeric(e: &TransferMatrix, tau: f64) -> Result<GeneratorMatrix> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau = {tau} must be positive")));
    }
    let log = logm(e.matrix())?;
    GeneratorMatrix::new(log / tau)
}

/// Central-difference estimate of `Ė_t E_t⁻¹`.
pub fn instantaneous_generator<F>(family: F, t: f64, dt: f64) -> Result<GeneratorMatrix>
where
    F: Fn(f64) -> TransferMatrix,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt = {dt} must be positive")));
    }
    let at = *family(t).matrix();
    if at.determinant().abs() <= SINGULAR_TOL {
        return Err(Error::NonInvertible);
    }
    let inverse = at.try_inverse().ok_or(Error::NonInvertible)?;
    let derivative = (family(t + dt).matrix() - family(t - dt).matrix()) / (2.0 * dt);
    GeneratorMatrix::new(derivative * inverse)
}

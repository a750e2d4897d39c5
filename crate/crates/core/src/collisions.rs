//! The collision model: unitaries, exact two-qubit collisions, the induced
//! single-qubit channels and discrete trajectories.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, Matrix2, Matrix4};

use crate::channels::{tomography, TransferMatrix};
use crate::error::{Error, Result};
use crate::qubit::{
    bloch_to_density, density_to_bloch, kron2, partial_trace, swap_matrix, tensor,
    trace_out_environment, QubitState, Slot, TwoQubitUnitary, C64,
};

/// Interaction family of a single collision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interaction {
    /// `cos η I + i sin η SWAP`.
    PartialSwap,
    /// `cos η I + i sin η CNOT` with the environment qubit as control.
    CnotTarget,
    /// `cos η I + i sin η CNOT` with the system qubit as control.
    CnotControl,
}

impl Interaction {
    pub const ALL: [Interaction; 3] =
        [Interaction::PartialSwap, Interaction::CnotTarget, Interaction::CnotControl];

    pub fn as_str(&self) -> &'static str {
        match self {
            Interaction::PartialSwap => "swap",
            Interaction::CnotTarget => "cnot-target",
            Interaction::CnotControl => "cnot-control",
        }
    }
}

impl fmt::Display for Interaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Interaction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swap" | "partial-swap" => Ok(Interaction::PartialSwap),
            "cnot-target" => Ok(Interaction::CnotTarget),
            "cnot-control" => Ok(Interaction::CnotControl),
            other => Err(Error::InvalidSpec(format!("unknown interaction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionSpec {
    interaction: Interaction,
    eta: f64,
    tau: f64,
    reservoir: QubitState,
}

impl CollisionSpec {
    /// Requires `0 ≤ eta ≤ π/2` and a finite `tau > 0`.
    pub fn new(interaction: Interaction, eta: f64, tau: f64, reservoir: QubitState) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&eta) {
            return Err(Error::InvalidSpec(format!("eta = {eta} outside [0, pi/2]")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidSpec(format!("tau = {tau} must be positive")));
        }
        Ok(Self { interaction, eta, tau, reservoir })
    }

    pub fn interaction(&self) -> Interaction {
        self.interaction
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn reservoir(&self) -> QubitState {
        self.reservoir
    }

    pub fn cos_eta(&self) -> f64 {
        self.eta.cos()
    }

    pub fn sin_eta(&self) -> f64 {
        self.eta.sin()
    }
}

/// CNOT on `|s, e⟩` (index `2s + e`); `system_controls` picks the role.
fn cnot_matrix(system_controls: bool) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    for s in 0..2 {
        for e in 0..2 {
            let (s2, e2) = if system_controls { (s, e ^ s) } else { (s ^ e, e) };
            m[(2 * s2 + e2, 2 * s + e)] = Complex::new(1.0, 0.0);
        }
    }
    m
}

pub fn build_unitary(spec: &CollisionSpec) -> TwoQubitUnitary {
    let gate = match spec.interaction {
        Interaction::PartialSwap => swap_matrix(),
        Interaction::CnotTarget => cnot_matrix(false),
        Interaction::CnotControl => cnot_matrix(true),
    };
    let c = spec.cos_eta();
    let s = spec.sin_eta();
    TwoQubitUnitary::from_raw(Matrix4::identity() * Complex::new(c, 0.0) + gate * Complex::new(0.0, s))
}

/// One collision on the product state; returns the reduced (system,
/// environment) states.
pub fn collide(
    u: &TwoQubitUnitary,
    system: &QubitState,
    environment: &QubitState,
) -> (QubitState, QubitState) {
    let joint = tensor(&bloch_to_density(system), &bloch_to_density(environment));
    let out = u.conjugate(&joint);
    (
        density_to_bloch(&partial_trace(&out, Slot::System)),
        density_to_bloch(&partial_trace(&out, Slot::Environment)),
    )
}

/// Channel on the system obtained by tomography of the exact two-qubit
/// collision with a fresh environment qubit in state `environment`.
pub fn collision_channel(u: &TwoQubitUnitary, environment: &QubitState) -> TransferMatrix {
    let xi = *bloch_to_density(environment).matrix();
    let um = *u.matrix();
    let action = |x: &Matrix2<C64>| trace_out_environment(&(um * kron2(x, &xi) * um.adjoint()));
    tomography(action).expect("unitary collisions are trace preserving")
}

/// Closed-form channel induced on the system by one collision.
pub fn induced_map(spec: &CollisionSpec) -> TransferMatrix {
    let c = spec.cos_eta();
    let s = spec.sin_eta();
    let t = spec.reservoir.bloch();
    let mut m = Matrix4::<f64>::identity();
    match spec.interaction {
        Interaction::PartialSwap => {
            // r′ = c²r + s²t − 2cs t×r
            let cs2 = 2.0 * c * s;
            let s2 = 2.0 * s * s;
            m[(1, 0)] = s2 * t.x;
            m[(2, 0)] = s2 * t.y;
            m[(3, 0)] = s2 * t.z;
            for k in 1..4 {
                m[(k, k)] = c * c;
            }
            m[(1, 2)] = cs2 * t.z;
            m[(1, 3)] = -cs2 * t.y;
            m[(2, 1)] = -cs2 * t.z;
            m[(2, 3)] = cs2 * t.x;
            m[(3, 1)] = cs2 * t.y;
            m[(3, 2)] = -cs2 * t.x;
        }
        Interaction::CnotTarget => {
            let xi11 = spec.reservoir.excited_population();
            let a = 1.0 - 2.0 * s * s * xi11;
            let b = 2.0 * c * s * xi11;
            set_rotation_block(&mut m, 2, a, b);
        }
        Interaction::CnotControl => {
            let sx = spec.reservoir.sigma_x_expectation();
            let a = c * c + s * s * sx;
            let b = c * s * (1.0 - sx);
            set_rotation_block(&mut m, 1, a, b);
        }
    }
    TransferMatrix::from_raw(m)
}

/// Writes `[[a, b], [-b, a]]` at rows/columns `first..first + 2`.
pub(crate) fn set_rotation_block(m: &mut Matrix4<f64>, first: usize, a: f64, b: f64) {
    m[(first, first)] = a;
    m[(first, first + 1)] = b;
    m[(first + 1, first)] = -b;
    m[(first + 1, first + 1)] = a;
}

/// System states after each collision together with the outgoing
/// environment qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTrajectory {
    states: Vec<QubitState>,
    reservoir_out: Vec<QubitState>,
}

impl DiscreteTrajectory {
    /// `states()[k]` is the system after `k` collisions.
    pub fn states(&self) -> &[QubitState] {
        &self.states
    }

    /// `reservoir_out()[k]` is environment qubit `k` after its collision.
    pub fn reservoir_out(&self) -> &[QubitState] {
        &self.reservoir_out
    }

    pub fn final_state(&self) -> QubitState {
        *self.states.last().expect("trajectory holds the initial state")
    }

    pub fn collisions(&self) -> usize {
        self.reservoir_out.len()
    }
}

/// Runs `n` exact collisions, each with a fresh environment qubit.
pub fn simulate_discrete(spec: &CollisionSpec, initial: &QubitState, n: usize) -> DiscreteTrajectory {
    let u = build_unitary(spec);
    let mut states = Vec::with_capacity(n + 1);
    let mut reservoir_out = Vec::with_capacity(n);
    states.push(*initial);
    let mut current = *initial;
    for _ in 0..n {
        let (system, environment) = collide(&u, &current, &spec.reservoir);
        states.push(system);
        reservoir_out.push(environment);
        current = system;
    }
    DiscreteTrajectory { states, reservoir_out }
}

/// Largest Bloch distance to `reservoir` over the final system state and
/// every outgoing environment qubit.
pub fn homogenization_delta(traj: &DiscreteTrajectory, reservoir: &QubitState) -> f64 {
    std::iter::once(traj.final_state())
        .chain(traj.reservoir_out.iter().copied())
        .map(|s| s.distance(reservoir))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, power};
    use crate::linalg::max_abs_diff;
    use std::f64::consts::FRAC_PI_4;

    fn state(x: f64, y: f64, z: f64) -> QubitState {
        QubitState::from_components(x, y, z).unwrap()
    }

    fn spec(i: Interaction, eta: f64, reservoir: QubitState) -> CollisionSpec {
        CollisionSpec::new(i, eta, 1.0, reservoir).unwrap()
    }

    fn max_abs4(m: &Matrix4<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn spec_validation() {
        let xi = QubitState::maximally_mixed();
        assert!(CollisionSpec::new(Interaction::PartialSwap, -0.1, 1.0, xi).is_err());
        assert!(CollisionSpec::new(Interaction::PartialSwap, 1.6, 1.0, xi).is_err());
        assert!(CollisionSpec::new(Interaction::PartialSwap, FRAC_PI_2, 1.0, xi).is_ok());
        assert!(CollisionSpec::new(Interaction::PartialSwap, 0.3, 0.0, xi).is_err());
        assert!("cnot-middle".parse::<Interaction>().is_err());
        for i in Interaction::ALL {
            assert_eq!(i.as_str().parse::<Interaction>().unwrap(), i);
        }
    }

    #[test]
    fn unitary_examples() {
        let xi = QubitState::maximally_mixed();
        let u0 = build_unitary(&spec(Interaction::PartialSwap, 0.0, xi));
        assert_eq!(*u0.matrix(), Matrix4::identity());

        let u = build_unitary(&spec(Interaction::PartialSwap, FRAC_PI_2, xi));
        let expected = swap_matrix() * Complex::new(0.0, 1.0);
        assert!(max_abs4(&(u.matrix() - expected)) < 1e-15);

        let u = build_unitary(&spec(Interaction::CnotTarget, FRAC_PI_4, xi));
        let expected = (Matrix4::identity() + cnot_matrix(false) * Complex::new(0.0, 1.0))
            * Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!(max_abs4(&(u.matrix() - expected)) < 1e-15);
        assert!(TwoQubitUnitary::new(*u.matrix()).is_ok());
        let defect = max_abs4(&(u.matrix() * u.matrix().adjoint() - Matrix4::identity()));
        assert!(defect < 1e-15);
    }

    #[test]
    fn cnot_roles() {
        let idx = |s: usize, e: usize| 2 * s + e;
        // |s=0, e=1⟩: environment control fires on the system target.
        let target = cnot_matrix(false);
        assert_eq!(target[(idx(1, 1), idx(0, 1))], Complex::new(1.0, 0.0));
        // |s=1, e=0⟩: system control flips the environment.
        let control = cnot_matrix(true);
        assert_eq!(control[(idx(1, 1), idx(1, 0))], Complex::new(1.0, 0.0));
    }

    #[test]
    fn collide_examples() {
        let sys = state(0.1, -0.3, 0.2);
        let env = state(0.0, 0.25, -0.4);
        let (a, b) = collide(&TwoQubitUnitary::identity(), &sys, &env);
        assert!(a.distance(&sys) < 1e-15 && b.distance(&env) < 1e-15);

        let full = build_unitary(&spec(Interaction::PartialSwap, FRAC_PI_2, env));
        let (a, b) = collide(&full, &sys, &env);
        assert!(a.distance(&env) < 1e-15 && b.distance(&sys) < 1e-15);

        let sys = state(0.5, 0.0, 0.0);
        let env = state(0.0, 0.0, 0.5);
        let sp = spec(Interaction::PartialSwap, FRAC_PI_4, env);
        let (a, _) = collide(&build_unitary(&sp), &sys, &env);
        let analytic = apply(&induced_map(&sp), &sys).unwrap();
        assert!(a.distance(&analytic) < 1e-15);
        // c = s = 1/√2: c²r = (1/4, 0, 0), s²t = (0, 0, 1/4),
        // −2cs t×r = −(0, 1/4, 0).
        assert!((a.bloch() - nalgebra::Vector3::new(0.25, -0.25, 0.25)).norm() < 1e-15);
    }

    #[test]
    fn induced_map_examples() {
        let xi = state(0.1, 0.2, -0.3);
        let id = induced_map(&spec(Interaction::PartialSwap, 0.0, xi));
        assert_eq!(id, TransferMatrix::identity());

        let ground = state(0.0, 0.0, 0.5);
        let m = induced_map(&spec(Interaction::CnotTarget, 0.8, ground));
        assert!(max_abs_diff(m.matrix(), &Matrix4::identity()) < 1e-15);

        let plus = state(0.5, 0.0, 0.0);
        let sp = spec(Interaction::CnotControl, 0.8, plus);
        assert!(max_abs_diff(induced_map(&sp).matrix(), &Matrix4::identity()) < 1e-15);
        let oracle = collision_channel(&build_unitary(&sp), &plus);
        assert!(max_abs_diff(oracle.matrix(), &Matrix4::identity()) < 1e-15);
    }

    #[test]
    fn induced_map_matches_oracle() {
        let xi = state(0.1, -0.2, 0.3);
        for i in Interaction::ALL {
            for eta in [0.0, 0.3, 0.7, 1.2, FRAC_PI_2] {
                let sp = spec(i, eta, xi);
                let oracle = collision_channel(&build_unitary(&sp), &xi);
                let diff = max_abs_diff(oracle.matrix(), induced_map(&sp).matrix());
                assert!(diff < 1e-15, "{i} eta={eta}: {diff}");
            }
        }
    }

    #[test]
    fn zero_coupling_trajectory_is_constant() {
        let initial = state(0.3, 0.1, -0.2);
        let traj = simulate_discrete(&spec(Interaction::PartialSwap, 0.0, state(0.0, 0.0, 0.5)), &initial, 5);
        assert_eq!(traj.states().len(), 6);
        assert_eq!(traj.reservoir_out().len(), 5);
        assert!(traj.states().iter().all(|s| s.distance(&initial) < 1e-15));
    }

    #[test]
    fn trajectory_matches_transfer_powers() {
        let xi = state(-0.2, 0.1, 0.35);
        let initial = state(0.4, -0.1, 0.2);
        for i in Interaction::ALL {
            let sp = spec(i, 0.6, xi);
            let traj = simulate_discrete(&sp, &initial, 30);
            let e = induced_map(&sp);
            for (k, s) in traj.states().iter().enumerate() {
                let analytic = apply(&power(&e, k as u32), &initial).unwrap();
                assert!(s.distance(&analytic) < 1e-12, "{i} k={k}");
            }
        }
    }

    #[test]
    fn pure_reservoir_contracts_at_rate_c() {
        let xi = state(0.0, 0.0, 0.5);
        let initial = state(0.2, -0.4, -0.1);
        let sp = spec(Interaction::PartialSwap, 0.5, xi);
        let c = sp.cos_eta();
        let traj = simulate_discrete(&sp, &initial, 40);
        let d0 = initial.distance(&xi);
        for (k, s) in traj.states().iter().enumerate() {
            assert!(s.distance(&xi) <= c.powi(k as i32) * d0 * (1.0 + 1e-10));
        }
    }

    #[test]
    fn delta_examples() {
        let xi = state(0.1, 0.0, 0.3);
        let traj = simulate_discrete(&spec(Interaction::PartialSwap, 0.0, xi), &xi, 4);
        assert!(homogenization_delta(&traj, &xi) < 1e-15);

        let initial = state(-0.3, 0.2, 0.1);
        let traj = simulate_discrete(&spec(Interaction::PartialSwap, FRAC_PI_2, xi), &initial, 1);
        assert!(traj.final_state().distance(&xi) < 1e-15);
        assert!(traj.reservoir_out()[0].distance(&initial) < 1e-15);
        assert!((homogenization_delta(&traj, &xi) - initial.distance(&xi)).abs() < 1e-15);
    }

    #[test]
    fn system_distance_decreases_monotonically() {
        let xi = state(0.0, 0.0, 0.5);
        let initial = state(0.5, 0.0, 0.0);
        let sp = spec(Interaction::PartialSwap, FRAC_PI_4, xi);
        let traj = simulate_discrete(&sp, &initial, 30);
        let d: Vec<f64> = traj.states().iter().map(|s| s.distance(&xi)).collect();
        assert!(d.windows(2).all(|w| w[1] < w[0]));
    }
}

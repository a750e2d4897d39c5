//! Property tests of the qubit state layer.

use nalgebra::Vector3;
use proptest::prelude::*;
use qcollide::{
    bloch_to_density, density_to_bloch, partial_trace, tensor, QubitState, Slot, TwoQubitState,
};

fn bloch_vector() -> impl Strategy<Value = Vector3<f64>> {
    (0.0..=0.5f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(r, theta, phi)| {
        Vector3::new(r * theta.sin() * phi.cos(), r * theta.sin() * phi.sin(), r * theta.cos())
    })
}

fn state() -> impl Strategy<Value = QubitState> {
    bloch_vector().prop_map(|r| QubitState::new(r).unwrap())
}

fn trace4(s: &TwoQubitState) -> f64 {
    s.matrix().trace().re
}

proptest! {
    #[test]
    fn bloch_density_round_trip(s in state()) {
        let back = density_to_bloch(&bloch_to_density(&s));
        prop_assert!((back.bloch() - s.bloch()).amax() <= 1e-15);
    }

    #[test]
    fn purity_matches_bloch_length(s in state()) {
        let rho = *bloch_to_density(&s).matrix();
        let tr_sq = (rho * rho).trace().re;
        prop_assert!((tr_sq - s.purity()).abs() <= 1e-14);
        prop_assert!((s.purity() - (0.5 + 2.0 * s.bloch().norm_squared())).abs() <= 1e-15);
    }

    #[test]
    fn partial_traces_recover_factors(a in state(), b in state()) {
        let joint = tensor(&bloch_to_density(&a), &bloch_to_density(&b));
        prop_assert!((trace4(&joint) - 1.0).abs() <= 1e-14);
        let sys = partial_trace(&joint, Slot::System);
        let env = partial_trace(&joint, Slot::Environment);
        prop_assert!((density_to_bloch(&sys).bloch() - a.bloch()).amax() <= 1e-14);
        prop_assert!((density_to_bloch(&env).bloch() - b.bloch()).amax() <= 1e-14);
        for m in [sys.matrix(), env.matrix()] {
            prop_assert!((m - m.adjoint()).camax() <= 1e-15);
            prop_assert!((m.trace().re - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn tensor_purity_is_multiplicative(a in state(), b in state()) {
        let joint = *tensor(&bloch_to_density(&a), &bloch_to_density(&b)).matrix();
        let purity = (joint * joint).trace().re;
        prop_assert!((purity - a.purity() * b.purity()).abs() <= 1e-14);
    }
}

#[test]
fn states_outside_the_ball_are_rejected() {
    assert!(QubitState::from_components(0.5, 0.0, 1e-3).is_err());
    assert!(QubitState::from_components(f64::NAN, 0.0, 0.0).is_err());
    assert!(QubitState::from_components(0.0, 0.0, -0.5).is_ok());
}

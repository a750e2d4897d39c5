//! Sweeps comparing closed forms against exact two-qubit simulation and
//! against each other.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix2, Vector3};
use qcollide::collisions::collision_channel;
use qcollide::linalg::max_abs_diff;
use qcollide::semigroup::{continuous_map, generator_analytic, rates_for};
use qcollide::{
    build_unitary, collide, generator_numeric, homogenization_rates, induced_map,
    is_completely_positive, power, simulate_discrete, CollisionSpec, Interaction, QubitState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut impl Rng) -> QubitState {
    loop {
        let r = Vector3::new(
            rng.random_range(-0.5..=0.5),
            rng.random_range(-0.5..=0.5),
            rng.random_range(-0.5..=0.5),
        );
        if r.norm() <= 0.5 {
            return QubitState::new(r).unwrap();
        }
    }
}

fn random_spec(rng: &mut impl Rng, interaction: Interaction) -> CollisionSpec {
    let eta = rng.random_range(0.0..=FRAC_PI_2);
    let tau = rng.random_range(0.1..3.0);
    CollisionSpec::new(interaction, eta, tau, random_state(rng)).unwrap()
}

#[test]
fn closed_form_matches_two_qubit_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..1000 {
        let interaction = Interaction::ALL[i % 3];
        let spec = random_spec(&mut rng, interaction);
        let rho = random_state(&mut rng);
        let oracle = collision_channel(&build_unitary(&spec), &spec.reservoir());
        let analytic = induced_map(&spec);
        assert!(max_abs_diff(oracle.matrix(), analytic.matrix()) <= 1e-12, "{spec:?}");

        let (sys, _) = collide(&build_unitary(&spec), &rho, &spec.reservoir());
        let predicted = analytic.apply_bloch(&rho.bloch());
        assert!((sys.bloch() - predicted).amax() <= 1e-12);
    }
}

fn block_singular_values(m: &nalgebra::Matrix4<f64>, i: usize, j: usize) -> (f64, f64) {
    let block = Matrix2::new(m[(i, i)], m[(i, j)], m[(j, i)], m[(j, j)]);
    let sv = block.singular_values();
    (sv[0], sv[1])
}

#[test]
fn cnot_blocks_contract_by_the_derived_factor() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let spec = random_spec(&mut rng, Interaction::CnotTarget);
        let s = spec.sin_eta();
        let xi = spec.reservoir();
        let expected = (1.0 - 4.0 * s * s * xi.excited_population() * xi.ground_population()).sqrt();
        let oracle = collision_channel(&build_unitary(&spec), &xi);
        let (a, b) = block_singular_values(oracle.matrix(), 2, 3);
        assert!((a - expected).abs() <= 1e-12 && (b - expected).abs() <= 1e-12);

        let spec = random_spec(&mut rng, Interaction::CnotControl);
        let (c, s) = (spec.cos_eta(), spec.sin_eta());
        let x = spec.reservoir().sigma_x_expectation();
        let expected = (c * c + s * s * x * x).sqrt();
        let oracle = collision_channel(&build_unitary(&spec), &spec.reservoir());
        let (a, b) = block_singular_values(oracle.matrix(), 1, 2);
        assert!((a - expected).abs() <= 1e-12 && (b - expected).abs() <= 1e-12);
    }
}

#[test]
fn decay_is_at_most_twice_as_fast_as_decoherence() {
    for i in 0..40 {
        let eta = 0.01 + (FRAC_PI_2 - 0.02) * f64::from(i) / 39.0;
        for j in 0..=20 {
            let w = -0.5 + f64::from(j) / 20.0;
            let reservoir = QubitState::from_components(0.0, 0.0, w).unwrap();
            let spec = CollisionSpec::new(Interaction::PartialSwap, eta, 1.0, reservoir).unwrap();
            let rates = homogenization_rates(&spec).unwrap();
            assert!(rates.gamma1() <= 2.0 * rates.gamma2() + 1e-12);
            if w.abs() == 0.5 {
                assert!((rates.gamma1() - 2.0 * rates.gamma2()).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn continuous_family_passes_through_collision_powers() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for interaction in Interaction::ALL {
        for _ in 0..5 {
            let eta = rng.random_range(0.1..1.4);
            let spec = CollisionSpec::new(interaction, eta, 0.7, random_state(&mut rng)).unwrap();
            let rates = rates_for(&spec).unwrap();
            let step = induced_map(&spec);
            for n in 1..=50u32 {
                let defect = max_abs_diff(
                    power(&step, n).matrix(),
                    continuous_map(&rates, f64::from(n) * spec.tau()).matrix(),
                );
                assert!(defect <= 1e-10, "{interaction} n={n} defect={defect}");
            }
        }
    }
}

#[test]
fn collision_derived_maps_are_completely_positive() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for interaction in Interaction::ALL {
        for _ in 0..10 {
            let spec = random_spec(&mut rng, interaction);
            if spec.eta() > 1.5 {
                continue;
            }
            let rates = rates_for(&spec).unwrap();
            for k in 0..=10 {
                let t = f64::from(k) * spec.tau() * 0.37;
                assert!(is_completely_positive(&continuous_map(&rates, t), 1e-12).completely_positive);
            }
        }
    }
}

#[test]
fn principal_logarithm_recovers_the_analytic_generator() {
    let reservoir = QubitState::from_components(0.1, -0.2, 0.3).unwrap();
    for interaction in Interaction::ALL {
        let spec = CollisionSpec::new(interaction, 0.6, 1.3, reservoir).unwrap();
        let rates = rates_for(&spec).unwrap();
        let numeric = generator_numeric(&induced_map(&spec), spec.tau()).unwrap();
        let defect = max_abs_diff(numeric.matrix(), generator_analytic(&rates).matrix());
        assert!(defect <= 1e-9, "{interaction}: {defect}");
    }
}

#[test]
fn pure_excited_reservoir_homogenizes_the_system() {
    let reservoir = QubitState::from_components(0.0, 0.0, 0.5).unwrap();
    let initial = QubitState::from_components(0.0, 0.0, -0.5).unwrap();
    let spec = CollisionSpec::new(Interaction::PartialSwap, 0.4, 1.0, reservoir).unwrap();
    let traj = simulate_discrete(&spec, &initial, 200);
    assert!(traj.final_state().distance(&reservoir) < 1e-6);
    let rates = homogenization_rates(&spec).unwrap();
    assert!((rates.gamma1() - (-2.0 * 0.4f64.cos().ln())).abs() <= 1e-15);
}

use std::fmt::Write as _;
use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use qcollide::channels::is_completely_positive;
use qcollide::collisions::collision_channel;
use qcollide::linalg::max_abs_diff;
use qcollide::semigroup::{rates_for, ContinuousFamily};
use qcollide::{
    build_unitary, generator_numeric, gks_positivity, induced_map, lindblad_from_generator,
    simulate_discrete, Error, Interaction, Rates, TransferMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const ORACLE_TOL: f64 = 1e-12;
pub const INTERPOLATION_TOL: f64 = 1e-10;
pub const SEMIGROUP_TOL: f64 = 1e-10;
pub const CP_TOL: f64 = 1e-12;
pub const RATE_BOUND_TOL: f64 = 1e-12;
pub const GENERATOR_TOL: f64 = 1e-9;
pub const SEMIGROUP_SAMPLES: usize = 1000;
pub const CP_SAMPLES: usize = 21;
const CHECK_SEED: u64 = 0x5eed;

pub const CSV_HEADER: &str = "kind,step,time,rx,ry,rz,purity,dist_to_fixed_point";

fn rates(cfg: &RunConfig) -> Result<Rates, CliError> {
    rates_for(&cfg.spec()).map_err(|e| match e {
        Error::NonInvertible => CliError::NonInvertible,
        other => CliError::Config(other.to_string()),
    })
}

/// 17 significant digits, never a negative zero.
fn num(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}

/// Point the trajectory settles on: the reservoir state for the swap, the
/// projection of the initial state onto the dephasing axis otherwise.
fn fixed_point(cfg: &RunConfig) -> Vector3<f64> {
    let axis = match cfg.interaction {
        Interaction::PartialSwap => return cfg.reservoir.bloch(),
        Interaction::CnotTarget => Vector3::x(),
        Interaction::CnotControl => Vector3::z(),
    };
    axis * axis.dot(&cfg.initial.bloch())
}

fn csv_row(out: &mut String, cfg: &RunConfig, kind: &str, step: usize, time: f64, r: &Vector3<f64>) {
    let purity = 0.5 + 2.0 * r.norm_squared();
    let dist = (r - fixed_point(cfg)).norm();
    writeln!(
        out,
        "{kind},{step},{},{},{},{},{},{}",
        num(time),
        num(r.x),
        num(r.y),
        num(r.z),
        num(purity),
        num(dist)
    )
    .expect("writing to a String cannot fail");
}

/// Trajectory CSV: discrete rows for every collision (including step 0),
/// then continuous rows sampled every `dt` up to `collisions·τ`. The
/// continuous block is omitted when the collision map is not invertible.
pub fn simulate_csv(cfg: &RunConfig) -> (String, Option<String>) {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    let traj = simulate_discrete(&cfg.spec(), &cfg.initial, cfg.collisions);
    for (n, s) in traj.states().iter().enumerate() {
        csv_row(&mut out, cfg, "discrete", n, n as f64 * cfg.tau, &s.bloch());
    }
    let note = match rates(cfg) {
        Ok(rates) => {
            let horizon = cfg.collisions as f64 * cfg.tau;
            let samples = (horizon / cfg.dt + 1e-9).floor() as usize;
            let r0 = cfg.initial.bloch();
            for k in 0..=samples {
                let t = k as f64 * cfg.dt;
                let r = rates.map_at(t).apply_bloch(&r0);
                csv_row(&mut out, cfg, "continuous", k, t, &r);
            }
            None
        }
        Err(_) => Some("non-invertible collision map: continuous rows omitted".to_string()),
    };
    (out, note)
}

pub fn simulate(cfg: &RunConfig, out_path: Option<&std::path::Path>) -> Result<(), CliError> {
    let (csv, note) = simulate_csv(cfg);
    if let Some(note) = note {
        eprintln!("note: {note}");
    }
    match out_path {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(csv.as_bytes())
            .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}"))),
    }
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum RatesReport {
    Homogenization { gamma1: f64, gamma2: f64, omega: f64 },
    Decoherence { gamma: f64, omega: f64, axis: &'static str },
}

pub fn rates_report(cfg: &RunConfig) -> Result<RatesReport, CliError> {
    Ok(match rates(cfg)? {
        Rates::Homogenization(r) => {
            RatesReport::Homogenization { gamma1: r.gamma1(), gamma2: r.gamma2(), omega: r.omega() }
        }
        Rates::Decoherence(r) => {
            RatesReport::Decoherence { gamma: r.gamma(), omega: r.omega(), axis: r.axis().as_str() }
        }
    })
}

#[derive(Debug, Serialize)]
pub struct LindbladReport {
    pub h: [f64; 3],
    pub d: [[f64; 3]; 3],
    pub e: [[f64; 3]; 3],
    pub c_eigenvalues: [f64; 3],
    pub completely_positive: bool,
}

fn rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)] + 0.0))
}

pub fn lindblad_report(cfg: &RunConfig) -> Result<LindbladReport, CliError> {
    let g = rates(cfg)?.generator();
    let l = lindblad_from_generator(&g).expect("analytic generators have a zero first row");
    let verdict = gks_positivity(&l);
    Ok(LindbladReport {
        h: std::array::from_fn(|k| l.h()[k] + 0.0),
        d: rows(l.d()),
        e: rows(l.e()),
        c_eigenvalues: verdict.eigenvalues.map(|v| v + 0.0),
        completely_positive: verdict.completely_positive,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub applicable: bool,
    pub passed: bool,
    pub defect: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    fn measured(id: &'static str, name: &'static str, defect: f64, tolerance: f64) -> Self {
        Self { id, name, applicable: true, passed: defect <= tolerance, defect, tolerance }
    }

    fn not_applicable(id: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self { id, name, applicable: false, passed: true, defect: 0.0, tolerance }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub interaction: &'static str,
    pub gamma2_violation_injected: bool,
    pub checks: Vec<CheckOutcome>,
    pub all_passed: bool,
}

/// Runs the six consistency checks on the configured collision model.
///
/// With `inject_violation` the decoherence rate (Γ₂, or Γ for the CNOT
/// families) is halved before the continuous-family checks run.
pub fn check_report(cfg: &RunConfig, inject_violation: bool) -> Result<CheckReport, CliError> {
    let spec = cfg.spec();
    let mut rates = rates(cfg)?;
    if inject_violation {
        rates = match rates {
            Rates::Homogenization(r) => r.with_gamma2(r.gamma2() / 2.0).map(Rates::from),
            Rates::Decoherence(r) => r.with_gamma(r.gamma() / 2.0).map(Rates::from),
        }
        .expect("halving a valid rate keeps it valid");
    }
    let e = induced_map(&spec);
    let tau = cfg.tau;
    let mut checks = Vec::with_capacity(6);

    let oracle = collision_channel(&build_unitary(&spec), &cfg.reservoir);
    checks.push(CheckOutcome::measured(
        "a",
        "oracle_analytic_map",
        max_abs_diff(oracle.matrix(), e.matrix()),
        ORACLE_TOL,
    ));

    let mut power = *TransferMatrix::identity().matrix();
    let mut interpolation = 0.0f64;
    for n in 1..=cfg.collisions.max(1) {
        power *= e.matrix();
        let continuous = rates.map_at(n as f64 * tau);
        interpolation = interpolation.max(max_abs_diff(&power, continuous.matrix()));
    }
    checks.push(CheckOutcome::measured("b", "discrete_continuous", interpolation, INTERPOLATION_TOL));

    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let mut defect = 0.0f64;
    for _ in 0..SEMIGROUP_SAMPLES {
        let t = rng.random_range(0.0..=10.0 * tau);
        let s = rng.random_range(0.0..=10.0 * tau);
        defect = defect.max(rates.semigroup_defect(t, s).expect("sampled times are nonnegative"));
    }
    checks.push(CheckOutcome::measured("c", "semigroup_law", defect, SEMIGROUP_TOL));

    let min_eig = (0..CP_SAMPLES)
        .map(|k| is_completely_positive(&rates.map_at(k as f64 * tau / 2.0), CP_TOL).min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    checks.push(CheckOutcome::measured("d", "choi_complete_positivity", (-min_eig).max(0.0), CP_TOL));

    checks.push(match rates {
        Rates::Homogenization(r) => CheckOutcome::measured(
            "e",
            "rate_bound",
            (r.gamma1() - 2.0 * r.gamma2()).max(0.0),
            RATE_BOUND_TOL,
        ),
        Rates::Decoherence(_) => CheckOutcome::not_applicable("e", "rate_bound", RATE_BOUND_TOL),
    });

    checks.push(match generator_numeric(&e, tau) {
        Ok(numeric) => CheckOutcome::measured(
            "f",
            "generator_analytic_numeric",
            max_abs_diff(numeric.matrix(), rates.generator().matrix()),
            GENERATOR_TOL,
        ),
        Err(Error::BranchAmbiguity | Error::Defective { .. }) => {
            CheckOutcome::not_applicable("f", "generator_analytic_numeric", GENERATOR_TOL)
        }
        Err(_) => return Err(CliError::NonInvertible),
    });

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(CheckReport {
        interaction: cfg.interaction.as_str(),
        gamma2_violation_injected: inject_violation,
        checks,
        all_passed,
    })
}

/// Human-readable summary line for one check.
pub fn describe(c: &CheckOutcome) -> String {
    let status = match (c.applicable, c.passed) {
        (false, _) => "SKIP",
        (true, true) => "PASS",
        (true, false) => "FAIL",
    };
    format!("{status} ({}) {}: defect {:.3e} (tolerance {:.0e})", c.id, c.name, c.defect, c.tolerance)
}

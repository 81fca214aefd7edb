//! Steady states from the null space against long RK4 evolution.

use deit::hamiltonian::eigensystem;
use deit::liouville::{self, evolve, steady_state, DensityMatrix, MasterEquation};
use deit::{Relaxation, TripodParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_params(rng: &mut ChaCha8Rng) -> TripodParams {
    TripodParams {
        g_p: rng.gen_range(0.2..1.5),
        g_c: rng.gen_range(0.5..3.0),
        delta_c: rng.gen_range(-4.0..4.0),
        delta: rng.gen_range(0.0..4.0),
        alpha: rng.gen_range(0.05..0.5),
        beta: rng.gen_range(0.5..1.5),
    }
}

/// Slowest nonzero decay rate and largest eigenvalue modulus of the generator.
fn rates(eq: &MasterEquation) -> (f64, f64) {
    let l = eq.liouvillian().unwrap();
    let es = eigensystem(&l.matrix, false).unwrap();
    let mut decay: Vec<f64> = es.values.iter().map(|z| -z.re).collect();
    decay.sort_by(f64::total_cmp);
    let radius = es.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (decay[1], radius)
}

fn check_against_evolution(p: &TripodParams, relaxation: Relaxation) {
    let eq = MasterEquation::tripod(p, relaxation).unwrap();
    let l = eq.liouvillian().unwrap();
    let rho = steady_state(&l).unwrap();
    let m = rho.matrix();
    assert!((m.trace().re - 1.0).abs() <= 1e-10 && m.trace().im.abs() <= 1e-10);
    assert!((m - m.adjoint()).iter().all(|z| z.norm() <= 1e-10));
    assert!(rho.min_eigenvalue().unwrap() >= -1e-9);
    assert!((&l.matrix * liouville::vectorize(m)).norm() <= 1e-10);

    let (gap, radius) = rates(&eq);
    assert!(gap > 1e-3, "{p:?}: gap {gap}");
    let t = 30.0 / gap;
    let dt = (1.0 / radius).min(0.05);
    let evolved = evolve(&eq, &DensityMatrix::maximally_mixed(4), t, dt).unwrap();
    let worst = (evolved.matrix() - m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{relaxation:?} {p:?}: {worst:e}");
}

#[test]
fn random_steady_states_match_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        check_against_evolution(&p, Relaxation::default());
    }
}

#[test]
fn every_model_matches_evolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for relaxation in Relaxation::ALL {
        for _ in 0..4 {
            check_against_evolution(&random_params(&mut rng), relaxation);
        }
    }
}

#[test]
fn steady_state_is_independent_of_start() {
    let p = TripodParams { g_p: 0.7, g_c: 2.0, delta_c: 1.0, delta: 1.5, alpha: 0.2, beta: 1.0 };
    let eq = MasterEquation::tripod(&p, Relaxation::Exchange).unwrap();
    let (gap, radius) = rates(&eq);
    let t = 30.0 / gap;
    let dt = (1.0 / radius).min(0.05);
    let a = evolve(&eq, &DensityMatrix::basis_state(4, 0), t, dt).unwrap();
    let b = evolve(&eq, &DensityMatrix::basis_state(4, 2), t, dt).unwrap();
    assert!((a.matrix() - b.matrix()).iter().all(|z| z.norm() <= 1e-6));
}

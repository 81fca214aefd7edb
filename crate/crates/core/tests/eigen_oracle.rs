//! Eigenvalues checked against roots of the characteristic polynomial, built
//! independently with Faddeev-LeVerrier and solved with Durand-Kerner.

use deit::hamiltonian::{build_tripod_hamiltonian, eigensystem, ComplexMatrix};
use deit::{Complex64, TripodParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Coefficients of det(λI − A), lowest order first.
fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.nrows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let identity = ComplexMatrix::identity(n, n);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &identity * coeffs[n - k + 1];
        let am = a * &m;
        coeffs[n - k] = -am.trace() / k as f64;
    }
    coeffs
}

fn eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound / 2.0).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            let step = eval(coeffs, roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta <= 1e-15 * bound {
            break;
        }
    }
    roots
}

fn assert_matches(values: &[Complex64], roots: &[Complex64], scale: f64) {
    assert_eq!(values.len(), roots.len());
    let mut used = vec![false; roots.len()];
    for v in values {
        let (k, dist) = roots
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, r)| (k, (r - v).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        assert!(dist <= 1e-8 * scale, "eigenvalue {v} has no root within tolerance ({dist:e}); roots {roots:?}");
    }
}

#[test]
fn tripod_eigenvalues_match_characteristic_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let p = TripodParams {
            g_p: rng.gen_range(0.1..3.0),
            g_c: rng.gen_range(0.1..10.0),
            delta_c: rng.gen_range(-15.0..15.0),
            delta: rng.gen_range(0.1..10.0),
            alpha: 0.001,
            beta: 0.666,
        };
        let h = build_tripod_hamiltonian(&p).unwrap();
        let es = eigensystem(&h, true).unwrap();
        let roots = durand_kerner(&characteristic_polynomial(&h));
        let scale = 1.0 + h.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert_matches(&es.values, &roots, scale);
        for v in &es.values {
            assert_eq!(v.im, 0.0, "hermitian path returns real eigenvalues");
        }
    }
}

#[test]
fn general_eigenvalues_match_characteristic_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3, 5, 6] {
        for _ in 0..40 {
            let m = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            let es = eigensystem(&m, false).unwrap();
            let roots = durand_kerner(&characteristic_polynomial(&m));
            assert_matches(&es.values, &roots, 10.0);
        }
    }
}

#[test]
fn oracle_recovers_known_polynomial() {
    let diag = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(-2.0, 0.0),
        Complex64::new(3.5, 0.0),
    ]));
    let coeffs = characteristic_polynomial(&diag);
    // (λ − 1)(λ + 2)(λ − 3.5) = λ³ − 2.5λ² − 5.5λ + 7
    let want = [7.0, -5.5, -2.5, 1.0];
    for (c, w) in coeffs.iter().zip(want) {
        assert!((c - Complex64::new(w, 0.0)).norm() < 1e-12);
    }
}

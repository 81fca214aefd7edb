//! Closed-form probe responses in the weak-probe regime.
//!
//! The single-window kernel is `h₀(x) = x / (g_c² − x(i + x))`; the tripod
//! without ground damping is the average of two such kernels displaced by
//! `±Δ`, and the damped tripod response is the full expression built from the
//! arm terms `h_l` and `h_r`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{LambdaParams, TripodParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexResponse {
    pub value: Complex64,
    /// `(h_l, h_r)` when the expression is built from two arms.
    pub components: Option<(Complex64, Complex64)>,
}

/// Single-window kernel. At `g_c = 0, x = 0` the removable corner is defined
/// as 0.
pub fn h0(x: f64, g_c: f64) -> Complex64 {
    if x == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let denom = Complex64::new(g_c * g_c - x * x, -x);
    Complex64::new(x, 0.0) / denom
}

/// `Im h₀(x) = x² / ((g_c² − x²)² + x²)`
pub fn im_h0(x: f64, g_c: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let d = g_c * g_c - x * x;
    x * x / (d * d + x * x)
}

/// `½[h₀(δ_c − Δ) + h₀(δ_c + Δ)]`
pub fn h_two_lambda(delta_c: f64, delta: f64, g_c: f64) -> Complex64 {
    0.5 * (h0(delta_c - delta, g_c) + h0(delta_c + delta, g_c))
}

/// Damped tripod response with ground relaxation `α` and radiative rate `β`.
pub fn h_full(p: &TripodParams) -> Result<ComplexResponse> {
    let TripodParams { g_c, delta_c: dc, delta: d, alpha: a, beta: b, .. } = *p;
    let g2 = g_c * g_c;
    let prefactor_denom = 9.0 * a * b + 4.0 * (2.0 * a + b) * g2;
    if prefactor_denom == 0.0 {
        return Err(Error::Singular("damped response needs g_c > 0 or alpha > 0 (prefactor denominator is zero)".into()));
    }
    let h_l_num = 3.0 * a * (2.0 * a + I * d - I * dc) + g2 * (a + 2.0 * I * d - 2.0 * I * dc);
    let h_l_den = g2 - (I - d + dc) * (2.0 * I * a - d + dc);
    let h_r_num = 3.0 * a * (2.0 * a - I * d - I * dc) + g2 * (a - 2.0 * I * d - 2.0 * I * dc);
    let h_r_den = g2 - (I + d + dc) * (2.0 * I * a + d + dc);
    if h_l_den == Complex64::new(0.0, 0.0) || h_r_den == Complex64::new(0.0, 0.0) {
        return Err(Error::Singular(format!("arm denominator vanishes at delta_c = {dc}")));
    }
    let h_l = h_l_num / h_l_den;
    let h_r = h_r_num / h_r_den;
    let value = I * b / prefactor_denom * (h_l + h_r);
    Ok(ComplexResponse { value, components: Some((h_l, h_r)) })
}

/// Exact steady-state Λ response `−A/B`, valid at any probe strength.
pub fn lambda_exact(p: &LambdaParams) -> Result<Complex64> {
    let LambdaParams { g_p, g_c, delta_c: dc, delta: d, .. } = *p;
    let x = d - dc;
    let (gp2, gc2) = (g_p * g_p, g_c * g_c);
    let a = gc2 * (gc2 + gp2 - x * (I + d - dc)) * x;
    let b = gc2 * (3.0 * gp2 * gp2 + x * x * (1.0 + d * d - 2.0 * d * dc + dc * dc + 4.0 * gp2))
        + gc2 * gc2 * (3.0 * gp2 - 2.0 * x * x)
        + gc2 * gc2 * gc2
        + gp2 * (gp2 * gp2 + x * x);
    if b == 0.0 {
        return Err(Error::Singular(format!("exact Λ response has B = 0 at delta_c = {dc}, Delta = {d}, g_c = {g_c}, g_p = {g_p}")));
    }
    Ok(-a / b)
}

/// Weak-probe limit of [`lambda_exact`], identical to `h₀(δ_c − Δ)`.
pub fn lambda_weak_probe(delta_c: f64, delta: f64, g_c: f64) -> Complex64 {
    h0(delta_c - delta, g_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tripod(g_c: f64, delta_c: f64, delta: f64, alpha: f64) -> TripodParams {
        TripodParams { g_p: 1e-3, g_c, delta_c, delta, alpha, beta: 0.666 }
    }

    fn grid() -> impl Iterator<Item = f64> {
        (0..=600).map(|k| -15.0 + 0.05 * k as f64)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(h0(0.0, 3.0), Complex64::new(0.0, 0.0));
        assert_eq!(h0(0.0, 0.0), Complex64::new(0.0, 0.0));
        let z = h0(1.0, 5.0);
        assert!((z - Complex64::new(24.0 / 577.0, 1.0 / 577.0)).norm() < 1e-15);
        assert!((h0(5.0, 5.0) - I).norm() < 1e-15);
        // g_c = 0 away from the corner: −1/(i + x).
        assert!((h0(2.0, 0.0) + 1.0 / (I + 2.0)).norm() < 1e-15);
    }

    #[test]
    fn imaginary_part_examples() {
        assert_eq!(im_h0(0.0, 2.0), 0.0);
        for g in [0.5, 1.0, 3.0, 7.5] {
            assert_eq!(im_h0(g, g), 1.0);
            assert_eq!(im_h0(-g, g), 1.0);
        }
        let xs: Vec<f64> = (0..=4000).map(|k| -20.0 + 0.01 * k as f64).collect();
        let best = xs.iter().copied().fold((0.0, f64::MIN), |acc, x| {
            let v = im_h0(x, 3.0);
            if v > acc.1 {
                (x, v)
            } else {
                acc
            }
        });
        assert!((best.0.abs() - 3.0).abs() < 1e-9, "{best:?}");
        let right = xs.iter().copied().filter(|&x| x > 0.0).fold((0.0, f64::MIN), |acc, x| {
            let v = im_h0(x, 3.0);
            if v > acc.1 {
                (x, v)
            } else {
                acc
            }
        });
        let left = xs.iter().copied().filter(|&x| x < 0.0).fold((0.0, f64::MIN), |acc, x| {
            let v = im_h0(x, 3.0);
            if v > acc.1 {
                (x, v)
            } else {
                acc
            }
        });
        assert!((right.0 - left.0 - 6.0).abs() < 1e-9);
    }

    #[test]
    fn two_lambda_examples() {
        assert!((h_two_lambda(0.0, 5.0, 5.0) - I).norm() < 1e-15);
        let z = h_two_lambda(5.0, 5.0, 2.0);
        assert!((z - Complex64::new(-480.0 / 9316.0, 50.0 / 9316.0)).norm() < 1e-15, "{z}");
    }

    #[test]
    fn zero_splitting_reduces_to_single_kernel() {
        for dc in grid() {
            assert!((h_two_lambda(dc, 0.0, 5.0) - h0(dc, 5.0)).norm() < 1e-15);
        }
        assert_eq!(h_two_lambda(5.0, 0.0, 5.0).im, 1.0);
        assert_eq!(h_two_lambda(-5.0, 0.0, 5.0).im, 1.0);
    }

    #[test]
    fn full_response_approaches_two_lambda() {
        let mut sup = Vec::new();
        for alpha in [1e-6, 1e-9] {
            let worst = grid()
                .map(|dc| (h_full(&tripod(2.0, dc, 5.0, alpha)).unwrap().value - h_two_lambda(dc, 5.0, 2.0)).norm())
                .fold(0.0, f64::max);
            sup.push(worst);
        }
        assert!(sup[0] <= 1e-3 && sup[1] <= 1e-6 && sup[1] < sup[0], "{sup:?}");
    }

    #[test]
    fn full_response_is_absorptive_at_zero_detuning() {
        for (d, g, a) in [(5.0, 2.0, 0.001), (2.5, 5.0, 0.1), (0.0, 3.0, 0.3), (7.5, 1.0, 1e-6)] {
            let r = h_full(&tripod(g, 0.0, d, a)).unwrap();
            assert!(r.value.re.abs() <= 1e-14, "{r:?}");
            let (hl, hr) = r.components.unwrap();
            assert!((hr - hl.conj()).norm() <= 1e-12);
        }
    }

    #[test]
    fn full_response_rejects_undriven_undamped() {
        assert!(matches!(h_full(&tripod(0.0, 1.0, 5.0, 0.0)), Err(Error::Singular(_))));
    }

    #[test]
    fn damping_keeps_windows_and_lowers_peaks() {
        let spectrum =
            |alpha: f64| -> Vec<(f64, f64)> { grid().map(|dc| (dc, h_full(&tripod(5.0, dc, 2.5, alpha)).unwrap().value.im)).collect() };
        let minima =
            |s: &[(f64, f64)]| -> Vec<f64> { s.windows(3).filter(|w| w[1].1 < w[0].1 && w[1].1 < w[2].1).map(|w| w[1].0).collect() };
        let low = spectrum(0.001);
        let high = spectrum(0.1);
        let (a, b) = (minima(&low), minima(&high));
        assert_eq!(a.len(), 3);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 0.02, "{a:?} {b:?}");
        }
        let peak = |s: &[(f64, f64)]| s.iter().map(|x| x.1).fold(f64::MIN, f64::max);
        assert!(peak(&high) < peak(&low));
    }

    #[test]
    fn lambda_exact_vanishes_on_two_photon_resonance() {
        let p = LambdaParams { g_p: 0.5, g_c: 5.0, delta_c: 5.0, delta: 5.0, alpha: 0.0, beta: 1.0 };
        assert_eq!(lambda_exact(&p).unwrap().norm(), 0.0);
    }

    #[test]
    fn lambda_exact_weak_probe_limit() {
        for (g_p, bound) in [(1e-2, 1e-3), (1e-4, 1e-6)] {
            let worst = grid()
                .map(|dc| {
                    let p = LambdaParams { g_p, g_c: 5.0, delta_c: dc, delta: 5.0, alpha: 0.0, beta: 1.0 };
                    (lambda_exact(&p).unwrap() - lambda_weak_probe(dc, 5.0, 5.0)).norm()
                })
                .fold(0.0, f64::max);
            assert!(worst <= bound, "g_p={g_p}: {worst}");
        }
    }

    #[test]
    fn lambda_exact_is_absorptive() {
        for dc in grid() {
            let p = LambdaParams { g_p: 0.5, g_c: 5.0, delta_c: dc, delta: 5.0, alpha: 0.0, beta: 1.0 };
            assert!(lambda_exact(&p).unwrap().im >= -1e-12);
        }
    }

    #[test]
    fn lambda_exact_singular_point() {
        let p = LambdaParams { g_p: 0.0, g_c: 0.0, delta_c: 1.0, delta: 1.0, alpha: 0.0, beta: 1.0 };
        assert!(matches!(lambda_exact(&p), Err(Error::Singular(_))));
    }

    #[test]
    fn weak_probe_peak() {
        assert!((lambda_weak_probe(5.0, 5.0, 3.0)).norm() == 0.0);
        assert!((lambda_weak_probe(8.0, 5.0, 3.0).im - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn im_h0_formula_matches_kernel(x in -30.0f64..30.0, g in 0.01f64..10.0) {
            prop_assert!((im_h0(x, g) - h0(x, g).im).abs() <= 1e-14);
            prop_assert!(im_h0(x, g) <= 1.0);
        }

        #[test]
        fn weak_probe_is_kernel(dc in -30.0f64..30.0, d in 0.0f64..10.0, g in 0.01f64..10.0) {
            prop_assert_eq!(lambda_weak_probe(dc, d, g), h0(dc - d, g));
        }

        #[test]
        fn two_lambda_parity(dc in -20.0f64..20.0, d in 0.0f64..10.0, g in 0.01f64..10.0) {
            let a = h_two_lambda(dc, d, g);
            let b = h_two_lambda(-dc, d, g);
            prop_assert!((a.im - b.im).abs() <= 1e-14);
            prop_assert!((a.re + b.re).abs() <= 1e-14);
        }

        #[test]
        fn full_response_parity(dc in -20.0f64..20.0, d in 0.0f64..10.0, g in 0.1f64..10.0, a in 0.0f64..0.5) {
            let h = h_full(&tripod(g, dc, d, a)).unwrap().value;
            let m = h_full(&tripod(g, -dc, d, a)).unwrap().value;
            prop_assert!((m + h.conj()).norm() <= 1e-12 * (1.0 + h.norm()));
        }
    }

    #[test]
    fn unit_absorption_only_at_peaks() {
        for g in [0.5, 2.0, 5.0] {
            for k in 0..=20000 {
                let x = -20.0 + 0.002 * k as f64;
                let v = im_h0(x, g);
                assert!(v <= 1.0);
                if (x.abs() - g).abs() > 1e-9 {
                    assert!(v < 1.0, "x={x}, g={g}");
                }
            }
        }
    }
}

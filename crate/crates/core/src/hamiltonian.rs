//! Rotating-frame Hamiltonians of the tripod and Λ schemes, dark-state
//! identification, and the closed-form cubic/eigenvector expressions.
//!
//! Basis order for the tripod is `|1⟩, |2⟩, |3⟩, |4⟩` with `|1⟩` excited; the
//! probe drives `|1⟩↔|2⟩` and `|1⟩↔|4⟩`, the coupling drives `|1⟩↔|3⟩`. With the
//! coupling resonant and equal Zeeman spacings the diagonal is
//! `(0, δ_c − Δ, 0, δ_c + Δ)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigen_residual, fix_phase, real};
pub use crate::linalg::{eigensystem, ComplexMatrix, ComplexVector, EigenSystem};
use crate::model::{LambdaParams, TripodParams};

pub const EXCITED: usize = 0;
pub const PROBE_LEFT: usize = 1;
pub const COUPLING_GROUND: usize = 2;
pub const PROBE_RIGHT: usize = 3;

/// Size of the off-diagonal drive element for a Rabi frequency `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriveConvention {
    /// `−g/2`, the textbook rotating-wave form.
    #[default]
    HalfRabi,
    /// `−g`. This is the normalization under which the steady-state response
    /// coincides with the closed-form kernel `x / (g_c² − x(i + x))`.
    FullRabi,
}

impl DriveConvention {
    pub fn factor(self) -> f64 {
        match self {
            DriveConvention::HalfRabi => 0.5,
            DriveConvention::FullRabi => 1.0,
        }
    }
}

pub fn build_tripod_hamiltonian(p: &TripodParams) -> Result<ComplexMatrix> {
    tripod_hamiltonian_with(p, DriveConvention::HalfRabi)
}

pub fn tripod_hamiltonian_with(p: &TripodParams, drive: DriveConvention) -> Result<ComplexMatrix> {
    let p = p.validate()?;
    let k = drive.factor();
    let mut h = ComplexMatrix::zeros(4, 4);
    h[(PROBE_LEFT, PROBE_LEFT)] = real(p.delta_c - p.delta);
    h[(PROBE_RIGHT, PROBE_RIGHT)] = real(p.delta_c + p.delta);
    for (state, g) in [(PROBE_LEFT, p.g_p), (COUPLING_GROUND, p.g_c), (PROBE_RIGHT, p.g_p)] {
        h[(EXCITED, state)] = real(-k * g);
        h[(state, EXCITED)] = real(-k * g);
    }
    Ok(h)
}

pub mod lambda {
    pub const EXCITED: usize = 0;
    pub const PROBE_GROUND: usize = 1;
    pub const COUPLING_GROUND: usize = 2;
}

/// Λ scheme in the basis `|e⟩, |g₁⟩, |g₃⟩`, diagonal `(0, δ_c − Δ, 0)`.
pub fn build_lambda_hamiltonian(p: &LambdaParams) -> Result<ComplexMatrix> {
    lambda_hamiltonian_with(p, DriveConvention::HalfRabi)
}

pub fn lambda_hamiltonian_with(p: &LambdaParams, drive: DriveConvention) -> Result<ComplexMatrix> {
    use lambda::*;
    let p = p.validate()?;
    let k = drive.factor();
    let mut h = ComplexMatrix::zeros(3, 3);
    h[(PROBE_GROUND, PROBE_GROUND)] = real(p.delta_c - p.delta);
    for (state, g) in [(PROBE_GROUND, p.g_p), (COUPLING_GROUND, p.g_c)] {
        h[(EXCITED, state)] = real(-k * g);
        h[(state, EXCITED)] = real(-k * g);
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub struct DarkState {
    pub eigenvalue: Complex64,
    pub vector: ComplexVector,
    /// `|⟨1|v⟩|`
    pub excited_amplitude: f64,
    /// `|⟨3|v⟩|`
    pub coupling_amplitude: f64,
}

impl DarkState {
    /// No weight on the excited state nor on the coupling ground state.
    pub fn is_ideal(&self, tol: f64) -> bool {
        self.excited_amplitude <= tol && self.coupling_amplitude <= tol
    }
}

/// Eigenpairs of a tripod eigensystem with no excited-state amplitude.
///
/// Degenerate eigenvalues leave the eigenvectors free within their subspace,
/// so each degenerate cluster is first rotated so that excited-state weight is
/// carried by as few vectors as possible, then coupling-ground weight likewise.
/// Ideal dark states therefore come out as separate vectors whenever the
/// subspace contains one.
pub fn find_dark_states(es: &EigenSystem, tol: f64) -> Vec<DarkState> {
    let n = es.len();
    let scale = es.values.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let cluster_tol = 1e-9 * scale;
    let mut found = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (es.values[end] - es.values[start]).norm() <= cluster_tol {
            end += 1;
        }
        let basis = rotate_cluster(es, start, end);
        let eigenvalue = es.values[start..end].iter().sum::<Complex64>() / real((end - start) as f64);
        for mut v in basis {
            fix_phase(&mut v);
            let excited_amplitude = v[EXCITED].norm();
            if excited_amplitude <= tol {
                let coupling_amplitude = v.get(COUPLING_GROUND).map_or(0.0, |z| z.norm());
                found.push(DarkState { eigenvalue, vector: v, excited_amplitude, coupling_amplitude });
            }
        }
        start = end;
    }
    found
}

fn rotate_cluster(es: &EigenSystem, start: usize, end: usize) -> Vec<ComplexVector> {
    let k = end - start;
    let vectors: Vec<ComplexVector> = (start..end).map(|i| es.vector(i)).collect();
    if k == 1 {
        return vectors;
    }
    let dim = es.vectors.nrows();
    let row = |state: usize| -> ComplexVector {
        if state >= dim {
            return ComplexVector::zeros(k);
        }
        ComplexVector::from_iterator(k, vectors.iter().map(|v| v[state].conj()))
    };
    // Gram-Schmidt in coefficient space over [excited row, coupling row, e_1..e_k].
    let mut seeds = vec![row(EXCITED), row(COUPLING_GROUND)];
    for i in 0..k {
        let mut e = ComplexVector::zeros(k);
        e[i] = real(1.0);
        seeds.push(e);
    }
    let mut coeffs: Vec<ComplexVector> = Vec::with_capacity(k);
    for mut s in seeds {
        for q in &coeffs {
            let overlap = q.dotc(&s);
            s -= q * overlap;
        }
        let len = s.norm();
        if len > 1e-8 {
            coeffs.push(s / real(len));
        }
        if coeffs.len() == k {
            break;
        }
    }
    coeffs
        .iter()
        .map(|a| {
            let mut v = ComplexVector::zeros(dim);
            for (ci, vi) in a.iter().zip(&vectors) {
                v += vi * *ci;
            }
            v
        })
        .collect()
}

/// Roots of `4λ³ − 8δ_cλ² − (g_c² + 2g_p²)λ + 4δ_c g_p² = 0`, sorted by real
/// part then imaginary part.
pub fn closed_form_cubic_roots(p: &TripodParams) -> [Complex64; 3] {
    let coeffs = [4.0, -8.0 * p.delta_c, -(p.g_c * p.g_c + 2.0 * p.g_p * p.g_p), 4.0 * p.delta_c * p.g_p * p.g_p];
    let mut roots = cubic_roots(coeffs);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Roots of `c[0]x³ + c[1]x² + c[2]x + c[3]` with `c[0] ≠ 0`.
fn cubic_roots(c: [f64; 4]) -> [Complex64; 3] {
    let [a, b, cc, d] = c;
    if d == 0.0 {
        let [r1, r2] = quadratic_roots(a, b, cc);
        return [real(0.0), r1, r2];
    }
    let (b, cc, d) = (b / a, cc / a, d / a);
    // x = t − b/3 gives t³ + pt + q.
    let shift = b / 3.0;
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let mut roots = if disc >= 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        [0.0, 1.0, 2.0].map(|k| real(m * (theta - k * two_pi_3).cos() - shift))
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let u = (-q / 2.0 + s).cbrt();
        let v = (-q / 2.0 - s).cbrt();
        let x0 = u + v - shift;
        // Deflate: x² + (b + x0)x + (cc + x0(b + x0)).
        let [r1, r2] = quadratic_roots(1.0, b + x0, cc + x0 * (b + x0));
        [real(x0), r1, r2]
    };
    for r in roots.iter_mut() {
        *r = polish(c, *r);
    }
    roots
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            return [real(0.0), real(0.0)];
        }
        [real(q / a), real(c / q)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, -im), Complex64::new(re, im)]
    }
}

fn polish(c: [f64; 4], mut x: Complex64) -> Complex64 {
    for _ in 0..3 {
        let f = ((real(c[0]) * x + c[1]) * x + c[2]) * x + c[3];
        let df = (real(3.0 * c[0]) * x + 2.0 * c[1]) * x + c[2];
        if df.norm() == 0.0 || f.norm() == 0.0 {
            break;
        }
        let next = x - f / df;
        let f_next = ((real(c[0]) * next + c[1]) * next + c[2]) * next + c[3];
        if f_next.norm() >= f.norm() {
            break;
        }
        x = next;
    }
    x
}

#[derive(Debug, Clone)]
pub struct ClosedFormEigenvector {
    /// Unnormalized `(−2λ/g_p, 1, −2(g_p² − 2λ²)/(g_c g_p), 1)`.
    pub vector: ComplexVector,
    /// `‖H v − λ v‖ / ‖v‖` against [`build_tripod_hamiltonian`]; diagnostic only.
    pub residual: f64,
}

pub fn closed_form_eigenvector(lambda: f64, p: &TripodParams) -> Result<ClosedFormEigenvector> {
    if p.g_p == 0.0 || p.g_c == 0.0 {
        return Err(Error::InvalidArgument("closed-form eigenvector needs g_p > 0 and g_c > 0".into()));
    }
    let h = build_tripod_hamiltonian(p)?;
    let vector = ComplexVector::from_vec(vec![
        real(-2.0 * lambda / p.g_p),
        real(1.0),
        real(-2.0 * (p.g_p * p.g_p - 2.0 * lambda * lambda) / (p.g_c * p.g_p)),
        real(1.0),
    ]);
    let residual = eigen_residual(&h, real(lambda), &vector) / vector.norm();
    Ok(ClosedFormEigenvector { vector, residual })
}

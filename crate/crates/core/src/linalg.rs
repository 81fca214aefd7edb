//! Small dense complex linear algebra: eigensystems, null spaces, and a
//! plain-text matrix layout for debugging.

use std::cmp::Ordering;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

const EIG_EPS: f64 = 1e-15;
const MAX_SWEEPS: usize = 10_000;
/// Components at or below this magnitude are treated as zero when fixing phases.
pub const PHASE_ZERO: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Frobenius norm.
pub fn norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && (m - m.adjoint()).iter().all(|z| z.norm() <= tol)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Renders a matrix one row per line, entries as `re+imi` with 6 decimals,
/// separated by two spaces.
pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let z = m[(i, j)];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join("  "));
    }
    out
}

/// Eigenvalues sorted by real part (ties by imaginary part) with unit-norm
/// eigenvectors in matching column order. The first component of each vector
/// larger than [`PHASE_ZERO`] is real and positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k).into_owned()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Complex64, ComplexVector)> + '_ {
        self.values.iter().enumerate().map(|(k, &v)| (v, self.vector(k)))
    }
}

pub fn eigen_residual(h: &ComplexMatrix, value: Complex64, v: &ComplexVector) -> f64 {
    (h * v - v * value).norm()
}

pub fn eigensystem(h: &ComplexMatrix, hermitian: bool) -> Result<EigenSystem> {
    if !h.is_square() || h.nrows() == 0 {
        return Err(Error::Dimension(format!("eigensystem needs a non-empty square matrix, got {}x{}", h.nrows(), h.ncols())));
    }
    if !is_finite(h) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let (values, vectors) = if hermitian { hermitian_eigen(h)? } else { general_eigen(h)? };

    let mut order: Vec<usize> = (0..values.len()).collect();
    let scale = norm(h).max(1.0);
    order.sort_by(|&a, &b| compare_eigenvalues(values[a], values[b], scale));

    let n = h.nrows();
    let mut sorted = ComplexMatrix::zeros(n, n);
    let mut sorted_values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut v = vectors.column(src).into_owned();
        let len = v.norm();
        if len == 0.0 {
            return Err(Error::Numerical("zero eigenvector".into()));
        }
        v /= real(len);
        fix_phase(&mut v);
        sorted.set_column(dst, &v);
        sorted_values.push(values[src]);
    }

    let tol = 1e-10 * scale;
    for (k, &value) in sorted_values.iter().enumerate() {
        let r = eigen_residual(h, value, &sorted.column(k).into_owned());
        if !(r <= tol) {
            return Err(Error::Numerical(format!("eigenpair {k} residual {r:e} exceeds {tol:e}")));
        }
    }
    Ok(EigenSystem { values: sorted_values, vectors: sorted })
}

fn compare_eigenvalues(a: Complex64, b: Complex64, scale: f64) -> Ordering {
    let tie = 1e-12 * scale;
    if (a.re - b.re).abs() > tie {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

/// Rotates `v` so that its first significant component is real and positive.
pub fn fix_phase(v: &mut ComplexVector) {
    if let Some(&pivot) = v.iter().find(|z| z.norm() > PHASE_ZERO) {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
        if let Some(z) = v.iter_mut().find(|z| z.norm() > PHASE_ZERO) {
            *z = real(z.norm());
        }
    }
}

fn hermitian_eigen(h: &ComplexMatrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    let sym = (h + h.adjoint()) * real(0.5);
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let values = eig.eigenvalues.iter().map(|&x| real(x)).collect();
    Ok((values, eig.eigenvectors))
}

/// Complex Schur form `H = Q T Q†`; eigenvectors by back substitution on `T`.
fn general_eigen(h: &ComplexMatrix) -> Result<(Vec<Complex64>, ComplexMatrix)> {
    let n = h.nrows();
    let schur =
        Schur::try_new(h.clone(), EIG_EPS, MAX_SWEEPS).ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = norm(h).max(f64::MIN_POSITIVE);
    let values: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        let mut y = ComplexVector::zeros(n);
        y[k] = real(1.0);
        for j in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in (j + 1)..=k {
                acc += t[(j, l)] * y[l];
            }
            let mut denom = t[(j, j)] - lambda;
            if denom.norm() < f64::EPSILON * scale {
                denom = real(f64::EPSILON * scale);
            }
            y[j] = -acc / denom;
        }
        vectors.set_column(k, &(&q * y));
    }
    Ok((values, vectors))
}

/// Orthonormal basis of the numerical null space of `m` (columns) and the
/// full list of singular values in descending order.
///
/// A singular value counts as zero when it is at most `rel_tol` times the
/// largest one.
pub fn null_space(m: &ComplexMatrix, rel_tol: f64) -> Result<(ComplexMatrix, Vec<f64>)> {
    let svd = SVD::try_new(m.clone(), false, true, 1e-15, 0).ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let largest = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = rel_tol * largest;
    let mut idx: Vec<usize> = (0..sigma.len()).filter(|&k| sigma[k] <= cutoff).collect();
    // Square input: the SVD of an n x n matrix has n singular values, so the
    // null space is spanned by the matching rows of V†.
    idx.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]));
    let n = m.ncols();
    let mut basis = ComplexMatrix::zeros(n, idx.len());
    for (col, &k) in idx.iter().enumerate() {
        let row = v_t.row(k).adjoint();
        basis.set_column(col, &row);
    }
    let mut sorted = sigma;
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok((basis, sorted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        (&a + a.adjoint()) * real(0.5)
    }

    #[test]
    fn diagonal_matrix_gives_standard_basis() {
        let h = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![real(3.0), real(1.0), real(4.0), real(2.0)]));
        let es = eigensystem(&h, true).unwrap();
        let values: Vec<f64> = es.values.iter().map(|z| z.re).collect();
        assert_eq!(values, [1.0, 2.0, 3.0, 4.0]);
        let expected_index = [1, 3, 0, 2];
        for (k, &i) in expected_index.iter().enumerate() {
            let v = es.vector(k);
            for j in 0..4 {
                let want = if j == i { 1.0 } else { 0.0 };
                assert!((v[j] - real(want)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hermitian_residuals_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let h = random_hermitian(&mut rng, 4);
            let es = eigensystem(&h, true).unwrap();
            for (value, v) in es.pairs() {
                assert_eq!(value.im, 0.0);
                assert!(eigen_residual(&h, value, &v) <= 1e-10 * norm(&h));
            }
            let gram = es.vectors.adjoint() * &es.vectors;
            assert!((gram - ComplexMatrix::identity(4, 4)).iter().all(|z| z.norm() < 1e-10));
            assert!(es.values.windows(2).all(|w| w[0].re <= w[1].re));
        }
    }

    #[test]
    fn general_matrices_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [2, 3, 4, 6] {
            for _ in 0..20 {
                let h = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                let es = eigensystem(&h, false).unwrap();
                for (value, v) in es.pairs() {
                    assert!(eigen_residual(&h, value, &v) <= 1e-10 * norm(&h));
                }
            }
        }
    }

    #[test]
    fn phase_is_fixed_on_first_significant_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(&mut rng, 4);
        let es = eigensystem(&h, true).unwrap();
        for k in 0..4 {
            let v = es.vector(k);
            let pivot = v.iter().find(|z| z.norm() > PHASE_ZERO).unwrap();
            assert!(pivot.re > 0.0 && pivot.im == 0.0);
        }
    }

    #[test]
    fn rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eigensystem(&m, false), Err(Error::Dimension(_))));
    }

    #[test]
    fn null_space_of_rank_deficient_matrix() {
        let m = ComplexMatrix::from_row_slice(
            3,
            3,
            &[real(1.0), real(2.0), real(3.0), real(2.0), real(4.0), real(6.0), real(0.0), real(1.0), real(1.0)],
        );
        let (basis, sigma) = null_space(&m, 1e-10).unwrap();
        assert_eq!(basis.ncols(), 1);
        assert_eq!(sigma.len(), 3);
        assert!((&m * basis.column(0)).norm() < 1e-12);
    }

    #[test]
    fn matrix_text_layout() {
        let m = ComplexMatrix::from_row_slice(1, 2, &[c(1.0, -0.5), real(0.0)]);
        assert_eq!(format_matrix(&m), "+1.000000-0.500000i  +0.000000+0.000000i\n");
    }
}

//! Symplectic linear algebra on the paired quadrature ordering
//! `(q_1, p_1, ..., q_n, p_n)`.
//!
//! The canonical form matrix is `J_n = diag(J, ..., J)` with
//! `J = [[0, 1], [-1, 0]]`. A real matrix `T` is symplectic when
//! `T J_n T^T = J_n`; symplectic congruences are the state transformations
//! that preserve physical realizability of a quadrature model.

use nalgebra::SymmetricEigen;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::{default_tol, CMat, Mat, DEFAULT_GROUP_RTOL};

type C64 = Complex<f64>;

/// The canonical symplectic form `J_n`: block diagonal with `n` copies of
/// `[[0, 1], [-1, 0]]`. Antisymmetric, orthogonal, squares to `-I`.
pub fn symplectic_form(n: usize) -> Mat {
    assert!(n >= 1, "mode count must be positive");
    let mut j = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// A real symplectic matrix together with its certified residual
/// `|T J_n T^T - J_n|_F`.
#[derive(Debug, Clone)]
pub struct SymplecticTransform {
    t: Mat,
    residual: f64,
}

impl SymplecticTransform {
    /// Certifies `t` as symplectic within `tol` (default: scale-relative).
    pub fn new(t: Mat, tol: Option<f64>) -> Result<Self> {
        if t.nrows() != t.ncols() {
            return Err(Error::Dimension(format!(
                "symplectic matrix must be square, got {}x{}",
                t.nrows(),
                t.ncols()
            )));
        }
        if t.nrows() % 2 != 0 {
            return Err(Error::OddDimension(t.nrows()));
        }
        let residual = symplectic_residual(&t);
        let tol = tol.unwrap_or_else(|| default_tol(t.norm() * t.norm()));
        if residual > tol {
            return Err(Error::NotSymplectic { residual, tol });
        }
        Ok(Self { t, residual })
    }

    pub fn matrix(&self) -> &Mat {
        &self.t
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn modes(&self) -> usize {
        self.t.nrows() / 2
    }

    /// Symplectic inverse `T^-1 = -J_n T^T J_n`, exact up to the certified
    /// residual and cheaper than an LU factorization.
    pub fn inverse(&self) -> Mat {
        let j = symplectic_form(self.modes());
        -(&j * self.t.transpose() * &j)
    }

    /// `T^-T`, the congruence partner used to transform observability-type
    /// Gramians.
    pub fn inverse_transpose(&self) -> Mat {
        self.inverse().transpose()
    }

    /// Composition `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &SymplecticTransform) -> Result<Self> {
        Self::new(&self.t * &rhs.t, None)
    }
}

/// `|T J_n T^T - J_n|_F` for an even-dimensional square matrix.
pub fn symplectic_residual(t: &Mat) -> f64 {
    let n = t.nrows() / 2;
    let j = symplectic_form(n);
    (t * &j * t.transpose() - &j).norm()
}

/// Tests `|T J_n T^T - J_n|_F <= tol`. Errors on odd dimension.
pub fn is_symplectic(t: &Mat, tol: f64) -> Result<bool> {
    if t.nrows() != t.ncols() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if t.nrows() % 2 != 0 {
        return Err(Error::OddDimension(t.nrows()));
    }
    Ok(symplectic_residual(t) <= tol)
}

/// Tests the skew-Hamiltonian property `|M^T J_n - J_n M|_F <= tol`.
///
/// Symmetric skew-Hamiltonian matrices are exactly those commuting with
/// `J_n`; they carry the paired block structure checked by
/// [`skew_hamiltonian_block_residual`].
pub fn is_skew_hamiltonian(m: &Mat, tol: f64) -> bool {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 {
        return false;
    }
    let j = symplectic_form(m.nrows() / 2);
    (m.transpose() * &j - &j * m).norm() <= tol
}

/// Largest deviation of a symmetric matrix from the paired block form of a
/// symmetric skew-Hamiltonian matrix: diagonal 2x2 blocks must be scalar
/// multiples of `I_2` and off-diagonal blocks scaled rotations
/// `[[a, b], [-b, a]]`.
pub fn skew_hamiltonian_block_residual(m: &Mat) -> f64 {
    let n = m.nrows() / 2;
    let mut worst: f64 = 0.0;
    for j in 0..n {
        worst = worst.max((m[(2 * j, 2 * j)] - m[(2 * j + 1, 2 * j + 1)]).abs());
        worst = worst.max(m[(2 * j, 2 * j + 1)].abs());
        worst = worst.max(m[(2 * j + 1, 2 * j)].abs());
        for k in 0..n {
            if j == k {
                continue;
            }
            worst = worst.max((m[(2 * j, 2 * k)] - m[(2 * j + 1, 2 * k + 1)]).abs());
            worst = worst.max((m[(2 * j, 2 * k + 1)] + m[(2 * j + 1, 2 * k)]).abs());
        }
    }
    worst
}

/// The symplectic spectrum of a positive semidefinite matrix: the `n`
/// largest eigenvalues of `i J_n X`, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum(Vec<f64>);

impl SymplecticSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pair indices grouped by equal values under the relative tolerance
    /// `rtol`; values are sorted descending so groups are contiguous.
    pub fn group_equal(&self, rtol: f64) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &v) in self.0.iter().enumerate() {
            match groups.last_mut() {
                Some(g) => {
                    let head = self.0[g[0]];
                    if (head - v).abs() <= rtol * head.abs().max(v.abs()).max(1e-300) {
                        g.push(i);
                    } else {
                        groups.push(vec![i]);
                    }
                }
                None => groups.push(vec![i]),
            }
        }
        groups
    }
}

impl From<Vec<f64>> for SymplecticSpectrum {
    fn from(mut v: Vec<f64>) -> Self {
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Self(v)
    }
}

fn check_symmetric(x: &Mat, what: &str) -> Result<()> {
    if x.nrows() != x.ncols() {
        return Err(Error::Dimension(format!(
            "{what} must be square, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    if x.nrows() % 2 != 0 {
        return Err(Error::OddDimension(x.nrows()));
    }
    let residual = (x - x.transpose()).norm();
    let tol = default_tol(x.norm());
    if residual > tol {
        return Err(Error::NotSymmetric { residual, tol });
    }
    Ok(())
}

/// Symmetric square root of a PSD matrix; eigenvalues below `-tol` are an
/// error, small negatives are clamped to zero.
fn psd_sqrt(x: &Mat) -> Result<(Mat, Mat, f64)> {
    let sym = (x + x.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let min_eig = eig.eigenvalues.min();
    let tol = default_tol(x.norm());
    if min_eig < -tol {
        return Err(Error::NotPositiveSemidefinite { min_eig });
    }
    let sqrt_vals = Mat::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let root = &eig.eigenvectors * sqrt_vals * eig.eigenvectors.transpose();
    let inv_vals =
        Mat::from_diagonal(&eig.eigenvalues.map(|v| if v > 0.0 { 1.0 / v.sqrt() } else { 0.0 }));
    let inv_root = &eig.eigenvectors * inv_vals * eig.eigenvectors.transpose();
    Ok((root, inv_root, min_eig))
}

/// Rotates each column of a complex matrix so its largest-magnitude entry is
/// real and positive. Makes eigenvector-based constructions deterministic.
fn canonicalize_phases(v: &mut CMat) {
    for mut col in v.column_iter_mut() {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for (i, z) in col.iter().enumerate() {
            let nsq = z.norm_sqr();
            if nsq > best_norm {
                best_norm = nsq;
                best = i;
            }
        }
        if best_norm > 0.0 {
            let phase = col[best] / col[best].norm();
            let rot = phase.conj();
            for z in col.iter_mut() {
                *z *= rot;
            }
        }
    }
}

/// Hermitian eigendecomposition with eigenvalues sorted descending and
/// deterministic eigenvector phases. Returns `(values, vectors)` with
/// vectors as columns.
fn hermitian_eigen_sorted(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let herm = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    canonicalize_phases(&mut vectors);
    (values, vectors)
}

/// The symplectic eigenvalues of a symmetric PSD matrix `X`, computed as the
/// positive spectrum of the antisymmetric product `X^1/2 J_n X^1/2` (which
/// shares its characteristic polynomial with `J_n X`).
pub fn symplectic_eigenvalues(x: &Mat) -> Result<SymplecticSpectrum> {
    check_symmetric(x, "symplectic eigenvalue input")?;
    let n = x.nrows() / 2;
    let (root, _, _) = psd_sqrt(x)?;
    let j = symplectic_form(n);
    let w = &root * &j * &root;
    let h = w.map(|v| C64::new(0.0, v)); // i * W, Hermitian
    let (values, _) = hermitian_eigen_sorted(&h);
    Ok(SymplecticSpectrum(
        values[..n].iter().map(|&v| v.max(0.0)).collect(),
    ))
}

/// Williamson decomposition of a symmetric positive definite matrix:
/// returns a symplectic `T` and the spectrum `sigma` with
/// `T X T^T = diag(sigma_1 I_2, ..., sigma_n I_2)`, sigma descending.
///
/// The construction diagonalizes the Hermitian matrix `i X^1/2 J_n X^1/2`:
/// each positive eigenpair `(sigma, x + i y)` yields an orthogonal column
/// pair `(sqrt2 x, -sqrt2 y)` of the canonicalizing rotation.
pub fn williamson(x: &Mat) -> Result<(SymplecticTransform, SymplecticSpectrum)> {
    check_symmetric(x, "Williamson input")?;
    let dim = x.nrows();
    let n = dim / 2;
    let (root, inv_root, min_eig) = psd_sqrt(x)?;
    let pd_tol = default_tol(x.norm());
    if min_eig <= pd_tol {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let j = symplectic_form(n);
    let w = &root * &j * &root;
    let h = w.map(|v| C64::new(0.0, v));
    let (values, vectors) = hermitian_eigen_sorted(&h);

    // Positive half of the spectrum, already sorted descending.
    let sigma: Vec<f64> = values[..n].to_vec();
    if sigma.last().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eig: sigma.last().copied().unwrap_or(0.0),
        });
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut ortho = Mat::zeros(dim, dim);
    for k in 0..n {
        let v = vectors.column(k);
        for r in 0..dim {
            ortho[(r, 2 * k)] = sqrt2 * v[r].re;
            ortho[(r, 2 * k + 1)] = -sqrt2 * v[r].im;
        }
    }
    let mut scale = Mat::zeros(dim, dim);
    for k in 0..n {
        let s = sigma[k].sqrt();
        scale[(2 * k, 2 * k)] = s;
        scale[(2 * k + 1, 2 * k + 1)] = s;
    }
    let t = scale * ortho.transpose() * inv_root;
    let transform = SymplecticTransform::new(t, None)?;
    Ok((transform, SymplecticSpectrum(sigma)))
}

/// Maps a complex `n x n` matrix to its real `2n x 2n` paired representation
/// with blocks `[[Re z, Im z], [-Im z, Re z]]`. Unitary matrices map to
/// orthogonal symplectic matrices.
pub fn complex_to_paired(m: &CMat) -> Mat {
    let n = m.nrows();
    let mut out = Mat::zeros(2 * n, 2 * m.ncols());
    for j in 0..n {
        for k in 0..m.ncols() {
            let z = m[(j, k)];
            out[(2 * j, 2 * k)] = z.re;
            out[(2 * j, 2 * k + 1)] = z.im;
            out[(2 * j + 1, 2 * k)] = -z.im;
            out[(2 * j + 1, 2 * k + 1)] = z.re;
        }
    }
    out
}

/// Inverse of [`complex_to_paired`] for matrices of (approximately) paired
/// form; off-form content is averaged away.
pub fn paired_to_complex(m: &Mat) -> CMat {
    let n = m.nrows() / 2;
    let cols = m.ncols() / 2;
    CMat::from_fn(n, cols, |j, k| {
        let re = 0.5 * (m[(2 * j, 2 * k)] + m[(2 * j + 1, 2 * k + 1)]);
        let im = 0.5 * (m[(2 * j, 2 * k + 1)] - m[(2 * j + 1, 2 * k)]);
        C64::new(re, im)
    })
}

/// Simultaneously orthogonal and symplectic diagonalization of a symmetric
/// skew-Hamiltonian matrix `Qs`: returns `T` with
/// `T^-T Qs T^-1 = diag(sigma_1 I_2, ..., sigma_n I_2)`, sigma descending.
///
/// In paired coordinates a symmetric skew-Hamiltonian matrix is the image of
/// a Hermitian matrix, so a complex unitary diagonalization maps back to an
/// orthogonal symplectic one. Spectra may contain zeros.
pub fn unitary_symplectic_diagonalize(
    qs: &Mat,
) -> Result<(SymplecticTransform, SymplecticSpectrum)> {
    check_symmetric(qs, "skew-Hamiltonian input")?;
    let n = qs.nrows() / 2;
    let tol = default_tol(qs.norm());
    let j = symplectic_form(n);
    let residual = (qs.transpose() * &j - &j * qs).norm();
    if residual > tol {
        return Err(Error::NotSkewHamiltonian { residual, tol });
    }
    let herm = paired_to_complex(qs);
    let (values, vectors) = hermitian_eigen_sorted(&herm);
    // T = rho(U^dag): orthogonal, symplectic, and T Qs T^T = diag(sigma I_2).
    let t = complex_to_paired(&vectors.adjoint());
    let transform = SymplecticTransform::new(t, None)?;
    Ok((transform, SymplecticSpectrum(values)))
}

/// Pair-block permutation matrix sending pair `perm[i]` to position `i`;
/// always orthogonal and symplectic.
pub fn pair_permutation(perm: &[usize]) -> Mat {
    let n = perm.len();
    let mut p = Mat::zeros(2 * n, 2 * n);
    for (dst, &src) in perm.iter().enumerate() {
        p[(2 * dst, 2 * src)] = 1.0;
        p[(2 * dst + 1, 2 * src + 1)] = 1.0;
    }
    p
}

/// Groups the values of a descending-sorted spectrum with the default
/// relative tolerance.
pub fn group_pairs(spectrum: &SymplecticSpectrum) -> Vec<Vec<usize>> {
    spectrum.group_equal(DEFAULT_GROUP_RTOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn form_n1_matches_definition() {
        let j = symplectic_form(1);
        assert_eq!(j[(0, 1)], 1.0);
        assert_eq!(j[(1, 0)], -1.0);
        assert_eq!(j[(0, 0)], 0.0);
        assert_eq!(j[(1, 1)], 0.0);
    }

    #[test]
    fn form_n2_is_block_diagonal() {
        let j = symplectic_form(2);
        let j1 = symplectic_form(1);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(j[(r, c)], j1[(r, c)]);
                assert_eq!(j[(r + 2, c + 2)], j1[(r, c)]);
                assert_eq!(j[(r, c + 2)], 0.0);
                assert_eq!(j[(r + 2, c)], 0.0);
            }
        }
    }

    #[test]
    fn form_squares_to_minus_identity_and_is_orthogonal() {
        for n in 1..=16 {
            let j = symplectic_form(n);
            let sq = &j * &j;
            assert_abs_diff_eq!(sq, -Mat::identity(2 * n, 2 * n), epsilon = 0.0);
            assert_abs_diff_eq!((&j + j.transpose()).norm(), 0.0, epsilon = 0.0);
            assert_abs_diff_eq!(
                (&j * j.transpose() - Mat::identity(2 * n, 2 * n)).norm(),
                0.0,
                epsilon = 0.0
            );
        }
    }

    #[test]
    fn identity_is_symplectic() {
        assert!(is_symplectic(&Mat::identity(4, 4), 1e-12).unwrap());
    }

    #[test]
    fn area_preserving_diagonal_is_symplectic() {
        let t = Mat::from_diagonal_element(2, 2, 0.0)
            + Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 0.5]));
        assert!(is_symplectic(&t, 1e-12).unwrap());
        let bad = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0]));
        assert!(!is_symplectic(&bad, 1e-6).unwrap());
    }

    #[test]
    fn odd_dimension_rejected() {
        let t = Mat::identity(3, 3);
        assert!(matches!(
            is_symplectic(&t, 1e-8),
            Err(Error::OddDimension(3))
        ));
    }

    #[test]
    fn spectrum_of_identity_is_ones() {
        let s = symplectic_eigenvalues(&Mat::identity(6, 6)).unwrap();
        for &v in s.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_of_paired_diagonal() {
        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 3.0, 3.0]));
        let s = symplectic_eigenvalues(&x).unwrap();
        assert_abs_diff_eq!(s.values()[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn williamson_identity() {
        let (t, s) = williamson(&Mat::identity(4, 4)).unwrap();
        for &v in s.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
        }
        // T X T^T = I means T is orthogonal here; also symplectic by contract.
        let prod = t.matrix() * t.matrix().transpose();
        assert_abs_diff_eq!(prod, Mat::identity(4, 4), epsilon = 1e-10);
    }

    #[test]
    fn williamson_single_mode_squeeze() {
        // X = diag(4, 1) has symplectic eigenvalue 2; contract checks only,
        // since T is not unique.
        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 1.0]));
        let (t, s) = williamson(&x).unwrap();
        assert_abs_diff_eq!(s.values()[0], 2.0, epsilon = 1e-12);
        let d = t.matrix() * &x * t.matrix().transpose();
        assert_abs_diff_eq!(d, Mat::identity(2, 2) * 2.0, epsilon = 1e-10);
        assert!(t.residual() <= 1e-10);
    }

    #[test]
    fn williamson_rejects_semidefinite() {
        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0]));
        assert!(williamson(&x).is_err());
    }

    #[test]
    fn williamson_of_paired_diagonal_is_permutation_scaling() {
        // Already paired-diagonal input: with canonical eigenvector phases
        // the rotation collapses to a pair permutation combined with the
        // per-pair scaling.
        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 5.0, 5.0]));
        let (t, s) = williamson(&x).unwrap();
        assert_abs_diff_eq!(s.values()[0], 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 2.0, epsilon = 1e-12);
        // Expected: swap pairs, then scale each pair by 1/sqrt(sigma) * sigma...
        // contract form: T X T^T = diag(5,5,2,2).
        let d = t.matrix() * &x * t.matrix().transpose();
        let expect = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![5.0, 5.0, 2.0, 2.0]));
        assert_abs_diff_eq!(d, expect, epsilon = 1e-10);
        // Each entry of T should be 0 or +-sqrt(sigma_j / x_pair) => matrix is
        // a signed pair permutation up to scaling; check sparsity.
        let nonzeros = t.matrix().iter().filter(|v| v.abs() > 1e-9).count();
        assert_eq!(nonzeros, 4);
    }

    #[test]
    fn skew_hamiltonian_detection() {
        assert!(is_skew_hamiltonian(&Mat::identity(4, 4), 1e-12));
        let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
        assert!(!is_skew_hamiltonian(&d, 1e-8));
    }

    #[test]
    fn block_residual_matches_commutation_for_symmetric() {
        // Paired block form <=> commutes with J_n, for symmetric input.
        let mut m = Mat::zeros(4, 4);
        m[(0, 0)] = 3.0;
        m[(1, 1)] = 3.0;
        m[(2, 2)] = -1.0;
        m[(3, 3)] = -1.0;
        m[(0, 2)] = 0.5;
        m[(1, 3)] = 0.5;
        m[(0, 3)] = 0.25;
        m[(1, 2)] = -0.25;
        m[(2, 0)] = 0.5;
        m[(3, 1)] = 0.5;
        m[(3, 0)] = 0.25;
        m[(2, 1)] = -0.25;
        assert!(is_skew_hamiltonian(&m, 1e-12));
        assert!(skew_hamiltonian_block_residual(&m) <= 1e-12);
        m[(0, 0)] = 4.0; // break the scalar diagonal block
        assert!(!is_skew_hamiltonian(&m, 1e-8));
        assert!(skew_hamiltonian_block_residual(&m) > 0.9);
    }

    #[test]
    fn usd_identity_and_paired_diagonal() {
        let (t, s) = unitary_symplectic_diagonalize(&Mat::identity(4, 4)).unwrap();
        assert_abs_diff_eq!(t.matrix().clone(), Mat::identity(4, 4), epsilon = 1e-12);
        for &v in s.values() {
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
        }

        let x = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 4.0, 4.0]));
        let (t, s) = unitary_symplectic_diagonalize(&x).unwrap();
        assert_abs_diff_eq!(s.values()[0], 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.values()[1], 1.0, epsilon = 1e-12);
        // T must be a pair permutation here.
        let perm = pair_permutation(&[1, 0]);
        assert_abs_diff_eq!(t.matrix().clone(), perm, epsilon = 1e-12);
    }

    #[test]
    fn usd_rejects_non_skew_hamiltonian() {
        let d = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]));
        assert!(matches!(
            unitary_symplectic_diagonalize(&d),
            Err(Error::NotSkewHamiltonian { .. })
        ));
    }

    #[test]
    fn pair_permutation_is_orthosymplectic() {
        let p = pair_permutation(&[2, 0, 1]);
        assert!(is_symplectic(&p, 1e-14).unwrap());
        assert_abs_diff_eq!(&p * p.transpose(), Mat::identity(6, 6), epsilon = 0.0);
    }

    #[test]
    fn complex_paired_roundtrip() {
        let m = CMat::from_fn(3, 3, |j, k| C64::new(j as f64 - k as f64, (j * k) as f64));
        let back = paired_to_complex(&complex_to_paired(&m));
        assert!((back - m).norm() < 1e-14);
    }
}

//! Stability tests, Lyapunov equations, Gramians and H-infinity norms.

use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::QuadratureModel;
use crate::{default_tol, CMat, Mat, HURWITZ_MARGIN};

type C64 = Complex<f64>;

/// Controllability and observability Gramians of a stable model, with the
/// residuals of their Lyapunov equations.
#[derive(Debug, Clone)]
pub struct GramianPair {
    pub p: Mat,
    pub q: Mat,
    pub residual_p: f64,
    pub residual_q: f64,
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(a: &Mat) -> Result<Vec<C64>> {
    crate::eigen::eigenvalues(a)
}

/// Hurwitz test: `(stable, spectral abscissa)`. A matrix counts as Hurwitz
/// when its abscissa clears a scale-relative margin below zero, avoiding
/// false positives at machine precision.
pub fn is_hurwitz(a: &Mat) -> Result<(bool, f64)> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let abscissa = eigenvalues(a)?
        .iter()
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let margin = HURWITZ_MARGIN * (1.0 + a.norm());
    Ok((abscissa < -margin, abscissa))
}

/// Solves `A X + X A^T + W = 0` for symmetric `W` and Hurwitz `A` by dense
/// Kronecker vectorization, verifying the residual. Suited to desk-scale
/// systems; the solution is explicitly symmetrized.
pub fn solve_lyapunov(a: &Mat, w: &Mat) -> Result<Mat> {
    let n = a.nrows();
    if a.ncols() != n || w.nrows() != n || w.ncols() != n {
        return Err(Error::Dimension(format!(
            "Lyapunov solve needs square A and matching W, got A {}x{}, W {}x{}",
            a.nrows(),
            a.ncols(),
            w.nrows(),
            w.ncols()
        )));
    }
    let sym_residual = (w - w.transpose()).norm();
    let sym_tol = default_tol(w.norm());
    if sym_residual > sym_tol {
        return Err(Error::NotSymmetric {
            residual: sym_residual,
            tol: sym_tol,
        });
    }
    let (stable, abscissa) = is_hurwitz(a)?;
    if !stable {
        return Err(Error::NotHurwitz { abscissa });
    }

    // vec(AX + XA^T) = (I (x) A + A (x) I) vec(X), column-major vec.
    let eye = Mat::identity(n, n);
    let op = eye.kronecker(a) + a.kronecker(&eye);
    let rhs = -DVector::from_column_slice(w.as_slice());
    let lu = op.lu();
    let x_vec = lu.solve(&rhs).ok_or(Error::SingularSystem)?;
    let x = Mat::from_column_slice(n, n, x_vec.as_slice());
    let x = (&x + x.transpose()) * 0.5;

    let residual = (a * &x + &x * a.transpose() + w).norm();
    let tol = default_tol(a.norm() * x.norm() + w.norm());
    if residual > tol {
        return Err(Error::IllConditioned { residual, tol });
    }
    Ok(x)
}

/// Controllability Gramian `P` (from `A P + P A^T + B B^T = 0`) and
/// observability Gramian `Q` (from `Q A + A^T Q + C^T C = 0`) of a stable
/// model.
pub fn gramians(g: &QuadratureModel) -> Result<GramianPair> {
    let p = solve_lyapunov(&g.a, &(&g.b * g.b.transpose()))?;
    let q = solve_lyapunov(&g.a.transpose(), &(g.c.transpose() * &g.c))?;
    let residual_p = (&g.a * &p + &p * g.a.transpose() + &g.b * g.b.transpose()).norm();
    let residual_q = (&q * &g.a + g.a.transpose() * &q + g.c.transpose() * &g.c).norm();
    Ok(GramianPair {
        p,
        q,
        residual_p,
        residual_q,
    })
}

/// Largest singular value via the Hermitian eigenproblem on `M^H M`.
pub fn spectral_norm_complex(m: &CMat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let herm = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    eig.eigenvalues.max().max(0.0).sqrt()
}

/// Largest singular value of a real matrix.
pub fn spectral_norm(m: &Mat) -> f64 {
    spectral_norm_complex(&m.map(|v| C64::new(v, 0.0)))
}

/// `sigma_max(C (iw I - A)^-1 B + D)` at a single real frequency `w`.
pub fn transfer_gain(a: &Mat, b: &Mat, c: &Mat, d: &Mat, omega: f64) -> Result<f64> {
    let n = a.nrows();
    let mut m = a.map(|v| C64::new(-v, 0.0));
    for i in 0..n {
        m[(i, i)] += C64::new(0.0, omega);
    }
    let bc = b.map(|v| C64::new(v, 0.0));
    let lu = m.lu();
    let sol = lu.solve(&bc).ok_or(Error::SingularSystem)?;
    let g = c.map(|v| C64::new(v, 0.0)) * sol + d.map(|v| C64::new(v, 0.0));
    Ok(spectral_norm_complex(&g))
}

/// Frequencies of the (near-)imaginary-axis eigenvalues of the level-test
/// Hamiltonian at `gamma`. Empty means the gain `gamma` is not attained on
/// the imaginary axis (to detection accuracy).
fn level_crossing_frequencies(
    a: &Mat,
    b: &Mat,
    c: &Mat,
    d: &Mat,
    gamma: f64,
) -> Result<Vec<f64>> {
    let n = a.nrows();
    let n_in = b.ncols();
    let n_out = c.nrows();
    let r = Mat::identity(n_in, n_in) * gamma * gamma - d.transpose() * d;
    // gamma at or below sigma_max(D): every frequency attains the level.
    let r_eig = SymmetricEigen::new((&r + r.transpose()) * 0.5);
    if r_eig.eigenvalues.min() <= 0.0 {
        return Ok(vec![0.0]);
    }
    let r_inv = r.clone().try_inverse().ok_or(Error::SingularSystem)?;
    let m11 = a + b * &r_inv * d.transpose() * c;
    let m12 = b * &r_inv * b.transpose();
    let m21 = -(c.transpose() * (Mat::identity(n_out, n_out) + d * &r_inv * d.transpose()) * c);
    let mut h = Mat::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&m11);
    h.view_mut((0, n), (n, n)).copy_from(&m12);
    h.view_mut((n, 0), (n, n)).copy_from(&m21);
    h.view_mut((n, n), (n, n)).copy_from(&(-m11.transpose()));
    let eigs = eigenvalues(&h)?;
    // Near the peak the crossing eigenvalues coalesce and carry sqrt(eps)
    // noise in their real parts; the loose threshold only decides where
    // gains get evaluated, so false positives are harmless.
    let mut freqs: Vec<f64> = eigs
        .iter()
        .filter(|l| l.re.abs() <= 1e-7 * (1.0 + l.norm()))
        .map(|l| l.im.abs())
        .filter(|w| w.is_finite())
        .collect();
    freqs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    freqs.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (1.0 + y.abs()));
    Ok(freqs)
}

/// Hankel singular values `sqrt(eig(P Q))` of a stable realization.
fn hankel_singular_values(a: &Mat, b: &Mat, c: &Mat) -> Result<Vec<f64>> {
    let p = solve_lyapunov(a, &(b * b.transpose()))?;
    let q = solve_lyapunov(&a.transpose(), &(c.transpose() * c))?;
    let vals = eigenvalues(&(&p * &q))?;
    Ok(vals.iter().map(|l| l.re.max(0.0).sqrt()).collect())
}

/// The H-infinity norm of `C (sI - A)^-1 B + D` for Hurwitz `A`, to relative
/// accuracy `rel_tol`, by the two-level iteration on the imaginary-axis
/// eigenvalues of the associated Hamiltonian matrix: crossing frequencies
/// found at the current level pick the evaluation points whose exact
/// transfer gains raise the level, until a slightly lifted level shows no
/// crossings.
///
/// The level is seeded with probe-frequency gains and capped by the Hankel
/// bound `sigma_max(D) + 2 sum sigma_H,i`, which settles identically-zero
/// transfer functions without touching the (then ill-scaled) Hamiltonian.
pub fn hinf_norm_matrices(a: &Mat, b: &Mat, c: &Mat, d: &Mat, rel_tol: f64) -> Result<f64> {
    let (stable, abscissa) = is_hurwitz(a)?;
    if !stable {
        return Err(Error::NotHurwitz { abscissa });
    }
    if b.ncols() == 0 || c.nrows() == 0 {
        return Ok(0.0);
    }

    let eigs = eigenvalues(a)?;
    let mut probes: Vec<f64> = vec![0.0];
    for l in &eigs {
        if l.im.abs() > 0.0 {
            probes.push(l.im.abs());
        }
        probes.push(l.norm());
    }
    let mut level = spectral_norm(d);
    for w in probes {
        level = level.max(transfer_gain(a, b, c, d, w)?);
    }

    let hankel = hankel_singular_values(a, b, c)?;
    let hankel_sum: f64 = hankel.iter().sum();
    let bound_hi = spectral_norm(d) + 2.0 * hankel_sum;
    let heuristic_hi = level + 2.0 * spectral_norm(c) * spectral_norm(b) / abscissa.abs();
    let hi = bound_hi.min(heuristic_hi).max(level);
    if hi - level <= rel_tol * hi {
        return Ok(hi);
    }

    let step = 0.5 * rel_tol.clamp(1e-12, 1e-2);
    let floor = hi * 1e-14 + f64::MIN_POSITIVE;
    level = level.max(floor);
    for _ in 0..64 {
        let test = level * (1.0 + 2.0 * step);
        let freqs = level_crossing_frequencies(a, b, c, d, test)?;
        if freqs.is_empty() {
            return Ok(level * (1.0 + step));
        }
        // Evaluate at the crossings and at the midpoints of consecutive
        // crossing intervals (with 0 prepended, so a peak at dc straddled
        // by a +-delta pair is still probed); exact gains anchor the next
        // level.
        let mut points: Vec<f64> = freqs.clone();
        let mut edges = vec![0.0];
        edges.extend_from_slice(&freqs);
        for pair in edges.windows(2) {
            points.push(0.5 * (pair[0] + pair[1]));
        }
        let mut best = level;
        for w in points {
            best = best.max(transfer_gain(a, b, c, d, w)?);
        }
        if best <= level * (1.0 + 1e-14) {
            // Crossings no longer lift the level: tangency at the peak.
            return Ok(level * (1.0 + step));
        }
        level = best;
    }
    Ok(level)
}

/// H-infinity norm of a quadrature model's transfer function.
pub fn hinf_norm(g: &QuadratureModel, rel_tol: f64) -> Result<f64> {
    hinf_norm_matrices(&g.a, &g.b, &g.c, &g.d, rel_tol)
}

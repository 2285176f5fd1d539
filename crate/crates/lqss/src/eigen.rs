//! Dense nonsymmetric eigenvalue solver: Householder reduction to
//! Hessenberg form followed by the shifted Francis double-step QR iteration
//! with the EISPACK exceptional shifts (values only, no Schur vectors).
//!
//! The exceptional shifts matter here: H-infinity level tests build
//! Hamiltonian matrices whose spectra come in exact `+-` pairs with high
//! multiplicity, a pattern that stalls plain double-shift QR.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Mat;

type C64 = Complex<f64>;

/// Reduces `h` to upper Hessenberg form in place by Householder reflections.
fn hessenberg_in_place(h: &mut Mat) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    let mut ort = vec![0.0f64; n];
    for m in 1..n - 1 {
        let mut scale = 0.0;
        for i in m..n {
            scale += h[(i, m - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut hsum = 0.0;
        for i in (m..n).rev() {
            ort[i] = h[(i, m - 1)] / scale;
            hsum += ort[i] * ort[i];
        }
        let mut g = hsum.sqrt();
        if ort[m] > 0.0 {
            g = -g;
        }
        hsum -= ort[m] * g;
        ort[m] -= g;

        for j in m..n {
            let mut f = 0.0;
            for i in (m..n).rev() {
                f += ort[i] * h[(i, j)];
            }
            f /= hsum;
            for i in m..n {
                h[(i, j)] -= f * ort[i];
            }
        }
        for i in 0..n {
            let mut f = 0.0;
            for j in (m..n).rev() {
                f += ort[j] * h[(i, j)];
            }
            f /= hsum;
            for j in m..n {
                h[(i, j)] -= f * ort[j];
            }
        }
        h[(m, m - 1)] = scale * g;
        for i in m + 1..n {
            h[(i, m - 1)] = 0.0;
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by the double-shift QR
/// iteration (EISPACK `hqr`, values only).
fn hqr_eigenvalues(h: &mut Mat) -> Result<Vec<C64>> {
    let nn = h.nrows();
    let mut values = vec![C64::new(0.0, 0.0); nn];
    if nn == 0 {
        return Ok(values);
    }
    let eps = f64::EPSILON;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }
    if norm == 0.0 {
        return Ok(values);
    }

    let mut n = nn - 1;
    let mut exshift = 0.0;
    let mut iter = 0usize;
    let mut total_iter = 0usize;
    let budget = 60 * nn;
    let (mut p, mut q, mut r, mut z);
    let (mut x, mut y, mut w);

    'outer: loop {
        // Deflation scan for a negligible subdiagonal entry.
        let mut l = n;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            // One real root.
            values[n] = C64::new(h[(n, n)] + exshift, 0.0);
            if n == 0 {
                break 'outer;
            }
            n -= 1;
            iter = 0;
            continue;
        }
        if l + 1 == n {
            // A 2x2 trailing block: real pair or complex conjugate pair.
            w = h[(n, n - 1)] * h[(n - 1, n)];
            p = (h[(n - 1, n - 1)] - h[(n, n)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            x = h[(n, n)] + exshift;
            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                values[n - 1] = C64::new(x + z, 0.0);
                values[n] = if z != 0.0 {
                    C64::new(x - w / z, 0.0)
                } else {
                    values[n - 1]
                };
            } else {
                values[n - 1] = C64::new(x + p, z);
                values[n] = C64::new(x + p, -z);
            }
            if n == 1 {
                break 'outer;
            }
            n -= 2;
            iter = 0;
            continue;
        }

        if total_iter > budget {
            return Err(Error::EigenFailure);
        }

        // Form the implicit double shift from the trailing 2x2 block.
        x = h[(n, n)];
        y = h[(n - 1, n - 1)];
        w = h[(n, n - 1)] * h[(n - 1, n)];

        if iter == 10 || iter == 20 {
            // Exceptional shift (Wilkinson): breaks symmetric stall cycles.
            // Applied to every still-active diagonal entry, since exshift is
            // restored on all later deflations.
            exshift += x;
            for i in 0..=n {
                h[(i, i)] -= x;
            }
            let s = h[(n, n - 1)].abs() + h[(n - 1, n - 2)].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        if iter == 30 {
            // Second exceptional form when the first did not deflate.
            let mut s = (y - x) / 2.0;
            s = s * s + w;
            if s > 0.0 {
                s = s.sqrt();
                if y < x {
                    s = -s;
                }
                s = x - w / ((y - x) / 2.0 + s);
                for i in 0..=n {
                    h[(i, i)] -= s;
                }
                exshift += s;
                x = 0.964;
                y = x;
                w = x;
            }
        }
        iter += 1;
        total_iter += 1;

        // Look for two consecutive small subdiagonals to start the sweep.
        let mut m = n - 2;
        loop {
            z = h[(m, m)];
            r = x - z;
            let s0 = y - z;
            p = (r * s0 - w) / h[(m + 1, m)] + h[(m, m + 1)];
            q = h[(m + 1, m + 1)] - z - r - s0;
            r = h[(m + 2, m + 1)];
            let s1 = p.abs() + q.abs() + r.abs();
            p /= s1;
            q /= s1;
            r /= s1;
            if m == l {
                break;
            }
            let lhs = h[(m, m - 1)].abs() * (q.abs() + r.abs());
            let rhs = eps
                * p.abs()
                * (h[(m - 1, m - 1)].abs() + z.abs() + h[(m + 1, m + 1)].abs());
            if lhs < rhs {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=n {
            h[(i, i - 2)] = 0.0;
            if i > m + 2 {
                h[(i, i - 3)] = 0.0;
            }
        }

        // Double QR sweep on rows l..=n, columns m..=n.
        for k in m..n {
            let notlast = k != n - 1;
            if k != m {
                p = h[(k, k - 1)];
                q = h[(k + 1, k - 1)];
                r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                x = p.abs() + q.abs() + r.abs();
                if x == 0.0 {
                    continue;
                }
                p /= x;
                q /= x;
                r /= x;
            }
            let mut s = (p * p + q * q + r * r).sqrt();
            if p < 0.0 {
                s = -s;
            }
            if s == 0.0 {
                continue;
            }
            if k != m {
                h[(k, k - 1)] = -s * x;
            } else if l != m {
                h[(k, k - 1)] = -h[(k, k - 1)];
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;

            for j in k..nn {
                let mut f = h[(k, j)] + q * h[(k + 1, j)];
                if notlast {
                    f += r * h[(k + 2, j)];
                    h[(k + 2, j)] -= f * z;
                }
                h[(k, j)] -= f * x;
                h[(k + 1, j)] -= f * y;
            }
            let top = n.min(k + 3);
            for i in 0..=top {
                let mut f = x * h[(i, k)] + y * h[(i, k + 1)];
                if notlast {
                    f += z * h[(i, k + 2)];
                    h[(i, k + 2)] -= f * r;
                }
                h[(i, k)] -= f;
                h[(i, k + 1)] -= f * q;
            }
        }
    }
    Ok(values)
}

/// Eigenvalues of a real square matrix. The input is scale-normalized, so
/// the iteration tolerances are relative to the matrix norm.
pub fn eigenvalues(a: &Mat) -> Result<Vec<C64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.norm();
    if scale == 0.0 {
        return Ok(vec![C64::new(0.0, 0.0); n]);
    }
    let mut h = a / scale;
    hessenberg_in_place(&mut h);
    let values = hqr_eigenvalues(&mut h)?;
    Ok(values.into_iter().map(|v| v * scale).collect())
}

//! Domain types for linear quantum stochastic systems: the quadrature-form
//! state-space quadruple, the physical parameterization `(S, K, R)`, the
//! physical realizability check, and the worked-example fixtures.
//!
//! # Quadrature convention
//!
//! With states ordered `(q_1, p_1, ...)` and field quadratures interleaved
//! per field, the real quadruple is obtained from `(R, K, S)` as
//!
//! ```text
//! A = 2 J_n (R + Im(K^H K))
//! B[:, 2j]   = 2 J_n Im(c_j),   B[:, 2j+1] = 2 J_n Re(c_j),   c_j = (K^H S)[:, j]
//! C rows (2i, 2i+1) = 2 Re(K[f_i, :]), 2 Im(K[f_i, :])        f_i in output_fields
//! D rows (2i, 2i+1) = paired real representation of row f_i of S
//! ```
//!
//! The per-field ordering (real part first) and signs are calibrated so the
//! two-mode OPO fixture reproduces its published state-space matrices; any
//! residual global sign freedom is fixed by that calibration.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{symplectic_form, SymplecticTransform};
use crate::{default_tol, CMat, Mat};

type C64 = Complex<f64>;

/// Real state-space quadruple of a linear quantum stochastic system in
/// quadrature form: `n` modes, `m` input fields, `n_y` output quadratures.
#[derive(Debug, Clone)]
pub struct QuadratureModel {
    pub n: usize,
    pub m: usize,
    pub n_y: usize,
    /// `2n x 2n` drift.
    pub a: Mat,
    /// `2n x 2m` input.
    pub b: Mat,
    /// `n_y x 2n` output.
    pub c: Mat,
    /// `n_y x 2m` feedthrough.
    pub d: Mat,
}

impl QuadratureModel {
    pub fn new(n: usize, m: usize, n_y: usize, a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Dimension(
                "mode and field counts must be positive".into(),
            ));
        }
        if n_y % 2 != 0 || n_y > 2 * m {
            return Err(Error::Dimension(format!(
                "n_y must be even and at most 2m, got n_y={n_y}, m={m}"
            )));
        }
        let shapes = [
            (a.nrows(), a.ncols(), 2 * n, 2 * n, "A"),
            (b.nrows(), b.ncols(), 2 * n, 2 * m, "B"),
            (c.nrows(), c.ncols(), n_y, 2 * n, "C"),
            (d.nrows(), d.ncols(), n_y, 2 * m, "D"),
        ];
        for (r, c_, er, ec, name) in shapes {
            if r != er || c_ != ec {
                return Err(Error::Dimension(format!(
                    "{name} must be {er}x{ec}, got {r}x{c_}"
                )));
            }
        }
        Ok(Self { n, m, n_y, a, b, c, d })
    }

    /// Applies the symplectic state change `x -> T x`:
    /// `(T A T^-1, T B, C T^-1, D)`. Realizability is preserved.
    pub fn transform(&self, t: &SymplecticTransform) -> Result<Self> {
        if t.modes() != self.n {
            return Err(Error::Dimension(format!(
                "transform has {} mode pairs, model has {}",
                t.modes(),
                self.n
            )));
        }
        let ti = t.inverse();
        Self::new(
            self.n,
            self.m,
            self.n_y,
            t.matrix() * &self.a * &ti,
            t.matrix() * &self.b,
            &self.c * &ti,
            self.d.clone(),
        )
    }

    /// Markov parameters `C A^k B` for `k = 0..count`; invariant under any
    /// state-space similarity, so they witness transfer-function equality.
    pub fn markov_parameters(&self, count: usize) -> Vec<Mat> {
        let mut out = Vec::with_capacity(count);
        let mut akb = self.b.clone();
        for _ in 0..count {
            out.push(&self.c * &akb);
            akb = &self.a * &akb;
        }
        out
    }
}

/// Physical parameters of a linear quantum stochastic system: Hamiltonian
/// matrix `R`, coupling matrix `K`, scattering matrix `S`, and the ordered
/// output field subset (1-based).
#[derive(Debug, Clone)]
pub struct PhysicalParams {
    /// Real symmetric `2n x 2n`.
    pub r: Mat,
    /// Complex `m x 2n`.
    pub k: CMat,
    /// Complex unitary `m x m`.
    pub s: CMat,
    /// 1-based indices into `1..=m`, strictly increasing.
    pub output_fields: Vec<usize>,
}

impl PhysicalParams {
    pub fn new(r: Mat, k: CMat, s: CMat, output_fields: Vec<usize>) -> Result<Self> {
        if r.nrows() != r.ncols() || r.nrows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "R must be square with even dimension, got {}x{}",
                r.nrows(),
                r.ncols()
            )));
        }
        let n2 = r.nrows();
        let m = k.nrows();
        if k.ncols() != n2 {
            return Err(Error::Dimension(format!(
                "K must be m x {n2}, got {}x{}",
                k.nrows(),
                k.ncols()
            )));
        }
        if s.nrows() != m || s.ncols() != m {
            return Err(Error::Dimension(format!(
                "S must be {m}x{m}, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        let sym_res = (&r - r.transpose()).norm();
        let sym_tol = default_tol(r.norm());
        if sym_res > sym_tol {
            return Err(Error::NotSymmetric {
                residual: sym_res,
                tol: sym_tol,
            });
        }
        let uni_res = (&s * s.adjoint() - CMat::identity(m, m)).norm();
        let uni_tol = default_tol(s.norm());
        if uni_res > uni_tol {
            return Err(Error::NotUnitary {
                residual: uni_res,
                tol: uni_tol,
            });
        }
        if output_fields.is_empty() {
            return Err(Error::Dimension("output_fields must be nonempty".into()));
        }
        let mut prev = 0usize;
        for &f in &output_fields {
            if f == 0 || f > m || f <= prev {
                return Err(Error::Dimension(format!(
                    "output_fields must be strictly increasing within 1..={m}"
                )));
            }
            prev = f;
        }
        Ok(Self { r, k, s, output_fields })
    }

    pub fn modes(&self) -> usize {
        self.r.nrows() / 2
    }

    pub fn fields(&self) -> usize {
        self.k.nrows()
    }

    pub fn output_quadratures(&self) -> usize {
        2 * self.output_fields.len()
    }
}

/// Residuals of the three physical realizability constraints, the tolerance
/// they were compared against, and the verdict. `pass` holds exactly when
/// all three residuals are at most `tolerance`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RealizabilityReport {
    /// `|A J_n + J_n A^T + B J_m B^T|_F`
    pub residual_ccr: f64,
    /// `|J_n C^T + B J_m D^T|_F`
    pub residual_output: f64,
    /// `|D J_m D^T - J_(ny/2)|_F`
    pub residual_d: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Builds the quadrature-form model from physical parameters. The result
/// satisfies the realizability constraints by construction.
pub fn build_quadrature(p: &PhysicalParams) -> Result<QuadratureModel> {
    let n = p.modes();
    let m = p.fields();
    let j = symplectic_form(n);

    let kdk = p.k.adjoint() * &p.k;
    let im_kdk = kdk.map(|z| z.im);
    let a = 2.0 * &j * (&p.r + im_kdk);

    // c_j = j-th column of K^H S.
    let coupling = p.k.adjoint() * &p.s;
    let mut b = Mat::zeros(2 * n, 2 * m);
    for f in 0..m {
        let col = coupling.column(f);
        let im: nalgebra::DVector<f64> = col.map(|z| z.im);
        let re: nalgebra::DVector<f64> = col.map(|z| z.re);
        b.set_column(2 * f, &(2.0 * &j * im));
        b.set_column(2 * f + 1, &(2.0 * &j * re));
    }

    let n_y = p.output_quadratures();
    let mut c = Mat::zeros(n_y, 2 * n);
    let mut d = Mat::zeros(n_y, 2 * m);
    for (i, &field) in p.output_fields.iter().enumerate() {
        let f = field - 1;
        for col in 0..2 * n {
            c[(2 * i, col)] = 2.0 * p.k[(f, col)].re;
            c[(2 * i + 1, col)] = 2.0 * p.k[(f, col)].im;
        }
        for kcol in 0..m {
            let z = p.s[(f, kcol)];
            d[(2 * i, 2 * kcol)] = z.re;
            d[(2 * i, 2 * kcol + 1)] = -z.im;
            d[(2 * i + 1, 2 * kcol)] = z.im;
            d[(2 * i + 1, 2 * kcol + 1)] = z.re;
        }
    }

    QuadratureModel::new(n, m, n_y, a, b, c, d)
}

/// Evaluates the three realizability constraint residuals. `tol` overrides
/// the final tolerance; the default scales with the input norms.
pub fn check_realizability(g: &QuadratureModel, tol: Option<f64>) -> RealizabilityReport {
    let jn = symplectic_form(g.n);
    let jm = symplectic_form(g.m);
    let residual_ccr = (&g.a * &jn + &jn * g.a.transpose() + &g.b * &jm * g.b.transpose()).norm();
    let residual_output = (&jn * g.c.transpose() + &g.b * &jm * g.d.transpose()).norm();
    let residual_d = if g.n_y == 0 {
        0.0
    } else {
        (&g.d * &jm * g.d.transpose() - symplectic_form(g.n_y / 2)).norm()
    };
    let scale = g.a.norm() + g.b.norm() * g.b.norm() + g.c.norm() + (1.0 + g.d.norm()).powi(2);
    let tolerance = tol.unwrap_or_else(|| default_tol(scale));
    let pass =
        residual_ccr <= tolerance && residual_output <= tolerance && residual_d <= tolerance;
    RealizabilityReport {
        residual_ccr,
        residual_output,
        residual_d,
        tolerance,
        pass,
    }
}

/// Extracts the complex isometry encoded by a paired-form `D` (a selection
/// of whole quadrature pairs from the real representation of a unitary).
fn extract_output_isometry(d: &Mat, m: usize) -> Result<CMat> {
    let rows = d.nrows() / 2;
    let tol = default_tol(d.norm());
    let mut s_out = CMat::zeros(rows, m);
    for i in 0..rows {
        for k in 0..m {
            let re1 = d[(2 * i, 2 * k)];
            let re2 = d[(2 * i + 1, 2 * k + 1)];
            let im1 = d[(2 * i + 1, 2 * k)];
            let im2 = -d[(2 * i, 2 * k + 1)];
            if (re1 - re2).abs() > tol || (im1 - im2).abs() > tol {
                return Err(Error::UnsupportedD(format!(
                    "rows {}..{} do not form a paired complex row",
                    2 * i,
                    2 * i + 1
                )));
            }
            s_out[(i, k)] = C64::new(0.5 * (re1 + re2), 0.5 * (im1 + im2));
        }
    }
    let iso_res = (&s_out * s_out.adjoint() - CMat::identity(rows, rows)).norm();
    if iso_res > tol {
        return Err(Error::UnsupportedD(format!(
            "selected rows are not an isometry (residual {iso_res:.3e})"
        )));
    }
    Ok(s_out)
}

/// Completes orthonormal complex rows to a full unitary by Gram-Schmidt over
/// the standard basis. Deterministic; identity-like inputs complete to the
/// identity.
fn complete_unitary(rows: &CMat) -> CMat {
    let m = rows.ncols();
    let mut basis: Vec<nalgebra::DVector<C64>> = (0..rows.nrows())
        .map(|i| rows.row(i).transpose().map(|z| z.conj()))
        .collect();
    for k in 0..m {
        if basis.len() == m {
            break;
        }
        let mut v = nalgebra::DVector::<C64>::zeros(m);
        v[k] = C64::new(1.0, 0.0);
        for b in &basis {
            let coef = b.dotc(&v);
            v -= b * coef;
        }
        let norm = v.norm();
        if norm > 0.5 {
            basis.push(v / C64::new(norm, 0.0));
        }
    }
    let mut s = CMat::zeros(m, m);
    for (i, b) in basis.iter().enumerate() {
        for k in 0..m {
            s[(i, k)] = b[k].conj();
        }
    }
    s
}

/// Recovers physical parameters `(R, K, S)` from a realizable quadrature
/// model with a supported `D`.
///
/// The recovered parameters satisfy `build_quadrature(recovered) ~ g`
/// exactly; when the original `D` selects fewer than all fields, `S` (and
/// with it `K`) is determined only up to the unitary completion of its
/// unselected rows, and output fields are relabeled `1..`.
pub fn recover_physical(g: &QuadratureModel) -> Result<PhysicalParams> {
    let report = check_realizability(g, None);
    if !report.pass {
        return Err(Error::NotRealizable {
            ccr: report.residual_ccr,
            output: report.residual_output,
            d: report.residual_d,
            tol: report.tolerance,
        });
    }
    let n = g.n;
    let m = g.m;
    let j = symplectic_form(n);

    let s_out = extract_output_isometry(&g.d, m)?;
    let s = complete_unitary(&s_out);

    // B columns encode K^H S: Im c_f = -J B[:, 2f] / 2, Re c_f = -J B[:, 2f+1] / 2.
    let mut coupling = CMat::zeros(2 * n, m);
    for f in 0..m {
        let im = -0.5 * &j * g.b.column(2 * f);
        let re = -0.5 * &j * g.b.column(2 * f + 1);
        for rix in 0..2 * n {
            coupling[(rix, f)] = C64::new(re[rix], im[rix]);
        }
    }
    // K^H S = coupling  =>  K = S coupling^H.
    let k = &s * coupling.adjoint();

    // A = 2 J (R + Im K^H K)  =>  R = -J A / 2 - Im K^H K.
    let kdk = k.adjoint() * &k;
    let m_mat = -0.5 * &j * &g.a;
    let r_raw = m_mat - kdk.map(|z| z.im);
    let asym = (&r_raw - r_raw.transpose()).norm();
    let tol = default_tol(r_raw.norm() + g.a.norm());
    if asym > tol {
        return Err(Error::NotSymmetric {
            residual: asym,
            tol,
        });
    }
    let r = (&r_raw + r_raw.transpose()) * 0.5;

    let output_fields = (1..=g.n_y / 2).collect();
    PhysicalParams::new(r, k, s, output_fields)
}

/// The two-mode optical parametric oscillator fixture: squeezing parameters
/// `eps1`, `eps2`, decay rate `gamma`, two fields each coupling identically
/// to both modes, output taken from the first field. Stable for
/// `|eps_j| < gamma`.
pub fn opo2(eps1: f64, eps2: f64, gamma: f64) -> Result<PhysicalParams> {
    if gamma <= 0.0 {
        return Err(Error::FixtureParams("opo2 requires gamma > 0".into()));
    }
    let r = Mat::from_row_slice(
        4,
        4,
        &[
            0.0, eps1, 0.0, -gamma, //
            eps1, 0.0, gamma, 0.0, //
            0.0, gamma, 0.0, eps2, //
            -gamma, 0.0, eps2, 0.0,
        ],
    );
    let sqrt_g = gamma.sqrt();
    let k = CMat::from_fn(2, 4, |_, col| {
        if col % 2 == 0 {
            C64::new(sqrt_g, 0.0)
        } else {
            C64::new(0.0, sqrt_g)
        }
    });
    let s = CMat::identity(2, 2);
    PhysicalParams::new(r, k, s, vec![1])
}

/// Parameters of the passively-plus-dispersively coupled oscillator family.
///
/// `n` modes; `p` passively coupled fields carry the outputs; `pairs`
/// dispersive field pairs couple each mode through a single quadrature with
/// real strengths `u[i][j]` (a common per-row phase is a field gauge and is
/// omitted). Total fields: `m = p + 2 * pairs`.
#[derive(Debug, Clone)]
pub struct DispersiveSpec {
    pub n: usize,
    pub p: usize,
    /// Diagonal passive Hamiltonian entries, one per mode.
    pub r_diag: Vec<f64>,
    /// Off-diagonal passive Hamiltonian couplings `(a1, a2)` for `j < k`,
    /// lexicographic order.
    pub r_offdiag: Vec<(f64, f64)>,
    /// Passive coupling columns `M_j`, each of length `p`.
    pub m_cols: Vec<Vec<C64>>,
    /// Dispersive strengths, `pairs x n` real.
    pub u: Vec<Vec<f64>>,
}

impl DispersiveSpec {
    pub fn pairs(&self) -> usize {
        self.u.len()
    }

    pub fn fields(&self) -> usize {
        self.p + 2 * self.pairs()
    }
}

/// Builds the dispersive-family fixture: passive `R`, coupling
/// `K = [K1; K2]` with `K1` in passive column-pair form and `K2` in the
/// dispersive pattern pairing a position-coupled and a momentum-coupled row
/// per dispersive unit. Outputs are the `p` passive fields.
pub fn dispersive(spec: &DispersiveSpec) -> Result<PhysicalParams> {
    let n = spec.n;
    let p = spec.p;
    let pairs = spec.pairs();
    if n == 0 || p == 0 {
        return Err(Error::FixtureParams(
            "dispersive fixture needs n >= 1 and p >= 1".into(),
        ));
    }
    if spec.r_diag.len() != n
        || spec.r_offdiag.len() != n * (n - 1) / 2
        || spec.m_cols.len() != n
        || spec.m_cols.iter().any(|c| c.len() != p)
        || spec.u.iter().any(|row| row.len() != n)
    {
        return Err(Error::FixtureParams(format!(
            "inconsistent dispersive dimensions for n={n}, p={p}, pairs={pairs}"
        )));
    }

    let mut r = Mat::zeros(2 * n, 2 * n);
    for j in 0..n {
        r[(2 * j, 2 * j)] = spec.r_diag[j];
        r[(2 * j + 1, 2 * j + 1)] = spec.r_diag[j];
    }
    let mut idx = 0;
    for j in 0..n {
        for k in (j + 1)..n {
            let (a1, a2) = spec.r_offdiag[idx];
            idx += 1;
            r[(2 * j, 2 * k)] = a1;
            r[(2 * j, 2 * k + 1)] = a2;
            r[(2 * j + 1, 2 * k)] = -a2;
            r[(2 * j + 1, 2 * k + 1)] = a1;
            r[(2 * k, 2 * j)] = a1;
            r[(2 * k + 1, 2 * j)] = a2;
            r[(2 * k, 2 * j + 1)] = -a2;
            r[(2 * k + 1, 2 * j + 1)] = a1;
        }
    }

    let m = spec.fields();
    let mut k_mat = CMat::zeros(m, 2 * n);
    for j in 0..n {
        for row in 0..p {
            let mj = spec.m_cols[j][row];
            k_mat[(row, 2 * j)] = mj;
            k_mat[(row, 2 * j + 1)] = C64::new(0.0, 1.0) * mj;
        }
    }
    for (i, row) in spec.u.iter().enumerate() {
        for (j, &u) in row.iter().enumerate() {
            k_mat[(p + 2 * i, 2 * j)] = C64::new(u, 0.0);
            k_mat[(p + 2 * i + 1, 2 * j + 1)] = C64::new(u, 0.0);
        }
    }

    let s = CMat::identity(m, m);
    PhysicalParams::new(r, k_mat, s, (1..=p).collect())
}

/// Named fixture entry point over a flat parameter list.
///
/// - `opo2`: `[eps1, eps2, gamma]`.
/// - `dispersive`: `[n, p, pairs, r_diag (n), r_offdiag (n(n-1): a1 a2 per
///   j<k), M columns (2pn: Re then Im per column), u (pairs*n, row-major)]`.
pub fn fixture(name: &str, params: &[f64]) -> Result<PhysicalParams> {
    match name {
        "opo2" => {
            if params.len() != 3 {
                return Err(Error::FixtureParams(format!(
                    "opo2 takes (eps1, eps2, gamma), got {} values",
                    params.len()
                )));
            }
            opo2(params[0], params[1], params[2])
        }
        "dispersive" => {
            if params.len() < 3 {
                return Err(Error::FixtureParams(
                    "dispersive needs at least (n, p, pairs)".into(),
                ));
            }
            let n = params[0] as usize;
            let p = params[1] as usize;
            let pairs = params[2] as usize;
            let expected = 3 + n + n * (n - 1) + 2 * p * n + pairs * n;
            if params.len() != expected {
                return Err(Error::FixtureParams(format!(
                    "dispersive with n={n}, p={p}, pairs={pairs} takes {expected} values, got {}",
                    params.len()
                )));
            }
            let mut it = params[3..].iter().copied();
            let r_diag: Vec<f64> = (0..n).map(|_| it.next().unwrap()).collect();
            let r_offdiag: Vec<(f64, f64)> = (0..n * (n - 1) / 2)
                .map(|_| (it.next().unwrap(), it.next().unwrap()))
                .collect();
            let m_cols: Vec<Vec<C64>> = (0..n)
                .map(|_| {
                    let re: Vec<f64> = (0..p).map(|_| it.next().unwrap()).collect();
                    let im: Vec<f64> = (0..p).map(|_| it.next().unwrap()).collect();
                    re.into_iter().zip(im).map(|(r, i)| C64::new(r, i)).collect()
                })
                .collect();
            let u: Vec<Vec<f64>> = (0..pairs)
                .map(|_| (0..n).map(|_| it.next().unwrap()).collect())
                .collect();
            dispersive(&DispersiveSpec {
                n,
                p,
                r_diag,
                r_offdiag,
                m_cols,
                u,
            })
        }
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

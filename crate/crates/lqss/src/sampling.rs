//! Random generators for systems, parameters and symplectic matrices.
//!
//! Used by the property-test suites, the CLI fixture emitter and the
//! benchmarks. All draws are O(1)-scaled; stable variants rejection-sample
//! on a stability margin so downstream Lyapunov solves stay well
//! conditioned.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::model::{
    build_quadrature, DispersiveSpec, PhysicalParams, QuadratureModel,
};
use crate::symplectic::{complex_to_paired, SymplecticTransform};
use crate::{CMat, Mat};

type C64 = Complex<f64>;

const STABILITY_MARGIN: f64 = 0.05;
const MAX_DRAWS: usize = 500;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn cnormal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(normal(rng), normal(rng))
}

/// Random real symmetric matrix with N(0,1) entries.
pub fn random_symmetric<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    let m = Mat::from_fn(dim, dim, |_, _| normal(rng));
    (&m + m.transpose()) * 0.5
}

/// Random symmetric positive definite matrix `G G^T + eps I`.
pub fn random_spd<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Mat {
    let g = Mat::from_fn(dim, dim, |_, _| normal(rng));
    &g * g.transpose() / (dim as f64) + Mat::identity(dim, dim) * 0.1
}

/// Random symmetric skew-Hamiltonian matrix in the paired block form
/// (scalar diagonal blocks, scaled-rotation off-diagonal blocks).
pub fn random_skew_hamiltonian_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat {
    let mut m = Mat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let a = normal(rng);
        m[(2 * j, 2 * j)] = a;
        m[(2 * j + 1, 2 * j + 1)] = a;
        for k in (j + 1)..n {
            let a1 = normal(rng);
            let a2 = normal(rng);
            m[(2 * j, 2 * k)] = a1;
            m[(2 * j, 2 * k + 1)] = a2;
            m[(2 * j + 1, 2 * k)] = -a2;
            m[(2 * j + 1, 2 * k + 1)] = a1;
            m[(2 * k, 2 * j)] = a1;
            m[(2 * k + 1, 2 * j)] = a2;
            m[(2 * k, 2 * j + 1)] = -a2;
            m[(2 * k + 1, 2 * j + 1)] = a1;
        }
    }
    m
}

/// Random complex unitary via QR of a Gaussian matrix with the R-diagonal
/// phase absorbed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| cnormal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random orthogonal symplectic matrix: the paired real representation of a
/// random unitary.
pub fn random_orthosymplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticTransform {
    let u = random_unitary(n, rng);
    SymplecticTransform::new(complex_to_paired(&u), None)
        .expect("paired unitary representation is symplectic")
}

/// Random symplectic matrix from the Euler decomposition
/// `O_1 diag(e^s, e^-s, ...) O_2` with orthosymplectic factors and squeeze
/// exponents bounded by `max_squeeze`.
pub fn random_symplectic<R: Rng + ?Sized>(
    n: usize,
    max_squeeze: f64,
    rng: &mut R,
) -> SymplecticTransform {
    let o1 = random_orthosymplectic(n, rng);
    let o2 = random_orthosymplectic(n, rng);
    let mut z = Mat::zeros(2 * n, 2 * n);
    for j in 0..n {
        let s: f64 = rng.random_range(-max_squeeze..max_squeeze);
        z[(2 * j, 2 * j)] = s.exp();
        z[(2 * j + 1, 2 * j + 1)] = (-s).exp();
    }
    SymplecticTransform::new(o1.matrix() * z * o2.matrix(), None)
        .expect("product of symplectic factors is symplectic")
}

/// Random passive coupling matrix `[M_1, iM_1, ..., M_n, iM_n]`.
pub fn random_passive_coupling<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> CMat {
    let mut k = CMat::zeros(m, 2 * n);
    for j in 0..n {
        for row in 0..m {
            let v = cnormal(rng);
            k[(row, 2 * j)] = v;
            k[(row, 2 * j + 1)] = C64::new(0.0, 1.0) * v;
        }
    }
    k
}

/// Random completely passive parameters: skew-Hamiltonian `R`, passive-form
/// `K`, identity scattering, all fields observed.
pub fn random_passive_params<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> PhysicalParams {
    let r = random_skew_hamiltonian_symmetric(n, rng);
    let k = random_passive_coupling(m, n, rng);
    let s = CMat::identity(m, m);
    PhysicalParams::new(r, k, s, (1..=m).collect()).expect("valid passive draw")
}

/// Random generic physical parameters: a passive backbone with an active
/// perturbation of relative size `ACTIVE_MIX` on both `R` and `K`. The
/// backbone supplies dissipation (so stable draws are common at any mode
/// count) while the perturbation makes the Gramians generic.
pub fn random_physical_params<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> PhysicalParams {
    const ACTIVE_MIX: f64 = 0.35;
    let r = random_skew_hamiltonian_symmetric(n, rng) + random_symmetric(2 * n, rng) * ACTIVE_MIX;
    let k = random_passive_coupling(m, n, rng)
        + CMat::from_fn(m, 2 * n, |_, _| cnormal(rng)) * C64::new(ACTIVE_MIX, 0.0);
    let s = CMat::identity(m, m);
    PhysicalParams::new(r, k, s, (1..=m).collect()).expect("valid generic draw")
}

fn stable_model<R: Rng + ?Sized, F>(rng: &mut R, mut draw: F) -> Result<(PhysicalParams, QuadratureModel)>
where
    F: FnMut(&mut R) -> PhysicalParams,
{
    for _ in 0..MAX_DRAWS {
        let p = draw(rng);
        let g = build_quadrature(&p)?;
        let (ok, abscissa) = crate::gramians::is_hurwitz(&g.a)?;
        if ok && abscissa < -STABILITY_MARGIN {
            return Ok((p, g));
        }
    }
    Err(crate::error::Error::FixtureParams(
        "failed to draw a stable system within the rejection budget".into(),
    ))
}

/// Random asymptotically stable completely passive system.
pub fn random_stable_passive<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<(PhysicalParams, QuadratureModel)> {
    stable_model(rng, |r| random_passive_params(n, m, r))
}

/// Random asymptotically stable generic realizable system.
pub fn random_stable_realizable<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<(PhysicalParams, QuadratureModel)> {
    stable_model(rng, |r| random_physical_params(n, m, r))
}

/// Random parameters from the dispersive fixture family with real
/// dispersive strengths.
pub fn random_dispersive_params<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    pairs: usize,
    rng: &mut R,
) -> PhysicalParams {
    let spec = DispersiveSpec {
        n,
        p,
        r_diag: (0..n).map(|_| normal(rng)).collect(),
        r_offdiag: (0..n * (n - 1) / 2)
            .map(|_| (normal(rng), normal(rng)))
            .collect(),
        m_cols: (0..n)
            .map(|_| (0..p).map(|_| cnormal(rng)).collect())
            .collect(),
        u: (0..pairs)
            .map(|_| (0..n).map(|_| normal(rng)).collect())
            .collect(),
    };
    crate::model::dispersive(&spec).expect("valid dispersive draw")
}

/// Random stable instance of the dispersive fixture family.
pub fn random_stable_dispersive<R: Rng + ?Sized>(
    n: usize,
    p: usize,
    pairs: usize,
    rng: &mut R,
) -> Result<(PhysicalParams, QuadratureModel)> {
    stable_model(rng, |r| random_dispersive_params(n, p, pairs, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_symplectic_certifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let t = random_symplectic(n, 0.8, &mut rng);
            assert!(t.residual() <= 1e-10, "residual {}", t.residual());
        }
    }

    #[test]
    fn random_passive_has_passive_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_passive_params(3, 2, &mut rng);
        for j in 0..3 {
            for row in 0..2 {
                let lhs = p.k[(row, 2 * j + 1)];
                let rhs = C64::new(0.0, 1.0) * p.k[(row, 2 * j)];
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
        assert!(crate::symplectic::is_skew_hamiltonian(&p.r, 1e-12));
    }

    #[test]
    fn stable_draws_are_hurwitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (_, g) = random_stable_passive(2, 2, &mut rng).unwrap();
        assert!(crate::gramians::is_hurwitz(&g.a).unwrap().0);
        let (_, g) = random_stable_realizable(2, 2, &mut rng).unwrap();
        assert!(crate::gramians::is_hurwitz(&g.a).unwrap().0);
    }
}

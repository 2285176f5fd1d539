//! Analysis toolkit for linear quantum stochastic systems in quadrature form.
//!
//! The crate models open quantum harmonic oscillator networks by a real
//! state-space quadruple `(A, B, C, D)` together with the physical
//! parameterization `(S, K, R)` (scattering, coupling, Hamiltonian), and
//! provides:
//!
//! - construction of the quadrature model from physical parameters and the
//!   inverse recovery ([`model`]),
//! - physical realizability checks ([`model::check_realizability`]),
//! - Lyapunov Gramians, stability tests and H-infinity norms ([`gramians`]),
//! - symplectic linear algebra: Williamson decomposition, symplectic
//!   eigenvalues, orthogonal-symplectic diagonalization ([`symplectic`]),
//! - quasi-balanced realizations and physically realizable truncation
//!   ([`quasibalance`]),
//! - complete passivity, pure Gaussian steady states and logarithmic
//!   negativity ([`passivity`]).
//!
//! States are ordered `(q_1, p_1, ..., q_n, p_n)`; field quadratures are
//! interleaved the same way. All matrices are dense `f64` (complex where
//! noted), sized for desk-scale systems (a few dozen modes).

pub mod eigen;
pub mod error;
pub mod gramians;
pub mod io;
pub mod model;
pub mod passivity;
pub mod quasibalance;
pub mod sampling;
pub mod symplectic;

pub use error::Error;

/// Dense real matrix used throughout the crate.
pub type Mat = nalgebra::DMatrix<f64>;
/// Dense complex matrix used for couplings and scattering.
pub type CMat = nalgebra::DMatrix<num_complex::Complex<f64>>;

/// Base factor of the default residual tolerance `1e-8 * (1 + scale)`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative tolerance for grouping equal symplectic eigenvalues.
pub const DEFAULT_GROUP_RTOL: f64 = 1e-6;

/// Tolerance on `|nu - 1|` when testing purity of a steady-state covariance.
pub const DEFAULT_PURITY_TOL: f64 = 1e-6;

/// Scale-relative margin used by the Hurwitz test.
pub const HURWITZ_MARGIN: f64 = 1e-12;

/// Default residual tolerance for a problem of the given norm scale.
pub fn default_tol(scale: f64) -> f64 {
    DEFAULT_TOL * (1.0 + scale)
}

use thiserror::Error;

/// Errors shared by all analysis modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must have even dimension, got {0}")]
    OddDimension(usize),

    #[error("matrix is not symmetric (asymmetry {residual:.3e} > tol {tol:.3e})")]
    NotSymmetric { residual: f64, tol: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemidefinite { min_eig: f64 },

    #[error("scattering matrix is not unitary (residual {residual:.3e} > tol {tol:.3e})")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("matrix A is not Hurwitz (spectral abscissa {abscissa:.6e})")]
    NotHurwitz { abscissa: f64 },

    #[error("eigenvalue iteration failed to converge")]
    EigenFailure,

    #[error("linear solve failed (singular system)")]
    SingularSystem,

    #[error("Lyapunov residual {residual:.3e} exceeds tolerance {tol:.3e}; system is ill-conditioned")]
    IllConditioned { residual: f64, tol: f64 },

    #[error("model is not physically realizable (residuals ccr={ccr:.3e}, output={output:.3e}, d={d:.3e}, tol={tol:.3e})")]
    NotRealizable { ccr: f64, output: f64, d: f64, tol: f64 },

    #[error("matrix D is not of a supported form: {0}")]
    UnsupportedD(String),

    #[error("matrix is not skew-Hamiltonian (residual {residual:.3e} > tol {tol:.3e})")]
    NotSkewHamiltonian { residual: f64, tol: f64 },

    #[error("candidate transform is not symplectic (residual {residual:.3e} > tol {tol:.3e})")]
    NotSymplectic { residual: f64, tol: f64 },

    #[error("transformed observability Gramian violates the paired block form at pair block ({row_pair}, {col_pair}); system is not quasi-balanceable")]
    BlockFormViolation { row_pair: usize, col_pair: usize },

    #[error("controllability Gramian is singular (min symplectic eigenvalue {min_sigma:.3e}); system is not controllable enough to quasi-balance")]
    SingularGramian { min_sigma: f64 },

    #[error("quasi-balanceability criteria disagree: commutator test {commutator}, block-form test {block_form}")]
    CriteriaConflict { commutator: bool, block_form: bool },

    #[error("structural passivity ({structural}) and Gramian passivity ({gramian}, |P - I| = {gramian_distance:.3e}) disagree")]
    PassivityConflict {
        structural: bool,
        gramian: bool,
        gramian_distance: f64,
    },

    #[error("steady state is not pure (symplectic eigenvalues deviate from 1 by {max_deviation:.3e})")]
    NotPure { max_deviation: f64 },

    #[error("unknown fixture `{0}` (expected `opo2` or `dispersive`)")]
    UnknownFixture(String),

    #[error("fixture parameter error: {0}")]
    FixtureParams(String),

    #[error("system file is invalid: {0}")]
    InvalidSystemFile(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

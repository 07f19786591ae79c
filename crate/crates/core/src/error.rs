use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("temperature must be positive (tau = {tau}); use the zero-temperature state for tau = 0")]
    NonPositiveTemperature { tau: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("matrix is not X-structured (max off-X element {deviation:e})")]
    NotXState { deviation: f64 },

    #[error("state vector is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("populations are unidentifiable: |cos 2θ| = {cos_2theta:e} is below {epsilon:e} (homonuclear degeneracy)")]
    HomonuclearDegeneracy { cos_2theta: f64, epsilon: f64 },

    #[error("observables are inconsistent: reconstructed p{index} = {value} lies outside [-tol, 1+tol]")]
    InconsistentObservables { index: usize, value: f64 },

    #[error("observable {name} = {value} is outside [-1, 1]")]
    ObservableOutOfRange { name: &'static str, value: f64 },

    #[error("field ratio r = 1 is singular for omega_delta = {omega_delta} != 0")]
    SingularFieldRatio { omega_delta: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spectrum setup: {0}")]
    InvalidSpectrum(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

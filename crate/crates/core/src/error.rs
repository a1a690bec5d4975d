use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("critical point diverges at delta = 1")]
    CriticalPointDiverges,

    #[error("formula singular at delta = 1")]
    SingularClosedForm,

    #[error("use ground_state for T = 0 (got tbar = {0})")]
    ZeroTemperature(f64),

    #[error("non-physical branch value theta = {theta} (branch {branch})")]
    NonPhysicalBranch { branch: usize, theta: f64 },

    #[error("negative {quantity} = {value:e} beyond round-off tolerance")]
    NegativeCorrelation { quantity: &'static str, value: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NonSymmetric(f64),

    #[error("spectral radius {0} exceeds 50, rescale input")]
    SpectralRadius(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("sweep point {axis} = {value} failed: {source}")]
    SweepPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

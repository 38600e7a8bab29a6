use thiserror::Error;

/// Errors produced by the evaluators and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent value: {0}")]
    Divergent(String),

    #[error("pole: {0}")]
    Pole(String),

    /// Raised for `d <= sigma` at constant density, where condensation is pushed to `T = 0`.
    #[error("zero-temperature BEC: d = {d} <= sigma = {sigma}, condensation only at T = 0")]
    ZeroTemperatureBec { d: f64, sigma: f64 },

    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Constant-pressure states below `T_c(P)` are not produced.
    #[error("T = {temperature} is below T_c(P) = {critical}; condensed isobaric states are not computed")]
    CondensedRegion { temperature: f64, critical: f64 },

    /// `Psi^2 + (d/sigma) t < 0`: outside the real branch of the Landau form.
    #[error("outside the real branch: Psi^2 + (d/sigma) t = {0} < 0")]
    Branch(f64),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

use thiserror::Error;

/// Every failure mode of the library.
///
/// Payloads are carried as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the gamma function at x = {x}")]
    Pole { x: f64 },

    #[error("argument outside the domain of {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("{function} did not converge within {terms} terms")]
    Convergence { function: &'static str, terms: usize },

    #[error("no bound state: {reason}")]
    NoBoundState { reason: String },

    #[error("singular coupling ratio: phi*s = |j| = {j_abs}")]
    SingularCoupling { j_abs: f64 },

    #[error("channel with nu = {nu} needs no self-adjoint extension")]
    RegularChannel { nu: f64 },

    #[error("no sign change found in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("S-matrix phase jumps by pi at k = {k} (mu diverges)")]
    PoleAtK { k: f64 },

    #[error("zero delta coupling: the channel is degenerate")]
    Degenerate,
}

impl Error {
    /// Short machine-readable name used in CLI records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::Domain { .. } => "DomainError",
            Error::Convergence { .. } => "ConvergenceError",
            Error::NoBoundState { .. } => "NoBoundState",
            Error::SingularCoupling { .. } => "SingularCoupling",
            Error::RegularChannel { .. } => "RegularChannel",
            Error::Bracket { .. } => "BracketError",
            Error::PoleAtK { .. } => "PoleAtK",
            Error::Degenerate => "Degenerate",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole: argument {re}{im:+}i lies on a non-positive integer")]
    Pole { re: f64, im: f64 },

    #[error("outside validated accuracy envelope: {0}")]
    Accuracy(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid worldline: {0}")]
    Spec(String),

    #[error("unsupported worldline for this path: {0}")]
    UnsupportedWorldline(String),

    #[error("resonant tail: phase slope vanishes on an inertial tail at omega = {omega}")]
    Resonance { omega: f64 },

    #[error("quadrature did not converge: {0}")]
    Convergence(String),

    #[error("degenerate amplitude: {0}")]
    Degenerate(String),

    #[error("no dip inside scan range: {0}")]
    NoDip(String),

    #[error("positivity violated: {0}")]
    Positivity(String),

    #[error("bad density matrix: {0}")]
    Shape(String),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

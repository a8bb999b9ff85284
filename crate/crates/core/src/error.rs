use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested photon-number cutoff leaves more probability mass
    /// outside the vector than the truncation tolerance allows.
    #[error("truncation at n_max = {n_max} discards {tail:e} of probability mass (limit {limit:e})")]
    TailTooHeavy { n_max: usize, tail: f64, limit: f64 },

    #[error("amplitudes are not normalized: sum of |c_n|^2 = {sum}")]
    NotNormalized { sum: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("reflection path enumeration exceeded {cap} candidates")]
    PathExplosion { cap: usize },

    #[error("beat frequency {max_beat_hz:e} Hz exceeds Nyquist limit {nyquist_hz:e} Hz")]
    NyquistViolation { max_beat_hz: f64, nyquist_hz: f64 },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

/// Deserializes JSON, reporting the path of the offending field.
pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(s);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.into_inner().to_string(),
    })
}

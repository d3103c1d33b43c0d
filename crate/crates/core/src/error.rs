use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid window [{left}, {right}]: {reason}")]
    InvalidWindow {
        left: f64,
        right: f64,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular evaluation at x = {x}, t = {t}")]
    Singularity { x: f64, t: f64 },

    #[error("interval {interval} is not a whole number of steps of dt = {dt}")]
    Incommensurate { interval: f64, dt: f64 },

    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("field contains non-finite values at t = {time}")]
    NonFinite { time: f64 },

    #[error("state lost: window density {density:e} is too small to renormalise")]
    StateLost { density: f64 },

    #[error("field is identically zero")]
    ZeroField,

    #[error("analytic survival model out of validity for t = {t}, N = {n}")]
    OutOfValidity { t: f64, n: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Errors caused by user input (config, preset name, parameters) rather
    /// than by the numerics.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::UnknownPreset(_)
                | Error::Incommensurate { .. }
                | Error::InvalidGrid(_)
                | Error::InvalidWindow { .. }
                | Error::InvalidParameter(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

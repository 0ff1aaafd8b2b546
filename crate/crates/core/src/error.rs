use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid payoff matrix: {0}")]
    InvalidMatrix(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("degenerate game: fear and greed are both zero, every state is an equilibrium")]
    DegenerateGame,

    #[error("unknown preset `{0}` (expected pub_dilemma, drunk_prisoner or battle)")]
    UnknownPreset(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("h1 vanishes at x = {x}; the eigenvalue formula divides by it")]
    DivisionDegeneracy { x: f64 },

    #[error("greed of game {game} is zero; the fear-greed ratio is undefined")]
    UndefinedRatio { game: u8 },

    #[error("per-interaction perception with N = {n} exceeds the O(N^2) guard of {limit} agents")]
    CostGuard { n: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown figure `{0}` (expected fig1..fig7)")]
    UnknownFigure(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

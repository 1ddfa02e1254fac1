use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("velocity {0} outside the open interval (-1, 1)")]
    Velocity(f64),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported for this wave-function family: {0}")]
    Unsupported(String),

    #[error("row {row} has non-positive probability mass {mass}")]
    ZeroMass { row: usize, mass: f64 },

    #[error("slice q={q}, s={s} selects no cell of the table")]
    EmptySlice { q: u32, s: i64 },

    #[error("slice has zero total count")]
    ZeroCount,

    #[error("malformed counts table: {0}")]
    Table(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

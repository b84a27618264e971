use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    Parse(String),
    #[error("invalid voting system: {0}")]
    InvalidSystem(String),
    #[error("coalition member {position} out of range for {players} players")]
    InvalidCoalition { position: usize, players: usize },
    #[error("degenerate system: {0}")]
    DegenerateSystem(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{players} players exceeds the {engine} limit of {cap}")]
    TooManyPlayers {
        engine: &'static str,
        players: usize,
        cap: usize,
    },
    #[error("scaled weights too large for the {0} engine")]
    WeightsTooLarge(&'static str),
    #[error("no closed-form prediction for abundance class {0}")]
    UnsupportedCase(i64),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("1/(2b) = {0} is an integer; the closed form does not cover this boundary")]
    IntegerBoundary(String),
    #[error("closed form disagrees with the engine: {0}")]
    ClosedFormMismatch(String),
    #[error("worker pool: {0}")]
    WorkerPool(String),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("class is torsion: L^{n} is trivial")]
    TorsionClass { n: u64 },
    #[error("cover failure: {0}")]
    CoverageFailure(String),
    #[error("small divisor {magnitude:e} below floor {floor:e} at power {power}, mode {mode}")]
    SmallDivisorUnderflow {
        power: i64,
        mode: i64,
        magnitude: f64,
        floor: f64,
    },
    #[error("incompatible cocycle: triple-overlap residual {residual:e}")]
    IncompatibleCocycle { residual: f64 },
    #[error("majorant domination fails at order {order}")]
    DominationFailure { order: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parameter outside its domain: {0}")]
    Domain(String),
    #[error("cubic is singular")]
    SingularCubic,
    #[error("base point lies in the fixed set of automorphism {aut_index}")]
    BasePointFixed { aut_index: usize },
    #[error("lattice rank {rank} is smaller than requested {requested}")]
    RankTooSmall { rank: usize, requested: usize },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the symbolic kernel and the boundary analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operands belong to different variable tables")]
    MismatchedTables,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("not divisible")]
    NonDivisible,

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),

    #[error("not locally nilpotent within bound {bound}")]
    NotLocallyNilpotent { bound: usize },

    #[error("point not in chart {{delta^d x{j} != 0}}")]
    PointOutsideChart { j: usize },

    #[error("substitution not invariant: {0}")]
    SubstitutionNotInvariant(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("action is trivial in these coordinates (degree 0)")]
    TrivialAction,

    #[error("content removal insufficient; supply more candidates")]
    ContentRemovalInsufficient,

    #[error("lift is identically zero")]
    ZeroLift,

    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("polynomial is not expressible in the Pluecker variables: {0}")]
    NotInGammaRing(String),

    #[error("invalid spec file: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular (ad - bc = 0)")]
    SingularMatrix,

    #[error("no admissible point in the fiber: solution coincides with the base point")]
    DegenerateFiber,

    #[error("pair ({x}, {y}) is not in X: need x < y")]
    NotInX { x: String, y: String },

    #[error("triple is not in Y: need a < b < c < succ(a)")]
    NotInY,

    #[error("invariant {0} is not in the affine span of the tuple")]
    InvariantNotDefinable(usize),

    #[error("tuple of length {0} exceeds the brute-force oracle limit of 8")]
    TooLarge(usize),

    #[error("an imaginary needs at least one invariant form")]
    EmptyImaginary,

    #[error("basis certificate postcondition failed: {0}")]
    PostconditionFailed(&'static str),

    #[error("affine automorphism needs a positive scale, got {0}")]
    NonPositiveScale(String),

    #[error("parse error: {0}")]
    Parse(String),
}

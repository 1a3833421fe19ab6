//! Exact arithmetic on the real projective line, the universal-cover
//! structure `M = Z x RP^1` built from it, and a set of verification
//! harnesses showing that a definable quotient of `M + M` admits no
//! elimination over the second copy.
//!
//! Everything on the `M` side is exact (`BigRational` / `BigInt`). The
//! trigonometric presentation `N` lives in `f64` and is only ever compared
//! against `M` with an explicit tolerance.

pub mod automorphisms;
pub mod cli;
pub mod error;
pub mod imaginaries;
pub mod moebius;
pub mod pregeometry;
pub mod report;
pub mod sampling;
pub mod structures;
pub mod suites;

mod linalg;

pub use error::{Error, Result};
pub use moebius::{MoebiusMap, ProjPoint};
pub use report::{Check, Status, VerdictReport};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// Builds the rational `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

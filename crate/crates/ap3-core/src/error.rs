//! Crate-wide error type.

/// Errors reported by fallible operations across the crate.
///
/// Enumeration entry points take an explicit item budget and refuse runs
/// whose predicted size exceeds it; that surfaces as [`Error::Budget`] so
/// callers (the CLI in particular) can distinguish "refused" from "wrong".
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid triple ({i},{j},{k}) for n={n}: need 1 <= i < j < k <= n")]
    InvalidTriple { i: u32, j: u32, k: u32, n: u32 },

    #[error("ambient size mismatch: n={0} vs n={1}")]
    AmbientMismatch(u32, u32),

    #[error("{what}: predicted {predicted} items exceeds budget {budget}")]
    Budget {
        what: String,
        predicted: u128,
        budget: u128,
    },

    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("cover relation has a cycle through element {0}")]
    CyclicCovers(usize),

    #[error("poset is not a lattice: elements {0} and {1} have no unique {2}")]
    NotALattice(usize, usize, &'static str),

    #[error("not an antichain: elements {0} and {1} are comparable")]
    NotAnAntichain(usize, usize),

    #[error("element index {0} out of range for poset of size {1}")]
    IndexOutOfRange(usize, usize),

    #[error("negative rank for element {0}")]
    NegativeRank(usize),

    #[error("row lengths {0:?} are not weakly decreasing")]
    BadShape(Vec<usize>),

    #[error("rows do not fit shape {expected:?}: got row lengths {got:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },

    #[error("position ({0},{1}) is outside the shape")]
    OutsideShape(usize, usize),

    #[error("tableau is not semistandard with the required bounds for n={0}")]
    NotInMn(u32),

    #[error("tableau is not in the maximal-family sublattice for n={0}")]
    NotInKn(u32),

    #[error("tableau is not in the {family} family for n={n}")]
    NotInFamily { family: &'static str, n: u32 },

    #[error("corner label mismatch: left piece has corner {left}, right piece only admits corner {right}")]
    CornerMismatch { left: u32, right: u32 },

    #[error("{0} is only defined for n >= {1}")]
    TooSmall(&'static str, u32),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

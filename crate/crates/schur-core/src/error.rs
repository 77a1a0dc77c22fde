use alloc::boxed::Box;
use alloc::string::String;

use core::fmt;

use crate::blocks::BlockFamily;
use crate::solver::SolverStats;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Elements of different ambient groups (or malformed elements) were combined.
    GroupMismatch,
    /// Integer overflow during group arithmetic.
    Overflow,
    /// A constructor argument was out of range.
    InvalidParameter(&'static str),
    /// An explicit enumeration repeats an element.
    DuplicateElement { index: usize },
    /// A witness basis repeats an element.
    DuplicateBasisElement,
    /// The enumeration cannot supply a prefix of the requested length.
    PrefixTooLong { requested: usize, available: usize },
    /// Coloring length differs from the prefix length.
    ColoringLengthMismatch { coloring: usize, prefix: usize },
    /// A color lies outside `1..=r`.
    ColorOutOfRange { color: u32, r: u32 },
    /// `r^n` exceeds the exhaustive-enumeration guard of the oracle.
    OracleGuardExceeded { r: u32, n: usize, guard: u64 },
    /// A node or wall-clock budget ran out before the search decided.
    BudgetExhausted { stats: SolverStats },
    /// A model leaves a variable unassigned.
    ModelNotTotal { variable: u32 },
    /// A model assigns a variable twice with conflicting signs.
    ModelConflict { variable: u32 },
    /// The model falsifies a clause of the instance.
    ModelDoesNotSatisfy { clause: usize },
    /// No primary variable is true for this position.
    ModelDecodesNoColor { position: usize },
    /// Malformed DIMACS or model text.
    Parse { line: usize, message: String },
    /// The provider reached its scan limit without an exact value.
    ProviderNoExact { r: u32, k: u32 },
    /// No surrogate entry for this key.
    ProviderMissingValue { r: u32, k: u32 },
    /// A surrogate is smaller than an exact value computed for the same key.
    SurrogateBelowExact { r: u32, k: u32, surrogate: usize, exact: usize },
    /// Block construction stopped at `level`; the levels below it are kept.
    BlockConstruction {
        level: usize,
        partial: Box<BlockFamily>,
        source: Box<Error>,
    },
    /// The handle does not support the requested operation.
    UnsupportedHandle(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GroupMismatch => write!(f, "elements belong to different ambient groups"),
            Error::Overflow => write!(f, "integer overflow in group arithmetic"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DuplicateElement { index } => {
                write!(f, "enumeration repeats an element at index {index}")
            }
            Error::DuplicateBasisElement => write!(f, "witness basis repeats an element"),
            Error::PrefixTooLong {
                requested,
                available,
            } => write!(
                f,
                "prefix of length {requested} requested but only {available} elements exist"
            ),
            Error::ColoringLengthMismatch { coloring, prefix } => write!(
                f,
                "coloring has length {coloring} but the prefix has length {prefix}"
            ),
            Error::ColorOutOfRange { color, r } => {
                write!(f, "color {color} outside 1..={r}")
            }
            Error::OracleGuardExceeded { r, n, guard } => {
                write!(f, "{r}^{n} colorings exceed the oracle guard of {guard}")
            }
            Error::BudgetExhausted { stats } => write!(
                f,
                "budget exhausted after {} nodes and {} backtracks",
                stats.nodes, stats.backtracks
            ),
            Error::ModelNotTotal { variable } => {
                write!(f, "model leaves variable {variable} unassigned")
            }
            Error::ModelConflict { variable } => {
                write!(f, "model assigns variable {variable} both polarities")
            }
            Error::ModelDoesNotSatisfy { clause } => {
                write!(f, "model falsifies clause {clause}")
            }
            Error::ModelDecodesNoColor { position } => {
                write!(f, "model assigns no color to position {position}")
            }
            Error::Parse { line, message } => write!(f, "parse error on line {line}: {message}"),
            Error::ProviderNoExact { r, k } => {
                write!(f, "provider found no exact value for S({r},{k})")
            }
            Error::ProviderMissingValue { r, k } => {
                write!(f, "provider has no entry for S({r},{k})")
            }
            Error::SurrogateBelowExact {
                r,
                k,
                surrogate,
                exact,
            } => write!(
                f,
                "surrogate {surrogate} for S({r},{k}) is below the exact value {exact}"
            ),
            Error::BlockConstruction { level, source, .. } => {
                write!(f, "block construction failed at level {level}: {source}")
            }
            Error::UnsupportedHandle(what) => write!(f, "unsupported handle operation: {what}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::BlockConstruction { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

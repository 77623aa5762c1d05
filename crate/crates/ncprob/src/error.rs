use core::fmt;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A moment sequence or state does not send the unit to 1.
    NotNormalized,
    /// An η- or T-transform inverse was requested for data with vanishing first moment.
    ZeroFirstMoment,
    /// A series has no reciprocal or compositional inverse.
    NotInvertible,
    /// Composition with a series whose constant term is nonzero.
    NonzeroConstant,
    /// A moment of degree `degree` was needed but data stops at `truncation`.
    DegreeOverflow { degree: usize, truncation: usize },
    /// Neighbouring indices of an index sequence coincide.
    InvalidSequence,
    /// The proposed outermost block misses an endpoint of the ground set.
    InvalidOutermost,
    /// Blocks do not form a (non-crossing) partition of the ground set.
    InvalidPartition,
    /// A cumulant or moment table has no entry for a word of this length.
    IncompleteTable { degree: usize },
    /// A word is longer than the truncation of the Fock space.
    WordTooLong { length: usize, limit: usize },
    /// Neighbouring letters of a word belong to the same algebra.
    NotAlternating,
    /// A generator or factor index is out of range.
    UnknownGenerator,
    /// States that should share an alphabet and truncation do not.
    ShapeMismatch,
    /// Unrecognised product, cumulant or partition kind name.
    UnknownKind,
    /// Wrong number of states for the requested product kind.
    Arity { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotNormalized => write!(f, "state does not map the unit to 1"),
            Error::ZeroFirstMoment => write!(f, "first moment is zero, transform is not invertible"),
            Error::NotInvertible => write!(f, "series is not invertible"),
            Error::NonzeroConstant => write!(f, "inner series of a composition has a constant term"),
            Error::DegreeOverflow { degree, truncation } => {
                write!(f, "moment of degree {degree} needed, data truncated at {truncation}")
            }
            Error::InvalidSequence => write!(f, "neighbouring indices must differ"),
            Error::InvalidOutermost => write!(f, "outermost block must contain both endpoints"),
            Error::InvalidPartition => write!(f, "blocks do not form a non-crossing partition"),
            Error::IncompleteTable { degree } => write!(f, "table incomplete at degree {degree}"),
            Error::WordTooLong { length, limit } => {
                write!(f, "word of length {length} exceeds Fock truncation {limit}")
            }
            Error::NotAlternating => write!(f, "neighbouring letters come from the same algebra"),
            Error::UnknownGenerator => write!(f, "unknown generator or factor"),
            Error::ShapeMismatch => write!(f, "states disagree on alphabet or truncation"),
            Error::UnknownKind => write!(f, "unknown kind"),
            Error::Arity { expected, found } => {
                write!(f, "expected {expected} states per factor, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

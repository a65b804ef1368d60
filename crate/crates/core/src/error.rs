use alloc::string::String;
use core::fmt;

/// Everything that can go wrong in the simulator core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must live in the same space do not.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// Same dimension, different basis labels.
    LabelMismatch {
        expected: String,
        found: String,
    },
    DuplicateLabel(String),
    /// A state or operator was built with no basis at all.
    EmptyBasis,
    NonFinite,
    /// Normalizing a vector of zero norm.
    NullState,
    NotNormalized {
        norm: f64,
    },
    NotProjector,
    /// `<f|i>` below the orthogonality cutoff.
    UndefinedWeakValue {
        overlap: f64,
    },
    /// Both ABL branch amplitudes vanish.
    UndefinedAbl,
    IncompleteProjectorSet {
        deviation: f64,
    },
    OutOfRange {
        what: &'static str,
        value: f64,
    },
    /// The postselection projects the state onto zero.
    PostselectionAnnihilates,
    /// The polarization is elliptical; it has no single direction.
    NotLinearPolarization,
    ZeroStrengthReadout,
    DegenerateSamples(&'static str),
    NoCounts,
    InvalidTrials,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::LabelMismatch { expected, found } => {
                write!(
                    f,
                    "basis label mismatch: expected {expected:?}, found {found:?}"
                )
            }
            Error::DuplicateLabel(l) => write!(f, "duplicate basis label {l:?}"),
            Error::EmptyBasis => f.write_str("basis must contain at least one label"),
            Error::NonFinite => f.write_str("non-finite amplitude"),
            Error::NullState => f.write_str("null state: vector has zero norm"),
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::NotProjector => f.write_str("operator is not a projector"),
            Error::UndefinedWeakValue { overlap } => {
                write!(
                    f,
                    "undefined weak value: |<f|i>| = {overlap:e} is below cutoff"
                )
            }
            Error::UndefinedAbl => f.write_str("undefined ABL probability: both branches vanish"),
            Error::IncompleteProjectorSet { deviation } => {
                write!(
                    f,
                    "projectors do not sum to identity (max deviation {deviation:e})"
                )
            }
            Error::OutOfRange { what, value } => write!(f, "{what} out of range: {value}"),
            Error::PostselectionAnnihilates => f.write_str("postselection annihilates state"),
            Error::NotLinearPolarization => f.write_str("polarization is not linear"),
            Error::ZeroStrengthReadout => f.write_str("zero-strength readout undefined"),
            Error::DegenerateSamples(why) => write!(f, "degenerate sample set: {why}"),
            Error::NoCounts => f.write_str("count record has no detections"),
            Error::InvalidTrials => f.write_str("trials must be positive"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

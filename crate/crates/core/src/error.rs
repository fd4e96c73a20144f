use thiserror::Error;

use crate::lattice::DivisorClass;

/// Errors raised by the toolkit. The variant name is stable and is exposed
/// verbatim by the command-line frontend through [`CurveError::kind`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unknown basis label `{0}` for this surface")]
    UnknownLabel(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("operation requires {expected}, got {found}")]
    WrongModel { expected: String, found: String },

    #[error("invalid surface model: {0}")]
    InvalidModel(String),

    #[error("the family is infinite on {0}; a degree bound is required")]
    MissingBound(String),

    #[error("invalid Cremona move: {0}")]
    InvalidMove(String),

    #[error("orbit exceeded the size bound {bound} ({partial_len} classes collected)")]
    OrbitExceeded {
        bound: usize,
        partial_len: usize,
        partial: Vec<DivisorClass>,
    },

    #[error("reduction did not terminate within {0} reflections")]
    ReductionDiverged(usize),

    #[error("wall-crossing formula inapplicable: SW dimension {0} is negative")]
    FormulaInapplicable(i64),

    #[error("contradictory SW status for {class}: {detail}")]
    Contradiction { class: String, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("configuration support is disconnected")]
    Disconnected,

    #[error("component {0} is not a -2 root")]
    NonRoot(String),

    #[error("search space too large: {0}")]
    SearchTooLarge(String),

    #[error("points are not in general position: {0}")]
    SpecialPosition(String),

    #[error("five points do not determine a unique conic (rank {0})")]
    NonUniqueConic(usize),

    #[error("conic and cubic share a component")]
    ComponentOverlap,

    #[error("duplicate point in input: {0}")]
    DuplicatePoint(String),

    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),

    #[error("curve is singular (zero discriminant)")]
    SingularCurve,

    #[error("fixture `{fixture}` failed: {detail}")]
    Fixture { fixture: String, detail: String },
}

impl CurveError {
    pub fn kind(&self) -> &'static str {
        match self {
            CurveError::Dimension { .. } => "Dimension",
            CurveError::Overflow(_) => "Overflow",
            CurveError::Parse { .. } => "Parse",
            CurveError::UnknownLabel(_) => "UnknownLabel",
            CurveError::InvalidClass(_) => "InvalidClass",
            CurveError::WrongModel { .. } => "WrongModel",
            CurveError::InvalidModel(_) => "InvalidModel",
            CurveError::MissingBound(_) => "MissingBound",
            CurveError::InvalidMove(_) => "InvalidMove",
            CurveError::OrbitExceeded { .. } => "OrbitExceeded",
            CurveError::ReductionDiverged(_) => "ReductionDiverged",
            CurveError::FormulaInapplicable(_) => "FormulaInapplicable",
            CurveError::Contradiction { .. } => "Contradiction",
            CurveError::Precondition(_) => "Precondition",
            CurveError::InvalidConfiguration(_) => "InvalidConfiguration",
            CurveError::Disconnected => "Disconnected",
            CurveError::NonRoot(_) => "NonRoot",
            CurveError::SearchTooLarge(_) => "SearchTooLarge",
            CurveError::SpecialPosition(_) => "SpecialPosition",
            CurveError::NonUniqueConic(_) => "NonUniqueConic",
            CurveError::ComponentOverlap => "ComponentOverlap",
            CurveError::DuplicatePoint(_) => "DuplicatePoint",
            CurveError::NotOnCurve(_) => "NotOnCurve",
            CurveError::SingularCurve => "SingularCurve",
            CurveError::Fixture { .. } => "Fixture",
        }
    }
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;

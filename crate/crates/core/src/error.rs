use thiserror::Error;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points are affinely dependent")]
    AffinelyDependent,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,

    #[error("the first polyhedron is contained in the second")]
    NoDifference,

    #[error("empty family of polyhedra")]
    EmptyFamily,
    #[error("point {0} lies outside the triangulated region")]
    PointOutside(String),
    #[error("unsupported dimension {0} (expected 1..=4)")]
    UnsupportedDimension(usize),
    #[error("triangulation is not regular")]
    NotRegular,
    #[error("simplex is not a face of the complex")]
    NotAFace,
    #[error("desingularization exceeded {0} blow-ups")]
    BlowupLimit(usize),

    #[error("value at vertex {vertex} has denominator not dividing the vertex denominator")]
    DenominatorViolation { vertex: String },
    #[error("affine piece on simplex {simplex} has non-integer coefficients")]
    IntegralityFailure { simplex: String },
    #[error("point {0} lies outside the domain")]
    OutsideDomain(String),
    #[error("image of the inner map escapes the domain of the outer map")]
    ImageEscapesDomain,
    #[error("the two maps have different carriers")]
    CarrierMismatch,
    #[error("inner polyhedron equals the outer one")]
    NotStrict,
    #[error("inner polyhedron is not contained in the outer one")]
    OutsideHierarchy,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} out of range for arity {arity}")]
    Arity { index: usize, arity: usize },
    #[error("unsupported arity {0} (expected 1..=4)")]
    UnsupportedArity(usize),

    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("dimension too low: {0}")]
    DimensionTooLow(String),
    #[error("affine map is constant on the squeezed face")]
    ConstantOnFace,
    #[error("map is constant on the boundary of the cube")]
    ConstantOnBoundary,

    #[error("bad integer interval [{0}, {1}]")]
    BadInterval(String, String),
    #[error("map does not land in the boundary of the unit square")]
    NotIntoBoundary,
    #[error("map is constant on the corners of the cube")]
    ConstantOnCorners,
    #[error("lift is inconsistent across simplices")]
    LiftInconsistent,

    #[error("chain verification failed: {0}")]
    VerificationFailed(String),

    #[error("malformed serialized data: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

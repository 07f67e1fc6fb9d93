use thiserror::Error;

/// Errors raised by the algebraic and lattice constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("lattice invariant violated: {0}")]
    InvalidLattice(String),

    #[error("poset invariant violated: {0}")]
    InvalidPoset(String),

    #[error("oracle inconsistency between elements `{left}` and `{right}`: {reason}")]
    OracleInconsistent { left: String, right: String, reason: String },

    #[error("fragment exceeds the size cap of {cap} elements")]
    FragmentCap { cap: usize },

    #[error("lattice homomorphism invalid: {0}")]
    InvalidHom(String),

    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,

    #[error("witness polynomial is not monic in the adjoined variable")]
    NonMonicWitness,

    #[error("variable lists do not match: {0}")]
    VariableMismatch(String),

    #[error("open {0} is not a principal open of the fragment; its section ring is not representable")]
    NonPrincipalOpen(String),

    #[error("model is malformed: {0}")]
    MalformedModel(String),

    #[error("incompatible patch data: {0}")]
    IncompatiblePatch(String),

    #[error("closures of V2\\V1 and V1\\V2 meet at {0}; the input is not separated")]
    NotSeparated(String),

    #[error("missing closure data: {0}")]
    MissingClosureData(String),

    #[error("inconsistent closure data: {0}")]
    InconsistentClosure(String),

    #[error("no finite stage of the diagram suffices: {0}")]
    NoFactorization(String),

    #[error("empty inverse limit: {0}")]
    EmptyLimit(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("element is not in the expected ring: {0}")]
    NotInRing(String),

    #[error("ray {0:?} lies outside the positive quadrant")]
    RayOutsideQuadrant((i64, i64)),

    #[error("invalid factored element: {0}")]
    InvalidFactored(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("refinement witness fails: {0}")]
    RefinementWitness(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("empty open has no section description")]
    EmptyOpen,
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::algebra::Elem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch between `{0}` and `{1}`")]
    SignatureMismatch(String, String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} out of range for universe of size {size}")]
    ArgumentOutOfRange { element: Elem, size: usize },
    #[error("term uses variable x{needed} but only {given} arguments were supplied")]
    MissingArgument { needed: usize, given: usize },
    #[error("invalid algebra `{name}`: {reason}")]
    InvalidAlgebra { name: String, reason: String },
    #[error("{what}: required size {required} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        required: u128,
        cap: u128,
    },
    #[error("partition is not compatible with operation `{0}`")]
    IncompatiblePartition(String),
    #[error("reduct of `{algebra}` violates {identity} at {witness:?}")]
    AxiomViolation {
        algebra: String,
        identity: &'static str,
        witness: Vec<Elem>,
    },
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("`{0}` is not in the quasivariety generated by the given algebras")]
    NotInQuasivariety(String),
    #[error("separation fails on sort {sort}: elements {a} and {b} are not separated")]
    SeparationFailure { sort: usize, a: Elem, b: Elem },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// True when the error is a resource cap rather than a definite answer.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

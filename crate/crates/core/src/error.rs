use thiserror::Error;

/// Errors produced by the partition, construction and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground-set size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("element {elem} out of range for ground set of size {n}")]
    OutOfRange { elem: usize, n: usize },

    #[error("element {0} occurs in more than one block")]
    BlockOverlap(usize),

    #[error("representative sequence is not canonical at index {0}")]
    NotCanonical(usize),

    #[error("ground map is not injective: {0} is hit twice")]
    NotInjective(usize),

    #[error("quotient requires theta <= p")]
    NotBelow,

    #[error("closure needs at least one generator")]
    NoGenerators,

    #[error("closure cap must be at least 1")]
    ZeroCap,

    #[error("expected a {expected} quadruple, got {found}")]
    WrongStage { expected: &'static str, found: &'static str },

    #[error("unknown term `{0}`")]
    UnknownTerm(String),

    #[error("unknown gadget `{0}`")]
    UnknownGadget(String),

    #[error("unknown vertex label `{label}` in gadget {gadget}")]
    UnknownLabel { gadget: String, label: String },

    #[error("invalid gadget: {0}")]
    InvalidGadget(String),

    #[error("gadget set has not been verified")]
    Unverified,

    #[error("join hypotheses fail: alpha0 and beta0 must lie below gamma0 v delta0")]
    JoinConditions,

    #[error("closure exceeded the cap of {0} elements")]
    Capped(usize),

    #[error("no two members of the quadruple join to the top")]
    NoTopPair,

    #[error("ground set of size {n} is too large for exhaustive enumeration (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("search size {0} unsupported: need an odd size between 3 and 7")]
    UnsupportedSize(usize),

    #[error("search budget exhausted")]
    Exhausted,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("not a lattice: {0}")]
    NotALattice(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

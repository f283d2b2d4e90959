use thiserror::Error;

use crate::words::BinaryWord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("heterogeneous lengths in factor family")]
    HeterogeneousLengths,

    #[error("empty word where a nonempty word is required")]
    EmptyWord,

    #[error("invalid letter {0:?}: expected one of a, b, 0, 1")]
    InvalidLetter(char),

    #[error("flip identity violated for u = {0}")]
    FlipIdentity(BinaryWord),

    #[error("prefix precondition violated: neither {0} nor {1} is a prefix of the other")]
    PrefixPrecondition(BinaryWord, BinaryWord),

    #[error("complexity violation: expected {expected} factors of length {n}, found {found}")]
    Complexity {
        n: usize,
        expected: usize,
        found: usize,
    },

    #[error("local change structure violated between {from} and {to}")]
    ChangeStructure { from: BinaryWord, to: BinaryWord },

    #[error("radix chain not increasing between {from} and {to}: difference {difference}")]
    NotIncreasing {
        from: BinaryWord,
        to: BinaryWord,
        difference: String,
    },

    #[error("spec/class mismatch: {0}")]
    ClassMismatch(String),

    #[error("positivity domain: gamma must be > 0, got {0}")]
    PositivityDomain(f64),

    #[error("no central factorization for this spec")]
    NoCentralFactorization,

    #[error("precondition: Christoffel word required, got {0}")]
    NotChristoffel(BinaryWord),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

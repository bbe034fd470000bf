//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("the ideal generator T is excluded")]
    IdealIsT,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("coefficient index {0} out of range for a field of size {1}")]
    CoefficientOutOfRange(u64, u64),
    #[error("operands live at different tower levels")]
    LevelMismatch,
    #[error("twisted operands belong to different coefficient rings")]
    RingMismatch,
    #[error("search space of size {size} exceeds cap {cap}")]
    SearchSpaceTooLarge { size: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("k = {k} exceeds the number of variables {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("subset enumeration cap exceeded: d = {d}, cap = {cap}")]
    CapExceeded { d: usize, cap: usize },
    #[error("no suitable delta exists in even characteristic")]
    EvenCharacteristic,
    #[error("recursion index equals the ideal degree, where the leading bracket vanishes")]
    IndexAtD,
    #[error("bracket [{0}] vanishes in a denominator")]
    BracketVanishes(usize),
    #[error("element is not in the splitting locus")]
    NotInOmega,
    #[error("splitting defect: expected {expected} distinct solutions, found {found}")]
    SplitDefect { expected: u64, found: u64 },
    #[error("genus formula did not divide exactly at n = {0}")]
    NonIntegerGenus(u64),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

use crate::ffield::FieldElement;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{p}^{m} does not fit in 32 bits")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u64),

    #[error("encoding {value} is not an element of F_{q}")]
    ElementOutOfRange { value: u64, q: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("zero is neither a quadratic residue nor a non-residue")]
    ZeroResiduosity,

    #[error("q = {q} is 3 mod 4 (k = 1); use the Dinitz construction")]
    DinitzCase { q: u64 },
    #[error("q = {q} has q - 1 = 2^k with t = 1; no two-quotient construction applies")]
    TrivialOddPart { q: u64 },
    #[error("coset partition failed: {0}")]
    PartitionFailure(String),
    #[error("cyclotomic numbers of order 2 need an even f, got {0}")]
    OddCyclotomicOrder(u64),
    #[error("cyclotomic class index must be 0 or 1, got ({0}, {1})")]
    CyclotomicIndex(u8, u8),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("q = {q} is not 3 mod 4")]
    NotThreeModFour { q: u64 },
    #[error("q = 3 admits no Dinitz starter")]
    DinitzQThree,
    #[error("{0:?} is a quadratic residue; a non-residue is required")]
    NotNonResidue(FieldElement),
    #[error("beta = -1 makes beta + 1 vanish")]
    BetaMinusOne,
    #[error("beta2 = {beta2:?} is not in beta1 * Chat_0 for beta1 = {beta1:?}")]
    NotInBetaCoset {
        beta1: FieldElement,
        beta2: FieldElement,
    },
    #[error("beta pair ({beta1:?}, {beta2:?}) fails the residuosity conditions")]
    InvalidBetaPair {
        beta1: FieldElement,
        beta2: FieldElement,
    },
    #[error("degenerate beta pair: {0}")]
    DegenerateBetaPair(String),
    #[error("q = {q} is not of the form 4t + 1 with t odd (k = {k})")]
    NotFourTPlusOne { q: u64, k: u32 },

    #[error("census order must be odd and in 3..=11, got {0}")]
    CensusOrder(u64),

    #[error("malformed record: {0}")]
    Record(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

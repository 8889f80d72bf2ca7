use thiserror::Error;

/// Every failure mode of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("banality violated: gcd({n}, {what}) = {gcd}")]
    BanalityViolation { n: u64, what: String, gcd: u64 },
    #[error("{root}^2 is not congruent to q = {q} modulo {n}, or {root} is not a unit")]
    BadSqrt { root: u64, q: u64, n: u64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),
    #[error("degree {degree} outside the complex (degrees {lo}..={hi})")]
    DegreeOutOfRange { degree: i32, lo: i32, hi: i32 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("unsupported subgroup: {0}")]
    UnsupportedSubgroup(String),
    #[error("orbit classification mismatch: {0}")]
    ClassificationMismatch(String),
    #[error("half-integral exponent requires a square root of q in the coefficient ring")]
    MissingSqrtQ,
    #[error("group order {order} is not invertible modulo {n}")]
    NonInvertibleOrder { order: u64, n: u64 },
    #[error("Jacquet projector images not stabilized by j = {0}")]
    NotStabilized(u32),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("contragredient not available for {0}")]
    DualNotAvailable(String),
    #[error("PS(1) acyclicity failed; difference matrix {0}")]
    AcyclicityFailed(String),
    #[error("unsupported representation spec: {0}")]
    UnsupportedSpec(String),
    #[error("could not parse representation spec {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("intertwining witness {0} is not a unit")]
    NonUnitWitness(u64),
    #[error("degree {0} not present in the rule table")]
    DegreeNotInTable(i32),
    #[error("graded module carries no provenance to dualize")]
    MissingProvenance,
    #[error("cuspidal witness failed: {0}")]
    CuspidalWitnessFailed(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

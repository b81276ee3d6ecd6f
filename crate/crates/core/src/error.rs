use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants are grouped by how a caller is expected to react: bad input,
/// a violated hypothesis of a closed formula, a size cap, or an internal
/// consistency failure that indicates a bug.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),

    #[error("modulus {0:?} is reducible over the prime field")]
    ReducibleModulus(Vec<u64>),

    #[error("modulus must be monic of degree {degree}, got {coeffs:?}")]
    BadModulus { degree: u32, coeffs: Vec<u64> },

    #[error("{what} of size {size} exceeds the cap {cap}")]
    SizeCap { what: &'static str, size: u128, cap: u128 },

    #[error("no multiplicative character of order {order} on F_{q}: {order} does not divide q-1")]
    OrderUnavailable { order: u64, q: u64 },

    #[error("no Dirichlet character of order {order} modulo {modulus}")]
    NoCharacterOfOrder { order: u64, modulus: u64 },

    #[error("{a} and {n} are not coprime")]
    NotCoprime { a: u64, n: u64 },

    #[error("no representation of {target} as {form}")]
    NoRepresentation { form: &'static str, target: String },

    #[error("p = {p} is 2 mod 3 and r = {r} is odd; c = -2(-p)^(r/2) is not an integer")]
    OddExtensionForInertPrime { p: u64, r: u32 },

    #[error("bad ring descriptor `{0}`")]
    BadDescriptor(String),

    #[error("clique counting requires an undirected graph (connection set is not symmetric)")]
    DirectedGraph,

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("bracket {value} is not within 1e-6 of an integer (residual {residual:e})")]
    NonIntegralBracket { value: f64, residual: f64 },

    #[error("imaginary part {0:e} of a character-sum value exceeds 1e-6")]
    NonRealValue(f64),

    #[error("inexact division: {numerator} / {denominator}")]
    InexactDivision { numerator: String, denominator: String },

    #[error("no t <= {cap} with p^t = X^2 + 27Y^2 and p not dividing X (p = {p})")]
    MinimalityProbeFailed { p: u64, cap: u32 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

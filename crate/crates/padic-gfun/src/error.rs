use thiserror::Error;

/// Errors shared across all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {p} is not prime")]
    CompositeP { p: u64 },
    #[error("p = {p} is not supported: the characteristic must exceed 3")]
    UnsupportedP { p: u64 },
    #[error("q = {q} exceeds the size bound {bound}")]
    SizeExceeded { q: u64, bound: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("precision exhausted: {remaining} valid digits left, guard threshold is {guard}")]
    PrecisionExhausted { remaining: u32, guard: u32 },
    #[error("{x} is not a p-adic integer at p = {p}")]
    NotPadicInteger { x: String, p: u64 },
    #[error("bad G-function parameter: {0}")]
    BadParameter(String),
    #[error("singular curve")]
    SingularCurve,
    #[error("curve has j-invariant 0 (a = 0)")]
    JInvariantZero,
    #[error("curve has j-invariant 1728 (b = 0)")]
    JInvariant1728,
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("no integer in the Hasse window is congruent to the computed value")]
    NoHasseInteger,
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("cyclotomic ring conductor does not contain the required roots of unity")]
    ConductorMismatch,
    #[error("character T^{k} is trivial")]
    TrivialCharacter { k: i64 },
    #[error("argument must be a nonzero field element")]
    ZeroArgument,
    #[error("q = {q} is not congruent to 1 mod {m}")]
    BadModulus { q: u64, m: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

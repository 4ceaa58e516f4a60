use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: Q(sqrt(-{left})) vs Q(sqrt(-{right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a squarefree positive integer")]
    NotSquarefree(u32),
    #[error("{p} is ramified in Q(sqrt(-{d}))")]
    Ramified { p: u64, d: u32 },
    #[error("{p} is inert in Q(sqrt(-{d})): no root of x^2+{d} mod {p}")]
    Inert { p: u64, d: u32 },
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("p-adic contexts differ")]
    ContextMismatch,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("truncation order too small: need {needed}, have {available}")]
    OrderExceeded { needed: i64, available: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("e2* is unknown for this curve")]
    UnknownE2Star,
    #[error("period computation failed: {0}")]
    PeriodFailure(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("lattice sum tail bound not achievable: {0}")]
    TailBound(String),
    #[error("inconsistent character table: {0}")]
    CharacterTable(String),
    #[error("class group of Q(sqrt(-{0})) is nontrivial")]
    ClassGroup(u32),
    #[error("epsilon congruence violated: {0}")]
    EpsilonCongruence(String),
    #[error("p-adic period unavailable: {0}")]
    PeriodUnavailable(String),
    #[error("integrality violated: {0}")]
    Integrality(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog row {0:?}")]
    UnknownCatalogRow(String),
}

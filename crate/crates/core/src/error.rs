use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be prime (got {0})")]
    NotPrime(u64),
    #[error("index {index} is outside the truncation range {lo}..={hi}")]
    OutOfRange { index: usize, lo: usize, hi: usize },
    #[error("not an exponential of a series with zero constant term")]
    NotExponential,
    #[error("not p-integral: coefficient {0} has negative valuation")]
    NotIntegral(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),
    #[error("bound violated at n = {0}")]
    BoundViolated(usize),
    #[error("quotient multiplier is not p-integral; the congruence s_(p^(l-1)) = s_(p^l) mod p^m fails")]
    MultiplierNotIntegral,
    #[error("no quotient congruence is known for this bound")]
    NoQuotientCongruence,
    #[error("mismatched truncations: {0} vs {1}")]
    MismatchedTruncation(usize, usize),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("non-integral summand at s = {0}")]
    NonIntegralSummand(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

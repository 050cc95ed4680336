use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (need p >= 5)")]
    UnsupportedCharacteristic(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("polynomials live over different fields")]
    MixedFields,
    #[error("F_{{p^{m}}} does not embed into F_{{p^{n}}}")]
    NotASubfield { m: u32, n: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has zero derivative")]
    Inseparable,
    #[error("generic fiber is singular (discriminant vanishes identically)")]
    SingularFiber,
    #[error("twisting polynomial is not squarefree")]
    NotSquarefree,
    #[error("j-invariant is constant")]
    ConstantJInvariant,
    #[error("place polynomial is not monic irreducible")]
    ReduciblePlace,
    #[error("negative L-function degree {0} (conductor degree {1})")]
    NegativeDegree(i64, i64),
    #[error("counting inconsistency: {0}")]
    CountingInconsistency(String),
    #[error("functional equation sign is inconsistent: {0}")]
    InconsistentSign(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parity violation: rank {rank} with sign {sign}")]
    ParityViolation { rank: usize, sign: i32 },
    #[error("work estimate {estimate:e} exceeds budget {budget:e}; pass --force to run anyway")]
    BudgetExceeded { estimate: f64, budget: f64 },
    #[error("bilinear form is degenerate or not symmetric")]
    DegenerateForm,
    #[error("matrix is not orthogonal for the census form")]
    NotOrthogonal,
    #[error("degree mismatch: stats have N = {stats}, census has N = {census}")]
    DegreeMismatch { stats: usize, census: usize },
    #[error("store entry {key}: {source}")]
    Store {
        key: String,
        #[source]
        source: std::io::Error,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Mathematical validation failures, as opposed to usage or operational errors.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::CountingInconsistency(_)
                | Error::InconsistentSign(_)
                | Error::Validation(_)
                | Error::ParityViolation { .. }
                | Error::NegativeDegree(..)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("identically zero on segment")]
    ZeroPolynomial,

    #[error("empty search interval: lower end must be below upper end")]
    EmptyInterval,

    #[error("matrix is not hermitian: entry ({row}, {col}) is not the conjugate of ({col}, {row})")]
    NotHermitian { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("classes belong to different models")]
    ModelMismatch,

    #[error("index undefined on degenerate class")]
    DegenerateIndex,

    #[error("segment lies in degenerate locus")]
    DegenerateSegment,

    #[error("polarization class must be ample")]
    NotAmple,

    #[error("search bound exceeded after {0} steps")]
    SearchBoundExceeded(u64),

    #[error("rank must be positive")]
    ZeroRank,

    #[error("gcd must be odd: gcd({rank}, {level}) = {gcd}")]
    EvenGcd { rank: u64, level: u64, gcd: u64 },

    #[error("theta power must be at least 2, got {0}")]
    ThetaPowerTooSmall(i64),

    #[error("genus, rank and level must be positive")]
    NonPositiveVerlindeData,

    #[error("first Chern class is not integral: rank {rank} times slope {slope}")]
    NonIntegralChernClass { rank: u64, slope: String },

    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(String),

    #[error("product needs at least two factors, got {0}")]
    TooFewFactors(usize),

    #[error("{0}")]
    Unsupported(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

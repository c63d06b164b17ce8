use crate::pattern::Language;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty interval ]{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("interval ]{lo}, {hi}] does not overlap the domain ]{dom_lo}, {dom_hi}]")]
    OutsideDomain {
        lo: f64,
        hi: f64,
        dom_lo: f64,
        dom_hi: f64,
    },

    #[error("atom index {index} out of range for a grid with {k} thresholds")]
    AtomIndex { index: usize, k: usize },

    #[error("language mismatch: {expected} vs {found}")]
    LanguageMismatch { expected: Language, found: Language },

    #[error("{0}")]
    InvalidPattern(String),

    #[error("itemset is not a maximal representation: {0}")]
    InvalidItemset(String),

    #[error("no object supports the query itemset")]
    EmptySupport,

    #[error("jaccard distance is undefined for two empty sets")]
    BothEmpty,

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: validation problems exit 2, broken
    /// input data or I/O exits 3.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Data(_) | Error::Io(_) | Error::Csv(_) => 3,
            _ => 2,
        }
    }
}

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("non-finite values in {0}")]
    NonFinite(String),
    #[error("field is not real: inverse transform left relative imaginary residue {residue:.3e}")]
    NotReal { residue: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },
    #[error("no resonant window: |eta| = {0} < 3")]
    NoResonantWindow(f64),
    #[error("blow-up detected at t = {t}")]
    BlowUp { t: f64 },
    #[error("coordinate degeneracy: min v' = {min_vprime:.3e}")]
    CoordinateDegeneracy { min_vprime: f64 },
    #[error("elliptic iteration not contracting: measured factor {factor:.3}")]
    NonContraction { factor: f64 },
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

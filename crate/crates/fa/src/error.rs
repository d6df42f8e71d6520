//! Error type shared by all modules.

/// Errors reported by the library.
///
/// The CLI maps these onto exit codes: `Input`, `Parse` and `Contract`
/// become exit code 2, `Resource` becomes exit code 3.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// The caller supplied an invalid argument (unknown symbol, mismatched
    /// alphabets, out-of-range constant, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A file or expression could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// An API precondition was violated (e.g. a construction that requires a
    /// simple automaton was handed a weighted one).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A configured resource limit (state budget, oracle budget, binomial
    /// order) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

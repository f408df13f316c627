use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("parameter error: {0}")]
    Parameter(String),

    /// `a`, `b` are 1-based indices of the basis pair `(X_a, X_b)`.
    #[error("almost complex structure is not integrable: max |N_I| = {max_residual:.3e} at basis pair (X{a}, X{b})")]
    Integrability { max_residual: f64, a: usize, b: usize },

    #[error("holomorphic brackets leave g^(1,0): closure residual {0:.3e}")]
    Closure(f64),

    #[error("norm is not strongly pseudoconvex at this direction: smallest Levi eigenvalue {min_eigenvalue:.3e}")]
    StronglyPseudoconvexViolation { min_eigenvalue: f64 },

    #[error("direction must be nonzero")]
    ZeroDirection,

    #[error("singular linear system (pivot {0:.3e})")]
    Singular(f64),

    #[error("numerical differentiation failed: {0}")]
    Differentiation(String),

    #[error("algebra is not of complex-group type: |{entry}| = {magnitude:.3e}")]
    NotComplexGroup { entry: String, magnitude: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: text.strip_suffix(&suffix).unwrap_or(&text).to_string(),
        }
    }
}

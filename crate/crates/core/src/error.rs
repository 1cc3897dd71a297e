use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// A single rejected input row, with its 1-based line number in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct RowIssue {
    pub line: u64,
    pub message: String,
}

impl fmt::Display for RowIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain where the model is defined.
    #[error("{0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("insufficient data: {needed} observations required, {got} given")]
    InsufficientData { needed: usize, got: usize },

    #[error("singular design matrix (repeated or degenerate observation times)")]
    SingularDesign,

    #[error("fitted transform never reaches level {level} on its decreasing branch")]
    NoRealRoot { level: f64 },

    #[error("scenarios do not share one baseline: {0}")]
    MixedBaseline(String),

    /// Every malformed or invalid row of an input table.
    #[error("{}", join_issues(.0))]
    Rows(Vec<RowIssue>),

    #[error("schema error{}: {message}", at_path(.path))]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

fn join_issues(issues: &[RowIssue]) -> String {
    issues
        .iter()
        .map(RowIssue::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn at_path(path: &str) -> String {
    if path.is_empty() {
        String::new()
    } else {
        format!(" at `{path}`")
    }
}

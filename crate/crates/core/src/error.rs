use std::fmt;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated precondition, reported with the measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
    pub value: Option<f64>,
}

impl Diagnostic {
    pub fn new(field: impl Into<String>, message: impl Into<String>, value: Option<f64>) -> Self {
        Self { field: field.into(), message: message.into(), value }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{}: {} (measured {:.6e})", self.field, self.message, v),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

fn join(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {}", join(.0))]
    InvalidConfig(Vec<Diagnostic>),

    #[error("config parse error at `{path}`: {message}")]
    ConfigParse { path: String, message: String },

    #[error("singular geometry: {0}")]
    SingularGeometry(String),

    #[error("no convergence after {iterations} iterations: {what}")]
    NonConvergence { what: String, iterations: usize },

    #[error("accuracy requirement not met: {0}")]
    Accuracy(String),

    #[error("unstable configuration: {0}")]
    Instability(String),

    #[error("no sign change in bracket [{lo:.4e}, {hi:.4e}] m (f = {f_lo:.4e}, {f_hi:.4e})")]
    NotBracketed { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("refusing to overwrite existing output {0} (pass --overwrite)")]
    OutputExists(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::InvalidConfig(_) | Error::ConfigParse { .. } => 2,
            Error::NonConvergence { .. } | Error::Accuracy(_) => 3,
            Error::Instability(_) | Error::NotBracketed { .. } | Error::SingularGeometry(_) => 4,
            Error::OutputExists(_) | Error::Io(_) => 1,
        }
    }
}

use std::fmt;

use thiserror::Error;

/// One violated configuration constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeError {
    pub field: &'static str,
    pub value: String,
    pub allowed: &'static str,
}

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} (allowed: {})", self.field, self.value, self.allowed)
    }
}

/// Every violation found in a configuration, reported together.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<RangeError>);

impl ConfigErrors {
    pub fn fields(&self) -> Vec<&'static str> {
        self.0.iter().map(|e| e.field).collect()
    }

    pub fn contains(&self, field: &str) -> bool {
        self.0.iter().any(|e| e.field == field)
    }
}

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(ConfigErrors),

    #[error("config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("water-filling did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("base station {bs} allocates {allocated} Hz over a budget of {budget} Hz")]
    Conservation { bs: usize, allocated: f64, budget: f64 },

    #[error("invalid allocation decision: {0}")]
    Decision(String),

    #[error("instance too large for exhaustive search: {0}")]
    Size(String),

    #[error("sync session in state {state:?} cannot {action}")]
    State {
        state: crate::kbsync::SyncState,
        action: &'static str,
    },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Sweep(_) => 2,
            Error::Convergence { .. } => 3,
            Error::Size(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

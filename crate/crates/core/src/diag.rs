//! Non-fatal diagnostics emitted by the loaders and the front-end.

use std::fmt;

/// A warning tied to a source location. Rendered as `file:line: message`,
/// matching the conventional compiler diagnostic shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Originating file path or contract address, when known.
    pub origin: Option<String>,
    /// 1-based line number; 0 means the diagnostic covers the whole input.
    pub line: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(origin: Option<&str>, line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            origin: origin.map(str::to_owned),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.origin, self.line) {
            (Some(o), 0) => write!(f, "{}: {}", o, self.message),
            (Some(o), n) => write!(f, "{}:{}: {}", o, n, self.message),
            (None, 0) => write!(f, "{}", self.message),
            (None, n) => write!(f, "line {}: {}", n, self.message),
        }
    }
}

use std::fmt;

/// Position of a diagnostic in formula or KB text (1-based).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("{pos}: {msg}")]
    Parse { pos: Pos, msg: String },

    #[error("sort mismatch in {context}: expected `{expected}`, found `{found}`")]
    SortMismatch {
        expected: String,
        found: String,
        context: String,
    },

    #[error("variable capture: {0}")]
    Capture(String),

    #[error("unbound variable `{0}`")]
    Unbound(String),

    #[error("{0}")]
    Syntax(String),

    #[error("{0}")]
    Kb(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("formula is not a sentence: free variables {0}")]
    NotClosed(String),

    #[error("relation algebra: {0}")]
    Relation(String),

    #[error("inconsistent Kripke satisfaction for `{formula}`: {count} truth values satisfy it")]
    KripkeInconsistent { formula: String, count: usize },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::sync::Arc<std::io::Error>,
    },
}

impl Error {
    pub(crate) fn parse(pos: Pos, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source: std::sync::Arc::new(source),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

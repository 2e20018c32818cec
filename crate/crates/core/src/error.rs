use thiserror::Error;

/// Errors raised by graph construction, spectral routines and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {what} needs {required}, cap is {cap}{}", hint_suffix(.hint))]
    Capacity {
        what: &'static str,
        required: u128,
        cap: u128,
        hint: Option<&'static str>,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "partition is not equitable: cell {source_cell} -> cell {target_cell}, \
         vertex {witness_a} has {count_a} neighbours but vertex {witness_b} has {count_b}"
    )]
    NotEquitable {
        source_cell: usize,
        target_cell: usize,
        witness_a: usize,
        count_a: usize,
        witness_b: usize,
        count_b: usize,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

fn hint_suffix(hint: &Option<&'static str>) -> String {
    match hint {
        Some(h) => format!(" (try {h})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    /// True for the capacity variant; the CLI maps these to their own exit code.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

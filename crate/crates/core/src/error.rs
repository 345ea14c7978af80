use crate::report::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what}: index {index} out of range (size {size})")]
    OutOfRange {
        what: String,
        index: usize,
        size: usize,
    },

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("invalid {kind}: {report}")]
    Invalid {
        kind: &'static str,
        report: ValidationReport,
    },

    #[error("not an essential equivalence: {0}")]
    NotEssentialEquivalence(&'static str),

    #[error("construction failed: {0}")]
    Construction(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn out_of_range(what: impl Into<String>, index: usize, size: usize) -> Self {
        Error::OutOfRange {
            what: what.into(),
            index,
            size,
        }
    }
}

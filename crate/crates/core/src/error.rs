use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("language model order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("reference phoneme sequence is empty")]
    EmptyReference,
    #[error("invalid checker configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("span {start}..{end} is out of range for {len} clusters")]
    SpanOutOfRange { start: usize, end: usize, len: usize },
    #[error("cluster position {position} is out of range for a word of {len} clusters")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("invalid edit: {0}")]
    InvalidEdit(&'static str),
    #[error("no hypotheses to rank")]
    NoHypotheses,
    #[error("no records to evaluate")]
    NoRecords,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

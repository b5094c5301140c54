//! Rule-based understanding of alert requests: lexicon-driven
//! tokenisation, part-of-speech and semantic tagging, then frame filling.

mod frame;
mod lexicon;
mod tagger;

pub use frame::{
    parse_frame, resolve_fuzzy, AlertSpec, AlertType, ClarificationRequest, DistanceConstraint,
    FrameOutcome, Notification, PartialFrame, Place, PlaceKind, ResolvedDistance, Slot,
};
pub use lexicon::{Lexicon, LexiconEntry, Pos, SemTag, STOCK_LEXICON};
pub use tagger::{analyze, tag, tokenize, Token};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NluError {
    #[error("empty input")]
    EmptyInput,
    #[error("lexicon line {line}: {message}")]
    Lexicon { line: usize, message: String },
    #[error("distance term `{0}` is not a label of the partition")]
    UnknownTerm(String),
    #[error("alert document line {line}: {message}")]
    Document { line: usize, message: String },
}

/// Tokenises, tags and fills the frame in one call.
pub fn understand(text: &str, lex: &Lexicon) -> Result<FrameOutcome, NluError> {
    Ok(parse_frame(&analyze(text, lex)?))
}

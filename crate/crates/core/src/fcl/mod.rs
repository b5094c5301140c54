//! A Fuzzy Control Language (IEC 61131-7) subset: the `pairs` term
//! extension for whole linguistic scales, `trian` terms, AND-only rules and
//! centre-of-gravity defuzzification.

mod ast;
mod engine;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use engine::{
    compile, Accumulation, AccumulatedOutput, CompileMode, CompiledController, CompiledVariable,
    InferenceResult, TermShape, DEFAULT_COG_SAMPLES, MIN_AREA,
};
pub use parser::{parse_fcl, validate};

use thiserror::Error;

use crate::linguistic::LinguisticError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FclError {
    #[error("{line}:{col}: expected {expected}, found {found}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("{line}:{col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
    #[error("{}{message}", rule.map(|r| format!("rule {r}: ")).unwrap_or_default())]
    Semantic { rule: Option<u32>, message: String },
    #[error("partition for `{var}`: {source}")]
    Partition { var: String, source: LinguisticError },
    #[error("missing input variable `{0}`")]
    MissingInput(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("input `{var}` has invalid value {value}")]
    InvalidInput { var: String, value: f64 },
    #[error("COG needs at least 2 samples, got {0}")]
    CogSamples(usize),
}

impl FclError {
    /// Source position for syntax errors.
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            FclError::Parse { line, col, .. } | FclError::Invalid { line, col, .. } => Some((*line, *col)),
            _ => None,
        }
    }
}

//! 2-tuple linguistic values and the partitions they are read against.
//!
//! A [`Partition`] is either uniform (equally spaced, Ruspini) or twofold,
//! where each term keeps its own left and right half-width so that
//! unbalanced term sets can be represented without pulling distant
//! neighbours artificially close.

mod partition;
mod two_tuple;

pub use partition::{Crossing, Partition, PartitionKind, TwofoldTerm};
pub use two_tuple::{apply_modifier, delta, delta_inv, Polarity, TwoTuple};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinguisticError {
    #[error("granularity must be at least 1")]
    Granularity,
    #[error("value is NaN")]
    NotANumber,
    #[error("beta {0} is below the lower bound 0")]
    BetaBelowZero(f64),
    #[error("beta {beta} is above the upper bound g = {granularity}")]
    BetaAboveScale { beta: f64, granularity: usize },
    #[error("beta {beta} lies outside [0, {granularity}]")]
    BetaOutOfScale { beta: f64, granularity: usize },
    #[error("term index {index} exceeds g = {granularity}")]
    TermIndex { index: usize, granularity: usize },
    #[error("symbolic translation {0} is outside [-0.5, 0.5)")]
    Alpha(f64),
    #[error("2-tuple has g = {tuple} but the partition has g = {partition}")]
    ScaleMismatch { tuple: usize, partition: usize },
    #[error("a partition needs at least 2 terms, got {0}")]
    TooFewTerms(usize),
    #[error("label {0} is empty")]
    EmptyLabel(usize),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: f64, hi: f64 },
    #[error("{labels} labels but {apexes} apexes")]
    CountMismatch { labels: usize, apexes: usize },
    #[error("apex {0} is not finite")]
    NonFiniteApex(usize),
    #[error("apexes must increase: apex {index} ({value}) follows {previous}")]
    NonIncreasingApexes { index: usize, previous: f64, value: f64 },
    #[error("gap {gap} between `{from}` and `{to}` reaches {limit} (twice the reference width); coverage would drop to 0")]
    GapBreaksCoverage { from: String, to: String, gap: f64, limit: f64 },
    #[error("{x} is below the domain lower bound {lo}")]
    BelowDomain { x: f64, lo: f64 },
    #[error("{x} is above the domain upper bound {hi}")]
    AboveDomain { x: f64, hi: f64 },
    #[error("malformed partition text: {0}")]
    Format(String),
}

//! Alert controllers over battery, distance and time tolerance: rulebase
//! generation, telemetry evaluation and the uniform-vs-twofold comparison.

mod compare;
mod geo;
mod rulebase;
mod telemetry;

pub use compare::{compare_models, compare_with_steps, ComparisonPoint, ComparisonReport, Grid, GridSteps};
pub use geo::{check_coordinates, haversine, EARTH_RADIUS_M};
pub use rulebase::{generate_rulebase, with_generated_rules, RulePolicy};
pub use telemetry::{evaluate_alert, read_telemetry, AlertEvent, Position, TelemetrySample};

use thiserror::Error;

use crate::fcl::{parse_fcl, FclError, FclProgram, DEFAULT_COG_SAMPLES};

pub const BATTERY: &str = "Battery";
pub const DISTANCE: &str = "Distance";
pub const TOLERANCE: &str = "TimeTolerance";
pub const OUTPUT: &str = "AlertTrigger";
pub const ALERT_TERM: &str = "Alert";
pub const NO_ALERT_TERM: &str = "NoAlert";

/// Trigger values at or above this fire an alert.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// The shipped `Alert1` controller with its complete 105-rule base.
pub const ALERT1_FCL: &str = include_str!("../../data/alert1.fcl");

pub fn alert1_program() -> FclProgram {
    parse_fcl(ALERT1_FCL).expect("shipped Alert1 script parses")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlertSettings {
    pub threshold: f64,
    pub cog_samples: usize,
}

impl Default for AlertSettings {
    fn default() -> Self {
        AlertSettings {
            threshold: DEFAULT_THRESHOLD,
            cog_samples: DEFAULT_COG_SAMPLES,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlertError {
    #[error(transparent)]
    Fcl(#[from] FclError),
    #[error("label mismatch: {0}")]
    LabelMismatch(String),
    #[error("invalid coordinates ({lat}, {lon})")]
    Coordinates { lat: f64, lon: f64 },
    #[error("coordinate telemetry needs a destination")]
    MissingDestination,
    #[error("grid step for {axis} must be positive, got {step}")]
    BadStep { axis: String, step: f64 },
    #[error("telemetry line {line}: {message}")]
    Telemetry { line: usize, message: String },
}

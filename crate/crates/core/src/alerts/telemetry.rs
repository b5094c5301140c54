use std::io::Read;

use super::geo::{check_coordinates, haversine};
use super::{AlertError, BATTERY, DISTANCE, OUTPUT, TOLERANCE};
use crate::fcl::CompiledController;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Position {
    /// Distance to the destination, in metres.
    Distance(f64),
    /// Latitude and longitude in degrees.
    Coordinates { lat: f64, lon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelemetrySample {
    /// Seconds since the epoch.
    pub timestamp: f64,
    pub position: Position,
    /// Battery level in percent. Values slightly outside `[0, 100]` are
    /// kept and clamped at inference time.
    pub battery_pct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlertEvent {
    pub timestamp: f64,
    pub trigger_value: f64,
    pub fired: bool,
    /// Strongest rule activations, at most three.
    pub rule_trace: Vec<(u32, f64)>,
    /// Distance fed to the controller after clamping.
    pub distance_m: f64,
    pub warnings: Vec<String>,
}

impl AlertEvent {
    /// `timestamp,trigger,fired`
    pub fn to_line(&self) -> String {
        format!("{},{:.6},{}", self.timestamp, self.trigger_value, self.fired)
    }
}

/// Reads telemetry CSV with either `timestamp,lat,lon,battery` or
/// `timestamp,distance_m,battery` columns.
pub fn read_telemetry<R: Read>(reader: R) -> Result<Vec<TelemetrySample>, AlertError> {
    let mut csv = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = csv
        .headers()
        .map_err(|e| AlertError::Telemetry { line: 1, message: e.to_string() })?
        .iter()
        .map(str::to_string)
        .collect();
    let coordinates = match headers.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["timestamp", "lat", "lon", "battery"] => true,
        ["timestamp", "distance_m", "battery"] => false,
        [] | [""] => return Ok(Vec::new()),
        _ => {
            return Err(AlertError::Telemetry {
                line: 1,
                message: format!(
                    "header must be `timestamp,lat,lon,battery` or `timestamp,distance_m,battery`, got `{}`",
                    headers.join(",")
                ),
            })
        }
    };

    let mut samples: Vec<TelemetrySample> = Vec::new();
    for (i, record) in csv.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| AlertError::Telemetry { line, message: e.to_string() })?;
        let field = |k: usize| -> Result<f64, AlertError> {
            let raw = record.get(k).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| AlertError::Telemetry {
                    line,
                    message: format!("`{raw}` in column {} is not a number", headers[k]),
                })
        };
        let timestamp = field(0)?;
        let (position, battery_pct) = if coordinates {
            let (lat, lon) = (field(1)?, field(2)?);
            check_coordinates(lat, lon).map_err(|e| AlertError::Telemetry {
                line,
                message: e.to_string(),
            })?;
            (Position::Coordinates { lat, lon }, field(3)?)
        } else {
            let d = field(1)?;
            if d < 0.0 {
                return Err(AlertError::Telemetry {
                    line,
                    message: format!("negative distance {d}"),
                });
            }
            (Position::Distance(d), field(2)?)
        };
        if let Some(prev) = samples.last() {
            if timestamp < prev.timestamp {
                return Err(AlertError::Telemetry {
                    line,
                    message: format!("timestamp {timestamp} goes back before {}", prev.timestamp),
                });
            }
        }
        samples.push(TelemetrySample {
            timestamp,
            position,
            battery_pct,
        });
    }
    Ok(samples)
}

/// Runs the controller on one sample. Coordinates are turned into a
/// distance to `destination`; the distance is clamped to the controller's
/// distance domain before inference.
pub fn evaluate_alert(
    c: &CompiledController,
    sample: &TelemetrySample,
    tolerance: f64,
    destination: Option<(f64, f64)>,
    threshold: f64,
) -> Result<AlertEvent, AlertError> {
    let raw = match sample.position {
        Position::Distance(d) => d,
        Position::Coordinates { lat, lon } => {
            let (dlat, dlon) = destination.ok_or(AlertError::MissingDestination)?;
            haversine(lat, lon, dlat, dlon)?
        }
    };
    let (lo, hi) = c
        .input(DISTANCE)
        .ok_or_else(|| AlertError::LabelMismatch(format!("controller has no input `{DISTANCE}`")))?
        .domain;
    let distance_m = raw.clamp(lo, hi);
    let result = c.infer_with(&[(BATTERY, sample.battery_pct), (DISTANCE, distance_m), (TOLERANCE, tolerance)])?;
    let trigger_value = result
        .output(OUTPUT)
        .ok_or_else(|| AlertError::LabelMismatch(format!("controller has no output `{OUTPUT}`")))?;
    Ok(AlertEvent {
        timestamp: sample.timestamp,
        trigger_value,
        fired: trigger_value >= threshold,
        rule_trace: result.top_rules(3),
        distance_m,
        warnings: result.warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_distance_rows() {
        let s = read_telemetry("timestamp,distance_m,battery\n0,700,100\n10, 650.5 ,99.5\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].position, Position::Distance(650.5));
        assert_eq!(s[1].battery_pct, 99.5);
    }

    #[test]
    fn reads_coordinate_rows() {
        let s = read_telemetry("timestamp,lat,lon,battery\n5,48.85,2.35,80\n".as_bytes()).unwrap();
        assert_eq!(s[0].position, Position::Coordinates { lat: 48.85, lon: 2.35 });
    }

    #[test]
    fn empty_input_gives_no_samples() {
        assert!(read_telemetry("".as_bytes()).unwrap().is_empty());
        assert!(read_telemetry("timestamp,distance_m,battery\n".as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_rows() {
        let err = |s: &str| read_telemetry(s.as_bytes()).unwrap_err();
        assert!(matches!(err("time,d,b\n1,2,3\n"), AlertError::Telemetry { line: 1, .. }));
        assert!(matches!(
            err("timestamp,distance_m,battery\n1,x,3\n"),
            AlertError::Telemetry { line: 2, .. }
        ));
        assert!(matches!(
            err("timestamp,distance_m,battery\n5,1,1\n4,1,1\n"),
            AlertError::Telemetry { line: 3, .. }
        ));
        assert!(matches!(
            err("timestamp,lat,lon,battery\n1,95,0,50\n"),
            AlertError::Telemetry { line: 2, .. }
        ));
        assert!(matches!(
            err("timestamp,distance_m,battery\n1,-4,3\n"),
            AlertError::Telemetry { line: 2, .. }
        ));
    }
}

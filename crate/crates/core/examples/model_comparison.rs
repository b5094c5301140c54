//! Sweeps the Alert1 controller under the uniform and twofold distance
//! scales and lists where they disagree.

use std::time::Instant;

use geoling::alerts::{alert1_program, compare_with_steps, AlertSettings, GridSteps};

fn main() {
    let start = Instant::now();
    let report = compare_with_steps(&alert1_program(), GridSteps::default(), &AlertSettings::default()).unwrap();
    let elapsed = start.elapsed();

    let mut distances: Vec<f64> = report.divergent_points().map(|p| p.distance).collect();
    distances.dedup();
    distances.sort_by(f64::total_cmp);
    distances.dedup();
    println!(
        "{} points in {:.0?}, {} divergent, at distances {distances:?}",
        report.points.len(),
        elapsed,
        report.divergences.len()
    );
    for d in [600.0, 700.0] {
        let p = report.find(100.0, d, 0.0).unwrap();
        println!(
            "battery 100, distance {d}, tolerance 0: uniform {:.3}, twofold {:.3}",
            p.uniform_trigger, p.twofold_trigger
        );
    }
}

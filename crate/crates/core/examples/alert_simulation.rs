//! A vehicle closing in on its destination, evaluated by both models.

use geoling::alerts::{alert1_program, evaluate_alert, read_telemetry, DEFAULT_THRESHOLD};
use geoling::fcl::{compile, CompileMode};

const TELEMETRY: &str = "timestamp,lat,lon,battery
0,48.8700,2.3500,100
60,48.8620,2.3500,97
120,48.8590,2.3500,95
180,48.8563,2.3500,93
240,48.8545,2.3500,90
300,48.8536,2.3500,88
";

fn main() {
    let program = alert1_program();
    let samples = read_telemetry(TELEMETRY.as_bytes()).unwrap();
    let dest = Some((48.8500, 2.3500));
    for mode in [CompileMode::Twofold, CompileMode::UniformBaseline] {
        let c = compile(&program, mode).unwrap();
        println!("{}", mode.as_str());
        for s in &samples {
            let e = evaluate_alert(&c, s, 0.0, dest, DEFAULT_THRESHOLD).unwrap();
            println!(
                "  t={:>3} d={:>7.1} m trigger={:.3} {} rules={:?}",
                e.timestamp,
                e.distance_m,
                e.trigger_value,
                if e.fired { "ALERT" } else { "" },
                e.rule_trace.iter().map(|(id, _)| id).collect::<Vec<_>>()
            );
        }
    }
}

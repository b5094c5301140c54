//! Parses a small FCL controller, runs it, and prints the canonical form.

use geoling::fcl::{compile, parse_fcl, CompileMode};

const SCRIPT: &str = "
FUNCTION_BLOCK Fan
VAR_INPUT
    Temperature : LING;
END_VAR
VAR_OUTPUT
    Speed : REAL;
END_VAR
FUZZIFY Temperature
    TERM Heat := pairs (Cold, 0) (Mild, 15) (Warm, 22) (Hot, 40);
END_FUZZIFY
DEFUZZIFY Speed
    TERM Slow := trian 0 0 1;
    TERM Fast := trian 0 1 1;
    METHOD : COG;
END_DEFUZZIFY
RULEBLOCK Rules
    RULE 1 : IF Temperature IS Cold THEN Speed IS Slow;
    RULE 2 : IF Temperature IS Mild THEN Speed IS Slow;
    RULE 3 : IF Temperature IS Warm THEN Speed IS Fast;
    RULE 4 : IF Temperature IS Hot THEN Speed IS Fast;
END_RULEBLOCK
END_FUNCTION_BLOCK
";

fn main() {
    let program = parse_fcl(SCRIPT).unwrap();
    print!("{program}");

    for mode in [CompileMode::Twofold, CompileMode::UniformBaseline] {
        let c = compile(&program, mode).unwrap();
        print!("{:>8}:", mode.as_str());
        for t in [0.0, 10.0, 18.0, 25.0, 40.0, 55.0] {
            let r = c.infer_with(&[("Temperature", t)]).unwrap();
            print!("  {t}->{:.3}", r.output("Speed").unwrap());
        }
        println!();
    }

    let err = parse_fcl("FUNCTION_BLOCK X VAR_INPUT a : LING END_VAR").unwrap_err();
    println!("bad script: {err}");
}

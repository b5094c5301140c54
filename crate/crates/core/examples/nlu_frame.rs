//! Tags a request, fills the alert frame, and asks for what is missing.

use geoling::alerts::{alert1_program, DISTANCE};
use geoling::fcl::{compile, CompileMode};
use geoling::nlu::{analyze, parse_frame, resolve_fuzzy, FrameOutcome, Lexicon, PartialFrame};

fn main() {
    let lex = Lexicon::stock();
    let sentence = "I want to receive an alert when the vehicle gets very close to the warehouse";
    let tokens = analyze(sentence, &lex).unwrap();
    for t in &tokens {
        let sem = t.sem.map(|s| s.as_str()).unwrap_or("-");
        println!("{:<12} {:<12} {sem}", t.original, t.pos.as_str());
    }

    let controller = compile(&alert1_program(), CompileMode::Twofold).unwrap();
    let distance = controller.input(DISTANCE).and_then(|v| v.partition.as_ref()).unwrap();
    let spec = parse_frame(&tokens).spec().cloned().unwrap();
    print!("\n{}", resolve_fuzzy(&spec, distance).unwrap().to_document());

    let short = "I want to receive an alert when the vehicle gets very close";
    let FrameOutcome::Clarify(request) = parse_frame(&analyze(short, &lex).unwrap()) else {
        unreachable!("no place given");
    };
    print!("\n{}", request.to_document());
    let answer = PartialFrame::from_tokens(&analyze("the warehouse", &lex).unwrap());
    let merged = request.partial.merge(answer).complete();
    print!("{}", merged.spec().unwrap().to_document());
}

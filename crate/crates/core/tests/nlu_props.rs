use geoling::alerts::{alert1_program, DISTANCE};
use geoling::fcl::{compile, CompileMode};
use geoling::linguistic::{delta_inv, Partition};
use geoling::nlu::{analyze, parse_frame, resolve_fuzzy, AlertSpec, FrameOutcome, Lexicon};
use proptest::prelude::*;

const FILLERS: &[&str] = &["please", "I", "want", "when", "if", "my", "Bob", "soon", "42"];

fn sentence() -> impl Strategy<Value = String> {
    let lex = Lexicon::stock();
    let mut vocab: Vec<String> = lex.entries().iter().map(|e| e.phrase.clone()).collect();
    vocab.extend(FILLERS.iter().map(|s| s.to_string()));
    prop::collection::vec(prop::sample::select(vocab), 1..14).prop_map(|w| w.join(" "))
}

fn distance_partition() -> Partition {
    let c = compile(&alert1_program(), CompileMode::Twofold).unwrap();
    c.input(DISTANCE).unwrap().partition.clone().unwrap()
}

proptest! {
    #[test]
    fn same_sentence_same_outcome(s in sentence()) {
        let lex = Lexicon::stock();
        prop_assert_eq!(parse_frame(&analyze(&s, &lex).unwrap()), parse_frame(&analyze(&s, &lex).unwrap()));
    }

    #[test]
    fn frames_are_total(s in sentence()) {
        match parse_frame(&analyze(&s, &Lexicon::stock()).unwrap()) {
            FrameOutcome::Spec(spec) => {
                prop_assert!(!spec.mobile.is_empty());
                prop_assert!(!spec.place.name.is_empty());
            }
            FrameOutcome::Clarify(c) => {
                prop_assert!(!c.missing.is_empty());
                prop_assert_eq!(c.missing.clone(), c.partial.missing());
            }
        }
    }

    #[test]
    fn tags_come_from_matching_entries(s in sentence()) {
        let lex = Lexicon::stock();
        for t in analyze(&s, &lex).unwrap() {
            if let Some(tag) = t.sem {
                prop_assert!(lex.lookup(&t.surface).any(|e| e.sem == Some(tag)), "{} -> {tag:?}", t.surface);
            }
        }
    }

    #[test]
    fn spec_documents_round_trip(s in sentence()) {
        if let FrameOutcome::Spec(spec) = parse_frame(&analyze(&s, &Lexicon::stock()).unwrap()) {
            let resolved = resolve_fuzzy(&spec, &distance_partition()).unwrap();
            for doc in [spec, resolved] {
                prop_assert_eq!(AlertSpec::from_document(&doc.to_document()).unwrap(), doc);
            }
        }
    }
}

#[test]
fn stacked_modifiers_equal_their_sum() {
    let lex = Lexicon::stock();
    let p = distance_partition();
    let resolve = |text: &str| {
        let spec = parse_frame(&analyze(text, &lex).unwrap()).spec().cloned().unwrap();
        resolve_fuzzy(&spec, &p).unwrap().distance.unwrap()
    };
    let once = resolve("alert me when the truck gets very close to the depot");
    let twice = resolve("alert me when the truck gets very very close to the depot");
    let mixed = resolve("alert me when the truck gets very slightly close to the depot");
    let base = |d: &geoling::nlu::DistanceConstraint| delta_inv(&d.resolved.as_ref().unwrap().two_tuple);
    assert_eq!(once.modifier, 0.5);
    assert_eq!(twice.modifier, 1.0);
    assert_eq!(mixed.modifier, 0.25);
    assert_eq!(base(&once), 1.5);
    assert_eq!(base(&twice), 1.0);
    assert_eq!(base(&mixed), 1.75);
}

//! Frame filling against `ALERT = TYPE, MOBILE, PLACE, NOTIFICATION`.

use std::fmt;

use super::lexicon::{Pos, SemTag};
use super::tagger::Token;
use super::NluError;
use crate::linguistic::{apply_modifier, Partition, Polarity, TwoTuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlertType {
    ZoneEntry,
    ZoneExit,
    Corridor,
}

impl AlertType {
    pub fn as_str(self) -> &'static str {
        match self {
            AlertType::ZoneEntry => "ZONE_ENTRY",
            AlertType::ZoneExit => "ZONE_EXIT",
            AlertType::Corridor => "CORRIDOR",
        }
    }

    fn from_tag(tag: SemTag) -> Option<Self> {
        match tag {
            SemTag::ZoneEntry => Some(AlertType::ZoneEntry),
            SemTag::ZoneExit => Some(AlertType::ZoneExit),
            SemTag::Corridor => Some(AlertType::Corridor),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    Town,
    Address,
    Poi,
    Zoi,
}

impl PlaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlaceKind::Town => "TOWN",
            PlaceKind::Address => "ADDRESS",
            PlaceKind::Poi => "POI",
            PlaceKind::Zoi => "ZOI",
        }
    }

    fn from_tag(tag: SemTag) -> Option<Self> {
        match tag {
            SemTag::Town => Some(PlaceKind::Town),
            SemTag::Address => Some(PlaceKind::Address),
            SemTag::Poi => Some(PlaceKind::Poi),
            SemTag::Zoi => Some(PlaceKind::Zoi),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub kind: PlaceKind,
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notification {
    Alert,
}

/// Frame slots, in grammar order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Type,
    Mobile,
    Place,
    Notification,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::Type, Slot::Mobile, Slot::Place, Slot::Notification];

    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Type => "TYPE",
            Slot::Mobile => "MOBILE",
            Slot::Place => "PLACE",
            Slot::Notification => "NOTIFICATION",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A distance term with the modifiers scoped to it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceConstraint {
    /// Partition label the distance phrase is bound to.
    pub term: String,
    pub polarity: Polarity,
    /// Signed sum of modifier deltas: intensifiers add, weakeners subtract.
    pub modifier: f64,
    pub resolved: Option<ResolvedDistance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedDistance {
    pub two_tuple: TwoTuple,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlertSpec {
    pub alert_type: AlertType,
    pub mobile: String,
    pub place: Place,
    pub notification: Notification,
    pub distance: Option<DistanceConstraint>,
}

/// Whatever slots an utterance filled.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialFrame {
    pub alert_type: Option<AlertType>,
    pub mobile: Option<String>,
    pub place: Option<Place>,
    pub notification: Option<Notification>,
    pub distance: Option<DistanceConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClarificationRequest {
    /// Missing slots in grammar order; never empty.
    pub missing: Vec<Slot>,
    pub partial: PartialFrame,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameOutcome {
    Spec(AlertSpec),
    Clarify(ClarificationRequest),
}

impl FrameOutcome {
    pub fn spec(&self) -> Option<&AlertSpec> {
        match self {
            FrameOutcome::Spec(s) => Some(s),
            FrameOutcome::Clarify(_) => None,
        }
    }
}

impl PartialFrame {
    /// Reads slots from tagged tokens.
    pub fn from_tokens(tokens: &[Token]) -> Self {
        let mut frame = PartialFrame::default();
        for (i, t) in tokens.iter().enumerate() {
            let Some(tag) = t.sem else { continue };
            if frame.alert_type.is_none() {
                frame.alert_type = AlertType::from_tag(tag);
            }
            if frame.place.is_none() {
                if let Some(kind) = PlaceKind::from_tag(tag) {
                    frame.place = Some(Place {
                        kind,
                        name: t.original.clone(),
                    });
                }
            }
            if frame.mobile.is_none() && tag == SemTag::Mobile {
                frame.mobile = Some(match i.checked_sub(1).map(|j| &tokens[j]) {
                    Some(det) if det.pos == Pos::Determiner => {
                        format!("{} {}", det.surface, t.original)
                    }
                    _ => t.original.clone(),
                });
            }
            if frame.notification.is_none() && matches!(tag, SemTag::Alert | SemTag::Notification) {
                frame.notification = Some(Notification::Alert);
            }
            if frame.distance.is_none() && tag == SemTag::Distance {
                frame.distance = distance_at(tokens, i);
            }
        }
        frame
    }

    /// Fills this frame's empty slots from `other`.
    pub fn merge(mut self, other: PartialFrame) -> Self {
        self.alert_type = self.alert_type.or(other.alert_type);
        self.mobile = self.mobile.or(other.mobile);
        self.place = self.place.or(other.place);
        self.notification = self.notification.or(other.notification);
        self.distance = self.distance.or(other.distance);
        self
    }

    pub fn missing(&self) -> Vec<Slot> {
        Slot::ALL
            .into_iter()
            .filter(|s| match s {
                Slot::Type => self.alert_type.is_none(),
                Slot::Mobile => self.mobile.is_none(),
                Slot::Place => self.place.is_none(),
                Slot::Notification => self.notification.is_none(),
            })
            .collect()
    }

    pub fn complete(self) -> FrameOutcome {
        let missing = self.missing();
        if !missing.is_empty() {
            return FrameOutcome::Clarify(ClarificationRequest { missing, partial: self });
        }
        FrameOutcome::Spec(AlertSpec {
            alert_type: self.alert_type.expect("checked"),
            mobile: self.mobile.expect("checked"),
            place: self.place.expect("checked"),
            notification: self.notification.expect("checked"),
            distance: self.distance,
        })
    }
}

/// The distance token at `i` together with the run of modifiers right
/// before it.
fn distance_at(tokens: &[Token], i: usize) -> Option<DistanceConstraint> {
    let entry = tokens[i].entry.as_ref()?;
    let mut modifier = 0.0;
    for t in tokens[..i].iter().rev() {
        let Some(e) = t.entry.as_ref().filter(|_| t.sem.is_some_and(SemTag::is_modifier)) else {
            break;
        };
        let d = e.modifier_delta.unwrap_or(0.0);
        modifier += if t.sem == Some(SemTag::FuzzyModifPlus) { d } else { -d };
    }
    Some(DistanceConstraint {
        term: entry.term_binding.clone()?,
        polarity: entry.polarity?,
        modifier,
        resolved: None,
    })
}

/// Fills the alert frame from tagged tokens, or lists what is missing.
pub fn parse_frame(tokens: &[Token]) -> FrameOutcome {
    PartialFrame::from_tokens(tokens).complete()
}

/// Turns the distance constraint into a 2-tuple on `partition`, shifting
/// the bound term by the modifiers along its polarity.
pub fn resolve_fuzzy(spec: &AlertSpec, partition: &Partition) -> Result<AlertSpec, NluError> {
    let mut out = spec.clone();
    if let Some(d) = out.distance.as_mut() {
        let index = partition
            .index_of(&d.term)
            .ok_or_else(|| NluError::UnknownTerm(d.term.clone()))?;
        let base = TwoTuple::new(index, 0.0, partition.granularity()).expect("index from partition");
        let two_tuple = apply_modifier(&base, d.modifier, d.polarity);
        let value = partition.from_two_tuple(&two_tuple).expect("same scale");
        d.resolved = Some(ResolvedDistance { two_tuple, value });
    }
    Ok(out)
}

impl AlertSpec {
    /// `key: value` lines.
    ///
    /// Keys: `type`, `mobile`, `place.kind`, `place.name`, `notification`,
    /// and when a distance was mentioned `distance.term`,
    /// `distance.polarity`, `distance.modifier`; after resolution also
    /// `distance.term_index`, `distance.alpha`, `distance.granularity`,
    /// `distance.value`.
    pub fn to_document(&self) -> String {
        let mut out = format!(
            "type: {}\nmobile: {}\nplace.kind: {}\nplace.name: {}\nnotification: ALERT\n",
            self.alert_type.as_str(),
            self.mobile,
            self.place.kind.as_str(),
            self.place.name
        );
        if let Some(d) = &self.distance {
            out.push_str(&format!(
                "distance.term: {}\ndistance.polarity: {}\ndistance.modifier: {:?}\n",
                d.term, d.polarity, d.modifier
            ));
            if let Some(r) = &d.resolved {
                out.push_str(&format!(
                    "distance.term_index: {}\ndistance.alpha: {:?}\ndistance.granularity: {}\ndistance.value: {:?}\n",
                    r.two_tuple.term_index(),
                    r.two_tuple.alpha(),
                    r.two_tuple.granularity(),
                    r.value
                ));
            }
        }
        out
    }

    pub fn from_document(text: &str) -> Result<Self, NluError> {
        let mut fields = std::collections::BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once(':').ok_or_else(|| NluError::Document {
                line: n + 1,
                message: "expected `key: value`".into(),
            })?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let doc_err = |message: String| NluError::Document { line: 0, message };
        let get = |k: &str| fields.get(k).cloned().ok_or_else(|| doc_err(format!("missing `{k}`")));
        let num = |k: &str| -> Result<f64, NluError> {
            get(k)?.parse().map_err(|_| doc_err(format!("`{k}` is not a number")))
        };
        let alert_type = match get("type")?.as_str() {
            "ZONE_ENTRY" => AlertType::ZoneEntry,
            "ZONE_EXIT" => AlertType::ZoneExit,
            "CORRIDOR" => AlertType::Corridor,
            other => return Err(doc_err(format!("unknown type `{other}`"))),
        };
        let kind = match get("place.kind")?.as_str() {
            "TOWN" => PlaceKind::Town,
            "ADDRESS" => PlaceKind::Address,
            "POI" => PlaceKind::Poi,
            "ZOI" => PlaceKind::Zoi,
            other => return Err(doc_err(format!("unknown place kind `{other}`"))),
        };
        if get("notification")? != "ALERT" {
            return Err(doc_err("notification must be ALERT".into()));
        }
        let distance = if fields.contains_key("distance.term") {
            let polarity = Polarity::parse(&get("distance.polarity")?)
                .ok_or_else(|| doc_err("bad `distance.polarity`".into()))?;
            let resolved = if fields.contains_key("distance.term_index") {
                let index: usize = get("distance.term_index")?
                    .parse()
                    .map_err(|_| doc_err("bad `distance.term_index`".into()))?;
                let g: usize = get("distance.granularity")?
                    .parse()
                    .map_err(|_| doc_err("bad `distance.granularity`".into()))?;
                let two_tuple = TwoTuple::new(index, num("distance.alpha")?, g)
                    .map_err(|e| doc_err(e.to_string()))?;
                Some(ResolvedDistance {
                    two_tuple,
                    value: num("distance.value")?,
                })
            } else {
                None
            };
            Some(DistanceConstraint {
                term: get("distance.term")?,
                polarity,
                modifier: num("distance.modifier")?,
                resolved,
            })
        } else {
            None
        };
        Ok(AlertSpec {
            alert_type,
            mobile: get("mobile")?,
            place: Place {
                kind,
                name: get("place.name")?,
            },
            notification: Notification::Alert,
            distance,
        })
    }
}

impl ClarificationRequest {
    pub fn to_document(&self) -> String {
        let names: Vec<&str> = self.missing.iter().map(|s| s.as_str()).collect();
        format!("missing: {}\n", names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nlu::{analyze, Lexicon};

    const SENTENCE: &str = "I want to receive an alert when the vehicle gets very close to the warehouse";

    fn frame(text: &str) -> FrameOutcome {
        parse_frame(&analyze(text, &Lexicon::stock()).unwrap())
    }

    fn distance() -> Partition {
        Partition::twofold(
            &["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"],
            &[0.0, 200.0, 400.0, 700.0, 1200.0],
        )
        .unwrap()
    }

    #[test]
    fn golden_sentence() {
        let spec = frame(SENTENCE).spec().cloned().unwrap();
        assert_eq!(spec.alert_type, AlertType::ZoneEntry);
        assert_eq!(spec.mobile, "the vehicle");
        assert_eq!(
            spec.place,
            Place {
                kind: PlaceKind::Poi,
                name: "warehouse".into()
            }
        );
        let d = spec.distance.unwrap();
        assert_eq!((d.term.as_str(), d.polarity, d.modifier), ("Near", Polarity::TowardLow, 0.5));
    }

    #[test]
    fn missing_place_asks_for_it() {
        match frame("I want to receive an alert when the vehicle gets very close") {
            FrameOutcome::Clarify(c) => {
                assert_eq!(c.missing, vec![Slot::Place]);
                assert_eq!(c.to_document(), "missing: PLACE\n");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_slots_in_grammar_order() {
        match frame("hello there") {
            FrameOutcome::Clarify(c) => assert_eq!(c.missing, Slot::ALL.to_vec()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exit_sentence() {
        let spec = frame("alert me if the truck leaves Paris").spec().cloned().unwrap();
        assert_eq!(spec.alert_type, AlertType::ZoneExit);
        assert_eq!(spec.mobile, "the truck");
        assert_eq!(spec.place.kind, PlaceKind::Town);
        assert_eq!(spec.place.name, "Paris");
        assert!(spec.distance.is_none());
    }

    #[test]
    fn answer_fills_missing_slot() {
        let lex = Lexicon::stock();
        let FrameOutcome::Clarify(c) = frame("notify me when my van enters") else {
            panic!()
        };
        let answer = PartialFrame::from_tokens(&analyze("the depot", &lex).unwrap());
        let spec = c.partial.merge(answer).complete().spec().cloned().unwrap();
        assert_eq!(spec.place.name, "depot");
        assert_eq!(spec.mobile, "my van");
    }

    #[test]
    fn resolve_with_and_without_modifier() {
        let spec = frame(SENTENCE).spec().cloned().unwrap();
        let r = resolve_fuzzy(&spec, &distance()).unwrap();
        let res = r.distance.unwrap().resolved.unwrap();
        assert_eq!((res.two_tuple.term_index(), res.two_tuple.alpha()), (2, -0.5));
        assert_eq!(res.value, 300.0);

        let plain = frame("alert me when the car gets close to the depot").spec().cloned().unwrap();
        let res = resolve_fuzzy(&plain, &distance()).unwrap().distance.unwrap().resolved.unwrap();
        assert_eq!((res.two_tuple.term_index(), res.two_tuple.alpha()), (2, 0.0));
        assert_eq!(res.value, 400.0);
    }

    #[test]
    fn stacked_intensifiers_clamp() {
        let spec = frame("alert me when the car gets very very very very very close to the depot")
            .spec()
            .cloned()
            .unwrap();
        assert_eq!(spec.distance.as_ref().unwrap().modifier, 2.5);
        let res = resolve_fuzzy(&spec, &distance()).unwrap().distance.unwrap().resolved.unwrap();
        assert_eq!(res.two_tuple.beta(), 0.0);
        assert_eq!(res.value, 0.0);
    }

    #[test]
    fn weakener_moves_the_other_way() {
        let spec = frame("alert me when the car gets slightly close to the depot").spec().cloned().unwrap();
        let res = resolve_fuzzy(&spec, &distance()).unwrap().distance.unwrap().resolved.unwrap();
        assert_eq!(res.two_tuple.beta(), 2.25);
    }

    #[test]
    fn unknown_binding_is_a_config_error() {
        let spec = frame(SENTENCE).spec().cloned().unwrap();
        let other = Partition::uniform(&["Lo", "Hi"], 0.0, 1.0).unwrap();
        assert_eq!(resolve_fuzzy(&spec, &other), Err(NluError::UnknownTerm("Near".into())));
    }

    #[test]
    fn document_roundtrip() {
        let spec = frame(SENTENCE).spec().cloned().unwrap();
        for s in [spec.clone(), resolve_fuzzy(&spec, &distance()).unwrap()] {
            let doc = s.to_document();
            assert_eq!(AlertSpec::from_document(&doc).unwrap(), s);
        }
        assert!(AlertSpec::from_document("type: ZONE_ENTRY\n").is_err());
    }
}

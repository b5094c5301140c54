use std::fmt;
use std::str::FromStr;

use super::NluError;
use crate::linguistic::Polarity;

/// The lexicon shipped with the crate.
pub const STOCK_LEXICON: &str = include_str!("../../data/lexicon.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Determiner,
    Preposition,
    Other,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::Adverb => "adverb",
            Pos::Pronoun => "pronoun",
            Pos::Determiner => "determiner",
            Pos::Preposition => "preposition",
            Pos::Other => "other",
        }
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "noun" => Pos::Noun,
            "verb" => Pos::Verb,
            "adjective" => Pos::Adjective,
            "adverb" => Pos::Adverb,
            "pronoun" => Pos::Pronoun,
            "determiner" => Pos::Determiner,
            "preposition" => Pos::Preposition,
            "other" => Pos::Other,
            _ => return Err(format!("unknown part of speech `{s}`")),
        })
    }
}

/// Semantic tags of the alert grammar. `NONE` in lexicon files maps to
/// the absence of a tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemTag {
    Alert,
    ZoneEntry,
    ZoneExit,
    Corridor,
    FuzzyModifPlus,
    FuzzyModifMinus,
    Distance,
    Mobile,
    Town,
    Address,
    Poi,
    Zoi,
    Notification,
}

impl SemTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SemTag::Alert => "ALERT",
            SemTag::ZoneEntry => "ZONE_ENTRY",
            SemTag::ZoneExit => "ZONE_EXIT",
            SemTag::Corridor => "CORRIDOR",
            SemTag::FuzzyModifPlus => "FUZZY_MODIF_+",
            SemTag::FuzzyModifMinus => "FUZZY_MODIF_-",
            SemTag::Distance => "DISTANCE",
            SemTag::Mobile => "MOBILE",
            SemTag::Town => "TOWN",
            SemTag::Address => "ADDRESS",
            SemTag::Poi => "POI",
            SemTag::Zoi => "ZOI",
            SemTag::Notification => "NOTIFICATION",
        }
    }

    /// Parses a tag name; `Ok(None)` for `NONE`.
    pub fn parse(s: &str) -> Result<Option<Self>, String> {
        Ok(Some(match s {
            "NONE" => return Ok(None),
            "ALERT" => SemTag::Alert,
            "ZONE_ENTRY" => SemTag::ZoneEntry,
            "ZONE_EXIT" => SemTag::ZoneExit,
            "CORRIDOR" => SemTag::Corridor,
            "FUZZY_MODIF_+" => SemTag::FuzzyModifPlus,
            "FUZZY_MODIF_-" => SemTag::FuzzyModifMinus,
            "DISTANCE" => SemTag::Distance,
            "MOBILE" => SemTag::Mobile,
            "TOWN" => SemTag::Town,
            "ADDRESS" => SemTag::Address,
            "POI" => SemTag::Poi,
            "ZOI" => SemTag::Zoi,
            "NOTIFICATION" => SemTag::Notification,
            _ => return Err(format!("unknown semantic tag `{s}`")),
        }))
    }

    pub fn is_alert_type(self) -> bool {
        matches!(self, SemTag::ZoneEntry | SemTag::ZoneExit | SemTag::Corridor)
    }

    pub fn is_place(self) -> bool {
        matches!(self, SemTag::Town | SemTag::Address | SemTag::Poi | SemTag::Zoi)
    }

    pub fn is_modifier(self) -> bool {
        matches!(self, SemTag::FuzzyModifPlus | SemTag::FuzzyModifMinus)
    }
}

impl fmt::Display for SemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub phrase: String,
    pub pos: Pos,
    pub sem: Option<SemTag>,
    pub term_binding: Option<String>,
    pub polarity: Option<Polarity>,
    pub modifier_delta: Option<f64>,
}

/// Closed-domain lexicon. Phrases are stored case-folded, words separated
/// by single spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    max_words: usize,
}

pub(crate) fn fold(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

impl Lexicon {
    pub fn stock() -> Self {
        Lexicon::parse(STOCK_LEXICON).expect("stock lexicon is valid")
    }

    pub fn from_entries(entries: Vec<LexiconEntry>) -> Result<Self, NluError> {
        let mut lex = Lexicon {
            entries: Vec::with_capacity(entries.len()),
            max_words: 1,
        };
        for (i, e) in entries.into_iter().enumerate() {
            lex.push(e).map_err(|message| NluError::Lexicon { line: i + 1, message })?;
        }
        Ok(lex)
    }

    fn push(&mut self, mut e: LexiconEntry) -> Result<(), String> {
        e.phrase = fold(&e.phrase);
        if e.phrase.is_empty() {
            return Err("empty phrase".into());
        }
        if self.entries.iter().any(|o| o.phrase == e.phrase && o.pos == e.pos) {
            return Err(format!("duplicate entry `{}` as {}", e.phrase, e.pos.as_str()));
        }
        if e.sem == Some(SemTag::Distance) && (e.term_binding.is_none() || e.polarity.is_none()) {
            return Err(format!("DISTANCE entry `{}` needs a term binding and a polarity", e.phrase));
        }
        if e.sem.is_some_and(SemTag::is_modifier) && e.modifier_delta.is_none() {
            return Err(format!("modifier `{}` needs a delta", e.phrase));
        }
        self.max_words = self.max_words.max(e.phrase.split(' ').count());
        self.entries.push(e);
        Ok(())
    }

    /// Reads the tab-separated format; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, NluError> {
        let mut lex = Lexicon {
            entries: Vec::new(),
            max_words: 1,
        };
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let err = |message: String| NluError::Lexicon { line, message };
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').map(str::trim).collect();
            if cols.len() < 3 || cols.len() > 6 {
                return Err(err(format!("expected 3 to 6 tab-separated columns, got {}", cols.len())));
            }
            let opt = |i: usize| cols.get(i).copied().filter(|s| !s.is_empty());
            let entry = LexiconEntry {
                phrase: cols[0].to_string(),
                pos: cols[1].parse().map_err(err)?,
                sem: SemTag::parse(cols[2]).map_err(err)?,
                term_binding: opt(3).map(str::to_string),
                polarity: match opt(4) {
                    None => None,
                    Some(p) => Some(Polarity::parse(p).ok_or_else(|| err(format!("unknown polarity `{p}`")))?),
                },
                modifier_delta: match opt(5) {
                    None => None,
                    Some(d) => Some(
                        d.parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| err(format!("bad delta `{d}`")))?,
                    ),
                },
            };
            lex.push(entry).map_err(err)?;
        }
        Ok(lex)
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    /// Entries for a folded phrase, in lexicon order.
    pub fn lookup<'a>(&'a self, phrase: &'a str) -> impl Iterator<Item = &'a LexiconEntry> + 'a {
        self.entries.iter().filter(move |e| e.phrase == phrase)
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.lookup(phrase).next().is_some()
    }

    /// Longest phrase length in words.
    pub fn max_words(&self) -> usize {
        self.max_words
    }
}

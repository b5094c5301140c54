use super::lexicon::{fold, Lexicon, LexiconEntry, Pos, SemTag};
use super::NluError;

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    /// Case-folded text; multiword phrases are joined by single spaces.
    pub surface: String,
    /// The text as written, for names such as towns.
    pub original: String,
    pub pos: Pos,
    pub sem: Option<SemTag>,
    /// Lexicon entry the tags came from, once tagged.
    pub entry: Option<LexiconEntry>,
}

fn words(text: &str) -> Vec<&str> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '-' || c == '\''))
        .filter(|w| !w.is_empty())
        .collect()
}

/// Splits `text` into words and merges lexicon phrases, longest first.
/// Tokens are left untagged.
pub fn tokenize(text: &str, lex: &Lexicon) -> Result<Vec<Token>, NluError> {
    let ws = words(text);
    if ws.is_empty() {
        return Err(NluError::EmptyInput);
    }
    let folded: Vec<String> = ws.iter().map(|w| fold(w)).collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < ws.len() {
        let longest = (1..=lex.max_words().min(ws.len() - i))
            .rev()
            .find(|&n| lex.contains(&folded[i..i + n].join(" ")))
            .unwrap_or(1);
        tokens.push(Token {
            surface: folded[i..i + longest].join(" "),
            original: ws[i..i + longest].join(" "),
            pos: Pos::Other,
            sem: None,
            entry: None,
        });
        i += longest;
    }
    Ok(tokens)
}

/// Annotates each token from the lexicon. Among the entries for a phrase,
/// one with a semantic tag wins over one without; ties keep lexicon order.
pub fn tag(tokens: Vec<Token>, lex: &Lexicon) -> Vec<Token> {
    tokens
        .into_iter()
        .map(|mut t| {
            let chosen = lex
                .lookup(&t.surface)
                .find(|e| e.sem.is_some())
                .or_else(|| lex.lookup(&t.surface).next());
            match chosen {
                Some(e) => {
                    t.pos = e.pos;
                    t.sem = e.sem;
                    t.entry = Some(e.clone());
                }
                None => {
                    t.pos = Pos::Other;
                    t.sem = None;
                    t.entry = None;
                }
            }
            t
        })
        .collect()
}

/// `tokenize` followed by `tag`.
pub fn analyze(text: &str, lex: &Lexicon) -> Result<Vec<Token>, NluError> {
    Ok(tag(tokenize(text, lex)?, lex))
}

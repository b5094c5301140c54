//! Recursive-descent parser for the supported FCL subset.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::FclError;

const KEYWORDS: &[&str] = &[
    "FUNCTION_BLOCK",
    "END_FUNCTION_BLOCK",
    "VAR_INPUT",
    "VAR_OUTPUT",
    "END_VAR",
    "FUZZIFY",
    "END_FUZZIFY",
    "DEFUZZIFY",
    "END_DEFUZZIFY",
    "RULEBLOCK",
    "END_RULEBLOCK",
    "TERM",
    "METHOD",
    "RULE",
    "IF",
    "THEN",
    "IS",
    "AND",
    "OR",
    "NOT",
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> FclError {
        let t = self.peek();
        FclError::Parse {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.kind.describe(),
        }
    }

    fn invalid_at(&self, token: &Token, message: impl Into<String>) -> FclError {
        FclError::Invalid {
            line: token.line,
            col: token.col,
            message: message.into(),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), FclError> {
        if self.at_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.error(format!("`{kw}`")))
        }
    }

    fn punct(&mut self, kind: TokenKind) -> Result<(), FclError> {
        if self.peek().kind == kind {
            self.advance();
            Ok(())
        } else {
            Err(self.error(kind.describe()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FclError> {
        match &self.peek().kind {
            TokenKind::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn number(&mut self) -> Result<f64, FclError> {
        match self.peek().kind {
            TokenKind::Number(n) => {
                self.advance();
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn program(&mut self) -> Result<FclProgram, FclError> {
        self.keyword("FUNCTION_BLOCK")?;
        let mut program = FclProgram {
            name: self.ident("a function block name")?,
            inputs: Vec::new(),
            outputs: Vec::new(),
            fuzzify: Vec::new(),
            defuzzify: Vec::new(),
            rule_blocks: Vec::new(),
        };
        loop {
            let kw = match &self.peek().kind {
                TokenKind::Ident(s) => s.clone(),
                _ => String::new(),
            };
            match kw.as_str() {
                "VAR_INPUT" => {
                    self.advance();
                    let decls = self.var_decls()?;
                    program.inputs.extend(decls);
                }
                "VAR_OUTPUT" => {
                    self.advance();
                    let decls = self.var_decls()?;
                    program.outputs.extend(decls);
                }
                "FUZZIFY" => program.fuzzify.push(self.fuzzify()?),
                "DEFUZZIFY" => program.defuzzify.push(self.defuzzify()?),
                "RULEBLOCK" => program.rule_blocks.push(self.rule_block()?),
                "END_FUNCTION_BLOCK" => {
                    self.advance();
                    break;
                }
                _ => {
                    return Err(self.error(
                        "`VAR_INPUT`, `VAR_OUTPUT`, `FUZZIFY`, `DEFUZZIFY`, `RULEBLOCK` or `END_FUNCTION_BLOCK`",
                    ))
                }
            }
        }
        if self.peek().kind != TokenKind::Eof {
            return Err(self.error("end of input after `END_FUNCTION_BLOCK`"));
        }
        Ok(program)
    }

    fn var_decls(&mut self) -> Result<Vec<VarDecl>, FclError> {
        let mut decls = Vec::new();
        while !self.at_keyword("END_VAR") {
            let name = self.ident("a variable name or `END_VAR`")?;
            self.punct(TokenKind::Colon)?;
            let kind = if self.at_keyword("LING") {
                VarKind::Ling
            } else if self.at_keyword("REAL") {
                VarKind::Real
            } else {
                return Err(self.error("`LING` or `REAL`"));
            };
            self.advance();
            self.punct(TokenKind::Semicolon)?;
            decls.push(VarDecl { name, kind });
        }
        self.advance();
        Ok(decls)
    }

    /// Parses `TERM` lines until `end`; `METHOD` lines are handed to
    /// `on_method` when given.
    fn term_lines(
        &mut self,
        end: &str,
        mut on_method: Option<&mut Option<Defuzzifier>>,
    ) -> Result<TermSet, FclError> {
        let mut pairs_set: Option<TermSet> = None;
        let mut triangles: Vec<Triangle> = Vec::new();
        loop {
            if self.at_keyword(end) {
                self.advance();
                break;
            }
            if self.at_keyword("METHOD") {
                let method_token = self.peek().clone();
                let slot = match on_method.as_deref_mut() {
                    Some(slot) => slot,
                    None => return Err(self.error(format!("`TERM` or `{end}`"))),
                };
                self.advance();
                self.punct(TokenKind::Colon)?;
                if !self.at_keyword("COG") {
                    return Err(self.error("`COG` (the only supported method)"));
                }
                self.advance();
                self.punct(TokenKind::Semicolon)?;
                if slot.is_some() {
                    return Err(self.invalid_at(&method_token, "METHOD declared twice"));
                }
                *slot = Some(Defuzzifier::Cog);
                continue;
            }
            let term_token = self.peek().clone();
            self.keyword("TERM")?;
            let name = self.ident("a term name")?;
            self.punct(TokenKind::Assign)?;
            if self.at_keyword("pairs") {
                self.advance();
                let pairs = self.pairs()?;
                self.punct(TokenKind::Semicolon)?;
                if pairs_set.is_some() || !triangles.is_empty() {
                    return Err(self.invalid_at(
                        &term_token,
                        "a `pairs` term must be the only TERM of its block",
                    ));
                }
                pairs_set = Some(TermSet::Pairs { name, pairs });
            } else if self.at_keyword("trian") {
                self.advance();
                let t_tok = self.peek().clone();
                let (a, b, c) = (self.number()?, self.number()?, self.number()?);
                self.punct(TokenKind::Semicolon)?;
                if pairs_set.is_some() {
                    return Err(self.invalid_at(
                        &term_token,
                        "a `pairs` term must be the only TERM of its block",
                    ));
                }
                if !(a <= b && b <= c) {
                    return Err(self.invalid_at(&t_tok, format!("triangle `{name}` needs a <= b <= c")));
                }
                if triangles.iter().any(|t| t.label == name) {
                    return Err(self.invalid_at(&term_token, format!("duplicate term `{name}`")));
                }
                triangles.push(Triangle { label: name, a, b, c });
            } else {
                return Err(self.error("`pairs` or `trian`"));
            }
        }
        match pairs_set {
            Some(set) => Ok(set),
            None if triangles.is_empty() => Err(self.error("at least one TERM")),
            None => Ok(TermSet::Triangles(triangles)),
        }
    }

    fn pairs(&mut self) -> Result<Vec<(String, f64)>, FclError> {
        let mut pairs: Vec<(String, f64)> = Vec::new();
        while self.peek().kind == TokenKind::LParen {
            self.advance();
            let label_tok = self.peek().clone();
            let label = self.ident("a term label")?;
            self.punct(TokenKind::Comma)?;
            let apex_tok = self.peek().clone();
            let apex = self.number()?;
            self.punct(TokenKind::RParen)?;
            if pairs.iter().any(|(l, _)| *l == label) {
                return Err(self.invalid_at(&label_tok, format!("duplicate term `{label}`")));
            }
            if let Some(&(_, prev)) = pairs.last() {
                if apex <= prev {
                    return Err(self.invalid_at(
                        &apex_tok,
                        format!("apexes must increase: {apex} follows {prev}"),
                    ));
                }
            }
            pairs.push((label, apex));
        }
        if pairs.len() < 2 {
            return Err(self.error("`(label, apex)`: a pairs scale needs at least 2 terms"));
        }
        Ok(pairs)
    }

    fn fuzzify(&mut self) -> Result<FuzzifyBlock, FclError> {
        self.keyword("FUZZIFY")?;
        let var = self.ident("a variable name")?;
        let terms = self.term_lines("END_FUZZIFY", None)?;
        Ok(FuzzifyBlock { var, terms })
    }

    fn defuzzify(&mut self) -> Result<DefuzzifyBlock, FclError> {
        let start = self.peek().clone();
        self.keyword("DEFUZZIFY")?;
        let var = self.ident("a variable name")?;
        let mut method = None;
        let terms = self.term_lines("END_DEFUZZIFY", Some(&mut method))?;
        let method = method.ok_or_else(|| {
            self.invalid_at(&start, format!("DEFUZZIFY {var} lacks `METHOD : COG;`"))
        })?;
        Ok(DefuzzifyBlock { var, terms, method })
    }

    fn clause(&mut self) -> Result<Clause, FclError> {
        let var = self.ident("a variable name")?;
        self.keyword("IS")?;
        let term = self.ident("a term label")?;
        Ok(Clause { var, term })
    }

    fn rule_block(&mut self) -> Result<RuleBlock, FclError> {
        self.keyword("RULEBLOCK")?;
        let name = self.ident("a rule block name")?;
        let mut rules = Vec::new();
        while !self.at_keyword("END_RULEBLOCK") {
            self.keyword("RULE")?;
            let id_tok = self.peek().clone();
            let id = self.number()?;
            if id < 0.0 || id.fract() != 0.0 || id > u32::MAX as f64 {
                return Err(self.invalid_at(&id_tok, "rule number must be a non-negative integer"));
            }
            self.punct(TokenKind::Colon)?;
            self.keyword("IF")?;
            let mut antecedents = vec![self.clause()?];
            loop {
                if self.at_keyword("AND") {
                    self.advance();
                    antecedents.push(self.clause()?);
                } else if self.at_keyword("OR") {
                    let t = self.peek().clone();
                    return Err(self.invalid_at(&t, "OR is not supported; antecedents are joined by AND"));
                } else {
                    break;
                }
            }
            self.keyword("THEN")?;
            let consequent = self.clause()?;
            self.punct(TokenKind::Semicolon)?;
            rules.push(Rule {
                id: id as u32,
                antecedents,
                consequent,
            });
        }
        self.advance();
        Ok(RuleBlock { name, rules })
    }
}

/// Parses and validates one FCL function block.
pub fn parse_fcl(text: &str) -> Result<FclProgram, FclError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let program = parser.program()?;
    validate(&program)?;
    Ok(program)
}

fn semantic(rule: Option<u32>, message: impl Into<String>) -> FclError {
    FclError::Semantic {
        rule,
        message: message.into(),
    }
}

fn check_terms(var: &str, terms: &TermSet) -> Result<(), FclError> {
    let labels = terms.labels();
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(semantic(None, format!("duplicate term `{l}` in `{var}`")));
        }
    }
    match terms {
        TermSet::Pairs { pairs, .. } => {
            if pairs.len() < 2 {
                return Err(semantic(None, format!("pairs of `{var}` need at least 2 terms")));
            }
            if pairs.windows(2).any(|w| w[1].1 <= w[0].1) {
                return Err(semantic(None, format!("apexes must increase in `{var}`")));
            }
        }
        TermSet::Triangles(ts) => {
            if ts.is_empty() {
                return Err(semantic(None, format!("`{var}` has no terms")));
            }
            if let Some(t) = ts.iter().find(|t| !(t.a <= t.b && t.b <= t.c)) {
                return Err(semantic(None, format!("triangle `{}` needs a <= b <= c", t.label)));
            }
        }
    }
    Ok(())
}

/// Cross-checks declarations, term blocks and rules.
pub fn validate(p: &FclProgram) -> Result<(), FclError> {
    let all: Vec<&str> = p.inputs.iter().chain(&p.outputs).map(|d| d.name.as_str()).collect();
    for (i, name) in all.iter().enumerate() {
        if all[..i].contains(name) {
            return Err(semantic(None, format!("variable `{name}` declared twice")));
        }
    }
    for (i, b) in p.fuzzify.iter().enumerate() {
        if !p.inputs.iter().any(|d| d.name == b.var) {
            return Err(semantic(None, format!("FUZZIFY block for undeclared input `{}`", b.var)));
        }
        if p.fuzzify[..i].iter().any(|o| o.var == b.var) {
            return Err(semantic(None, format!("`{}` fuzzified twice", b.var)));
        }
        check_terms(&b.var, &b.terms)?;
    }
    for (i, b) in p.defuzzify.iter().enumerate() {
        if !p.outputs.iter().any(|d| d.name == b.var) {
            return Err(semantic(None, format!("DEFUZZIFY block for undeclared output `{}`", b.var)));
        }
        if p.defuzzify[..i].iter().any(|o| o.var == b.var) {
            return Err(semantic(None, format!("`{}` defuzzified twice", b.var)));
        }
        check_terms(&b.var, &b.terms)?;
    }
    if let Some(d) = p.inputs.iter().find(|d| p.fuzzify_block(&d.name).is_none()) {
        return Err(semantic(None, format!("input `{}` has no FUZZIFY block", d.name)));
    }
    if let Some(d) = p.outputs.iter().find(|d| p.defuzzify_block(&d.name).is_none()) {
        return Err(semantic(None, format!("output `{}` has no DEFUZZIFY block", d.name)));
    }

    let mut seen_ids = Vec::new();
    for rule in p.rules() {
        if seen_ids.contains(&rule.id) {
            return Err(semantic(Some(rule.id), "duplicate rule number"));
        }
        seen_ids.push(rule.id);
        for (i, c) in rule.antecedents.iter().enumerate() {
            let block = p
                .fuzzify_block(&c.var)
                .ok_or_else(|| semantic(Some(rule.id), format!("undeclared input variable `{}`", c.var)))?;
            if !block.terms.has_label(&c.term) {
                return Err(semantic(
                    Some(rule.id),
                    format!("unknown term `{}` for `{}`", c.term, c.var),
                ));
            }
            if rule.antecedents[..i].iter().any(|o| o.var == c.var) {
                return Err(semantic(Some(rule.id), format!("`{}` appears twice in the antecedent", c.var)));
            }
        }
        let c = &rule.consequent;
        let block = p
            .defuzzify_block(&c.var)
            .ok_or_else(|| semantic(Some(rule.id), format!("undeclared output variable `{}`", c.var)))?;
        if !block.terms.has_label(&c.term) {
            return Err(semantic(
                Some(rule.id),
                format!("unknown term `{}` for `{}`", c.term, c.var),
            ));
        }
    }
    if seen_ids.is_empty() {
        return Err(semantic(None, "at least one rule required"));
    }
    Ok(())
}

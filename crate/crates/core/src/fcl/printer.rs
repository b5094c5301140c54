//! Canonical pretty-printer. Numbers are written in their shortest
//! round-trip form, so printing then parsing yields the same AST.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

struct Num(f64);

impl Display for Num {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn write_terms(f: &mut Formatter<'_>, terms: &TermSet) -> fmt::Result {
    match terms {
        TermSet::Pairs { name, pairs } => {
            write!(f, "    TERM {name} := pairs")?;
            for (label, apex) in pairs {
                write!(f, " ({label}, {})", Num(*apex))?;
            }
            writeln!(f, ";")
        }
        TermSet::Triangles(ts) => {
            for t in ts {
                writeln!(
                    f,
                    "    TERM {} := trian {} {} {};",
                    t.label,
                    Num(t.a),
                    Num(t.b),
                    Num(t.c)
                )?;
            }
            Ok(())
        }
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} IS {}", self.var, self.term)
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "RULE {} : IF ", self.id)?;
        for (i, c) in self.antecedents.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " THEN {};", self.consequent)
    }
}

impl Display for FclProgram {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        writeln!(f, "FUNCTION_BLOCK {}", self.name)?;
        for (section, decls) in [("VAR_INPUT", &self.inputs), ("VAR_OUTPUT", &self.outputs)] {
            if decls.is_empty() {
                continue;
            }
            writeln!(f, "{section}")?;
            for d in decls {
                writeln!(f, "    {} : {};", d.name, d.kind.keyword())?;
            }
            writeln!(f, "END_VAR")?;
        }
        for b in &self.fuzzify {
            writeln!(f, "FUZZIFY {}", b.var)?;
            write_terms(f, &b.terms)?;
            writeln!(f, "END_FUZZIFY")?;
        }
        for b in &self.defuzzify {
            writeln!(f, "DEFUZZIFY {}", b.var)?;
            write_terms(f, &b.terms)?;
            match b.method {
                Defuzzifier::Cog => writeln!(f, "    METHOD : COG;")?,
            }
            writeln!(f, "END_DEFUZZIFY")?;
        }
        for block in &self.rule_blocks {
            writeln!(f, "RULEBLOCK {}", block.name)?;
            for rule in &block.rules {
                writeln!(f, "    {rule}")?;
            }
            writeln!(f, "END_RULEBLOCK")?;
        }
        writeln!(f, "END_FUNCTION_BLOCK")
    }
}

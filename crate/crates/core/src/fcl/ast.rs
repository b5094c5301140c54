#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Ling,
    Real,
}

impl VarKind {
    pub fn keyword(self) -> &'static str {
        match self {
            VarKind::Ling => "LING",
            VarKind::Real => "REAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarDecl {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangle {
    pub label: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Terms of one variable: a whole `pairs` scale, or explicit triangles.
#[derive(Debug, Clone, PartialEq)]
pub enum TermSet {
    Pairs { name: String, pairs: Vec<(String, f64)> },
    Triangles(Vec<Triangle>),
}

impl TermSet {
    pub fn labels(&self) -> Vec<&str> {
        match self {
            TermSet::Pairs { pairs, .. } => pairs.iter().map(|(l, _)| l.as_str()).collect(),
            TermSet::Triangles(ts) => ts.iter().map(|t| t.label.as_str()).collect(),
        }
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels().contains(&label)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifyBlock {
    pub var: String,
    pub terms: TermSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defuzzifier {
    Cog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefuzzifyBlock {
    pub var: String,
    pub terms: TermSet,
    pub method: Defuzzifier,
}

/// `var IS term`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub var: String,
    pub term: String,
}

impl Clause {
    pub fn new(var: impl Into<String>, term: impl Into<String>) -> Self {
        Clause {
            var: var.into(),
            term: term.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: u32,
    /// Joined by AND.
    pub antecedents: Vec<Clause>,
    pub consequent: Clause,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleBlock {
    pub name: String,
    pub rules: Vec<Rule>,
}

/// One parsed `FUNCTION_BLOCK`, in source order.
#[derive(Debug, Clone, PartialEq)]
pub struct FclProgram {
    pub name: String,
    pub inputs: Vec<VarDecl>,
    pub outputs: Vec<VarDecl>,
    pub fuzzify: Vec<FuzzifyBlock>,
    pub defuzzify: Vec<DefuzzifyBlock>,
    pub rule_blocks: Vec<RuleBlock>,
}

impl FclProgram {
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rule_blocks.iter().flat_map(|b| b.rules.iter())
    }

    pub fn fuzzify_block(&self, var: &str) -> Option<&FuzzifyBlock> {
        self.fuzzify.iter().find(|b| b.var == var)
    }

    pub fn defuzzify_block(&self, var: &str) -> Option<&DefuzzifyBlock> {
        self.defuzzify.iter().find(|b| b.var == var)
    }

    /// Labels of an input's term set, in declaration order.
    pub fn input_labels(&self, var: &str) -> Option<Vec<String>> {
        self.fuzzify_block(var)
            .map(|b| b.terms.labels().into_iter().map(str::to_string).collect())
    }
}

//! Compilation of a parsed program into partitions and Mamdani inference:
//! AND = min, implication = min (clipping), accumulation = max, COG.

use std::collections::BTreeMap;

use super::ast::*;
use super::FclError;
use crate::linguistic::{Partition, TwofoldTerm};

pub const DEFAULT_COG_SAMPLES: usize = 1001;

/// Below this accumulated area no rule is considered to have fired.
pub const MIN_AREA: f64 = 1e-12;

/// How `pairs` scales become partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompileMode {
    /// Listed apexes, twofold widths.
    Twofold,
    /// Same labels re-spaced evenly over the listed extremes.
    UniformBaseline,
}

impl CompileMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CompileMode::Twofold => "twofold",
            CompileMode::UniformBaseline => "uniform",
        }
    }
}

impl std::str::FromStr for CompileMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "twofold" => Ok(CompileMode::Twofold),
            "uniform" | "uniform_baseline" => Ok(CompileMode::UniformBaseline),
            other => Err(format!("unknown mode `{other}` (expected twofold or uniform)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermShape {
    Twofold(TwofoldTerm),
    Triangle { a: f64, b: f64, c: f64 },
}

impl TermShape {
    pub fn degree(&self, x: f64) -> f64 {
        match *self {
            TermShape::Twofold(ref t) => t.degree(x),
            TermShape::Triangle { a, b, c } => {
                if x == b {
                    1.0
                } else if x < a || x > c {
                    0.0
                } else if x < b {
                    (x - a) / (b - a)
                } else {
                    (c - x) / (c - b)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledVariable {
    pub name: String,
    pub kind: VarKind,
    pub domain: (f64, f64),
    pub terms: Vec<(String, TermShape)>,
    /// Present when the variable was declared with `pairs`.
    pub partition: Option<Partition>,
}

impl CompiledVariable {
    fn compile(name: &str, kind: VarKind, set: &TermSet, mode: CompileMode) -> Result<Self, FclError> {
        match set {
            TermSet::Pairs { pairs, .. } => {
                let labels: Vec<&str> = pairs.iter().map(|(l, _)| l.as_str()).collect();
                let apexes: Vec<f64> = pairs.iter().map(|(_, a)| *a).collect();
                let partition = match mode {
                    CompileMode::Twofold => Partition::twofold(&labels, &apexes),
                    CompileMode::UniformBaseline => {
                        Partition::uniform(&labels, apexes[0], apexes[apexes.len() - 1])
                    }
                }
                .map_err(|source| FclError::Partition {
                    var: name.to_string(),
                    source,
                })?;
                Ok(CompiledVariable {
                    name: name.to_string(),
                    kind,
                    domain: partition.domain(),
                    terms: partition
                        .terms()
                        .iter()
                        .map(|t| (t.label.clone(), TermShape::Twofold(t.clone())))
                        .collect(),
                    partition: Some(partition),
                })
            }
            TermSet::Triangles(ts) => {
                let lo = ts.iter().map(|t| t.a).fold(f64::INFINITY, f64::min);
                let hi = ts.iter().map(|t| t.c).fold(f64::NEG_INFINITY, f64::max);
                Ok(CompiledVariable {
                    name: name.to_string(),
                    kind,
                    domain: (lo, hi),
                    terms: ts
                        .iter()
                        .map(|t| (t.label.clone(), TermShape::Triangle { a: t.a, b: t.b, c: t.c }))
                        .collect(),
                    partition: None,
                })
            }
        }
    }

    pub fn term_index(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|(l, _)| l == label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(l, _)| l.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
struct CompiledRule {
    id: u32,
    antecedents: Vec<(usize, usize)>,
    consequent: (usize, usize),
}

/// An immutable, ready-to-run controller.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledController {
    name: String,
    mode: CompileMode,
    inputs: Vec<CompiledVariable>,
    outputs: Vec<CompiledVariable>,
    rules: Vec<CompiledRule>,
    cog_samples: usize,
}

/// Clipped consequent shapes of one output, combined with max.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedOutput {
    pub domain: (f64, f64),
    /// `(shape, clipping level)`; one entry per term that received a
    /// positive activation.
    pub clipped: Vec<(TermShape, f64)>,
}

impl AccumulatedOutput {
    pub fn degree(&self, x: f64) -> f64 {
        self.clipped
            .iter()
            .map(|(shape, level)| shape.degree(x).min(*level))
            .fold(0.0, f64::max)
    }

    /// Discretised centroid over `samples` equally spaced points, plus the
    /// approximated area under the accumulated shape.
    pub fn centroid(&self, samples: usize) -> (f64, f64) {
        let (lo, hi) = self.domain;
        let n = samples.max(2);
        let dx = (hi - lo) / (n - 1) as f64;
        let (mut moment, mut mass) = (0.0, 0.0);
        for k in 0..n {
            let x = if k == n - 1 { hi } else { lo + dx * k as f64 };
            let mu = self.degree(x);
            moment += x * mu;
            mass += mu;
        }
        let area = mass * dx;
        if mass > 0.0 {
            (moment / mass, area)
        } else {
            ((lo + hi) / 2.0, 0.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Accumulation {
    /// Rule id and activation, in rule order.
    pub activations: Vec<(u32, f64)>,
    pub outputs: BTreeMap<String, AccumulatedOutput>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    pub outputs: BTreeMap<String, f64>,
    /// Rule id and activation, in rule order.
    pub rule_activations: Vec<(u32, f64)>,
    /// Outputs whose accumulated area was negligible; their value is the
    /// domain midpoint.
    pub no_rule_fired: Vec<String>,
    /// Input clamping notices.
    pub warnings: Vec<String>,
}

impl InferenceResult {
    pub fn output(&self, name: &str) -> Option<f64> {
        self.outputs.get(name).copied()
    }

    /// Fired rules with the largest activations, strongest first, ties by
    /// rule order.
    pub fn top_rules(&self, n: usize) -> Vec<(u32, f64)> {
        let mut sorted: Vec<(u32, f64)> = self.rule_activations.iter().copied().filter(|r| r.1 > 0.0).collect();
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1));
        sorted.truncate(n);
        sorted
    }
}

/// Builds partitions for every variable and resolves rule references.
pub fn compile(p: &FclProgram, mode: CompileMode) -> Result<CompiledController, FclError> {
    super::validate(p)?;
    let inputs = p
        .inputs
        .iter()
        .map(|d| {
            let block = p.fuzzify_block(&d.name).expect("validated");
            CompiledVariable::compile(&d.name, d.kind, &block.terms, mode)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let outputs = p
        .outputs
        .iter()
        .map(|d| {
            let block = p.defuzzify_block(&d.name).expect("validated");
            CompiledVariable::compile(&d.name, d.kind, &block.terms, mode)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let find = |vars: &[CompiledVariable], c: &Clause| -> (usize, usize) {
        let v = vars.iter().position(|v| v.name == c.var).expect("validated");
        let t = vars[v].term_index(&c.term).expect("validated");
        (v, t)
    };
    let rules = p
        .rules()
        .map(|r| CompiledRule {
            id: r.id,
            antecedents: r.antecedents.iter().map(|c| find(&inputs, c)).collect(),
            consequent: find(&outputs, &r.consequent),
        })
        .collect();
    Ok(CompiledController {
        name: p.name.clone(),
        mode,
        inputs,
        outputs,
        rules,
        cog_samples: DEFAULT_COG_SAMPLES,
    })
}

impl CompiledController {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mode(&self) -> CompileMode {
        self.mode
    }

    pub fn inputs(&self) -> &[CompiledVariable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[CompiledVariable] {
        &self.outputs
    }

    pub fn input(&self, name: &str) -> Option<&CompiledVariable> {
        self.inputs.iter().find(|v| v.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&CompiledVariable> {
        self.outputs.iter().find(|v| v.name == name)
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn cog_samples(&self) -> usize {
        self.cog_samples
    }

    pub fn with_cog_samples(mut self, samples: usize) -> Result<Self, FclError> {
        if samples < 2 {
            return Err(FclError::CogSamples(samples));
        }
        self.cog_samples = samples;
        Ok(self)
    }

    /// Fuzzifies, fires every rule and accumulates the clipped consequents.
    /// Inputs outside a variable's domain are clamped and reported.
    pub fn accumulate(&self, inputs: &BTreeMap<String, f64>) -> Result<Accumulation, FclError> {
        if let Some(name) = inputs.keys().find(|k| self.input(k).is_none()) {
            return Err(FclError::UnknownVariable(name.clone()));
        }
        let mut warnings = Vec::new();
        let mut degrees: Vec<Vec<f64>> = Vec::with_capacity(self.inputs.len());
        for var in &self.inputs {
            let raw = *inputs
                .get(&var.name)
                .ok_or_else(|| FclError::MissingInput(var.name.clone()))?;
            if raw.is_nan() {
                return Err(FclError::InvalidInput {
                    var: var.name.clone(),
                    value: raw,
                });
            }
            let (lo, hi) = var.domain;
            let x = raw.clamp(lo, hi);
            if x != raw {
                warnings.push(format!("{} = {raw} clamped to {x}", var.name));
            }
            degrees.push(var.terms.iter().map(|(_, shape)| shape.degree(x)).collect());
        }

        // strongest activation per (output, term)
        let mut levels: Vec<Vec<f64>> = self.outputs.iter().map(|o| vec![0.0; o.terms.len()]).collect();
        let mut activations = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let act = rule
                .antecedents
                .iter()
                .map(|&(v, t)| degrees[v][t])
                .fold(1.0, f64::min);
            let (o, t) = rule.consequent;
            levels[o][t] = levels[o][t].max(act);
            activations.push((rule.id, act));
        }

        let outputs = self
            .outputs
            .iter()
            .zip(levels)
            .map(|(var, lv)| {
                let clipped = var
                    .terms
                    .iter()
                    .zip(lv)
                    .filter(|(_, level)| *level > 0.0)
                    .map(|((_, shape), level)| (shape.clone(), level))
                    .collect();
                (
                    var.name.clone(),
                    AccumulatedOutput {
                        domain: var.domain,
                        clipped,
                    },
                )
            })
            .collect();
        Ok(Accumulation {
            activations,
            outputs,
            warnings,
        })
    }

    /// Runs the controller and defuzzifies every output by centre of gravity.
    pub fn infer(&self, inputs: &BTreeMap<String, f64>) -> Result<InferenceResult, FclError> {
        let acc = self.accumulate(inputs)?;
        let mut outputs = BTreeMap::new();
        let mut no_rule_fired = Vec::new();
        for (name, shape) in &acc.outputs {
            let (centroid, area) = shape.centroid(self.cog_samples);
            if area < MIN_AREA {
                let (lo, hi) = shape.domain;
                outputs.insert(name.clone(), (lo + hi) / 2.0);
                no_rule_fired.push(name.clone());
            } else {
                outputs.insert(name.clone(), centroid);
            }
        }
        Ok(InferenceResult {
            outputs,
            rule_activations: acc.activations,
            no_rule_fired,
            warnings: acc.warnings,
        })
    }

    /// Convenience wrapper taking `(name, value)` pairs.
    pub fn infer_with(&self, inputs: &[(&str, f64)]) -> Result<InferenceResult, FclError> {
        let map = inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        self.infer(&map)
    }
}

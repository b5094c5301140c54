//! Unbalanced partitions from synonym bags.
//!
//! Each label comes with a bag of synonyms. The Jaccard index of two bags is
//! their resemblance rate; `1 - rate` is the distance between the labels.
//! Labels are ordered between two anchors so that neighbours resemble each
//! other as much as possible, then apexes are spaced in proportion to the
//! distances between neighbours.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::linguistic::{LinguisticError, Partition};

/// Hard cap for the exhaustive ordering search.
pub const MAX_ORDERED_LABELS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuilderError {
    #[error("at least 2 synonym bags are required, got {0}")]
    TooFewBags(usize),
    #[error("synonym bag `{0}` is empty")]
    EmptyBag(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("anchor `{0}` is not one of the labels")]
    MissingAnchor(String),
    #[error("low and high anchors are both `{0}`")]
    SameAnchors(String),
    #[error("ordering searches at most {max} labels exhaustively, got {got}")]
    TooManyLabels { got: usize, max: usize },
    #[error("order is not a permutation of the matrix labels")]
    BadOrder,
    #[error("`{0}` and `{1}` have identical bags (resemblance 1), their apexes would coincide")]
    DegenerateSpacing(String, String),
    #[error("empty domain [{lo}, {hi}]")]
    EmptyDomain { lo: f64, hi: f64 },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Partition(#[from] LinguisticError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynonymBag {
    pub label: String,
    pub synonyms: BTreeSet<String>,
}

impl SynonymBag {
    /// Synonyms are trimmed and lower-cased; blanks are dropped.
    pub fn new<I, S>(label: impl Into<String>, synonyms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        SynonymBag {
            label: label.into(),
            synonyms: synonyms
                .into_iter()
                .map(|s| s.as_ref().trim().to_lowercase())
                .filter(|s| !s.is_empty())
                .collect(),
        }
    }
}

/// Parses the `label: syn1, syn2, ...` format. `#` starts a comment line.
pub fn parse_bags(text: &str) -> Result<Vec<SynonymBag>, BuilderError> {
    let mut bags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, rest) = line.split_once(':').ok_or_else(|| BuilderError::Syntax {
            line: n + 1,
            message: "expected `label: synonym, ...`".into(),
        })?;
        let label = label.trim();
        if label.is_empty() {
            return Err(BuilderError::Syntax {
                line: n + 1,
                message: "empty label".into(),
            });
        }
        bags.push(SynonymBag::new(label, rest.split(',')));
    }
    Ok(bags)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResemblanceMatrix {
    labels: Vec<String>,
    rates: Vec<Vec<f64>>,
}

impl ResemblanceMatrix {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[i][j]
    }

    pub fn rate_between(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.rates[self.index_of(a)?][self.index_of(b)?])
    }

    /// Builds a matrix from explicit rates. Rows must be square, symmetric,
    /// in `[0, 1]` and carry a unit diagonal.
    pub fn from_rates(labels: Vec<String>, rates: Vec<Vec<f64>>) -> Option<Self> {
        let n = labels.len();
        if rates.len() != n || rates.iter().any(|r| r.len() != n) {
            return None;
        }
        for i in 0..n {
            if rates[i][i] != 1.0 {
                return None;
            }
            for j in 0..n {
                let r = rates[i][j];
                if !(0.0..=1.0).contains(&r) || r != rates[j][i] {
                    return None;
                }
            }
        }
        Some(ResemblanceMatrix { labels, rates })
    }
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let shared = a.intersection(b).count();
    let union = a.len() + b.len() - shared;
    shared as f64 / union as f64
}

pub fn resemblance_matrix(bags: &[SynonymBag]) -> Result<ResemblanceMatrix, BuilderError> {
    if bags.len() < 2 {
        return Err(BuilderError::TooFewBags(bags.len()));
    }
    for (i, bag) in bags.iter().enumerate() {
        if bag.synonyms.is_empty() {
            return Err(BuilderError::EmptyBag(bag.label.clone()));
        }
        if bags[..i].iter().any(|b| b.label == bag.label) {
            return Err(BuilderError::DuplicateLabel(bag.label.clone()));
        }
    }
    let n = bags.len();
    let mut rates = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let r = jaccard(&bags[i].synonyms, &bags[j].synonyms);
            rates[i][j] = r;
            rates[j][i] = r;
        }
    }
    Ok(ResemblanceMatrix {
        labels: bags.iter().map(|b| b.label.clone()).collect(),
        rates,
    })
}

/// Sum of resemblance over adjacent pairs of `order` (matrix indices).
fn chain_score(m: &ResemblanceMatrix, order: &[usize]) -> f64 {
    order.windows(2).map(|w| m.rates[w[0]][w[1]]).sum()
}

struct Search<'a> {
    m: &'a ResemblanceMatrix,
    high: usize,
    free: Vec<usize>,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    // `free` is sorted by label, so depth-first visits sequences in
    // lexicographic order and only a strictly better score replaces the best.
    fn run(&mut self) {
        if self.current.len() == self.free.len() + 1 {
            self.current.push(self.high);
            let score = chain_score(self.m, &self.current);
            let better = match &self.best {
                None => true,
                Some((best, _)) => score > *best + 1e-12,
            };
            if better {
                self.best = Some((score, self.current.clone()));
            }
            self.current.pop();
            return;
        }
        for k in 0..self.free.len() {
            if self.used[k] {
                continue;
            }
            self.used[k] = true;
            self.current.push(self.free[k]);
            self.run();
            self.current.pop();
            self.used[k] = false;
        }
    }
}

/// Orders the labels from `low_anchor` to `high_anchor`, maximising the
/// summed resemblance of neighbours. Ties go to the lexicographically
/// smallest label sequence.
pub fn order_terms(
    m: &ResemblanceMatrix,
    low_anchor: &str,
    high_anchor: &str,
) -> Result<Vec<String>, BuilderError> {
    let low = m
        .index_of(low_anchor)
        .ok_or_else(|| BuilderError::MissingAnchor(low_anchor.to_string()))?;
    let high = m
        .index_of(high_anchor)
        .ok_or_else(|| BuilderError::MissingAnchor(high_anchor.to_string()))?;
    if low == high {
        return Err(BuilderError::SameAnchors(low_anchor.to_string()));
    }
    if m.labels.len() > MAX_ORDERED_LABELS {
        return Err(BuilderError::TooManyLabels {
            got: m.labels.len(),
            max: MAX_ORDERED_LABELS,
        });
    }
    let mut free: Vec<usize> = (0..m.labels.len()).filter(|&i| i != low && i != high).collect();
    free.sort_by(|&a, &b| m.labels[a].cmp(&m.labels[b]));
    let mut search = Search {
        m,
        high,
        used: vec![false; free.len()],
        free,
        current: vec![low],
        best: None,
    };
    search.run();
    let (_, best) = search.best.expect("at least one ordering exists");
    Ok(best.into_iter().map(|i| m.labels[i].clone()).collect())
}

/// Spaces apexes over `[lo, hi]` in proportion to `1 - r` between
/// neighbours of `order`.
pub fn place_apexes(
    m: &ResemblanceMatrix,
    order: &[String],
    lo: f64,
    hi: f64,
) -> Result<Vec<f64>, BuilderError> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(BuilderError::EmptyDomain { lo, hi });
    }
    let indices: Vec<usize> = order
        .iter()
        .map(|l| m.index_of(l).ok_or(BuilderError::BadOrder))
        .collect::<Result<_, _>>()?;
    let distinct: BTreeSet<usize> = indices.iter().copied().collect();
    if indices.len() != m.labels.len() || distinct.len() != indices.len() {
        return Err(BuilderError::BadOrder);
    }
    let distances: Vec<f64> = indices
        .windows(2)
        .map(|w| {
            let r = m.rates[w[0]][w[1]];
            if r >= 1.0 {
                Err(BuilderError::DegenerateSpacing(
                    m.labels[w[0]].clone(),
                    m.labels[w[1]].clone(),
                ))
            } else {
                Ok(1.0 - r)
            }
        })
        .collect::<Result<_, _>>()?;
    let total: f64 = distances.iter().sum();
    let scale = (hi - lo) / total;
    let mut apexes = Vec::with_capacity(order.len());
    let mut cumulative = 0.0;
    apexes.push(lo);
    for (k, d) in distances.iter().enumerate() {
        cumulative += d;
        if k == distances.len() - 1 {
            apexes.push(hi);
        } else {
            apexes.push(lo + cumulative * scale);
        }
    }
    Ok(apexes)
}

/// Full pipeline: resemblance, anchored ordering, spacing and the twofold
/// partition over the resulting apexes.
pub fn build_partition_from_bags(
    bags: &[SynonymBag],
    lo: f64,
    hi: f64,
    low_anchor: &str,
    high_anchor: &str,
) -> Result<Partition, BuilderError> {
    let m = resemblance_matrix(bags)?;
    let order = order_terms(&m, low_anchor, high_anchor)?;
    let apexes = place_apexes(&m, &order, lo, hi)?;
    Ok(Partition::twofold(&order, &apexes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bag(label: &str, syns: &[&str]) -> SynonymBag {
        SynonymBag::new(label, syns.iter().copied())
    }

    fn matrix(labels: &[&str], rates: &[&[f64]]) -> ResemblanceMatrix {
        ResemblanceMatrix::from_rates(
            labels.iter().map(|s| s.to_string()).collect(),
            rates.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn jaccard_examples() {
        let m = resemblance_matrix(&[bag("A", &["x", "y"]), bag("B", &["y", "x"])]).unwrap();
        assert_eq!(m.rate(0, 1), 1.0);
        let m = resemblance_matrix(&[bag("A", &["x"]), bag("B", &["y"])]).unwrap();
        assert_eq!(m.rate(0, 1), 0.0);
        let m = resemblance_matrix(&[bag("A", &["a", "b", "c"]), bag("B", &["b", "c", "d"])]).unwrap();
        assert_eq!(m.rate(0, 1), 0.5);
    }

    #[test]
    fn bag_normalisation_casefolds_and_trims() {
        let b = bag("A", &[" Near ", "NEAR", "close"]);
        assert_eq!(b.synonyms.len(), 2);
        assert!(b.synonyms.contains("near"));
    }

    #[test]
    fn resemblance_errors() {
        assert_eq!(
            resemblance_matrix(&[bag("A", &["x"])]),
            Err(BuilderError::TooFewBags(1))
        );
        assert_eq!(
            resemblance_matrix(&[bag("A", &["x"]), bag("B", &[])]),
            Err(BuilderError::EmptyBag("B".into()))
        );
        assert_eq!(
            resemblance_matrix(&[bag("A", &["x"]), bag("A", &["y"])]),
            Err(BuilderError::DuplicateLabel("A".into()))
        );
    }

    #[test]
    fn ordering_two_labels() {
        let m = matrix(&["Hi", "Lo"], &[&[1.0, 0.2], &[0.2, 1.0]]);
        assert_eq!(order_terms(&m, "Lo", "Hi").unwrap(), vec!["Lo", "Hi"]);
    }

    #[test]
    fn ordering_picks_best_middle() {
        // free slot: A,B,C scores 1.1; the only alternative has no middle choice
        let m = matrix(
            &["A", "B", "C"],
            &[&[1.0, 0.6, 0.1], &[0.6, 1.0, 0.5], &[0.1, 0.5, 1.0]],
        );
        assert_eq!(order_terms(&m, "A", "C").unwrap(), vec!["A", "B", "C"]);
    }

    #[test]
    fn ordering_ties_are_lexicographic() {
        let labels = ["Z", "M2", "M1", "A"];
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.3 }).collect())
            .collect();
        let m = ResemblanceMatrix::from_rates(labels.iter().map(|s| s.to_string()).collect(), rows).unwrap();
        assert_eq!(order_terms(&m, "Z", "A").unwrap(), vec!["Z", "M1", "M2", "A"]);
    }

    #[test]
    fn ordering_errors() {
        let m = matrix(&["A", "B"], &[&[1.0, 0.2], &[0.2, 1.0]]);
        assert_eq!(
            order_terms(&m, "A", "Q"),
            Err(BuilderError::MissingAnchor("Q".into()))
        );
        let labels: Vec<String> = (0..11).map(|i| format!("L{i:02}")).collect();
        let rows = (0..11)
            .map(|i| (0..11).map(|j| if i == j { 1.0 } else { 0.1 }).collect())
            .collect();
        let big = ResemblanceMatrix::from_rates(labels, rows).unwrap();
        assert!(matches!(
            order_terms(&big, "L00", "L10"),
            Err(BuilderError::TooManyLabels { got: 11, .. })
        ));
    }

    #[test]
    fn apexes_follow_distances() {
        // d = (0.2, 0.6): r = (0.8, 0.4)
        let m = matrix(
            &["A", "B", "C"],
            &[&[1.0, 0.8, 0.0], &[0.8, 1.0, 0.4], &[0.0, 0.4, 1.0]],
        );
        let order = vec!["A".to_string(), "B".into(), "C".into()];
        let apexes = place_apexes(&m, &order, 0.0, 1200.0).unwrap();
        assert_eq!(apexes[0], 0.0);
        assert!((apexes[1] - 300.0).abs() < 1e-9);
        assert_eq!(apexes[2], 1200.0);
    }

    #[test]
    fn apexes_equal_distances_are_uniform() {
        let m = matrix(
            &["A", "B", "C"],
            &[&[1.0, 0.3, 0.0], &[0.3, 1.0, 0.3], &[0.0, 0.3, 1.0]],
        );
        let order = vec!["A".to_string(), "B".into(), "C".into()];
        assert_eq!(place_apexes(&m, &order, 0.0, 120.0).unwrap(), vec![0.0, 60.0, 120.0]);
    }

    #[test]
    fn apexes_reject_identical_neighbours() {
        let m = matrix(&["A", "B"], &[&[1.0, 1.0], &[1.0, 1.0]]);
        let order = vec!["A".to_string(), "B".into()];
        assert!(matches!(
            place_apexes(&m, &order, 0.0, 1.0),
            Err(BuilderError::DegenerateSpacing(..))
        ));
        assert_eq!(
            place_apexes(&m, &order[..1], 0.0, 1.0),
            Err(BuilderError::BadOrder)
        );
    }

    #[test]
    fn parse_bag_file() {
        let text = "# distance\nNear: close, nearby , Close\n\nFar: distant, remote\n";
        let bags = parse_bags(text).unwrap();
        assert_eq!(bags.len(), 2);
        assert_eq!(bags[0].label, "Near");
        assert_eq!(bags[0].synonyms.len(), 2);
        assert!(matches!(parse_bags("no colon"), Err(BuilderError::Syntax { line: 1, .. })));
    }

    #[test]
    fn two_bags_span_the_domain() {
        let p = build_partition_from_bags(
            &[bag("Low", &["a", "b"]), bag("High", &["b", "c"])],
            0.0,
            10.0,
            "Low",
            "High",
        )
        .unwrap();
        assert_eq!(p.apexes(), vec![0.0, 10.0]);
    }
}

use std::fmt;
use std::str::FromStr;

use super::two_tuple::TwoTuple;
use super::LinguisticError;

/// One term of a partition: a triangle whose two halves may have
/// different widths. End terms carry a flat shoulder on their outer side.
#[derive(Debug, Clone, PartialEq)]
pub struct TwofoldTerm {
    pub label: String,
    pub apex: f64,
    pub left_width: f64,
    pub right_width: f64,
    pub left_shoulder: bool,
    pub right_shoulder: bool,
}

impl TwofoldTerm {
    /// Membership degree of `x`, without any domain check.
    pub fn degree(&self, x: f64) -> f64 {
        let mu = if x == self.apex {
            1.0
        } else if x < self.apex {
            if self.left_shoulder {
                1.0
            } else if self.left_width <= 0.0 {
                0.0
            } else {
                1.0 - (self.apex - x) / self.left_width
            }
        } else if self.right_shoulder {
            1.0
        } else if self.right_width <= 0.0 {
            0.0
        } else {
            1.0 - (x - self.apex) / self.right_width
        };
        mu.clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    Uniform,
    Twofold,
}

impl PartitionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PartitionKind::Uniform => "uniform",
            PartitionKind::Twofold => "twofold",
        }
    }
}

impl fmt::Display for PartitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PartitionKind {
    type Err = LinguisticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(PartitionKind::Uniform),
            "twofold" => Ok(PartitionKind::Twofold),
            other => Err(LinguisticError::Format(format!("unknown partition kind `{other}`"))),
        }
    }
}

/// Where two adjacent terms meet and with which degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub left: usize,
    pub x: f64,
    pub degree: f64,
}

/// An ordered fuzzy partition of `[domain_lo, domain_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    terms: Vec<TwofoldTerm>,
    domain_lo: f64,
    domain_hi: f64,
    kind: PartitionKind,
}

fn check_labels<S: AsRef<str>>(labels: &[S]) -> Result<(), LinguisticError> {
    if labels.len() < 2 {
        return Err(LinguisticError::TooFewTerms(labels.len()));
    }
    for (i, label) in labels.iter().enumerate() {
        let label = label.as_ref();
        if label.is_empty() {
            return Err(LinguisticError::EmptyLabel(i));
        }
        if labels[..i].iter().any(|l| l.as_ref() == label) {
            return Err(LinguisticError::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

fn check_apexes(apexes: &[f64]) -> Result<(), LinguisticError> {
    if let Some(i) = apexes.iter().position(|a| !a.is_finite()) {
        return Err(LinguisticError::NonFiniteApex(i));
    }
    for (i, pair) in apexes.windows(2).enumerate() {
        if pair[1] <= pair[0] {
            return Err(LinguisticError::NonIncreasingApexes {
                index: i + 1,
                previous: pair[0],
                value: pair[1],
            });
        }
    }
    Ok(())
}

fn shoulder_terms<S: AsRef<str>>(labels: &[S], apexes: &[f64], widths: &[(f64, f64)]) -> Vec<TwofoldTerm> {
    let last = labels.len() - 1;
    labels
        .iter()
        .zip(apexes)
        .zip(widths)
        .enumerate()
        .map(|(i, ((label, &apex), &(left_width, right_width)))| TwofoldTerm {
            label: label.as_ref().to_string(),
            apex,
            left_width,
            right_width,
            left_shoulder: i == 0,
            right_shoulder: i == last,
        })
        .collect()
}

impl Partition {
    /// Equally spaced terms over `[lo, hi]`; every half-width equals the
    /// spacing, so adjacent memberships sum to one.
    pub fn uniform<S: AsRef<str>>(labels: &[S], lo: f64, hi: f64) -> Result<Self, LinguisticError> {
        check_labels(labels)?;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(LinguisticError::EmptyDomain { lo, hi });
        }
        let g = labels.len() - 1;
        let step = (hi - lo) / g as f64;
        let apexes: Vec<f64> = (0..=g)
            .map(|i| if i == g { hi } else { lo + step * i as f64 })
            .collect();
        let widths: Vec<(f64, f64)> = (0..=g)
            .map(|i| {
                let left = if i == 0 { 0.0 } else { apexes[i] - apexes[i - 1] };
                let right = if i == g { 0.0 } else { apexes[i + 1] - apexes[i] };
                (left, right)
            })
            .collect();
        Ok(Partition {
            terms: shoulder_terms(labels, &apexes, &widths),
            domain_lo: lo,
            domain_hi: hi,
            kind: PartitionKind::Uniform,
        })
    }

    /// Unbalanced partition from `(label, apex)` pairs.
    ///
    /// Each half-width is `min(gap to that neighbour, span / g)`. Gaps of
    /// `2 * span / g` or more would leave a point with zero membership and
    /// are rejected.
    pub fn twofold<S: AsRef<str>>(labels: &[S], apexes: &[f64]) -> Result<Self, LinguisticError> {
        if labels.len() != apexes.len() {
            return Err(LinguisticError::CountMismatch {
                labels: labels.len(),
                apexes: apexes.len(),
            });
        }
        check_labels(labels)?;
        check_apexes(apexes)?;
        let g = labels.len() - 1;
        let lo = apexes[0];
        let hi = apexes[g];
        let reference = (hi - lo) / g as f64;
        for (i, pair) in apexes.windows(2).enumerate() {
            let gap = pair[1] - pair[0];
            if gap >= 2.0 * reference {
                return Err(LinguisticError::GapBreaksCoverage {
                    from: labels[i].as_ref().to_string(),
                    to: labels[i + 1].as_ref().to_string(),
                    gap,
                    limit: 2.0 * reference,
                });
            }
        }
        let widths: Vec<(f64, f64)> = (0..=g)
            .map(|i| {
                let left = if i == 0 { 0.0 } else { (apexes[i] - apexes[i - 1]).min(reference) };
                let right = if i == g { 0.0 } else { (apexes[i + 1] - apexes[i]).min(reference) };
                (left, right)
            })
            .collect();
        Ok(Partition {
            terms: shoulder_terms(labels, apexes, &widths),
            domain_lo: lo,
            domain_hi: hi,
            kind: PartitionKind::Twofold,
        })
    }

    pub fn terms(&self) -> &[TwofoldTerm] {
        &self.terms
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.domain_lo, self.domain_hi)
    }

    /// Index of the last term.
    pub fn granularity(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.label.as_str())
    }

    pub fn apexes(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.apex).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.domain_lo && x <= self.domain_hi
    }

    fn check_domain(&self, x: f64) -> Result<(), LinguisticError> {
        if x.is_nan() {
            Err(LinguisticError::NotANumber)
        } else if x < self.domain_lo {
            Err(LinguisticError::BelowDomain { x, lo: self.domain_lo })
        } else if x > self.domain_hi {
            Err(LinguisticError::AboveDomain { x, hi: self.domain_hi })
        } else {
            Ok(())
        }
    }

    pub fn membership(&self, term_index: usize, x: f64) -> Result<f64, LinguisticError> {
        let term = self.terms.get(term_index).ok_or(LinguisticError::TermIndex {
            index: term_index,
            granularity: self.granularity(),
        })?;
        self.check_domain(x)?;
        Ok(term.degree(x))
    }

    /// Converts a domain value to the 2-tuple of its nearest term, with
    /// alpha measured as a fraction of the gap on the relevant side.
    pub fn to_two_tuple(&self, x: f64) -> Result<TwoTuple, LinguisticError> {
        self.check_domain(x)?;
        let g = self.granularity();
        if x >= self.domain_hi {
            return TwoTuple::new(g, 0.0, g);
        }
        // largest i with apex_i <= x; i < g because x < hi
        let i = self.terms.partition_point(|t| t.apex <= x) - 1;
        let a = self.terms[i].apex;
        let b = self.terms[i + 1].apex;
        let f = (x - a) / (b - a);
        if f < 0.5 {
            TwoTuple::new(i, f, g)
        } else {
            TwoTuple::new(i + 1, f - 1.0, g)
        }
    }

    /// Piecewise-linear inverse of [`Partition::to_two_tuple`].
    pub fn from_two_tuple(&self, t: &TwoTuple) -> Result<f64, LinguisticError> {
        if t.granularity() != self.granularity() {
            return Err(LinguisticError::ScaleMismatch {
                tuple: t.granularity(),
                partition: self.granularity(),
            });
        }
        let i = t.term_index();
        let apex = self.terms[i].apex;
        let alpha = t.alpha();
        let x = if alpha > 0.0 {
            apex + alpha * (self.terms[i + 1].apex - apex)
        } else if alpha < 0.0 {
            apex + alpha * (apex - self.terms[i - 1].apex)
        } else {
            apex
        };
        Ok(x)
    }

    /// Crossing between term `left` and `left + 1`. The degree is zero
    /// when their supports do not overlap.
    pub fn crossing(&self, left: usize) -> Option<Crossing> {
        let a = self.terms.get(left)?;
        let b = self.terms.get(left + 1)?;
        let reach = a.right_width + b.left_width;
        if reach <= 0.0 {
            return Some(Crossing {
                left,
                x: a.apex,
                degree: 0.0,
            });
        }
        let x = (a.apex * b.left_width + b.apex * a.right_width) / reach;
        let degree = (1.0 - (b.apex - a.apex) / reach).max(0.0);
        Some(Crossing { left, x, degree })
    }

    pub fn crossings(&self) -> Vec<Crossing> {
        (0..self.granularity()).filter_map(|i| self.crossing(i)).collect()
    }

    /// `min_x max_i mu_i(x)`. Between two apexes only the adjacent pair is
    /// non-zero, so the minimum sits at one of the crossings.
    pub fn coverage_min(&self) -> f64 {
        self.crossings()
            .iter()
            .map(|c| c.degree)
            .fold(1.0, f64::min)
    }

    /// Text form: a header line then one tab-separated record per term.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "#partition v1 lo={:?} hi={:?} kind={}\n",
            self.domain_lo, self.domain_hi, self.kind
        );
        for t in &self.terms {
            out.push_str(&format!(
                "{}\t{:?}\t{:?}\t{:?}\n",
                t.label, t.apex, t.left_width, t.right_width
            ));
        }
        out
    }

    fn validate(&self) -> Result<(), LinguisticError> {
        let labels: Vec<&str> = self.labels().collect();
        check_labels(&labels)?;
        let apexes = self.apexes();
        check_apexes(&apexes)?;
        if apexes[0] != self.domain_lo || apexes[apexes.len() - 1] != self.domain_hi {
            return Err(LinguisticError::Format(
                "first and last apex must equal the domain bounds".into(),
            ));
        }
        let last = self.terms.len() - 1;
        for (i, t) in self.terms.iter().enumerate() {
            let bad_left = if i == 0 { t.left_width != 0.0 } else { !(t.left_width > 0.0) };
            let bad_right = if i == last { t.right_width != 0.0 } else { !(t.right_width > 0.0) };
            if bad_left || bad_right || !t.left_width.is_finite() || !t.right_width.is_finite() {
                return Err(LinguisticError::Format(format!(
                    "term `{}` has invalid widths ({}, {})",
                    t.label, t.left_width, t.right_width
                )));
            }
        }
        if self.coverage_min() <= 0.0 {
            return Err(LinguisticError::Format("partition does not cover its domain".into()));
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = LinguisticError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| LinguisticError::Format("missing header".into()))?;
        let mut fields = header.split_whitespace();
        if fields.next() != Some("#partition") || fields.next() != Some("v1") {
            return Err(LinguisticError::Format(format!("bad header `{header}`")));
        }
        let (mut lo, mut hi, mut kind) = (None, None, None);
        for field in fields {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| LinguisticError::Format(format!("bad header field `{field}`")))?;
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| LinguisticError::Format(format!("bad number `{value}`")))
            };
            match key {
                "lo" => lo = Some(number()?),
                "hi" => hi = Some(number()?),
                "kind" => kind = Some(value.parse::<PartitionKind>()?),
                _ => return Err(LinguisticError::Format(format!("unknown header key `{key}`"))),
            }
        }
        let missing = |k: &str| LinguisticError::Format(format!("header lacks `{k}`"));
        let domain_lo = lo.ok_or_else(|| missing("lo"))?;
        let domain_hi = hi.ok_or_else(|| missing("hi"))?;
        let kind = kind.ok_or_else(|| missing("kind"))?;

        let mut records = Vec::new();
        for line in lines {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 4 {
                return Err(LinguisticError::Format(format!("expected 4 columns in `{line}`")));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| LinguisticError::Format(format!("bad number `{s}`")))
            };
            records.push((cols[0].to_string(), num(cols[1])?, num(cols[2])?, num(cols[3])?));
        }
        if records.len() < 2 {
            return Err(LinguisticError::TooFewTerms(records.len()));
        }
        let last = records.len() - 1;
        let terms = records
            .into_iter()
            .enumerate()
            .map(|(i, (label, apex, left_width, right_width))| TwofoldTerm {
                label,
                apex,
                left_width,
                right_width,
                left_shoulder: i == 0,
                right_shoulder: i == last,
            })
            .collect();
        let p = Partition {
            terms,
            domain_lo,
            domain_hi,
            kind,
        };
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISTANCE: [&str; 5] = ["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"];
    const BATTERY: [&str; 7] = ["Minimum", "VeryLow", "Low", "Medium", "High", "VeryHigh", "Maximum"];

    fn distance() -> Partition {
        Partition::twofold(&DISTANCE, &[0.0, 200.0, 400.0, 700.0, 1200.0]).unwrap()
    }

    fn battery() -> Partition {
        Partition::twofold(&BATTERY, &[0.0, 10.0, 20.0, 50.0, 60.0, 80.0, 100.0]).unwrap()
    }

    /// Piecewise-linear reference: locate the sample relative to the apex and
    /// walk the corresponding half of the triangle.
    fn oracle_degree(apex: f64, left: f64, right: f64, x: f64) -> f64 {
        let d = x - apex;
        if d < 0.0 {
            if left == 0.0 { 1.0 } else { (1.0 + d / left).max(0.0) }
        } else if right == 0.0 {
            1.0
        } else {
            (1.0 - d / right).max(0.0)
        }
    }

    #[test]
    fn uniform_apexes() {
        let p = Partition::uniform(&DISTANCE, 0.0, 1200.0).unwrap();
        assert_eq!(p.apexes(), vec![0.0, 300.0, 600.0, 900.0, 1200.0]);
        let p = Partition::uniform(&["Minimum", "Medium", "Maximum"], 0.0, 120.0).unwrap();
        assert_eq!(p.apexes(), vec![0.0, 60.0, 120.0]);
        let p = Partition::uniform(&["A", "B"], 0.0, 1.0).unwrap();
        assert_eq!(p.apexes(), vec![0.0, 1.0]);
    }

    #[test]
    fn uniform_rejects_bad_input() {
        assert!(matches!(
            Partition::uniform(&["A"], 0.0, 1.0),
            Err(LinguisticError::TooFewTerms(1))
        ));
        assert!(matches!(
            Partition::uniform(&["A", "B"], 1.0, 1.0),
            Err(LinguisticError::EmptyDomain { .. })
        ));
        assert!(matches!(
            Partition::uniform(&["A", "A"], 0.0, 1.0),
            Err(LinguisticError::DuplicateLabel(_))
        ));
    }

    #[test]
    fn twofold_distance_widths() {
        let p = distance();
        let far = &p.terms()[3];
        assert_eq!((far.left_width, far.right_width), (300.0, 300.0));
        assert_eq!(p.terms()[4].left_width, 300.0);
        assert_eq!(p.terms()[1].left_width, 200.0);
        assert!(p.terms()[0].left_shoulder && p.terms()[4].right_shoulder);
        assert!(!p.terms()[2].left_shoulder && !p.terms()[2].right_shoulder);
    }

    #[test]
    fn twofold_battery_caps_wide_gap() {
        let p = battery();
        let w = 100.0 / 6.0;
        assert!((p.terms()[2].right_width - w).abs() < 1e-12);
        assert!((p.terms()[3].left_width - w).abs() < 1e-12);
        assert_eq!(p.terms()[1].right_width, 10.0);
    }

    #[test]
    fn twofold_with_equal_gaps_matches_uniform() {
        let a = Partition::twofold(&DISTANCE, &[0.0, 300.0, 600.0, 900.0, 1200.0]).unwrap();
        let b = Partition::uniform(&DISTANCE, 0.0, 1200.0).unwrap();
        for i in 0..5 {
            for k in 0..=240 {
                let x = k as f64 * 5.0;
                assert_eq!(a.membership(i, x).unwrap(), b.membership(i, x).unwrap());
            }
        }
    }

    #[test]
    fn twofold_rejects_bad_apexes() {
        assert!(matches!(
            Partition::twofold(&["A", "B", "C"], &[0.0, 5.0, 2.0]),
            Err(LinguisticError::NonIncreasingApexes { index: 2, .. })
        ));
        assert!(matches!(
            Partition::twofold(&["A", "B"], &[0.0]),
            Err(LinguisticError::CountMismatch { .. })
        ));
        // span 99, g = 3, reference 33: the C-D gap of 97 leaves a hole
        let err = Partition::twofold(&["A", "B", "C", "D"], &[0.0, 1.0, 2.0, 99.0]).unwrap_err();
        assert!(matches!(err, LinguisticError::GapBreaksCoverage { .. }));
        assert!(err.to_string().contains("`C` and `D`"));
        // exactly twice the reference width meets at degree 0
        assert!(Partition::twofold(&["A", "B", "C"], &[0.0, 0.0, 1.0]).is_err());
        assert!(Partition::twofold(&["A", "B", "C", "D"], &[0.0, 1.0, 2.0, 6.0]).is_err());
    }

    #[test]
    fn membership_examples() {
        let p = distance();
        assert_eq!(p.membership(2, 400.0).unwrap(), 1.0);
        assert!((p.membership(3, 600.0).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((p.membership(3, 950.0).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!((p.membership(4, 950.0).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!(matches!(p.membership(0, -1.0), Err(LinguisticError::BelowDomain { .. })));
        assert!(matches!(p.membership(0, 1201.0), Err(LinguisticError::AboveDomain { .. })));
        assert!(matches!(p.membership(9, 10.0), Err(LinguisticError::TermIndex { .. })));
    }

    #[test]
    fn membership_matches_sampled_oracle() {
        for p in [distance(), battery()] {
            let (lo, hi) = p.domain();
            for t in 0..p.terms().len() {
                let term = &p.terms()[t];
                for k in 0..=2000 {
                    let x = lo + (hi - lo) * k as f64 / 2000.0;
                    let expected = oracle_degree(term.apex, term.left_width, term.right_width, x);
                    assert!((p.membership(t, x).unwrap() - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn to_two_tuple_examples() {
        let p = distance();
        let t = p.to_two_tuple(600.0).unwrap();
        assert_eq!(t.term_index(), 3);
        assert!((t.alpha() + 1.0 / 3.0).abs() < 1e-12);
        let t = p.to_two_tuple(400.0).unwrap();
        assert_eq!((t.term_index(), t.alpha()), (2, 0.0));
        let u = Partition::uniform(&DISTANCE, 0.0, 1200.0).unwrap();
        let t = u.to_two_tuple(450.0).unwrap();
        assert_eq!((t.term_index(), t.alpha()), (2, -0.5));
        let t = p.to_two_tuple(1200.0).unwrap();
        assert_eq!((t.term_index(), t.alpha()), (4, 0.0));
        assert!(p.to_two_tuple(-5.0).is_err());
    }

    #[test]
    fn from_two_tuple_examples() {
        let p = distance();
        assert_eq!(p.from_two_tuple(&TwoTuple::new(3, 0.0, 4).unwrap()).unwrap(), 700.0);
        let x = p.from_two_tuple(&TwoTuple::new(3, -1.0 / 3.0, 4).unwrap()).unwrap();
        assert!((x - 600.0).abs() < 1e-9);
        assert_eq!(p.from_two_tuple(&TwoTuple::new(4, 0.0, 4).unwrap()).unwrap(), 1200.0);
        assert_eq!(p.from_two_tuple(&TwoTuple::new(2, -0.5, 4).unwrap()).unwrap(), 300.0);
        assert!(p.from_two_tuple(&TwoTuple::new(1, 0.0, 2).unwrap()).is_err());
    }

    #[test]
    fn coverage_examples() {
        let u = Partition::uniform(&DISTANCE, 0.0, 1200.0).unwrap();
        assert_eq!(u.coverage_min(), 0.5);
        assert!((distance().coverage_min() - 1.0 / 6.0).abs() < 1e-12);
        assert!((battery().coverage_min() - 0.1).abs() < 1e-12);
        let c = distance().crossing(3).unwrap();
        assert!((c.x - 950.0).abs() < 1e-9);
    }

    #[test]
    fn coverage_matches_dense_sampling() {
        for p in [distance(), battery()] {
            let (lo, hi) = p.domain();
            let n = 120_000;
            let sampled = (0..=n)
                .map(|k| {
                    let x = lo + (hi - lo) * k as f64 / n as f64;
                    (0..p.terms().len())
                        .map(|t| p.membership(t, x).unwrap())
                        .fold(0.0, f64::max)
                })
                .fold(1.0, f64::min);
            assert!((sampled - p.coverage_min()).abs() < 1e-3, "{sampled}");
            assert!(sampled >= p.coverage_min() - 1e-12);
        }
    }

    #[test]
    fn text_roundtrip() {
        for p in [distance(), battery(), Partition::uniform(&DISTANCE, 0.0, 1200.0).unwrap()] {
            let text = p.to_text();
            assert!(text.starts_with("#partition v1 lo="));
            let back: Partition = text.parse().unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn text_rejects_corrupt_records() {
        assert!("".parse::<Partition>().is_err());
        assert!("#partition v1 lo=0 hi=1 kind=uniform\nA\t0\t0\t1\n".parse::<Partition>().is_err());
        let bad = "#partition v1 lo=0.0 hi=1.0 kind=twofold\nA\t0.0\t0.0\t0.2\nB\t1.0\t0.2\t0.0\n";
        assert!(bad.parse::<Partition>().is_err());
    }
}

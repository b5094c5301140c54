use std::collections::BTreeSet;

use super::{AlertError, ALERT_TERM, BATTERY, DISTANCE, NO_ALERT_TERM, OUTPUT, TOLERANCE};
use crate::fcl::{Clause, FclProgram, Rule, RuleBlock};

/// Which distance, battery and tolerance labels drive the alert decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RulePolicy {
    pub low_battery_terms: BTreeSet<String>,
    pub high_tolerance_terms: BTreeSet<String>,
    pub far_terms: BTreeSet<String>,
    pub always_alert_terms: BTreeSet<String>,
    pub near_terms: BTreeSet<String>,
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl Default for RulePolicy {
    /// Near terms never alert, out-of-route always does, and far only
    /// stays silent when the battery is low and the tolerance is high.
    fn default() -> Self {
        RulePolicy {
            low_battery_terms: set(&["Minimum", "VeryLow", "Low"]),
            high_tolerance_terms: set(&["Maximum"]),
            far_terms: set(&["Far"]),
            always_alert_terms: set(&["OutOfRoute"]),
            near_terms: set(&["InTheCenter", "VeryCloseTo", "Near"]),
        }
    }
}

impl RulePolicy {
    /// Checks the policy against the label sets of a controller.
    pub fn check(&self, battery: &[String], distance: &[String], tolerance: &[String]) -> Result<(), AlertError> {
        let mismatch = |m: String| Err(AlertError::LabelMismatch(m));
        let groups = [
            ("far", &self.far_terms),
            ("always-alert", &self.always_alert_terms),
            ("near", &self.near_terms),
        ];
        for (i, (name, g)) in groups.iter().enumerate() {
            if let Some(l) = g.iter().find(|l| !distance.contains(l)) {
                return mismatch(format!("{name} term `{l}` is not a distance label"));
            }
            for (other, h) in &groups[i + 1..] {
                if let Some(l) = g.intersection(h).next() {
                    return mismatch(format!("`{l}` is both a {name} and a {other} term"));
                }
            }
        }
        if let Some(l) = distance.iter().find(|l| !groups.iter().any(|(_, g)| g.contains(*l))) {
            return mismatch(format!("distance label `{l}` is in no policy group"));
        }
        if let Some(l) = self.low_battery_terms.iter().find(|l| !battery.contains(l)) {
            return mismatch(format!("low battery term `{l}` is not a battery label"));
        }
        if let Some(l) = self.high_tolerance_terms.iter().find(|l| !tolerance.contains(l)) {
            return mismatch(format!("high tolerance term `{l}` is not a tolerance label"));
        }
        Ok(())
    }

    /// Consequent for one antecedent combination.
    pub fn decide(&self, battery: &str, distance: &str, tolerance: &str) -> &'static str {
        if self.always_alert_terms.contains(distance) {
            ALERT_TERM
        } else if self.near_terms.contains(distance)
            || (self.low_battery_terms.contains(battery) && self.high_tolerance_terms.contains(tolerance))
        {
            NO_ALERT_TERM
        } else {
            ALERT_TERM
        }
    }
}

/// One rule per (battery, distance, tolerance) combination.
///
/// Rules are numbered from 1 with tolerance varying slowest and battery
/// fastest, so `(Minimum, InTheCenter, Minimum)` is rule 1,
/// `(Maximum, Far, Minimum)` rule 28 and `(Maximum, Far, Medium)` rule 63
/// on the 7 x 5 x 3 alert scales.
pub fn generate_rulebase(
    policy: &RulePolicy,
    battery: &[String],
    distance: &[String],
    tolerance: &[String],
) -> Result<Vec<Rule>, AlertError> {
    policy.check(battery, distance, tolerance)?;
    let mut rules = Vec::with_capacity(battery.len() * distance.len() * tolerance.len());
    let mut id = 0u32;
    for t in tolerance {
        for d in distance {
            for b in battery {
                id += 1;
                rules.push(Rule {
                    id,
                    antecedents: vec![
                        Clause::new(BATTERY, b.as_str()),
                        Clause::new(DISTANCE, d.as_str()),
                        Clause::new(TOLERANCE, t.as_str()),
                    ],
                    consequent: Clause::new(OUTPUT, policy.decide(b, d, t)),
                });
            }
        }
    }
    Ok(rules)
}

/// Replaces the program's rule blocks with the generated rulebase.
pub fn with_generated_rules(program: &FclProgram, policy: &RulePolicy) -> Result<FclProgram, AlertError> {
    let labels = |var: &str| {
        program
            .input_labels(var)
            .ok_or_else(|| AlertError::LabelMismatch(format!("program has no input `{var}`")))
    };
    let rules = generate_rulebase(policy, &labels(BATTERY)?, &labels(DISTANCE)?, &labels(TOLERANCE)?)?;
    let mut out = program.clone();
    let name = program
        .rule_blocks
        .first()
        .map(|b| b.name.clone())
        .unwrap_or_else(|| "Rules".to_string());
    out.rule_blocks = vec![RuleBlock { name, rules }];
    crate::fcl::validate(&out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn scales() -> (Vec<String>, Vec<String>, Vec<String>) {
        (
            labels(&["Minimum", "VeryLow", "Low", "Medium", "High", "VeryHigh", "Maximum"]),
            labels(&["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"]),
            labels(&["Minimum", "Medium", "Maximum"]),
        )
    }

    fn find<'a>(rules: &'a [Rule], b: &str, d: &str, t: &str) -> &'a Rule {
        rules
            .iter()
            .find(|r| r.antecedents[0].term == b && r.antecedents[1].term == d && r.antecedents[2].term == t)
            .unwrap()
    }

    #[test]
    fn full_product() {
        let (b, d, t) = scales();
        let rules = generate_rulebase(&RulePolicy::default(), &b, &d, &t).unwrap();
        assert_eq!(rules.len(), 105);
        let combos: BTreeSet<_> = rules
            .iter()
            .map(|r| r.antecedents.iter().map(|c| c.term.clone()).collect::<Vec<_>>())
            .collect();
        assert_eq!(combos.len(), 105);
        assert!(rules.iter().enumerate().all(|(i, r)| r.id == i as u32 + 1));
    }

    #[test]
    fn listed_rules_keep_their_numbers() {
        let (b, d, t) = scales();
        let rules = generate_rulebase(&RulePolicy::default(), &b, &d, &t).unwrap();
        let r1 = find(&rules, "Minimum", "InTheCenter", "Minimum");
        assert_eq!((r1.id, r1.consequent.term.as_str()), (1, "NoAlert"));
        let r28 = find(&rules, "Maximum", "Far", "Minimum");
        assert_eq!((r28.id, r28.consequent.term.as_str()), (28, "Alert"));
        let r63 = find(&rules, "Maximum", "Far", "Medium");
        assert_eq!((r63.id, r63.consequent.term.as_str()), (63, "Alert"));
    }

    #[test]
    fn battery_saving_and_out_of_route() {
        let (b, d, t) = scales();
        let rules = generate_rulebase(&RulePolicy::default(), &b, &d, &t).unwrap();
        assert_eq!(find(&rules, "Low", "Far", "Maximum").consequent.term, "NoAlert");
        assert_eq!(find(&rules, "Low", "Far", "Medium").consequent.term, "Alert");
        assert_eq!(find(&rules, "Medium", "Far", "Maximum").consequent.term, "Alert");
        assert_eq!(find(&rules, "Minimum", "OutOfRoute", "Maximum").consequent.term, "Alert");
    }

    #[test]
    fn label_mismatch_is_reported() {
        let (b, mut d, t) = scales();
        d.push("Elsewhere".into());
        let err = generate_rulebase(&RulePolicy::default(), &b, &d, &t).unwrap_err();
        assert!(err.to_string().contains("Elsewhere"));

        let (b, d, t) = scales();
        let mut policy = RulePolicy::default();
        policy.far_terms.insert("Near".into());
        assert!(generate_rulebase(&policy, &b, &d, &t).is_err());

        let mut policy = RulePolicy::default();
        policy.low_battery_terms.insert("Empty".into());
        assert!(generate_rulebase(&policy, &b, &d, &t).is_err());
    }
}

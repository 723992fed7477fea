//! The fixed nine-rule base that scores a column as a cut position.

use crate::error::{Error, Result};
use crate::fuzzy::membership::Level;

/// Which fuzzified input an antecedent tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    /// Normalized distance from the center column.
    Distance,
    /// Complemented normalized peak-to-valley value.
    GTilde,
    /// Uncomplemented normalized peak-to-valley value (`1 - g_tilde`);
    /// optional reading of rule 7.
    GBar,
    /// Complemented normalized second difference.
    HTilde,
    /// Crossing count.
    Crossings,
}

/// One `feature is [not] level` clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Antecedent {
    pub feature: FeatureKind,
    pub level: Level,
    pub negated: bool,
}

impl Antecedent {
    pub fn is(feature: FeatureKind, level: Level) -> Self {
        Antecedent {
            feature,
            level,
            negated: false,
        }
    }

    pub fn is_not(feature: FeatureKind, level: Level) -> Self {
        Antecedent {
            feature,
            level,
            negated: true,
        }
    }
}

/// An explicit if-then rule; the antecedents combine by minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub antecedents: Vec<Antecedent>,
    pub consequent: Level,
}

/// Eight explicit rules plus the residual "otherwise" rule, which fires with
/// the complement of the strongest explicit rule and concludes the residual
/// consequent. Three explicit rules conclude Low, five Medium, and the
/// residual concludes High: only clear valley evidence earns a low score.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleBase {
    explicit: Vec<Rule>,
    residual_consequent: Level,
}

impl RuleBase {
    /// The standard rule set. `rule7_on_complement` selects whether rule 7
    /// reads the peak-to-valley feature as `g_tilde` (the default) or as the
    /// uncomplemented `g_bar`.
    pub fn standard(rule7_on_complement: bool) -> Self {
        use FeatureKind::{Crossings, Distance, GTilde, HTilde};
        use Level::{High, Low, Medium};
        let rule7_g = if rule7_on_complement {
            FeatureKind::GTilde
        } else {
            FeatureKind::GBar
        };
        let explicit = vec![
            // 1: central deep-enough valley, few crossings
            Rule {
                antecedents: vec![
                    Antecedent::is(Distance, Low),
                    Antecedent::is_not(GTilde, High),
                    Antecedent::is_not(HTilde, High),
                    Antecedent::is(Crossings, Low),
                ],
                consequent: Low,
            },
            // 2: strong valley off-center, few crossings
            Rule {
                antecedents: vec![
                    Antecedent::is(GTilde, Low),
                    Antecedent::is(HTilde, Low),
                    Antecedent::is(Distance, Medium),
                    Antecedent::is(Crossings, Low),
                ],
                consequent: Low,
            },
            // 3: peak-to-valley strong, second difference not strong
            Rule {
                antecedents: vec![
                    Antecedent::is(GTilde, Low),
                    Antecedent::is_not(Distance, High),
                    Antecedent::is_not(HTilde, Low),
                    Antecedent::is(Crossings, Low),
                ],
                consequent: Low,
            },
            // 4-6: same evidence as 1-3 but many crossings
            Rule {
                antecedents: vec![
                    Antecedent::is(Distance, Low),
                    Antecedent::is_not(GTilde, High),
                    Antecedent::is_not(HTilde, High),
                    Antecedent::is(Crossings, High),
                ],
                consequent: Medium,
            },
            Rule {
                antecedents: vec![
                    Antecedent::is(GTilde, Low),
                    Antecedent::is(HTilde, Low),
                    Antecedent::is(Distance, Medium),
                    Antecedent::is(Crossings, High),
                ],
                consequent: Medium,
            },
            Rule {
                antecedents: vec![
                    Antecedent::is(GTilde, Low),
                    Antecedent::is_not(Distance, High),
                    Antecedent::is_not(HTilde, Low),
                    Antecedent::is(Crossings, High),
                ],
                consequent: Medium,
            },
            // 7: second difference strong, peak-to-valley not
            Rule {
                antecedents: vec![
                    Antecedent::is(HTilde, Low),
                    Antecedent::is_not(Distance, High),
                    Antecedent::is_not(rule7_g, Low),
                    Antecedent::is(Crossings, Low),
                ],
                consequent: Medium,
            },
            // 8: everything middling, few crossings
            Rule {
                antecedents: vec![
                    Antecedent::is(Distance, Medium),
                    Antecedent::is(GTilde, Medium),
                    Antecedent::is(HTilde, Medium),
                    Antecedent::is(Crossings, Low),
                ],
                consequent: Medium,
            },
        ];
        RuleBase {
            explicit,
            residual_consequent: High,
        }
    }

    pub fn explicit_rules(&self) -> &[Rule] {
        &self.explicit
    }

    pub fn residual_consequent(&self) -> Level {
        self.residual_consequent
    }

    /// Total rule count including the residual rule.
    pub fn len(&self) -> usize {
        self.explicit.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn validate(&self) -> Result<()> {
        if self.explicit.len() != 8 {
            return Err(Error::InvalidConfig(format!(
                "rule base needs 8 explicit rules, got {}",
                self.explicit.len()
            )));
        }
        let lows = self
            .explicit
            .iter()
            .take(3)
            .all(|r| r.consequent == Level::Low);
        let mediums = self
            .explicit
            .iter()
            .skip(3)
            .all(|r| r.consequent == Level::Medium);
        if !lows || !mediums || self.residual_consequent != Level::High {
            return Err(Error::InvalidConfig(
                "rule consequents must be Low (1-3), Medium (4-8), High (residual)".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_base_has_nine_rules_with_the_expected_consequents() {
        let base = RuleBase::standard(true);
        assert_eq!(base.len(), 9);
        base.validate().unwrap();
    }

    #[test]
    fn rule7_feature_is_configurable() {
        let tilde = RuleBase::standard(true);
        let bar = RuleBase::standard(false);
        assert_eq!(tilde.explicit_rules()[6].antecedents[2].feature, FeatureKind::GTilde);
        assert_eq!(bar.explicit_rules()[6].antecedents[2].feature, FeatureKind::GBar);
        assert!(tilde.explicit_rules()[6].antecedents[2].negated);
    }
}

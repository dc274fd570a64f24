use marc_core::JointPmf;
use serde::{Deserialize, Serialize};

/// Default margin by which a strict inequality must hold.
pub const DEFAULT_STRICTNESS: f64 = 1e-9;
/// Default slack allowed on a non-strict inequality.
pub const DEFAULT_SLACK: f64 = 1e-9;
/// Entropies at or below this value are treated as zero: a source with
/// nothing left to describe needs no rate.
pub const ZERO_ENTROPY: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionKind {
    /// `lhs < rhs`, sufficient for achievability.
    Achievability,
    /// `lhs <= rhs`, necessary for achievability.
    Converse,
}

/// Outcome of an outer-bound report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterVerdict {
    /// Some necessary condition fails, so the rate is not achievable.
    Violated,
    /// No violation was found; the searched maxima may be underestimates.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    pub expression: String,
    pub kind: ConditionKind,
    pub lhs_bits: f64,
    pub rhs_bits: f64,
    pub satisfied: bool,
    pub margin_bits: f64,
    /// Input distribution at which the right-hand side was attained, for
    /// searched bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<JointPmf>,
}

impl Condition {
    pub fn new(label: &str, expression: &str, kind: ConditionKind, lhs: f64, rhs: f64) -> Self {
        let mut c = Condition {
            label: label.to_string(),
            expression: expression.to_string(),
            kind,
            lhs_bits: lhs,
            rhs_bits: rhs,
            satisfied: false,
            margin_bits: rhs - lhs,
            witness: None,
        };
        c.judge(DEFAULT_STRICTNESS, DEFAULT_SLACK);
        c
    }

    pub fn with_witness(mut self, witness: JointPmf) -> Self {
        self.witness = Some(witness);
        self
    }

    fn judge(&mut self, strictness: f64, slack: f64) {
        self.satisfied = match self.kind {
            ConditionKind::Achievability => {
                self.lhs_bits <= ZERO_ENTROPY || self.lhs_bits < self.rhs_bits - strictness
            }
            ConditionKind::Converse => self.lhs_bits <= self.rhs_bits + slack,
        };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub theorem: String,
    pub kappa: f64,
    pub conditions: Vec<Condition>,
    pub all_satisfied: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<OuterVerdict>,
}

impl ConditionReport {
    pub fn new(theorem: &str, kappa: f64, conditions: Vec<Condition>) -> Self {
        let mut r = ConditionReport {
            theorem: theorem.to_string(),
            kappa,
            conditions,
            all_satisfied: false,
            verdict: None,
        };
        r.summarize();
        r
    }

    fn summarize(&mut self) {
        self.all_satisfied = self.conditions.iter().all(|c| c.satisfied);
        let converse = self
            .conditions
            .iter()
            .any(|c| c.kind == ConditionKind::Converse);
        self.verdict = converse.then_some(if self.all_satisfied {
            OuterVerdict::Inconclusive
        } else {
            OuterVerdict::Violated
        });
    }

    /// Re-evaluates every verdict with a different strictness margin and
    /// converse slack.
    pub fn rejudge(mut self, strictness: f64, slack: f64) -> Self {
        for c in &mut self.conditions {
            c.judge(strictness, slack);
        }
        self.summarize();
        self
    }

    pub fn get(&self, label: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.label == label)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.satisfied)
    }

    pub fn min_margin(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.margin_bits)
            .fold(f64::INFINITY, f64::min)
    }
}

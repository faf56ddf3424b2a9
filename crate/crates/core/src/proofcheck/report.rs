//! Proof steps and reports, and their JSON form.
//!
//! Exact character-sum values are written as decimal strings because they
//! outgrow 53-bit JSON numbers; counts, symbols and residues are numbers.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::config::Budgets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepId {
    S2Values,
    SnZero,
    Scaling,
    Recurrence,
    ClosedForm,
    EulerCongruence,
    OrbitCongruence,
    ReciprocityLaw,
}

impl fmt::Display for StepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepValue {
    Int(i64),
    Big(BigInt),
}

impl StepValue {
    pub fn to_bigint(&self) -> BigInt {
        match self {
            StepValue::Int(v) => BigInt::from(*v),
            StepValue::Big(v) => v.clone(),
        }
    }

    pub fn same_number(&self, other: &StepValue) -> bool {
        self.to_bigint() == other.to_bigint()
    }
}

impl fmt::Display for StepValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepValue::Int(v) => v.fmt(f),
            StepValue::Big(v) => v.fmt(f),
        }
    }
}

impl Serialize for StepValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StepValue::Int(v) => s.serialize_i64(*v),
            StepValue::Big(v) => s.serialize_str(&v.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for StepValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(StepValue::Int(v)),
            Raw::Str(s) => s
                .parse::<BigInt>()
                .map(StepValue::Big)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// The instance a step was checked on. Unused fields are omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<u64>,
    /// Which identity or evaluation route the step covers.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub variant: Option<String>,
}

impl StepParams {
    pub fn prime(p: u64) -> Self {
        StepParams {
            p: Some(p),
            ..Default::default()
        }
    }

    pub fn pair(p: u64, q: u64) -> Self {
        StepParams {
            p: Some(p),
            q: Some(q),
            ..Default::default()
        }
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_t(mut self, t: u64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_variant(mut self, v: &str) -> Self {
        self.variant = Some(v.to_string());
        self
    }
}

impl fmt::Display for StepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, v) in [("p", self.p), ("q", self.q), ("n", self.n), ("t", self.t)] {
            if let Some(v) = v {
                parts.push(format!("{name}={v}"));
            }
        }
        if let Some(v) = &self.variant {
            parts.push(v.clone());
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub step_id: StepId,
    pub params: StepParams,
    pub lhs: Option<StepValue>,
    pub rhs: Option<StepValue>,
    /// Present on congruence steps; both sides are then residues in `[0, modulus)`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<u64>,
    pub passed: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl ProofStep {
    pub fn equality(step_id: StepId, params: StepParams, lhs: StepValue, rhs: StepValue) -> Self {
        let passed = lhs.same_number(&rhs);
        ProofStep {
            step_id,
            params,
            lhs: Some(lhs),
            rhs: Some(rhs),
            modulus: None,
            passed,
            skipped: false,
            note: None,
        }
    }

    /// Both sides must already be canonical residues modulo `modulus`.
    pub fn congruence(
        step_id: StepId,
        params: StepParams,
        lhs: u64,
        rhs: u64,
        modulus: u64,
    ) -> Self {
        ProofStep {
            step_id,
            params,
            lhs: Some(StepValue::Int(lhs as i64)),
            rhs: Some(StepValue::Int(rhs as i64)),
            modulus: Some(modulus),
            passed: lhs < modulus && lhs == rhs,
            skipped: false,
            note: None,
        }
    }

    pub fn skipped(step_id: StepId, params: StepParams, reason: String) -> Self {
        ProofStep {
            step_id,
            params,
            lhs: None,
            rhs: None,
            modulus: None,
            passed: false,
            skipped: true,
            note: Some(reason),
        }
    }

    /// A step that could not be evaluated for a reason other than a budget.
    pub fn errored(step_id: StepId, params: StepParams, reason: String) -> Self {
        ProofStep {
            skipped: false,
            ..ProofStep::skipped(step_id, params, reason)
        }
    }

    pub fn failed(&self) -> bool {
        !self.passed && !self.skipped
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

impl Summary {
    pub fn tally(steps: &[ProofStep]) -> Self {
        let mut s = Summary::default();
        for step in steps {
            if step.skipped {
                s.skipped += 1;
            } else if step.passed {
                s.passed += 1;
            } else {
                s.failed += 1;
            }
        }
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub qmax: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_max: Option<u64>,
    /// Number of odd primes p covered.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub primes: Option<u64>,
    /// Number of ordered prime pairs (p, q), p != q, covered.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budgets: Option<Budgets>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub tool: String,
    pub version: String,
    pub params: ReportParams,
    pub steps: Vec<ProofStep>,
    pub summary: Summary,
}

impl ProofReport {
    pub fn new(params: ReportParams, steps: Vec<ProofStep>) -> Self {
        let summary = Summary::tally(&steps);
        ProofReport {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            params,
            steps,
            summary,
        }
    }

    /// True iff every step was evaluated and passed.
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0 && self.summary.skipped == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Plain-text rendering: one line per step, then the summary.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let status = if step.skipped {
                "SKIP"
            } else if step.passed {
                "PASS"
            } else {
                "FAIL"
            };
            let show =
                |v: &Option<StepValue>| v.as_ref().map_or("-".to_string(), |v| v.to_string());
            out.push_str(&format!(
                "{status} {:<16} {:<24} lhs={} rhs={}",
                step.step_id.to_string(),
                step.params.to_string(),
                show(&step.lhs),
                show(&step.rhs)
            ));
            if let Some(m) = step.modulus {
                out.push_str(&format!(" (mod {m})"));
            }
            if let Some(note) = &step.note {
                out.push_str(&format!(" [{note}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "summary: {} passed, {} failed, {} skipped\n",
            self.summary.passed, self.summary.failed, self.summary.skipped
        ));
        out
    }
}

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Computed and reported without asserting a value.
    Recorded,
    /// Asserted on a documented subset of the claimed range.
    Partial,
}

/// One verified (or recorded) claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    /// Plain statement of the claim being checked.
    pub paper_ref: String,
    pub inputs: Value,
    /// `"recorded-only"` when nothing is asserted.
    pub expected: Value,
    pub computed: Value,
    pub status: Status,
    /// Wall-clock time; left out unless timings are requested so that
    /// reports stay byte-identical across runs.
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl VerificationReport {
    /// Status is `Pass` iff `computed == expected`.
    pub fn check(
        claim_id: impl Into<String>,
        statement: impl Into<String>,
        inputs: Value,
        expected: Value,
        computed: Value,
    ) -> Self {
        let status = if expected == computed { Status::Pass } else { Status::Fail };
        VerificationReport {
            claim_id: claim_id.into(),
            paper_ref: statement.into(),
            inputs,
            expected,
            computed,
            status,
            runtime_ms: None,
            note: None,
        }
    }

    pub fn recorded(claim_id: impl Into<String>, statement: impl Into<String>, inputs: Value, computed: Value) -> Self {
        VerificationReport {
            claim_id: claim_id.into(),
            paper_ref: statement.into(),
            inputs,
            expected: Value::String("recorded-only".into()),
            computed,
            status: Status::Recorded,
            runtime_ms: None,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Downgrades a pass to partial coverage; failures stay failures.
    pub fn partial(mut self) -> Self {
        if self.status == Status::Pass {
            self.status = Status::Partial;
        }
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub recorded: usize,
    pub partial: usize,
}

impl Summary {
    pub fn of(claims: &[VerificationReport]) -> Self {
        let mut s = Summary::default();
        for c in claims {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Recorded => s.recorded += 1,
                Status::Partial => s.partial += 1,
            }
        }
        s
    }
}

/// Builds a JSON object from key/value pairs.
pub fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let map: BTreeMap<String, Value> = pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    serde_json::to_value(map).expect("string keys")
}

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Answer::Yes
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootVerdict {
    pub root: usize,
    pub answer: Answer,
    pub trials_run: usize,
}

/// Outcome of a one-sided randomized decision procedure.
///
/// `Yes` is always correct. `failure_bound` bounds the probability that a
/// `No` is wrong.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionReport {
    pub answer: Answer,
    pub trials: usize,
    pub trials_run: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_order: Option<u64>,
    pub failure_bound: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub per_root: Vec<RootVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl DetectionReport {
    pub fn is_yes(&self) -> bool {
        self.answer.is_yes()
    }

    pub(crate) fn certain_no(trials: usize, seed: u64, note: impl Into<String>) -> Self {
        DetectionReport {
            answer: Answer::No,
            trials,
            trials_run: 0,
            seed,
            field_order: None,
            failure_bound: 0.0,
            per_root: Vec::new(),
            note: Some(note.into()),
        }
    }
}

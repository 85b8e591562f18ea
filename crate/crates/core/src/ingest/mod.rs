//! Transcript ingestion: CHAT parsing, token cleaning, manifests, and corpus
//! assembly with the visit-selection policy.

mod chat;
mod corpus;
mod manifest;
mod tokenize;

pub use chat::{parse_chat, parse_plain};
pub use corpus::{load_corpus, LoadOptions, LoadReport};
pub use manifest::{CorpusManifest, ManifestEntry, SplitRole};
pub use tokenize::{clean_and_tokenize, is_clean_token};

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    ParseLine { line: usize, msg: String },
    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<IngestError>,
    },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("unknown label `{0}`, expected MCI or CONTROL")]
    BadLabel(String),
    #[error("unknown split role `{0}`, expected TRAIN_EVAL or VALIDATION")]
    BadSplitRole(String),
}

impl IngestError {
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        IngestError::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }
}

/// Diagnostic class label. MCI is the positive class throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "MCI")]
    Mci,
    #[serde(rename = "CONTROL")]
    Control,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Mci
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Mci => "MCI",
            Label::Control => "CONTROL",
        })
    }
}

impl FromStr for Label {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, IngestError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MCI" => Ok(Label::Mci),
            "CONTROL" => Ok(Label::Control),
            _ => Err(IngestError::BadLabel(s.to_string())),
        }
    }
}

/// One speaker turn as read from a transcript file, before cleaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawUtterance {
    pub speaker_code: String,
    pub raw_text: String,
    /// Count of annotated pauses: `(.)`, `(..)`, `(...)`.
    pub pause_marks: u32,
    /// Millisecond (start, end) pairs from timing bullets; empty when the
    /// utterance carries no timing.
    pub segment_times_ms: Vec<(u64, u64)>,
    /// Word items of an attached `%mor` tier, if any.
    pub mor_items: Option<Vec<String>>,
}

impl RawUtterance {
    pub fn new(speaker_code: impl Into<String>, raw_text: impl Into<String>) -> Self {
        Self {
            speaker_code: speaker_code.into(),
            raw_text: raw_text.into(),
            pause_marks: 0,
            segment_times_ms: Vec::new(),
            mor_items: None,
        }
    }
}

/// A parsed transcript file. `participant_id` comes from the `@PID` header
/// when present; `visit_index` is assigned by the manifest, defaulting to 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawTranscript {
    pub participant_id: String,
    pub visit_index: u32,
    pub header_fields: BTreeMap<String, String>,
    pub utterances: Vec<RawUtterance>,
}

/// Speech-timing summary aggregated over a sample's participant utterances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub total_time_s: f64,
    pub speech_time_s: f64,
    pub pause_count: u32,
    pub word_count: u32,
}

impl TimingStats {
    /// Builds stats from timing segments. Speech time is the length of the
    /// union of segments, so overlapping annotations never exceed the span;
    /// total time is the span from earliest start to latest end. Returns
    /// None when no segments are annotated.
    pub fn from_annotations(
        segments: &[(u64, u64)],
        pause_count: u32,
        word_count: u32,
    ) -> Option<Self> {
        if segments.is_empty() {
            return None;
        }
        let mut sorted: Vec<(u64, u64)> = segments.to_vec();
        sorted.sort_unstable();
        let span_start = sorted[0].0;
        let mut span_end = 0u64;
        let mut speech_ms = 0u64;
        let mut cur = sorted[0];
        for &(s, e) in &sorted[1..] {
            if s <= cur.1 {
                cur.1 = cur.1.max(e);
            } else {
                speech_ms += cur.1 - cur.0;
                cur = (s, e);
            }
        }
        speech_ms += cur.1 - cur.0;
        for &(_, e) in &sorted {
            span_end = span_end.max(e);
        }
        Some(Self {
            total_time_s: (span_end - span_start) as f64 / 1000.0,
            speech_time_s: speech_ms as f64 / 1000.0,
            pause_count,
            word_count,
        })
    }
}

/// A cleaned, labeled sample: one participant visit ready for featurizing.
///
/// `tokens` holds one list per kept utterance (utterances that clean to
/// nothing are dropped). `mor_tags` is parallel to `tokens`; an entry is
/// Some only when the source `%mor` tier aligned word-for-word with the
/// cleaned tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptSample {
    pub participant_id: String,
    pub visit_index: u32,
    pub label: Label,
    pub tokens: Vec<Vec<String>>,
    pub mor_tags: Vec<Option<Vec<String>>>,
    pub timing: Option<TimingStats>,
}

impl TranscriptSample {
    pub fn word_count(&self) -> usize {
        self.tokens.iter().map(Vec::len).sum()
    }
}

/// Labeled samples plus the manifest role they were loaded under.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub samples: Vec<TranscriptSample>,
    pub split_role: SplitRole,
}

impl Corpus {
    /// (MCI, CONTROL) sample counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let mci = self
            .samples
            .iter()
            .filter(|s| s.label == Label::Mci)
            .count();
        (mci, self.samples.len() - mci)
    }

    pub fn labels(&self) -> Vec<Label> {
        self.samples.iter().map(|s| s.label).collect()
    }
}

/// Which visit of each participant enters the analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VisitPolicy {
    /// The highest visit_index per participant.
    Last,
    /// The second-highest; single-visit participants are omitted.
    SecondToLast,
}

impl FromStr for VisitPolicy {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, IngestError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "LAST" => Ok(VisitPolicy::Last),
            "SECOND_TO_LAST" => Ok(VisitPolicy::SecondToLast),
            _ => Err(IngestError::Manifest(format!(
                "unknown visit policy `{s}`, expected LAST or SECOND_TO_LAST"
            ))),
        }
    }
}

/// Result of [`select_visit`]: the chosen samples, ordered by participant
/// id, and the participants omitted for lack of enough visits.
#[derive(Debug, Clone, PartialEq)]
pub struct VisitSelection {
    pub selected: Vec<TranscriptSample>,
    pub skipped: Vec<String>,
}

/// Applies the visit policy per participant. Visit order is the manifest's
/// visit_index, never file metadata.
pub fn select_visit(samples: Vec<TranscriptSample>, policy: VisitPolicy) -> VisitSelection {
    let mut by_participant: BTreeMap<String, Vec<TranscriptSample>> = BTreeMap::new();
    for s in samples {
        by_participant
            .entry(s.participant_id.clone())
            .or_default()
            .push(s);
    }
    let mut selected = Vec::new();
    let mut skipped = Vec::new();
    for (pid, mut visits) in by_participant {
        visits.sort_by_key(|s| s.visit_index);
        match policy {
            VisitPolicy::Last => {
                selected.push(visits.pop().expect("group is non-empty"));
            }
            VisitPolicy::SecondToLast => {
                if visits.len() < 2 {
                    skipped.push(pid);
                } else {
                    let second = visits.len() - 2;
                    selected.push(visits.swap_remove(second));
                }
            }
        }
    }
    VisitSelection { selected, skipped }
}

//! Corpus manifests: CSV files mapping transcript paths to participant,
//! visit, label, and split role.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{IngestError, Label};

/// How a manifest's samples are used downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitRole {
    /// Cross-validated training and evaluation.
    TrainEval,
    /// Held-out hyperparameter validation.
    Validation,
}

impl fmt::Display for SplitRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitRole::TrainEval => "TRAIN_EVAL",
            SplitRole::Validation => "VALIDATION",
        })
    }
}

impl FromStr for SplitRole {
    type Err = IngestError;

    fn from_str(s: &str) -> Result<Self, IngestError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TRAIN_EVAL" => Ok(SplitRole::TrainEval),
            "VALIDATION" => Ok(SplitRole::Validation),
            _ => Err(IngestError::BadSplitRole(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub participant_id: String,
    pub visit_index: u32,
    pub label: Label,
}

/// A validated manifest. All rows share one split role; (participant,
/// visit) pairs are unique. Relative paths resolve against `base_dir`,
/// the manifest file's own directory.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub entries: Vec<ManifestEntry>,
    pub split_role: SplitRole,
    pub base_dir: PathBuf,
}

#[derive(Debug, Deserialize)]
struct Row {
    path: String,
    participant_id: String,
    visit_index: u32,
    label: String,
    split_role: String,
}

impl CorpusManifest {
    pub fn new(
        entries: Vec<ManifestEntry>,
        split_role: SplitRole,
        base_dir: PathBuf,
    ) -> Result<Self, IngestError> {
        let m = Self {
            entries,
            split_role,
            base_dir,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self, IngestError> {
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_csv(&text, base_dir).map_err(|e| e.in_file(path))
    }

    /// Parses manifest CSV. An empty manifest is allowed (role defaults to
    /// TRAIN_EVAL); the loader surfaces a warning for it.
    pub fn from_csv(text: &str, base_dir: PathBuf) -> Result<Self, IngestError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut entries = Vec::new();
        let mut role: Option<SplitRole> = None;
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| IngestError::Manifest(format!("row {}: {e}", i + 2)))?;
            let row_role: SplitRole = row.split_role.parse()?;
            match role {
                None => role = Some(row_role),
                Some(r) if r != row_role => {
                    return Err(IngestError::Manifest(format!(
                        "mixed split roles: {} and {}",
                        r, row_role
                    )))
                }
                Some(_) => {}
            }
            if row.visit_index < 1 {
                return Err(IngestError::Manifest(format!(
                    "participant {}: visit_index must be >= 1",
                    row.participant_id
                )));
            }
            entries.push(ManifestEntry {
                path: PathBuf::from(row.path),
                participant_id: row.participant_id,
                visit_index: row.visit_index,
                label: row.label.parse()?,
            });
        }
        Self::new(entries, role.unwrap_or(SplitRole::TrainEval), base_dir)
    }

    fn validate(&self) -> Result<(), IngestError> {
        let mut seen = std::collections::BTreeSet::new();
        for e in &self.entries {
            if !seen.insert((e.participant_id.clone(), e.visit_index)) {
                return Err(IngestError::Manifest(format!(
                    "duplicate (participant, visit) pair ({}, {})",
                    e.participant_id, e.visit_index
                )));
            }
        }
        Ok(())
    }

    /// Absolute (or base-relative) path of one entry's transcript file.
    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }

    /// Canonical CSV form, byte-stable across runs.
    pub fn csv_string(&self) -> String {
        let mut out = String::from("path,participant_id,visit_index,label,split_role\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.path.display(),
                e.participant_id,
                e.visit_index,
                e.label,
                self.split_role
            ));
        }
        out
    }

    pub fn participant_ids(&self) -> std::collections::BTreeSet<String> {
        self.entries
            .iter()
            .map(|e| e.participant_id.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "path,participant_id,visit_index,label,split_role\n\
                       a.cha,p1,1,MCI,TRAIN_EVAL\n\
                       b.cha,p2,2,CONTROL,TRAIN_EVAL\n";

    #[test]
    fn parses_rows() {
        let m = CorpusManifest::from_csv(CSV, PathBuf::from("/data")).unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.split_role, SplitRole::TrainEval);
        assert_eq!(m.entries[0].label, Label::Mci);
        assert_eq!(m.resolve(&m.entries[1]), PathBuf::from("/data/b.cha"));
    }

    #[test]
    fn csv_round_trips() {
        let m = CorpusManifest::from_csv(CSV, PathBuf::from(".")).unwrap();
        let again = CorpusManifest::from_csv(&m.csv_string(), PathBuf::from(".")).unwrap();
        assert_eq!(m.entries, again.entries);
        assert_eq!(m.csv_string(), again.csv_string());
    }

    #[test]
    fn duplicate_participant_visit_rejected() {
        let text = "path,participant_id,visit_index,label,split_role\n\
                    a.cha,p1,1,MCI,TRAIN_EVAL\n\
                    b.cha,p1,1,MCI,TRAIN_EVAL\n";
        let err = CorpusManifest::from_csv(text, PathBuf::from(".")).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn mixed_split_roles_rejected() {
        let text = "path,participant_id,visit_index,label,split_role\n\
                    a.cha,p1,1,MCI,TRAIN_EVAL\n\
                    b.cha,p2,1,MCI,VALIDATION\n";
        let err = CorpusManifest::from_csv(text, PathBuf::from(".")).unwrap_err();
        assert!(err.to_string().contains("mixed split roles"));
    }

    #[test]
    fn bad_label_and_zero_visit_rejected() {
        let bad_label = "path,participant_id,visit_index,label,split_role\n\
                         a.cha,p1,1,SEVERE,TRAIN_EVAL\n";
        assert!(CorpusManifest::from_csv(bad_label, PathBuf::from(".")).is_err());
        let zero_visit = "path,participant_id,visit_index,label,split_role\n\
                          a.cha,p1,0,MCI,TRAIN_EVAL\n";
        assert!(CorpusManifest::from_csv(zero_visit, PathBuf::from(".")).is_err());
    }

    #[test]
    fn empty_manifest_is_allowed() {
        let m = CorpusManifest::from_csv(
            "path,participant_id,visit_index,label,split_role\n",
            PathBuf::from("."),
        )
        .unwrap();
        assert!(m.entries.is_empty());
    }

    #[test]
    fn absolute_paths_pass_through() {
        let text = "path,participant_id,visit_index,label,split_role\n\
                    /abs/a.cha,p1,1,MCI,VALIDATION\n";
        let m = CorpusManifest::from_csv(text, PathBuf::from("/data")).unwrap();
        assert_eq!(m.resolve(&m.entries[0]), PathBuf::from("/abs/a.cha"));
        assert_eq!(m.split_role, SplitRole::Validation);
    }
}

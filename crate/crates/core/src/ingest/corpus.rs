//! Corpus assembly: manifest entries to cleaned, labeled samples.

use super::{
    clean_and_tokenize, parse_chat, parse_plain, Corpus, CorpusManifest, IngestError,
    RawTranscript, TimingStats, TranscriptSample,
};

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Tier code of the participant whose speech is featurized.
    pub participant_tier: String,
    /// When set, every other tier (the interviewer) is featurized too.
    pub include_investigator: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            participant_tier: "PAR".to_string(),
            include_investigator: false,
        }
    }
}

/// A loaded corpus plus everything that did not make it in.
#[derive(Debug)]
pub struct LoadReport {
    pub corpus: Corpus,
    /// (participant_id, reason) for manifest entries that produced no sample.
    pub skipped: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

/// Builds one sample from a parsed transcript. Returns None when no kept
/// utterance cleans to any token.
fn sample_from_transcript(
    t: &RawTranscript,
    participant_id: &str,
    visit_index: u32,
    label: super::Label,
    options: &LoadOptions,
) -> Option<TranscriptSample> {
    let mut tokens = Vec::new();
    let mut mor_tags = Vec::new();
    let mut segments = Vec::new();
    let mut pauses = 0u32;
    for u in &t.utterances {
        let keep = u.speaker_code == options.participant_tier || options.include_investigator;
        if !keep {
            continue;
        }
        segments.extend_from_slice(&u.segment_times_ms);
        pauses += u.pause_marks;
        let toks = clean_and_tokenize(u);
        if toks.is_empty() {
            continue;
        }
        // A mor tier is usable only when it aligns word-for-word with the
        // cleaned tokens; otherwise the lexicon tagger takes over downstream.
        let aligned = u
            .mor_items
            .as_ref()
            .filter(|items| items.len() == toks.len())
            .cloned();
        tokens.push(toks);
        mor_tags.push(aligned);
    }
    if tokens.iter().map(Vec::len).sum::<usize>() == 0 {
        return None;
    }
    let word_count = tokens.iter().map(Vec::len).sum::<usize>() as u32;
    let timing = TimingStats::from_annotations(&segments, pauses, word_count);
    Some(TranscriptSample {
        participant_id: participant_id.to_string(),
        visit_index,
        label,
        tokens,
        mor_tags,
        timing,
    })
}

/// Loads every manifest entry into a labeled sample. CHAT parsing is chosen
/// by the `.cha` extension; anything else is read as plain text. Entries
/// whose transcript cleans to zero tokens are skipped and reported.
pub fn load_corpus(
    manifest: &CorpusManifest,
    options: &LoadOptions,
) -> Result<LoadReport, IngestError> {
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    let mut warnings = Vec::new();
    if manifest.entries.is_empty() {
        warnings.push("manifest is empty: corpus has no samples".to_string());
    }
    for entry in &manifest.entries {
        let path = manifest.resolve(entry);
        let text = std::fs::read_to_string(&path).map_err(|source| IngestError::Io {
            path: path.clone(),
            source,
        })?;
        let transcript = if path.extension().is_some_and(|e| e == "cha") {
            parse_chat(&text).map_err(|e| e.in_file(&path))?
        } else {
            parse_plain(&text)
        };
        if !transcript.participant_id.is_empty()
            && transcript.participant_id != entry.participant_id
        {
            warnings.push(format!(
                "{}: @PID `{}` differs from manifest participant `{}`; manifest wins",
                path.display(),
                transcript.participant_id,
                entry.participant_id
            ));
        }
        match sample_from_transcript(
            &transcript,
            &entry.participant_id,
            entry.visit_index,
            entry.label,
            options,
        ) {
            Some(s) => samples.push(s),
            None => skipped.push((
                entry.participant_id.clone(),
                format!("{}: no participant tokens", path.display()),
            )),
        }
    }
    Ok(LoadReport {
        corpus: Corpus {
            samples,
            split_role: manifest.split_role,
        },
        skipped,
        warnings,
    })
}

impl Corpus {
    /// Loads, then applies the visit policy; convenience for the CLI path.
    pub fn load_selected(
        manifest: &CorpusManifest,
        options: &LoadOptions,
        policy: super::VisitPolicy,
    ) -> Result<(Corpus, Vec<String>, Vec<String>), IngestError> {
        let report = load_corpus(manifest, options)?;
        let mut warnings = report.warnings;
        for (pid, reason) in &report.skipped {
            warnings.push(format!("skipped {pid}: {reason}"));
        }
        let selection = super::select_visit(report.corpus.samples, policy);
        Ok((
            Corpus {
                samples: selection.selected,
                split_role: manifest.split_role,
            },
            selection.skipped,
            warnings,
        ))
    }
}

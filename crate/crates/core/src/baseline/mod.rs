//! The seven baseline linguistic features: words per clause, POS cross
//! entropy, content density, standard pause rate, total phonation time,
//! phonation rate, and its arcsine-square-root transform.
//!
//! Tagging uses a 12-tag coarse tagset. A sample's aligned `%mor` tier is
//! authoritative; utterances without one fall back to a shipped closed-class
//! lexicon (unknown words default to NOUN). The POS bigram reference model
//! is fit per training fold on control-group samples, so no external corpus
//! is involved anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Label, TimingStats, TranscriptSample};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("timing stats violate invariants: {0}")]
    BadTiming(String),
    #[error("bigram model row {0} does not sum to 1")]
    BadModelRow(usize),
}

/// Coarse part-of-speech tagset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Part,
    Intj,
    X,
}

pub const TAGSET: [PosTag; 12] = [
    PosTag::Noun,
    PosTag::Verb,
    PosTag::Adj,
    PosTag::Adv,
    PosTag::Pron,
    PosTag::Det,
    PosTag::Adp,
    PosTag::Conj,
    PosTag::Num,
    PosTag::Part,
    PosTag::Intj,
    PosTag::X,
];

impl PosTag {
    fn index(self) -> usize {
        TAGSET
            .iter()
            .position(|&t| t == self)
            .expect("tag in tagset")
    }

    pub fn is_open_class(self) -> bool {
        matches!(
            self,
            PosTag::Noun | PosTag::Verb | PosTag::Adj | PosTag::Adv
        )
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Num => "NUM",
            PosTag::Part => "PART",
            PosTag::Intj => "INTJ",
            PosTag::X => "X",
        };
        f.write_str(name)
    }
}

fn lexicon() -> &'static BTreeMap<&'static str, PosTag> {
    static LEXICON: OnceLock<BTreeMap<&'static str, PosTag>> = OnceLock::new();
    LEXICON.get_or_init(|| {
        let mut map = BTreeMap::new();
        for line in include_str!("closed_class_lexicon.tsv").lines() {
            if line.trim().is_empty() {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .expect("lexicon lines are word<TAB>TAG");
            map.insert(word, parse_tag(tag).expect("lexicon tag is valid"));
        }
        map
    })
}

fn parse_tag(s: &str) -> Option<PosTag> {
    Some(match s {
        "NOUN" => PosTag::Noun,
        "VERB" => PosTag::Verb,
        "ADJ" => PosTag::Adj,
        "ADV" => PosTag::Adv,
        "PRON" => PosTag::Pron,
        "DET" => PosTag::Det,
        "ADP" => PosTag::Adp,
        "CONJ" => PosTag::Conj,
        "NUM" => PosTag::Num,
        "PART" => PosTag::Part,
        "INTJ" => PosTag::Intj,
        "X" => PosTag::X,
        _ => return None,
    })
}

/// Maps one `%mor` word item (e.g. `det|the`, `v|take&PAST`, `adv:tem|then`)
/// to the coarse tagset.
pub fn mor_to_tag(item: &str) -> PosTag {
    let category = item.split('|').next().unwrap_or("");
    if category == "det:num" {
        return PosTag::Num;
    }
    let base = category.split(':').next().unwrap_or("");
    match base {
        "n" | "on" => PosTag::Noun,
        "v" | "aux" | "cop" | "mod" | "part" => PosTag::Verb,
        "adj" => PosTag::Adj,
        "adv" => PosTag::Adv,
        "pro" | "rel" => PosTag::Pron,
        "det" | "qn" | "art" => PosTag::Det,
        "prep" => PosTag::Adp,
        "conj" | "coord" | "comp" => PosTag::Conj,
        "num" => PosTag::Num,
        "inf" | "neg" => PosTag::Part,
        "co" | "fil" | "intj" => PosTag::Intj,
        _ => PosTag::X,
    }
}

/// Tags one word via the closed-class lexicon; unknown words are NOUN.
pub fn lexicon_tag(word: &str) -> PosTag {
    lexicon().get(word).copied().unwrap_or(PosTag::Noun)
}

/// Tags every utterance of a sample: aligned mor items when available,
/// lexicon fallback otherwise. Output is parallel to `sample.tokens`.
pub fn pos_tag(sample: &TranscriptSample) -> Vec<Vec<PosTag>> {
    sample
        .tokens
        .iter()
        .enumerate()
        .map(
            |(i, toks)| match sample.mor_tags.get(i).and_then(Option::as_ref) {
                Some(items) => items.iter().map(|m| mor_to_tag(m)).collect(),
                None => toks.iter().map(|w| lexicon_tag(w)).collect(),
            },
        )
        .collect()
}

const V: usize = TAGSET.len();

/// First-order tag transition model with add-one smoothing; row V is the
/// utterance-start symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosBigramModel {
    pub source: String,
    rows: Vec<Vec<f64>>,
}

impl PosBigramModel {
    pub fn uniform() -> Self {
        Self {
            source: "uniform".to_string(),
            rows: vec![vec![1.0 / V as f64; V]; V + 1],
        }
    }

    /// Fits transition probabilities on tag sequences (one per utterance),
    /// each implicitly starting at the start symbol. Add-one smoothing keeps
    /// every transition possible.
    pub fn fit(source: impl Into<String>, sequences: &[Vec<PosTag>]) -> Self {
        let mut counts = vec![vec![0u64; V]; V + 1];
        for seq in sequences {
            let mut prev = V;
            for &tag in seq {
                counts[prev][tag.index()] += 1;
                prev = tag.index();
            }
        }
        let rows = counts
            .into_iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                row.into_iter()
                    .map(|c| (c + 1) as f64 / (total + V as u64) as f64)
                    .collect()
            })
            .collect();
        Self {
            source: source.into(),
            rows,
        }
    }

    /// Builds a model from explicit rows (V+1 rows of V probabilities each);
    /// every row must sum to 1 within 1e-9.
    pub fn from_rows(
        source: impl Into<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self, BaselineError> {
        for (i, row) in rows.iter().enumerate() {
            if row.len() != V || (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(BaselineError::BadModelRow(i));
            }
        }
        if rows.len() != V + 1 {
            return Err(BaselineError::BadModelRow(rows.len()));
        }
        Ok(Self {
            source: source.into(),
            rows,
        })
    }

    /// P(next | prev), where None is the utterance-start symbol.
    pub fn prob(&self, prev: Option<PosTag>, next: PosTag) -> f64 {
        let row = prev.map_or(V, PosTag::index);
        self.rows[row][next.index()]
    }
}

/// Cross entropy in bits per tag: −(1/T) Σ log2 P(t_i | t_{i−1}), restarting
/// at the start symbol for each utterance. None for empty input.
pub fn pos_cross_entropy(tags: &[Vec<PosTag>], model: &PosBigramModel) -> Option<f64> {
    let total: usize = tags.iter().map(Vec::len).sum();
    if total == 0 {
        return None;
    }
    let mut bits = 0.0;
    for seq in tags {
        let mut prev = None;
        for &tag in seq {
            bits -= model.prob(prev, tag).log2();
            prev = Some(tag);
        }
    }
    Some(bits / total as f64)
}

/// Fraction of open-class tags (NOUN, VERB, ADJ, ADV). None for empty input.
pub fn content_density(tags: &[PosTag]) -> Option<f64> {
    if tags.is_empty() {
        return None;
    }
    let open = tags.iter().filter(|t| t.is_open_class()).count();
    Some(open as f64 / tags.len() as f64)
}

/// Total words over clause count. A clause is approximated as a verb group:
/// a VERB tag not immediately preceded by VERB or PART, clamped to at least
/// one per utterance. None for empty input.
pub fn words_per_clause(tags: &[Vec<PosTag>]) -> Option<f64> {
    let total_words: usize = tags.iter().map(Vec::len).sum();
    if total_words == 0 {
        return None;
    }
    let mut clauses = 0usize;
    for seq in tags {
        if seq.is_empty() {
            continue;
        }
        let mut verb_groups = 0usize;
        for (i, &tag) in seq.iter().enumerate() {
            let after_verbish = i > 0 && matches!(seq[i - 1], PosTag::Verb | PosTag::Part);
            if tag == PosTag::Verb && !after_verbish {
                verb_groups += 1;
            }
        }
        clauses += verb_groups.max(1);
    }
    Some(total_words as f64 / clauses as f64)
}

/// The four timing-derived features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhonationFeatures {
    pub standard_pause_rate: Option<f64>,
    pub total_phonation_time: f64,
    pub phonation_rate: Option<f64>,
    pub transformed_phonation_rate: Option<f64>,
}

pub fn phonation_features(timing: &TimingStats) -> Result<PhonationFeatures, BaselineError> {
    if !(timing.speech_time_s.is_finite() && timing.total_time_s.is_finite()) {
        return Err(BaselineError::BadTiming("non-finite time".to_string()));
    }
    if timing.speech_time_s < 0.0 || timing.speech_time_s > timing.total_time_s {
        return Err(BaselineError::BadTiming(format!(
            "speech {} outside [0, total {}]",
            timing.speech_time_s, timing.total_time_s
        )));
    }
    let standard_pause_rate = if timing.pause_count == 0 {
        None
    } else {
        Some(timing.word_count as f64 / timing.pause_count as f64)
    };
    let phonation_rate = if timing.total_time_s == 0.0 {
        None
    } else {
        Some(timing.speech_time_s / timing.total_time_s)
    };
    Ok(PhonationFeatures {
        standard_pause_rate,
        total_phonation_time: timing.speech_time_s,
        phonation_rate,
        transformed_phonation_rate: phonation_rate.map(|r| r.sqrt().asin()),
    })
}

/// The seven features of one sample; None marks a MISSING value.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BaselineVector {
    pub words_per_clause: Option<f64>,
    pub pos_cross_entropy: Option<f64>,
    pub content_density: Option<f64>,
    pub standard_pause_rate: Option<f64>,
    pub total_phonation_time: Option<f64>,
    pub phonation_rate: Option<f64>,
    pub transformed_phonation_rate: Option<f64>,
}

pub const BASELINE_FEATURE_NAMES: [&str; 7] = [
    "words_per_clause",
    "pos_cross_entropy",
    "content_density",
    "standard_pause_rate",
    "total_phonation_time",
    "phonation_rate",
    "transformed_phonation_rate",
];

impl BaselineVector {
    pub fn as_array(&self) -> [Option<f64>; 7] {
        [
            self.words_per_clause,
            self.pos_cross_entropy,
            self.content_density,
            self.standard_pause_rate,
            self.total_phonation_time,
            self.phonation_rate,
            self.transformed_phonation_rate,
        ]
    }
}

/// Computes all seven features for one sample. Timing features are MISSING
/// without timing annotations; text features are MISSING for empty samples.
pub fn baseline_vector(sample: &TranscriptSample, model: &PosBigramModel) -> BaselineVector {
    let tags = pos_tag(sample);
    let flat: Vec<PosTag> = tags.iter().flatten().copied().collect();
    let phonation = sample
        .timing
        .as_ref()
        .and_then(|t| phonation_features(t).ok());
    BaselineVector {
        words_per_clause: words_per_clause(&tags),
        pos_cross_entropy: pos_cross_entropy(&tags, model),
        content_density: content_density(&flat),
        standard_pause_rate: phonation.and_then(|p| p.standard_pause_rate),
        total_phonation_time: phonation.map(|p| p.total_phonation_time),
        phonation_rate: phonation.and_then(|p| p.phonation_rate),
        transformed_phonation_rate: phonation.and_then(|p| p.transformed_phonation_rate),
    }
}

/// Per-feature means over present training values; a feature missing from
/// every training vector imputes to 0.
pub fn impute_means(train: &[BaselineVector]) -> [f64; 7] {
    let mut means = [0.0f64; 7];
    for (j, mean) in means.iter_mut().enumerate() {
        let values: Vec<f64> = train.iter().filter_map(|v| v.as_array()[j]).collect();
        if !values.is_empty() {
            *mean = values.iter().sum::<f64>() / values.len() as f64;
        }
    }
    means
}

/// Densifies one vector, filling MISSING entries from training-fold means.
pub fn impute(v: &BaselineVector, means: &[f64; 7]) -> [f64; 7] {
    let mut out = [0.0f64; 7];
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = v.as_array()[j].unwrap_or(means[j]);
    }
    out
}

/// Baseline CSV: participant, label, then the seven features with MISSING
/// as the empty cell.
pub fn write_baseline_csv(rows: &[(String, Label, BaselineVector)]) -> String {
    let mut out = String::from("participant_id,label");
    for name in BASELINE_FEATURE_NAMES {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (pid, label, v) in rows {
        out.push_str(&format!("{pid},{label}"));
        for value in v.as_array() {
            out.push(',');
            if let Some(x) = value {
                out.push_str(&format!("{x}"));
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(names: &[&str]) -> Vec<PosTag> {
        names.iter().map(|n| parse_tag(n).unwrap()).collect()
    }

    fn sample_with(tokens: &[&[&str]], mor: Vec<Option<Vec<String>>>) -> TranscriptSample {
        TranscriptSample {
            participant_id: "p".to_string(),
            visit_index: 1,
            label: Label::Mci,
            tokens: tokens
                .iter()
                .map(|u| u.iter().map(|w| w.to_string()).collect())
                .collect(),
            mor_tags: mor,
            timing: None,
        }
    }

    #[test]
    fn lexicon_tags_closed_class_and_defaults_noun() {
        let s = sample_with(&[&["the", "boy"]], vec![None]);
        assert_eq!(pos_tag(&s), vec![tags(&["DET", "NOUN"])]);
        assert_eq!(lexicon_tag("zyzzyva"), PosTag::Noun);
        assert_eq!(lexicon_tag("and"), PosTag::Conj);
    }

    #[test]
    fn mor_tier_overrides_the_lexicon() {
        let s = sample_with(
            &[&["the", "fall"]],
            vec![Some(vec!["det|the".to_string(), "v|fall".to_string()])],
        );
        assert_eq!(pos_tag(&s), vec![tags(&["DET", "VERB"])]);
    }

    #[test]
    fn empty_sample_tags_empty() {
        let s = sample_with(&[], vec![]);
        assert!(pos_tag(&s).is_empty());
    }

    #[test]
    fn mor_mapping_covers_common_categories() {
        assert_eq!(mor_to_tag("n|cookie"), PosTag::Noun);
        assert_eq!(mor_to_tag("n:prop|Emma"), PosTag::Noun);
        assert_eq!(mor_to_tag("v|take&PAST"), PosTag::Verb);
        assert_eq!(mor_to_tag("aux|be"), PosTag::Verb);
        assert_eq!(mor_to_tag("adv:tem|then"), PosTag::Adv);
        assert_eq!(mor_to_tag("pro:dem|that"), PosTag::Pron);
        assert_eq!(mor_to_tag("det:num|two"), PosTag::Num);
        assert_eq!(mor_to_tag("prep|under"), PosTag::Adp);
        assert_eq!(mor_to_tag("inf|to"), PosTag::Part);
        assert_eq!(mor_to_tag("co|oh"), PosTag::Intj);
        assert_eq!(mor_to_tag("zzz|weird"), PosTag::X);
    }

    #[test]
    fn content_density_counts_open_class() {
        assert_eq!(
            content_density(&tags(&["DET", "NOUN", "VERB", "NOUN"])),
            Some(0.75)
        );
        assert_eq!(
            content_density(&tags(&["NOUN", "VERB", "ADJ", "ADV"])),
            Some(1.0)
        );
        assert_eq!(content_density(&tags(&["DET", "ADP", "CONJ"])), Some(0.0));
        assert_eq!(content_density(&[]), None);
    }

    #[test]
    fn content_density_invariant_under_duplication() {
        let t = tags(&["DET", "NOUN", "VERB"]);
        let doubled: Vec<PosTag> = t.iter().chain(&t).copied().collect();
        assert_eq!(content_density(&t), content_density(&doubled));
    }

    #[test]
    fn words_per_clause_counts_verb_groups() {
        // One finite verb group, four words.
        assert_eq!(
            words_per_clause(&[tags(&["DET", "NOUN", "VERB", "NOUN"])]),
            Some(4.0)
        );
        // "is running" is one group: VERB after VERB does not start a clause.
        assert_eq!(
            words_per_clause(&[tags(&["PRON", "VERB", "VERB", "ADV"])]),
            Some(4.0)
        );
        // "to go" after PART likewise.
        assert_eq!(
            words_per_clause(&[tags(&[
                "PRON", "VERB", "PART", "VERB", "NOUN", "CONJ", "PRON", "VERB"
            ])]),
            Some(4.0)
        );
        // Zero verbs clamp to one clause per utterance.
        assert_eq!(words_per_clause(&[tags(&["DET", "NOUN"])]), Some(2.0));
        // Two utterances, one clause each, ten words total.
        assert_eq!(
            words_per_clause(&[
                tags(&["PRON", "VERB", "DET", "NOUN", "NOUN"]),
                tags(&["PRON", "VERB", "DET", "ADJ", "NOUN"]),
            ]),
            Some(5.0)
        );
        assert_eq!(words_per_clause(&[]), None);
    }

    #[test]
    fn uniform_model_cross_entropy_is_log2_tagset() {
        let model = PosBigramModel::uniform();
        for seq in [tags(&["NOUN"]), tags(&["DET", "NOUN", "VERB", "X"])] {
            let ce = pos_cross_entropy(&[seq], &model).unwrap();
            assert!((ce - (12f64).log2()).abs() < 1e-12);
        }
        assert_eq!(pos_cross_entropy(&[], &model), None);
    }

    #[test]
    fn deterministic_model_has_zero_cross_entropy() {
        // All mass on the observed path: START→DET→NOUN→NOUN.
        let mut rows = vec![vec![0.0; 12]; 13];
        rows[12][PosTag::Det.index()] = 1.0;
        rows[PosTag::Det.index()][PosTag::Noun.index()] = 1.0;
        rows[PosTag::Noun.index()][PosTag::Noun.index()] = 1.0;
        for row in rows.iter_mut() {
            if row.iter().sum::<f64>() == 0.0 {
                row[0] = 1.0;
            }
        }
        let model = PosBigramModel::from_rows("hand", rows).unwrap();
        let ce = pos_cross_entropy(&[tags(&["DET", "NOUN", "NOUN"])], &model).unwrap();
        assert_eq!(ce, 0.0);
    }

    #[test]
    fn fitted_model_matches_hand_arithmetic() {
        // Training: one utterance DET NOUN. Smoothed rows give
        // P(DET|START) = 2/13, P(NOUN|DET) = 2/13, P(NOUN|NOUN) = 1/12.
        let model = PosBigramModel::fit("hand", &[tags(&["DET", "NOUN"])]);
        let seq = tags(&["DET", "NOUN", "NOUN"]);
        let ce = pos_cross_entropy(&[seq], &model).unwrap();
        let want =
            -((2.0f64 / 13.0).log2() + (2.0f64 / 13.0).log2() + (1.0f64 / 12.0).log2()) / 3.0;
        assert!((ce - want).abs() < 1e-12);
    }

    #[test]
    fn fitted_rows_sum_to_one() {
        let model = PosBigramModel::fit(
            "check",
            &[tags(&["DET", "NOUN", "VERB"]), tags(&["PRON", "VERB"])],
        );
        for prev in TAGSET.iter().map(|&t| Some(t)).chain([None]) {
            let total: f64 = TAGSET.iter().map(|&t| model.prob(prev, t)).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn phonation_hand_values() {
        let t = TimingStats {
            total_time_s: 40.0,
            speech_time_s: 30.0,
            pause_count: 2,
            word_count: 10,
        };
        let p = phonation_features(&t).unwrap();
        assert_eq!(p.standard_pause_rate, Some(5.0));
        assert_eq!(p.total_phonation_time, 30.0);
        assert_eq!(p.phonation_rate, Some(0.75));
        let tpr = p.transformed_phonation_rate.unwrap();
        assert!((tpr - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn phonation_edge_rules() {
        let no_pause = TimingStats {
            total_time_s: 10.0,
            speech_time_s: 10.0,
            pause_count: 0,
            word_count: 4,
        };
        let p = phonation_features(&no_pause).unwrap();
        assert_eq!(p.standard_pause_rate, None);
        assert_eq!(p.phonation_rate, Some(1.0));
        assert_eq!(
            p.transformed_phonation_rate,
            Some(std::f64::consts::FRAC_PI_2)
        );
        let zero_total = TimingStats {
            total_time_s: 0.0,
            speech_time_s: 0.0,
            pause_count: 1,
            word_count: 4,
        };
        let p = phonation_features(&zero_total).unwrap();
        assert_eq!(p.phonation_rate, None);
        assert_eq!(p.transformed_phonation_rate, None);
    }

    #[test]
    fn invalid_timing_is_an_error() {
        let bad = TimingStats {
            total_time_s: 1.0,
            speech_time_s: 2.0,
            pause_count: 0,
            word_count: 1,
        };
        assert!(phonation_features(&bad).is_err());
    }

    #[test]
    fn transform_is_monotone_in_rate() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let r = i as f64 / 100.0;
            let t = r.sqrt().asin();
            assert!(t > prev);
            prev = t;
        }
    }

    #[test]
    fn baseline_vector_missing_rules() {
        let model = PosBigramModel::uniform();
        let no_timing = sample_with(&[&["the", "boy", "fell"]], vec![None]);
        let v = baseline_vector(&no_timing, &model);
        assert!(v.words_per_clause.is_some());
        assert!(v.pos_cross_entropy.is_some());
        assert!(v.content_density.is_some());
        assert!(v.standard_pause_rate.is_none());
        assert!(v.total_phonation_time.is_none());
        assert!(v.phonation_rate.is_none());
        assert!(v.transformed_phonation_rate.is_none());

        let empty = sample_with(&[], vec![]);
        let v = baseline_vector(&empty, &model);
        assert_eq!(v.as_array(), [None; 7]);

        let mut full = sample_with(&[&["the", "boy", "fell"]], vec![None]);
        full.timing = TimingStats::from_annotations(&[(0, 1000)], 1, 3);
        let v = baseline_vector(&full, &model);
        assert!(v.as_array().iter().all(Option::is_some));
    }

    #[test]
    fn imputation_uses_training_means_only() {
        let train = [
            BaselineVector {
                words_per_clause: Some(4.0),
                ..BaselineVector::default()
            },
            BaselineVector {
                words_per_clause: Some(6.0),
                ..BaselineVector::default()
            },
        ];
        let means = impute_means(&train);
        assert_eq!(means[0], 5.0);
        let test_vec = BaselineVector::default();
        assert_eq!(impute(&test_vec, &means)[0], 5.0);
        // A different test vector cannot move the means.
        let other = BaselineVector {
            words_per_clause: Some(100.0),
            ..BaselineVector::default()
        };
        assert_eq!(impute(&other, &means)[0], 100.0);
        assert_eq!(impute_means(&train)[0], 5.0);
    }

    #[test]
    fn csv_empty_cell_marks_missing() {
        let v = BaselineVector {
            words_per_clause: Some(4.0),
            content_density: Some(0.75),
            ..BaselineVector::default()
        };
        let csv = write_baseline_csv(&[("p1".to_string(), Label::Mci, v)]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "participant_id,label,words_per_clause,pos_cross_entropy,content_density,\
             standard_pause_rate,total_phonation_time,phonation_rate,transformed_phonation_rate"
        );
        assert_eq!(lines.next().unwrap(), "p1,MCI,4,,0.75,,,,");
    }
}

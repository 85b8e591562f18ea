//! Feature matrix construction: vocabulary over a corpus, feature ranking,
//! top-K selection, and sparse vectorization.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{Corpus, Label};
use crate::skipgram::{extract_compound, FeatureSetSpec};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("corpus has no samples")]
    EmptyCorpus,
    #[error("ranking method {0:?} needs labels")]
    LabelsRequired(RankingMethod),
    #[error("{0}")]
    Invalid(String),
    #[error("dataset parse: {0}")]
    Parse(String),
}

/// How candidate features are scored for top-K selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankingMethod {
    DocFreq,
    TotalFreq,
    InfoGain,
    Chi2,
}

impl RankingMethod {
    pub fn needs_labels(self) -> bool {
        matches!(self, RankingMethod::InfoGain | RankingMethod::Chi2)
    }
}

impl FromStr for RankingMethod {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, FeatureError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DOC_FREQ" => Ok(RankingMethod::DocFreq),
            "TOTAL_FREQ" => Ok(RankingMethod::TotalFreq),
            "INFO_GAIN" => Ok(RankingMethod::InfoGain),
            "CHI2" => Ok(RankingMethod::Chi2),
            _ => Err(FeatureError::Invalid(format!(
                "unknown ranking method `{s}`"
            ))),
        }
    }
}

/// Where feature selection happens relative to cross-validation folds.
/// GLOBAL selects once on the full corpus (the published protocol's shape);
/// PER_FOLD selects inside each training partition and is leakage-safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeakageMode {
    Global,
    PerFold,
}

/// Feature value assigned per sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    Binary,
    Count,
    L2NormalizedCount,
}

impl FromStr for Weighting {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, FeatureError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BINARY" => Ok(Weighting::Binary),
            "COUNT" => Ok(Weighting::Count),
            "L2_NORMALIZED_COUNT" => Ok(Weighting::L2NormalizedCount),
            _ => Err(FeatureError::Invalid(format!("unknown weighting `{s}`"))),
        }
    }
}

/// Per-sample gram counts, extracted once and reused across folds and K
/// values. Parallel lists: counts[i] belongs to labels[i] and
/// participant_ids[i].
#[derive(Debug, Clone)]
pub struct CountedCorpus {
    pub counts: Vec<BTreeMap<String, u64>>,
    pub labels: Vec<Label>,
    pub participant_ids: Vec<String>,
}

impl CountedCorpus {
    pub fn from_corpus(corpus: &Corpus, fss: &FeatureSetSpec) -> Self {
        let mut counts = Vec::with_capacity(corpus.samples.len());
        for sample in &corpus.samples {
            let mut c: BTreeMap<String, u64> = BTreeMap::new();
            for key in extract_compound(&sample.tokens, fss) {
                *c.entry(key).or_insert(0) += 1;
            }
            counts.push(c);
        }
        Self {
            counts,
            labels: corpus.samples.iter().map(|s| s.label).collect(),
            participant_ids: corpus
                .samples
                .iter()
                .map(|s| s.participant_id.clone())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// The rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            counts: indices.iter().map(|&i| self.counts[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            participant_ids: indices
                .iter()
                .map(|&i| self.participant_ids[i].clone())
                .collect(),
        }
    }
}

/// One vocabulary entry's bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub doc_freq: u32,
    pub total_freq: u64,
    pub score: f64,
}

/// Dense key→index map with per-feature frequencies and ranking scores.
/// Fresh vocabularies are indexed lexicographically; [`select_top`] re-indexes
/// in rank order.
#[derive(Debug, Clone, PartialEq)]
pub struct Vocabulary {
    keys: Vec<String>,
    by_key: BTreeMap<String, usize>,
    stats: Vec<FeatureStats>,
    ranking_method: Option<RankingMethod>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.by_key.get(key).copied()
    }

    pub fn key(&self, index: usize) -> &str {
        &self.keys[index]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn stats(&self, index: usize) -> &FeatureStats {
        &self.stats[index]
    }

    pub fn ranking_method(&self) -> Option<RankingMethod> {
        self.ranking_method
    }
}

/// Builds the full vocabulary of a counted corpus.
pub fn build_vocabulary_from_counts(counted: &CountedCorpus) -> Result<Vocabulary, FeatureError> {
    if counted.is_empty() {
        return Err(FeatureError::EmptyCorpus);
    }
    let mut doc_freq: BTreeMap<&str, u32> = BTreeMap::new();
    let mut total_freq: BTreeMap<&str, u64> = BTreeMap::new();
    for sample in &counted.counts {
        for (key, &count) in sample {
            *doc_freq.entry(key).or_insert(0) += 1;
            *total_freq.entry(key).or_insert(0) += count;
        }
    }
    let keys: Vec<String> = doc_freq.keys().map(|k| k.to_string()).collect();
    let stats = keys
        .iter()
        .map(|k| FeatureStats {
            doc_freq: doc_freq[k.as_str()],
            total_freq: total_freq[k.as_str()],
            score: 0.0,
        })
        .collect();
    let by_key = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    Ok(Vocabulary {
        keys,
        by_key,
        stats,
        ranking_method: None,
    })
}

pub fn build_vocabulary(corpus: &Corpus, fss: &FeatureSetSpec) -> Result<Vocabulary, FeatureError> {
    build_vocabulary_from_counts(&CountedCorpus::from_corpus(corpus, fss))
}

fn entropy(parts: &[f64]) -> f64 {
    let total: f64 = parts.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    parts
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| {
            let q = p / total;
            -q * q.log2()
        })
        .sum()
}

/// Binary-presence mutual information between a feature and the label, in
/// bits: H(Y) − H(Y | present?).
fn info_gain(present_pos: f64, present_neg: f64, absent_pos: f64, absent_neg: f64) -> f64 {
    let n = present_pos + present_neg + absent_pos + absent_neg;
    let h_y = entropy(&[present_pos + absent_pos, present_neg + absent_neg]);
    let n_present = present_pos + present_neg;
    let n_absent = absent_pos + absent_neg;
    let cond = (n_present / n) * entropy(&[present_pos, present_neg])
        + (n_absent / n) * entropy(&[absent_pos, absent_neg]);
    (h_y - cond).max(0.0)
}

/// Pearson chi-squared of the 2×2 presence/label contingency table. Zero
/// when any marginal is zero (the table carries no association).
fn chi2(present_pos: f64, present_neg: f64, absent_pos: f64, absent_neg: f64) -> f64 {
    let n = present_pos + present_neg + absent_pos + absent_neg;
    let rows = [present_pos + present_neg, absent_pos + absent_neg];
    let cols = [present_pos + absent_pos, present_neg + absent_neg];
    if rows.iter().chain(&cols).any(|&m| m == 0.0) {
        return 0.0;
    }
    let observed = [[present_pos, present_neg], [absent_pos, absent_neg]];
    let mut stat = 0.0;
    for (r, row) in observed.iter().enumerate() {
        for (c, &o) in row.iter().enumerate() {
            let e = rows[r] * cols[c] / n;
            stat += (o - e) * (o - e) / e;
        }
    }
    stat
}

/// Scores every vocabulary feature and returns keys in rank order:
/// score descending, then doc_freq descending, then key ascending. The
/// vocabulary records the scores and the method.
pub fn rank_features(
    vocab: &mut Vocabulary,
    counts: &[BTreeMap<String, u64>],
    labels: Option<&[Label]>,
    method: RankingMethod,
) -> Result<Vec<String>, FeatureError> {
    if method.needs_labels() {
        let labels = labels.ok_or(FeatureError::LabelsRequired(method))?;
        if labels.len() != counts.len() {
            return Err(FeatureError::Invalid(format!(
                "{} labels for {} samples",
                labels.len(),
                counts.len()
            )));
        }
        let mut present_pos = vec![0.0f64; vocab.len()];
        let mut present_neg = vec![0.0f64; vocab.len()];
        let mut pos_total = 0.0f64;
        for (sample, &label) in counts.iter().zip(labels) {
            if label.is_positive() {
                pos_total += 1.0;
            }
            for key in sample.keys() {
                if let Some(i) = vocab.index_of(key) {
                    if label.is_positive() {
                        present_pos[i] += 1.0;
                    } else {
                        present_neg[i] += 1.0;
                    }
                }
            }
        }
        let n = counts.len() as f64;
        let neg_total = n - pos_total;
        for i in 0..vocab.len() {
            let (pp, pn) = (present_pos[i], present_neg[i]);
            let (ap, an) = (pos_total - pp, neg_total - pn);
            vocab.stats[i].score = match method {
                RankingMethod::InfoGain => info_gain(pp, pn, ap, an),
                RankingMethod::Chi2 => chi2(pp, pn, ap, an),
                _ => unreachable!("supervised branch"),
            };
        }
    } else {
        for s in &mut vocab.stats {
            s.score = match method {
                RankingMethod::DocFreq => s.doc_freq as f64,
                RankingMethod::TotalFreq => s.total_freq as f64,
                _ => unreachable!("unsupervised branch"),
            };
        }
    }
    vocab.ranking_method = Some(method);
    let mut order: Vec<usize> = (0..vocab.len()).collect();
    order.sort_by(|&a, &b| {
        vocab.stats[b]
            .score
            .total_cmp(&vocab.stats[a].score)
            .then(vocab.stats[b].doc_freq.cmp(&vocab.stats[a].doc_freq))
            .then(vocab.keys[a].cmp(&vocab.keys[b]))
    });
    Ok(order.into_iter().map(|i| vocab.keys[i].clone()).collect())
}

/// Keeps the first min(K, V) ranked features, re-indexed densely in rank
/// order. Frequencies and scores carry over for reporting.
pub fn select_top(vocab: &Vocabulary, ranked: &[String], k: usize) -> Vocabulary {
    let kept: Vec<String> = ranked.iter().take(k).cloned().collect();
    let stats = kept
        .iter()
        .map(|key| vocab.stats[vocab.index_of(key).expect("ranked key is in vocab")].clone())
        .collect();
    let by_key = kept
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect();
    Vocabulary {
        keys: kept,
        by_key,
        stats,
        ranking_method: vocab.ranking_method,
    }
}

/// Sparse feature vector: strictly ascending indices, finite values, no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self, FeatureError> {
        for (pos, &(i, v)) in entries.iter().enumerate() {
            if i >= dim {
                return Err(FeatureError::Invalid(format!("index {i} >= dim {dim}")));
            }
            if pos > 0 && entries[pos - 1].0 >= i {
                return Err(FeatureError::Invalid(
                    "indices not strictly ascending".into(),
                ));
            }
            if !v.is_finite() || v == 0.0 {
                return Err(FeatureError::Invalid(format!("bad value {v} at index {i}")));
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &(i, x) in &self.entries {
            v[i] = x;
        }
        v
    }
}

/// Vectorizes one sample's gram counts against a vocabulary.
/// Out-of-vocabulary grams are ignored.
pub fn vectorize(
    sample_counts: &BTreeMap<String, u64>,
    vocab: &Vocabulary,
    weighting: Weighting,
) -> SparseVector {
    let mut entries: BTreeMap<usize, f64> = BTreeMap::new();
    for (key, &count) in sample_counts {
        if let Some(i) = vocab.index_of(key) {
            *entries.entry(i).or_insert(0.0) += count as f64;
        }
    }
    let mut entries: Vec<(usize, f64)> = match weighting {
        Weighting::Binary => entries.into_keys().map(|i| (i, 1.0)).collect(),
        Weighting::Count => entries.into_iter().collect(),
        Weighting::L2NormalizedCount => {
            let norm = entries.values().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                Vec::new()
            } else {
                entries.into_iter().map(|(i, v)| (i, v / norm)).collect()
            }
        }
    };
    entries.retain(|&(_, v)| v != 0.0);
    SparseVector {
        dim: vocab.len(),
        entries,
    }
}

/// Vectorized corpus with parallel labels and participant ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub vectors: Vec<SparseVector>,
    pub labels: Vec<Label>,
    pub participant_ids: Vec<String>,
    pub dim: usize,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Vectorizes every sample of a counted corpus against one vocabulary.
pub fn make_dataset(counted: &CountedCorpus, vocab: &Vocabulary, weighting: Weighting) -> Dataset {
    Dataset {
        vectors: counted
            .counts
            .iter()
            .map(|c| vectorize(c, vocab, weighting))
            .collect(),
        labels: counted.labels.clone(),
        participant_ids: counted.participant_ids.clone(),
        dim: vocab.len(),
        feature_names: vocab.keys.to_vec(),
    }
}

/// Serializes a dataset: header `dim=<V>`, then one line per sample,
/// `<label> <participant_id> <index>:<value> …` with ascending indices.
pub fn write_dataset(dataset: &Dataset) -> String {
    let mut out = format!("dim={}\n", dataset.dim);
    for i in 0..dataset.len() {
        out.push_str(&format!(
            "{} {}",
            dataset.labels[i], dataset.participant_ids[i]
        ));
        for &(j, v) in dataset.vectors[i].entries() {
            out.push_str(&format!(" {j}:{v}"));
        }
        out.push('\n');
    }
    out
}

/// Feature-name sidecar: `<index>\t<key>` lines.
pub fn write_sidecar(dataset: &Dataset) -> String {
    let mut out = String::new();
    for (i, key) in dataset.feature_names.iter().enumerate() {
        out.push_str(&format!("{i}\t{key}\n"));
    }
    out
}

/// Parses [`write_dataset`] output; the sidecar is optional.
pub fn read_dataset(text: &str, sidecar: Option<&str>) -> Result<Dataset, FeatureError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| FeatureError::Parse("empty file".into()))?;
    let dim: usize = header
        .strip_prefix("dim=")
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| FeatureError::Parse(format!("bad header `{header}`")))?;
    let mut vectors = Vec::new();
    let mut labels = Vec::new();
    let mut participant_ids = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let label: Label = fields
            .next()
            .ok_or_else(|| FeatureError::Parse(format!("line {}: no label", lineno + 2)))?
            .parse()
            .map_err(|e| FeatureError::Parse(format!("line {}: {e}", lineno + 2)))?;
        let pid = fields
            .next()
            .ok_or_else(|| FeatureError::Parse(format!("line {}: no participant", lineno + 2)))?;
        let mut entries = Vec::new();
        for pair in fields {
            let (i, v) = pair.split_once(':').ok_or_else(|| {
                FeatureError::Parse(format!("line {}: bad pair `{pair}`", lineno + 2))
            })?;
            let i: usize = i.parse().map_err(|_| {
                FeatureError::Parse(format!("line {}: bad index `{i}`", lineno + 2))
            })?;
            let v: f64 = v.parse().map_err(|_| {
                FeatureError::Parse(format!("line {}: bad value `{v}`", lineno + 2))
            })?;
            entries.push((i, v));
        }
        vectors.push(
            SparseVector::new(dim, entries)
                .map_err(|e| FeatureError::Parse(format!("line {}: {e}", lineno + 2)))?,
        );
        labels.push(label);
        participant_ids.push(pid.to_string());
    }
    let feature_names = match sidecar {
        Some(text) => {
            let mut names = vec![String::new(); dim];
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let (i, key) = line
                    .split_once('\t')
                    .ok_or_else(|| FeatureError::Parse(format!("sidecar line `{line}`")))?;
                let i: usize = i
                    .parse()
                    .map_err(|_| FeatureError::Parse(format!("sidecar index `{i}`")))?;
                if i >= dim {
                    return Err(FeatureError::Parse(format!(
                        "sidecar index {i} >= dim {dim}"
                    )));
                }
                names[i] = key.to_string();
            }
            names
        }
        None => Vec::new(),
    };
    Ok(Dataset {
        vectors,
        labels,
        participant_ids,
        dim,
        feature_names,
    })
}

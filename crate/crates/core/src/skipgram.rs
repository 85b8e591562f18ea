//! Exact-skip skip-gram enumeration.
//!
//! A k-skip-n-gram here is an ordered n-word subsequence drawn from a window
//! of exactly `n + k` consecutive tokens, anchored at the window's first and
//! last token and skipping exactly `k` interior tokens. For `k = 0` this
//! reduces to the ordinary sliding n-gram. Skip-grams never cross utterance
//! boundaries: callers extract per utterance and take the multiset union.
//!
//! Feature keys are namespaced per family as `"<n>.<k>|<word( word)*>"` so
//! that the same surface string coming from different (n, k) families stays
//! a distinct feature in a compound feature space.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("gram order n must be >= 1")]
    ZeroOrder,
    #[error("n = 1 requires k = 0: skips are interior and unigrams have no interior")]
    UnigramSkip,
    #[error("malformed skip-gram spec `{0}`, expected `<n>.<k>`")]
    Malformed(String),
    #[error("feature set needs at least one skip-gram spec")]
    EmptyFeatureSet,
    #[error("duplicate skip-gram spec {0} in feature set")]
    DuplicateSpec(SkipGramSpec),
}

/// One skip-gram family: gram order `n` and the exact number of skipped
/// interior words `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkipGramSpec {
    n: usize,
    k: usize,
}

impl SkipGramSpec {
    pub fn new(n: usize, k: usize) -> Result<Self, SpecError> {
        if n == 0 {
            return Err(SpecError::ZeroOrder);
        }
        if n == 1 && k > 0 {
            return Err(SpecError::UnigramSkip);
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of consecutive tokens one gram is drawn from.
    pub fn window_len(&self) -> usize {
        self.n + self.k
    }

    /// Human-readable family name, e.g. `1-skip-2-grams` for (n=2, k=1).
    pub fn family_name(&self) -> String {
        format!("{}-skip-{}-grams", self.k, self.n)
    }
}

impl fmt::Display for SkipGramSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.n, self.k)
    }
}

impl FromStr for SkipGramSpec {
    type Err = SpecError;

    /// Parses the `<n>.<k>` wire form, e.g. `2.1`.
    fn from_str(s: &str) -> Result<Self, SpecError> {
        let (n, k) = s
            .split_once('.')
            .ok_or_else(|| SpecError::Malformed(s.to_string()))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| SpecError::Malformed(s.to_string()))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| SpecError::Malformed(s.to_string()))?;
        SkipGramSpec::new(n, k)
    }
}

/// One extracted gram. The surface form is the single-space join of the
/// gram's words; since tokens never contain spaces, it round-trips.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkipGramToken {
    surface: String,
}

impl SkipGramToken {
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        Self {
            surface: words.iter().map(|w| w.as_ref()).join(" "),
        }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn words(&self) -> Vec<&str> {
        self.surface.split(' ').collect()
    }
}

impl fmt::Display for SkipGramToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

/// Several skip-gram families used together as one feature space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSetSpec {
    name: String,
    specs: Vec<SkipGramSpec>,
}

impl FeatureSetSpec {
    pub fn new(name: impl Into<String>, specs: Vec<SkipGramSpec>) -> Result<Self, SpecError> {
        if specs.is_empty() {
            return Err(SpecError::EmptyFeatureSet);
        }
        for (i, s) in specs.iter().enumerate() {
            if specs[..i].contains(s) {
                return Err(SpecError::DuplicateSpec(*s));
            }
        }
        Ok(Self {
            name: name.into(),
            specs,
        })
    }

    /// The default compound feature space: 1-skip and 2-skip bigrams and
    /// trigrams. Contiguous n-grams (k = 0) are available but not part of
    /// the default compound.
    pub fn compound() -> Self {
        let specs = [(2, 1), (3, 1), (2, 2), (3, 2)]
            .iter()
            .map(|&(n, k)| SkipGramSpec::new(n, k).expect("static specs are valid"))
            .collect();
        Self {
            name: "compound".to_string(),
            specs,
        }
    }

    /// A feature set holding a single family, named after it.
    pub fn single(spec: SkipGramSpec) -> Self {
        Self {
            name: spec.family_name(),
            specs: vec![spec],
        }
    }

    /// Parses either the name `compound` or a comma-separated list of
    /// `<n>.<k>` specs, e.g. `2.1,3.1`.
    pub fn parse(s: &str) -> Result<Self, SpecError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("compound") {
            return Ok(Self::compound());
        }
        let specs: Vec<SkipGramSpec> = s
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()?;
        if specs.len() == 1 {
            return Ok(Self::single(specs[0]));
        }
        Self::new(s.to_string(), specs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn specs(&self) -> &[SkipGramSpec] {
        &self.specs
    }
}

/// Namespaced feature key for one gram of one family: `"<n>.<k>|<surface>"`.
pub fn feature_key(spec: SkipGramSpec, token: &SkipGramToken) -> String {
    format!("{}|{}", spec, token.surface())
}

/// Splits a feature key back into its family and surface parts.
pub fn parse_feature_key(key: &str) -> Result<(SkipGramSpec, &str), SpecError> {
    let (ns, surface) = key
        .split_once('|')
        .ok_or_else(|| SpecError::Malformed(key.to_string()))?;
    Ok((ns.parse()?, surface))
}

/// Enumerates every k-skip-n-gram of one token sequence.
///
/// For every window of exactly `n + k` consecutive tokens, emits every
/// length-n subsequence that keeps the window's first and last token and
/// skips exactly `k` of the interior ones. Output order is deterministic:
/// by window start, then lexicographic over the kept interior positions.
/// Returns an empty vec when the sequence is shorter than the window.
pub fn extract_skipgrams<S: AsRef<str>>(tokens: &[S], spec: SkipGramSpec) -> Vec<SkipGramToken> {
    let w = spec.window_len();
    if tokens.len() < w {
        return Vec::new();
    }
    if spec.n() == 1 {
        return tokens
            .iter()
            .map(|t| SkipGramToken::from_words(std::slice::from_ref(t)))
            .collect();
    }
    let interior_keep = spec.n() - 2;
    let mut out = Vec::with_capacity(expected_gram_count(tokens.len(), spec) as usize);
    for window in tokens.windows(w) {
        for kept in (1..w - 1).combinations(interior_keep) {
            let mut words: Vec<&str> = Vec::with_capacity(spec.n());
            words.push(window[0].as_ref());
            for i in kept {
                words.push(window[i].as_ref());
            }
            words.push(window[w - 1].as_ref());
            out.push(SkipGramToken::from_words(&words));
        }
    }
    out
}

/// Closed form for the multiset cardinality of [`extract_skipgrams`] on any
/// m-token sequence: `max(0, m - (n+k) + 1) * C(n+k-2, k)`.
pub fn expected_gram_count(m: usize, spec: SkipGramSpec) -> u64 {
    let w = spec.window_len();
    if m < w {
        return 0;
    }
    let windows = (m - w + 1) as u64;
    if spec.n() == 1 {
        return windows;
    }
    windows * binomial((w - 2) as u64, spec.k() as u64)
}

fn binomial(n: u64, mut k: u64) -> u64 {
    if k > n {
        return 0;
    }
    if k > n - k {
        k = n - k;
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Extracts every family in `fss` from every utterance and returns the
/// multiset union as namespaced feature keys. Utterance boundaries are hard:
/// no gram spans two utterances.
pub fn extract_compound<S: AsRef<str>>(utterances: &[Vec<S>], fss: &FeatureSetSpec) -> Vec<String> {
    let mut out = Vec::new();
    for utterance in utterances {
        for &spec in fss.specs() {
            for token in extract_skipgrams(utterance, spec) {
                out.push(feature_key(spec, &token));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn spec(n: usize, k: usize) -> SkipGramSpec {
        SkipGramSpec::new(n, k).unwrap()
    }

    fn surfaces(tokens: &[&str], s: SkipGramSpec) -> Vec<String> {
        extract_skipgrams(tokens, s)
            .into_iter()
            .map(|t| t.surface().to_string())
            .collect()
    }

    fn as_multiset(items: &[String]) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for i in items {
            *m.entry(i.clone()).or_insert(0) += 1;
        }
        m
    }

    const SENTENCE: [&str; 7] = ["take", "the", "cookie", "jar", "from", "the", "cabinet"];

    #[test]
    fn contiguous_bigrams() {
        let got = surfaces(&["take", "the", "cookie", "jar"], spec(2, 0));
        assert_eq!(got, vec!["take the", "the cookie", "cookie jar"]);
    }

    #[test]
    fn one_skip_bigrams() {
        let got = surfaces(&SENTENCE, spec(2, 1));
        let want = [
            "take cookie",
            "the jar",
            "cookie from",
            "jar the",
            "from cabinet",
        ];
        assert_eq!(got, want.map(String::from).to_vec());
    }

    #[test]
    fn one_skip_trigrams() {
        let got = surfaces(&SENTENCE, spec(3, 1));
        let want = [
            "take cookie jar",
            "take the jar",
            "the jar from",
            "the cookie from",
            "cookie jar the",
            "cookie from the",
            "jar the cabinet",
            "jar from cabinet",
        ];
        assert_eq!(as_multiset(&got), as_multiset(&want.map(String::from)));
        assert_eq!(got.len(), 8);
    }

    #[test]
    fn two_skip_bigrams() {
        // Hand enumeration: every length-4 window contributes its first and
        // last token only.
        let got = surfaces(&SENTENCE, spec(2, 2));
        let want = ["take jar", "the from", "cookie the", "jar cabinet"];
        assert_eq!(got, want.map(String::from).to_vec());
    }

    #[test]
    fn window_longer_than_sentence_is_empty() {
        assert!(surfaces(&["take", "the", "cookie"], spec(2, 2)).is_empty());
    }

    #[test]
    fn deterministic_order_is_start_then_kept_positions() {
        // Window (a b c d) of a 1-skip-3-gram keeps interior position 1
        // before interior position 2.
        let got = surfaces(&["a", "b", "c", "d"], spec(3, 1));
        assert_eq!(got, vec!["a b d".to_string(), "a c d".to_string()]);
    }

    #[test]
    fn unigrams_are_the_token_sequence() {
        let got = surfaces(&["a", "b", "a"], spec(1, 0));
        assert_eq!(got, vec!["a", "b", "a"]);
    }

    #[test]
    fn expected_counts_match_worked_examples() {
        assert_eq!(expected_gram_count(7, spec(2, 1)), 5);
        assert_eq!(expected_gram_count(7, spec(3, 1)), 8);
        assert_eq!(expected_gram_count(3, spec(3, 1)), 0);
    }

    #[test]
    fn spec_invariants_enforced() {
        assert_eq!(SkipGramSpec::new(0, 0), Err(SpecError::ZeroOrder));
        assert_eq!(SkipGramSpec::new(1, 1), Err(SpecError::UnigramSkip));
        assert!(SkipGramSpec::new(1, 0).is_ok());
    }

    #[test]
    fn spec_wire_format_round_trips() {
        let s: SkipGramSpec = "3.2".parse().unwrap();
        assert_eq!(s, spec(3, 2));
        assert_eq!(s.to_string(), "3.2");
        assert_eq!(s.family_name(), "2-skip-3-grams");
        assert!("3".parse::<SkipGramSpec>().is_err());
        assert!("x.y".parse::<SkipGramSpec>().is_err());
    }

    #[test]
    fn feature_key_round_trips() {
        let token = SkipGramToken::from_words(&["the", "jar"]);
        let key = feature_key(spec(2, 1), &token);
        assert_eq!(key, "2.1|the jar");
        let (s, surface) = parse_feature_key(&key).unwrap();
        assert_eq!(s, spec(2, 1));
        assert_eq!(surface, "the jar");
    }

    #[test]
    fn token_surface_round_trips_to_words() {
        let token = SkipGramToken::from_words(&["cookie", "from", "the"]);
        assert_eq!(token.words(), vec!["cookie", "from", "the"]);
    }

    #[test]
    fn compound_single_family() {
        let utterances = vec![vec!["a", "b", "c"]];
        let fss = FeatureSetSpec::new("bigrams", vec![spec(2, 0)]).unwrap();
        let got = extract_compound(&utterances, &fss);
        assert_eq!(got, vec!["2.0|a b".to_string(), "2.0|b c".to_string()]);
    }

    #[test]
    fn compound_namespaces_families_disjointly() {
        let utterances = vec![SENTENCE.to_vec()];
        let fss = FeatureSetSpec::new("pair", vec![spec(2, 1), spec(3, 1)]).unwrap();
        let got = extract_compound(&utterances, &fss);
        assert_eq!(got.len(), 13);
        assert_eq!(got.iter().filter(|k| k.starts_with("2.1|")).count(), 5);
        assert_eq!(got.iter().filter(|k| k.starts_with("3.1|")).count(), 8);
    }

    #[test]
    fn compound_multiplicities_double_with_repeated_utterance() {
        let once = vec![SENTENCE.to_vec()];
        let twice = vec![SENTENCE.to_vec(), SENTENCE.to_vec()];
        let fss = FeatureSetSpec::compound();
        let a = as_multiset(&extract_compound(&once, &fss));
        let b = as_multiset(&extract_compound(&twice, &fss));
        assert_eq!(b.len(), a.len());
        for (key, count) in &a {
            assert_eq!(b[key], 2 * count);
        }
    }

    #[test]
    fn compound_default_is_the_four_skip_families() {
        let fss = FeatureSetSpec::compound();
        assert_eq!(fss.name(), "compound");
        assert_eq!(
            fss.specs(),
            &[spec(2, 1), spec(3, 1), spec(2, 2), spec(3, 2)]
        );
    }

    #[test]
    fn feature_set_rejects_duplicates_and_empty() {
        assert_eq!(
            FeatureSetSpec::new("x", vec![]).unwrap_err(),
            SpecError::EmptyFeatureSet
        );
        assert_eq!(
            FeatureSetSpec::new("x", vec![spec(2, 1), spec(2, 1)]).unwrap_err(),
            SpecError::DuplicateSpec(spec(2, 1))
        );
    }

    #[test]
    fn feature_set_parse_forms() {
        assert_eq!(FeatureSetSpec::parse("compound").unwrap().specs().len(), 4);
        let single = FeatureSetSpec::parse("2.1").unwrap();
        assert_eq!(single.name(), "1-skip-2-grams");
        let multi = FeatureSetSpec::parse("2.0, 3.1").unwrap();
        assert_eq!(multi.specs(), &[spec(2, 0), spec(3, 1)]);
    }
}

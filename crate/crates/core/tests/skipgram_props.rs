//! Property tests for skip-gram extraction against an independent oracle.
//!
//! The oracle characterizes a k-skip-n-gram without windows: it is any
//! length-n subsequence of the token sequence whose index span is exactly
//! n + k. Anchoring at a window's first and last token is equivalent to
//! fixing that span, so the two formulations must agree exactly, including
//! order: both enumerate by first index, then lexicographically over the
//! remaining kept indices.

use proptest::prelude::*;
use skipscreen_core::skipgram::{
    expected_gram_count, extract_compound, extract_skipgrams, FeatureSetSpec, SkipGramSpec,
    SkipGramToken,
};

fn combinations(pool: &[usize], take: usize) -> Vec<Vec<usize>> {
    if take == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < take {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &head) in pool.iter().enumerate() {
        for mut tail in combinations(&pool[i + 1..], take - 1) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every length-n subsequence with index span exactly n + k, in
/// lexicographic order of the index tuple.
fn oracle(tokens: &[String], n: usize, k: usize) -> Vec<SkipGramToken> {
    let mut out = Vec::new();
    if n == 1 {
        if k == 0 {
            for t in tokens {
                out.push(SkipGramToken::from_words(std::slice::from_ref(t)));
            }
        }
        return out;
    }
    let span = n + k;
    if tokens.len() < span {
        return out;
    }
    for first in 0..=tokens.len() - span {
        let last = first + span - 1;
        let interior: Vec<usize> = (first + 1..last).collect();
        for kept in combinations(&interior, n - 2) {
            let mut words = vec![tokens[first].as_str()];
            for i in kept {
                words.push(tokens[i].as_str());
            }
            words.push(tokens[last].as_str());
            out.push(SkipGramToken::from_words(&words));
        }
    }
    out
}

fn spec_strategy() -> impl Strategy<Value = SkipGramSpec> {
    (1usize..=3, 0usize..=3).prop_map(|(n, k)| {
        let k = if n == 1 { 0 } else { k };
        SkipGramSpec::new(n, k).unwrap()
    })
}

fn tokens_strategy(max_len: usize) -> impl Strategy<Value = Vec<String>> {
    // A 4-word alphabet forces repeated surfaces, exercising multiset
    // semantics rather than set semantics.
    prop::collection::vec(
        prop::sample::select(vec![
            "the".to_string(),
            "cookie".to_string(),
            "jar".to_string(),
            "fell".to_string(),
        ]),
        0..max_len,
    )
}

proptest! {
    #[test]
    fn matches_span_oracle(tokens in tokens_strategy(20), spec in spec_strategy()) {
        let got = extract_skipgrams(&tokens, spec);
        let want = oracle(&tokens, spec.n(), spec.k());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn cardinality_matches_closed_form(tokens in tokens_strategy(40), spec in spec_strategy()) {
        let got = extract_skipgrams(&tokens, spec);
        prop_assert_eq!(got.len() as u64, expected_gram_count(tokens.len(), spec));
    }

    #[test]
    fn zero_skip_reduces_to_classic_ngrams(tokens in tokens_strategy(20), n in 1usize..=3) {
        let spec = SkipGramSpec::new(n, 0).unwrap();
        let got = extract_skipgrams(&tokens, spec);
        let want: Vec<SkipGramToken> = if tokens.len() < n {
            Vec::new()
        } else {
            tokens.windows(n).map(SkipGramToken::from_words).collect()
        };
        prop_assert_eq!(got, want);
    }

    #[test]
    fn extraction_is_deterministic(tokens in tokens_strategy(20), spec in spec_strategy()) {
        prop_assert_eq!(
            extract_skipgrams(&tokens, spec),
            extract_skipgrams(&tokens, spec)
        );
    }

    #[test]
    fn compound_is_additive_over_utterances(
        a in prop::collection::vec(tokens_strategy(10), 0..4),
        b in prop::collection::vec(tokens_strategy(10), 0..4),
    ) {
        let fss = FeatureSetSpec::compound();
        let mut joint: Vec<Vec<String>> = a.clone();
        joint.extend(b.clone());
        let mut concatenated = extract_compound(&a, &fss);
        concatenated.extend(extract_compound(&b, &fss));
        prop_assert_eq!(extract_compound(&joint, &fss), concatenated);
    }
}

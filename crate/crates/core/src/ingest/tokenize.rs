//! CHAT utterance cleaning.
//!
//! Cleaning rules: timing bullets and bracketed codes are removed; retrace
//! markers `[/]` and `[//]` also remove the word or `<...>` group they
//! follow, keeping the repaired text; `&`-prefixed fillers/events and
//! unintelligible `xxx` are dropped; everything else is lowercased and
//! stripped to the token alphabet (lowercase letters, digits, internal
//! apostrophes). Cleaning is idempotent and never fails.

use super::RawUtterance;

const BULLET: char = '\u{2022}';

/// One unit of the utterance after structural scanning.
enum Item {
    Word(String),
    Group(Vec<String>),
    Code(String),
}

fn scan(text: &str) -> Vec<Item> {
    let mut items = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == BULLET {
            chars.next();
            for d in chars.by_ref() {
                if d == BULLET {
                    break;
                }
            }
        } else if c == '<' {
            chars.next();
            let mut inner = String::new();
            for d in chars.by_ref() {
                if d == '>' {
                    break;
                }
                inner.push(d);
            }
            items.push(Item::Group(
                inner.split_whitespace().map(str::to_string).collect(),
            ));
        } else if c == '[' {
            chars.next();
            let mut inner = String::new();
            for d in chars.by_ref() {
                if d == ']' {
                    break;
                }
                inner.push(d);
            }
            items.push(Item::Code(inner.trim().to_string()));
        } else {
            let mut word = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_whitespace() || d == '<' || d == '[' || d == BULLET {
                    break;
                }
                word.push(d);
                chars.next();
            }
            items.push(Item::Word(word));
        }
    }
    items
}

/// Lowercases and strips a raw word to the token alphabet. Returns None for
/// fillers, unintelligible material, and tokens that strip to nothing.
fn normalize(raw: &str) -> Option<String> {
    if raw.starts_with('&') {
        return None;
    }
    let kept: String = raw
        .chars()
        .flat_map(char::to_lowercase)
        .filter(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '\'')
        .collect();
    let trimmed = kept.trim_matches('\'');
    if trimmed.is_empty() || trimmed == "xxx" {
        None
    } else {
        Some(trimmed.to_string())
    }
}

/// Cleans free utterance text into word tokens.
pub fn clean_text(text: &str) -> Vec<String> {
    // Retrace markers pop the most recent word or group; other codes and
    // bullets vanish.
    let mut units: Vec<Vec<String>> = Vec::new();
    for item in scan(text) {
        match item {
            Item::Word(w) => units.push(vec![w]),
            Item::Group(ws) => units.push(ws),
            Item::Code(c) if c == "/" || c == "//" => {
                units.pop();
            }
            Item::Code(_) => {}
        }
    }
    units
        .into_iter()
        .flatten()
        .filter_map(|w| normalize(&w))
        .collect()
}

/// Cleans one utterance into word tokens (possibly empty).
pub fn clean_and_tokenize(u: &RawUtterance) -> Vec<String> {
    clean_text(&u.raw_text)
}

/// Whether a token is in the emitted alphabet: non-empty, only lowercase
/// ASCII letters, digits, and apostrophes, with no apostrophe at either end.
pub fn is_clean_token(t: &str) -> bool {
    !t.is_empty()
        && t.chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '\'')
        && !t.starts_with('\'')
        && !t.ends_with('\'')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowercases_and_strips_punctuation() {
        assert_eq!(
            clean_text("take the Cookie Jar"),
            vec!["take", "the", "cookie", "jar"]
        );
        assert_eq!(clean_text("the boy fell ."), vec!["the", "boy", "fell"]);
    }

    #[test]
    fn retrace_keeps_the_repair() {
        assert_eq!(clean_text("&uh the [//] the boy"), vec!["the", "boy"]);
        assert_eq!(
            clean_text("<the big dog> [/] the dog barked ."),
            vec!["the", "dog", "barked"]
        );
    }

    #[test]
    fn empty_input_is_empty() {
        assert_eq!(clean_text(""), Vec::<String>::new());
        assert_eq!(clean_text("  (.)  "), Vec::<String>::new());
    }

    #[test]
    fn bullets_pauses_and_codes_vanish() {
        assert_eq!(
            clean_text("ok \u{2022}0_1500\u{2022} (.) yes \u{2022}1500_2400\u{2022}"),
            vec!["ok", "yes"]
        );
        assert_eq!(clean_text("[=! sings] la la"), vec!["la", "la"]);
    }

    #[test]
    fn fillers_and_unintelligible_drop() {
        assert_eq!(
            clean_text("&=laughs &uh xxx went Xxx. home"),
            vec!["went", "home"]
        );
    }

    #[test]
    fn apostrophes_internal_only() {
        assert_eq!(
            clean_text("don't 'cause rock'n'roll"),
            vec!["don't", "cause", "rock'n'roll"]
        );
    }

    #[test]
    fn group_without_retrace_is_kept() {
        assert_eq!(
            clean_text("<the whole> story"),
            vec!["the", "whole", "story"]
        );
    }

    #[test]
    fn cleaning_is_idempotent_and_in_alphabet() {
        let inputs = [
            "take the Cookie Jar",
            "&uh the [//] the boy ,",
            "ok \u{2022}0_1500\u{2022} (.) y-es! <a b> [/] c",
            "Mother's day + cafe\u{301} 'tis",
        ];
        for raw in inputs {
            let once = clean_text(raw);
            for t in &once {
                assert!(is_clean_token(t), "token {t:?} outside alphabet");
            }
            let again = clean_text(&once.join(" "));
            assert_eq!(again, once, "not idempotent on {raw:?}");
        }
    }

    #[test]
    fn clean_and_tokenize_uses_raw_text() {
        let u = RawUtterance::new("PAR", "The boy took a cookie .");
        assert_eq!(
            clean_and_tokenize(&u),
            vec!["the", "boy", "took", "a", "cookie"]
        );
    }
}

//! CHAT transcript parsing (the subset used here).
//!
//! Recognized lines: `@Key: value` headers (and bare `@Begin`/`@End`
//! markers), `*TIER:` utterances, `%tier:` dependent tiers, and
//! whitespace-indented continuations of the previous tier line. Timing
//! bullets `•start_end•` (milliseconds) and pause marks `(.)`/`(..)`/`(...)`
//! are extracted per utterance; a `%mor` tier attaches its word items to the
//! preceding utterance. A file that declares headers and contains utterances
//! must identify its participant via `@PID`; header-less fragments parse
//! without one so snippets and plain captures stay loadable.

use super::{IngestError, RawTranscript, RawUtterance};

const BULLET: char = '\u{2022}';

enum Record {
    Header { body: String },
    Utterance { line: usize, body: String },
    Dependent { line: usize, body: String },
}

/// Folds physical lines into logical records: a line starting with
/// whitespace continues the previous tier line.
fn logical_records(text: &str) -> Result<Vec<Record>, IngestError> {
    let mut records: Vec<Record> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        if raw_line.trim().is_empty() {
            continue;
        }
        let first = raw_line.chars().next().expect("line is non-empty");
        if first.is_whitespace() {
            let tail = raw_line.trim();
            match records.last_mut() {
                Some(
                    Record::Utterance { body, .. }
                    | Record::Dependent { body, .. }
                    | Record::Header { body, .. },
                ) => {
                    body.push(' ');
                    body.push_str(tail);
                }
                None => {
                    return Err(IngestError::ParseLine {
                        line,
                        msg: "continuation line with nothing to continue".to_string(),
                    })
                }
            }
        } else if first == '@' {
            records.push(Record::Header {
                body: raw_line.to_string(),
            });
        } else if first == '*' {
            records.push(Record::Utterance {
                line,
                body: raw_line.to_string(),
            });
        } else if first == '%' {
            records.push(Record::Dependent {
                line,
                body: raw_line.to_string(),
            });
        } else {
            return Err(IngestError::ParseLine {
                line,
                msg: format!("unrecognized line `{}`", raw_line.trim()),
            });
        }
    }
    Ok(records)
}

/// Splits `*TIER:\ttext` into the tier code and its text.
fn split_tier(body: &str, line: usize, sigil: char) -> Result<(String, String), IngestError> {
    let rest = &body[1..];
    let (code, text) = rest.split_once(':').ok_or_else(|| IngestError::ParseLine {
        line,
        msg: format!("malformed tier prefix `{body}`: missing `:`"),
    })?;
    let valid = match sigil {
        '*' => {
            !code.is_empty()
                && code
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
        }
        _ => {
            !code.is_empty()
                && code
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        }
    };
    if !valid {
        return Err(IngestError::ParseLine {
            line,
            msg: format!("malformed tier prefix `{sigil}{code}:`"),
        });
    }
    Ok((code.to_string(), text.trim().to_string()))
}

/// Pulls every `•start_end•` pair out of utterance text.
fn extract_bullets(text: &str, line: usize) -> Result<Vec<(u64, u64)>, IngestError> {
    let mut out = Vec::new();
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != BULLET {
            continue;
        }
        let mut inner = String::new();
        let mut closed = false;
        for d in chars.by_ref() {
            if d == BULLET {
                closed = true;
                break;
            }
            inner.push(d);
        }
        let pair = inner.split_once('_').and_then(|(a, b)| {
            Some((a.trim().parse::<u64>().ok()?, b.trim().parse::<u64>().ok()?))
        });
        match pair {
            Some((start, end)) if closed && end >= start => out.push((start, end)),
            _ => {
                return Err(IngestError::ParseLine {
                    line,
                    msg: format!("malformed timing bullet `{inner}`"),
                })
            }
        }
    }
    Ok(out)
}

/// Counts pause marks `(.)`, `(..)`, `(...)`.
fn count_pauses(text: &str) -> u32 {
    let mut count = 0;
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '(' {
            continue;
        }
        let mut dots = 0;
        while chars.peek() == Some(&'.') {
            dots += 1;
            chars.next();
        }
        if (1..=3).contains(&dots) && chars.peek() == Some(&')') {
            chars.next();
            count += 1;
        }
    }
    count
}

/// Parses CHAT text into a transcript. `visit_index` defaults to 1; the
/// manifest assigns the real one.
pub fn parse_chat(text: &str) -> Result<RawTranscript, IngestError> {
    let mut transcript = RawTranscript {
        visit_index: 1,
        ..RawTranscript::default()
    };
    let mut saw_header = false;
    for record in logical_records(text)? {
        match record {
            Record::Header { body, .. } => {
                saw_header = true;
                let rest = &body[1..];
                let (key, value) = match rest.split_once(':') {
                    Some((k, v)) => (k.trim().to_string(), v.trim().to_string()),
                    None => (rest.trim().to_string(), String::new()),
                };
                transcript.header_fields.insert(key, value);
            }
            Record::Utterance { line, body } => {
                let (code, text) = split_tier(&body, line, '*')?;
                let mut u = RawUtterance::new(code, text);
                u.segment_times_ms = extract_bullets(&u.raw_text, line)?;
                u.pause_marks = count_pauses(&u.raw_text);
                transcript.utterances.push(u);
            }
            Record::Dependent { line, body } => {
                let (code, text) = split_tier(&body, line, '%')?;
                let last =
                    transcript
                        .utterances
                        .last_mut()
                        .ok_or_else(|| IngestError::ParseLine {
                            line,
                            msg: format!("dependent tier %{code} before any utterance"),
                        })?;
                if code == "mor" {
                    // Word items carry a `cat|stem` pipe; bare terminator
                    // items are not words and would break alignment.
                    let items: Vec<String> = text
                        .split_whitespace()
                        .filter(|w| w.contains('|'))
                        .map(str::to_string)
                        .collect();
                    last.mor_items.get_or_insert_with(Vec::new).extend(items);
                }
            }
        }
    }
    if let Some(pid) = transcript.header_fields.get("PID") {
        transcript.participant_id = pid.clone();
    } else if saw_header && !transcript.utterances.is_empty() {
        return Err(IngestError::Manifest(
            "missing @PID participant header".to_string(),
        ));
    }
    Ok(transcript)
}

/// Parses plain text: every non-empty line is one participant utterance.
pub fn parse_plain(text: &str) -> RawTranscript {
    let mut transcript = RawTranscript {
        visit_index: 1,
        ..RawTranscript::default()
    };
    for line in text.lines() {
        if !line.trim().is_empty() {
            transcript
                .utterances
                .push(RawUtterance::new("PAR", line.trim()));
        }
    }
    transcript
}

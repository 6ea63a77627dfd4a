//! Turning per-sentence model outputs into span predictions.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::annotation::{PredEntry, Prediction, Span};
use crate::error::NormalizeError;
use crate::taxonomy::{contains_phrase, normalize_text, FallacyLabel, Taxonomy};

/// Phrases that mark an output as explicitly non-fallacious when no label
/// name is present. Matched as whole-word phrases on normalized text.
pub const NO_FALLACY_CUES: [&str; 4] = [
    "not part of a fallacious argument",
    "not a fallacious argument",
    "no fallacy",
    "none",
];

pub const URL_PLACEHOLDER: &str = "[URL]";
pub const EMAIL_PLACEHOLDER: &str = "[EMAIL]";
pub const PHONE_PLACEHOLDER: &str = "[PHONE]";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Fallacy(FallacyLabel),
    NoFallacy,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceVerdict {
    pub sentence_index: usize,
    pub raw_output: String,
    pub resolved: Verdict,
}

impl SentenceVerdict {
    pub fn resolve(taxonomy: &Taxonomy, sentence_index: usize, raw_output: impl Into<String>) -> Self {
        let raw_output = raw_output.into();
        let resolved = resolve_sentence(taxonomy, &raw_output);
        Self {
            sentence_index,
            raw_output,
            resolved,
        }
    }
}

pub fn resolve_sentence(taxonomy: &Taxonomy, raw_output: &str) -> Verdict {
    if let Some(label) = taxonomy.match_label_text(raw_output) {
        return Verdict::Fallacy(label.clone());
    }
    if asserts_no_fallacy(raw_output) {
        Verdict::NoFallacy
    } else {
        Verdict::Unknown
    }
}

fn asserts_no_fallacy(raw_output: &str) -> bool {
    let normalized = normalize_text(raw_output);
    NO_FALLACY_CUES.iter().any(|cue| contains_phrase(&normalized, cue))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroupedPrediction {
    pub prediction: Prediction,
    /// Maximal runs of sentences whose output could not be resolved.
    pub unknown_spans: usize,
}

fn check_order(verdicts: &[SentenceVerdict]) -> Result<(), NormalizeError> {
    for (expected, v) in verdicts.iter().enumerate() {
        let found = v.sentence_index;
        if found < expected {
            return Err(NormalizeError::DuplicateIndex(found));
        }
        if found > expected {
            return Err(NormalizeError::IndexGap { expected, found });
        }
    }
    Ok(())
}

/// Collapses maximal runs of identically resolved sentences into spans.
///
/// Runs of no-fallacy produce nothing; runs of unknown produce nothing but are
/// counted.
pub fn group_spans(verdicts: &[SentenceVerdict]) -> Result<GroupedPrediction, NormalizeError> {
    check_order(verdicts)?;
    let mut out = GroupedPrediction::default();
    let mut start = 0;
    while start < verdicts.len() {
        let current = &verdicts[start].resolved;
        let end = start
            + verdicts[start..]
                .iter()
                .take_while(|v| &v.resolved == current)
                .count();
        match current {
            Verdict::Fallacy(label) => out
                .prediction
                .push(PredEntry::new(Span::new(start, end), label.clone())),
            Verdict::Unknown => out.unknown_spans += 1,
            Verdict::NoFallacy => {}
        }
        start = end;
    }
    Ok(out)
}

/// Like [`group_spans`], but every label named in a sentence's output takes
/// part: each label forms its own maximal runs, so overlapping spans with
/// different labels are possible. Sentences naming no label fall back to the
/// no-fallacy cue check and the unknown count.
pub fn group_spans_multi(
    taxonomy: &Taxonomy,
    verdicts: &[SentenceVerdict],
) -> Result<GroupedPrediction, NormalizeError> {
    check_order(verdicts)?;
    let per_sentence: Vec<Vec<&FallacyLabel>> = verdicts
        .iter()
        .map(|v| taxonomy.match_all_labels(&v.raw_output))
        .collect();
    let mut out = GroupedPrediction::default();
    let mut open: Vec<(&FallacyLabel, usize)> = Vec::new();
    let mut in_unknown = false;
    for (i, labels) in per_sentence.iter().enumerate() {
        open.retain(|(label, start)| {
            let continues = labels.contains(label);
            if !continues {
                out.prediction.push(PredEntry::new(Span::new(*start, i), (*label).clone()));
            }
            continues
        });
        for label in labels {
            if !open.iter().any(|(l, _)| l == label) {
                open.push((label, i));
            }
        }
        let unknown = labels.is_empty() && !asserts_no_fallacy(&verdicts[i].raw_output);
        if unknown && !in_unknown {
            out.unknown_spans += 1;
        }
        in_unknown = unknown;
    }
    let n = per_sentence.len();
    for (label, start) in open {
        out.prediction.push(PredEntry::new(Span::new(start, n), label.clone()));
    }
    out.prediction.sort_by(|a, b| (a.span, &a.label.canonical_name).cmp(&(b.span, &b.label.canonical_name)));
    Ok(out)
}

/// Resolves raw outputs (`outputs[i]` is the output for sentence `i`) and
/// groups them into spans.
pub fn normalize_outputs(
    taxonomy: &Taxonomy,
    outputs: &[String],
    multi_label: bool,
) -> Result<GroupedPrediction, NormalizeError> {
    let verdicts: Vec<SentenceVerdict> = outputs
        .iter()
        .enumerate()
        .map(|(i, raw)| SentenceVerdict::resolve(taxonomy, i, raw.as_str()))
        .collect();
    if multi_label {
        group_spans_multi(taxonomy, &verdicts)
    } else {
        group_spans(&verdicts)
    }
}

struct CleaningPatterns {
    email: Regex,
    url: Regex,
    phone: Regex,
}

fn patterns() -> &'static CleaningPatterns {
    static PATTERNS: OnceLock<CleaningPatterns> = OnceLock::new();
    PATTERNS.get_or_init(|| CleaningPatterns {
        email: Regex::new(r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}").unwrap(),
        url: Regex::new(r#"(?i)\b(?:https?://|www\.)[^\s<>"]*[^\s<>".,;:!?)\]'}]"#).unwrap(),
        phone: Regex::new(
            r"(?x)
              \+\d{1,3}[\s.-]?(?:\(\d{1,4}\)|\d{1,4})(?:[\s.-]?\d{2,4}){2,4}\b
            | \(\d{3}\)\s?\d{3}[\s.-]?\d{4}\b
            | \b\d{3}[.-]\d{3}[.-]\d{4}\b
            ",
        )
        .unwrap(),
    })
}

fn clean_once(text: &str) -> String {
    let p = patterns();
    let text = p.email.replace_all(text, EMAIL_PLACEHOLDER);
    let text = p.url.replace_all(&text, URL_PLACEHOLDER);
    p.phone.replace_all(&text, PHONE_PLACEHOLDER).into_owned()
}

/// Replaces emails, URLs and phone numbers with placeholders.
///
/// Applied until nothing changes, so `clean_text(clean_text(s)) == clean_text(s)`.
pub fn clean_text(raw: &str) -> String {
    let mut current = clean_once(raw);
    loop {
        let next = clean_once(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

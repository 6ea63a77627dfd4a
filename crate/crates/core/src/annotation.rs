//! Documents, spans, disjunctive gold standards and predictions.
//!
//! A document is a sequence of sentences; spans are half-open ranges of
//! sentence indices. A gold entry carries a *set* of acceptable labels and may
//! additionally mark the span as optional ("no fallacy" is an acceptable
//! answer). A prediction entry carries exactly one label.
//!
//! The scoring code only looks at span boundaries, so any atom works: tests
//! use characters as atoms to reproduce character-offset examples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::taxonomy::FallacyLabel;

/// Half-open `[start, end)` range of atoms (sentence indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub const fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    /// Span covering one sentence.
    pub const fn sentence(index: usize) -> Self {
        Self::new(index, index + 1)
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.start <= atom && atom < self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// Number of atoms shared by two spans.
pub fn overlap(a: Span, b: Span) -> usize {
    a.end.min(b.end).saturating_sub(a.start.max(b.start))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub sentences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, sentences: Vec<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            sentences,
            source: None,
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// One gold annotation: a span and its alternative labels.
///
/// `no_fallacy` set means the no-fallacy label is among the alternatives, so
/// annotating the span at all is optional.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GoldEntry<L = FallacyLabel> {
    pub span: Span,
    pub labels: Vec<L>,
    pub no_fallacy: bool,
}

impl<L> GoldEntry<L> {
    pub fn new(span: Span, labels: Vec<L>) -> Self {
        Self {
            span,
            labels,
            no_fallacy: false,
        }
    }

    /// Entry whose alternatives also include "no fallacy".
    pub fn optional(span: Span, labels: Vec<L>) -> Self {
        Self {
            span,
            labels,
            no_fallacy: true,
        }
    }

    pub fn accepts(&self, label: &L) -> bool
    where
        L: PartialEq,
    {
        self.labels.contains(label)
    }

    pub fn map_labels<M: PartialEq>(&self, mut f: impl FnMut(&L) -> M) -> GoldEntry<M> {
        let mut labels: Vec<M> = Vec::with_capacity(self.labels.len());
        for label in &self.labels {
            let mapped = f(label);
            if !labels.contains(&mapped) {
                labels.push(mapped);
            }
        }
        GoldEntry {
            span: self.span,
            labels,
            no_fallacy: self.no_fallacy,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredEntry<L = FallacyLabel> {
    pub span: Span,
    pub label: L,
}

impl<L> PredEntry<L> {
    pub fn new(span: Span, label: L) -> Self {
        Self { span, label }
    }

    pub fn map_label<M>(&self, f: impl FnOnce(&L) -> M) -> PredEntry<M> {
        PredEntry {
            span: self.span,
            label: f(&self.label),
        }
    }
}

/// Gold entries of one document. The same span may appear more than once.
pub type GoldStandard<L = FallacyLabel> = Vec<GoldEntry<L>>;

/// Prediction entries of one document. Duplicates are kept.
pub type Prediction<L = FallacyLabel> = Vec<PredEntry<L>>;

/// Gold entries that do not admit "no fallacy"; the recall denominator.
pub fn g_minus<L: Clone>(gold: &[GoldEntry<L>]) -> GoldStandard<L> {
    required_entries(gold).cloned().collect()
}

pub(crate) fn required_entries<L>(gold: &[GoldEntry<L>]) -> impl Iterator<Item = &GoldEntry<L>> {
    gold.iter().filter(|g| !g.no_fallacy)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Gold,
    Prediction,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Gold => "gold",
            Side::Prediction => "prediction",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoSentences,
    EmptySpan { side: Side, entry: usize, span: Span },
    SpanOutOfRange { side: Side, entry: usize, span: Span, sentences: usize },
    EmptyLabelSet { entry: usize },
    BareNoFallacy { entry: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoSentences => write!(f, "document has no sentences"),
            Self::EmptySpan { side, entry, span } => write!(f, "{side} entry {entry}: empty span {span}"),
            Self::SpanOutOfRange { side, entry, span, sentences } => {
                write!(f, "{side} entry {entry}: span out of range {span} for {sentences} sentences")
            }
            Self::EmptyLabelSet { entry } => write!(f, "gold entry {entry}: empty label set"),
            Self::BareNoFallacy { entry } => write!(f, "gold entry {entry}: bare no-fallacy"),
        }
    }
}

fn check_span(side: Side, entry: usize, span: Span, sentences: usize, out: &mut Vec<Violation>) {
    if span.start >= span.end {
        out.push(Violation::EmptySpan { side, entry, span });
    } else if span.end > sentences {
        out.push(Violation::SpanOutOfRange {
            side,
            entry,
            span,
            sentences,
        });
    }
}

/// Reports every invariant breach instead of stopping at the first one.
pub fn validate<L>(
    doc: &Document,
    gold: &[GoldEntry<L>],
    pred: &[PredEntry<L>],
) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let n = doc.len();
    if n == 0 {
        violations.push(Violation::NoSentences);
    }
    for (i, entry) in gold.iter().enumerate() {
        check_span(Side::Gold, i, entry.span, n, &mut violations);
        if entry.labels.is_empty() {
            violations.push(if entry.no_fallacy {
                Violation::BareNoFallacy { entry: i }
            } else {
                Violation::EmptyLabelSet { entry: i }
            });
        }
    }
    for (i, entry) in pred.iter().enumerate() {
        check_span(Side::Prediction, i, entry.span, n, &mut violations);
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

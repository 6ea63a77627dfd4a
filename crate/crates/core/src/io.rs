//! Line-delimited JSON formats.
//!
//! Dataset (one document per line):
//!
//! ```json
//! {"doc_id": "d1", "sentences": ["...", "..."], "source": "reddit",
//!  "gold": [{"start": 0, "end": 2, "labels": ["hasty generalization", "nothing"]}]}
//! ```
//!
//! `"nothing"` is the no-fallacy alternative. Annotator files used for cross
//! comparison share this format.
//!
//! Predictions (one document per line):
//!
//! ```json
//! {"doc_id": "d1", "predictions": [{"start": 0, "end": 1, "label": "straw man"}]}
//! ```
//!
//! Model outputs (one sentence per line):
//!
//! ```json
//! {"doc_id": "d1", "sentence_index": 0, "raw_output": "This is an example of ..."}
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::annotation::{validate, Document, GoldEntry, GoldStandard, PredEntry, Prediction, Span};
use crate::error::IoError;
use crate::normalize::SentenceVerdict;
use crate::taxonomy::{FallacyLabel, Taxonomy};

/// Label string encoding the no-fallacy alternative.
pub const NO_FALLACY_TOKEN: &str = "nothing";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldRecord {
    pub start: usize,
    pub end: usize,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub doc_id: String,
    pub sentences: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default)]
    pub gold: Vec<GoldRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredRecord {
    pub start: usize,
    pub end: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub doc_id: String,
    #[serde(default)]
    pub predictions: Vec<PredRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelOutputRecord {
    pub doc_id: String,
    pub sentence_index: usize,
    pub raw_output: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedDocument {
    pub document: Document,
    pub gold: GoldStandard,
}

/// Documents sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub documents: Vec<AnnotatedDocument>,
}

impl Dataset {
    pub fn get(&self, doc_id: &str) -> Option<&AnnotatedDocument> {
        self.documents
            .binary_search_by(|d| d.document.doc_id.as_str().cmp(doc_id))
            .ok()
            .map(|i| &self.documents[i])
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Result of a lenient load: everything that parsed, plus one diagnostic per
/// rejected line.
#[derive(Debug, Default)]
pub struct DatasetLoad {
    pub dataset: Dataset,
    pub diagnostics: Vec<IoError>,
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Non-blank lines with 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_line<T: for<'de> Deserialize<'de>>(line: usize, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Malformed {
        line,
        message: e.to_string(),
    })
}

pub fn resolve_label(taxonomy: &Taxonomy, line: usize, label: &str) -> Result<FallacyLabel, IoError> {
    taxonomy
        .get(label)
        .or_else(|| taxonomy.match_label_text(label))
        .cloned()
        .ok_or_else(|| IoError::UnknownLabel {
            line,
            label: label.to_string(),
        })
}

fn is_no_fallacy(label: &str) -> bool {
    label.trim().eq_ignore_ascii_case(NO_FALLACY_TOKEN)
}

fn gold_entry(taxonomy: &Taxonomy, line: usize, record: &GoldRecord) -> Result<GoldEntry, IoError> {
    let mut entry = GoldEntry::new(Span::new(record.start, record.end), Vec::new());
    for label in &record.labels {
        if is_no_fallacy(label) {
            entry.no_fallacy = true;
        } else {
            let label = resolve_label(taxonomy, line, label)?;
            if !entry.labels.contains(&label) {
                entry.labels.push(label);
            }
        }
    }
    Ok(entry)
}

pub fn annotated_from_record(
    taxonomy: &Taxonomy,
    line: usize,
    record: DatasetRecord,
) -> Result<AnnotatedDocument, IoError> {
    let gold = record
        .gold
        .iter()
        .map(|g| gold_entry(taxonomy, line, g))
        .collect::<Result<GoldStandard, _>>()?;
    let document = Document {
        doc_id: record.doc_id,
        sentences: record.sentences,
        source: record.source,
    };
    validate::<FallacyLabel>(&document, &gold, &[]).map_err(|violations| IoError::Invalid {
        line,
        doc_id: document.doc_id.clone(),
        violations,
    })?;
    Ok(AnnotatedDocument { document, gold })
}

pub fn record_from_annotated(doc: &AnnotatedDocument) -> DatasetRecord {
    DatasetRecord {
        doc_id: doc.document.doc_id.clone(),
        sentences: doc.document.sentences.clone(),
        source: doc.document.source.clone(),
        gold: doc
            .gold
            .iter()
            .map(|g| GoldRecord {
                start: g.span.start,
                end: g.span.end,
                labels: g
                    .labels
                    .iter()
                    .map(|l| l.canonical_name.clone())
                    .chain(g.no_fallacy.then(|| NO_FALLACY_TOKEN.to_string()))
                    .collect(),
            })
            .collect(),
    }
}

pub fn parse_dataset(taxonomy: &Taxonomy, text: &str) -> DatasetLoad {
    let mut load = DatasetLoad::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (line, raw) in records(text) {
        let parsed = parse_line::<DatasetRecord>(line, raw).and_then(|record| {
            if seen.contains_key(&record.doc_id) {
                return Err(IoError::DuplicateDocument {
                    line,
                    doc_id: record.doc_id,
                });
            }
            annotated_from_record(taxonomy, line, record)
        });
        match parsed {
            Ok(doc) => {
                seen.insert(doc.document.doc_id.clone(), line);
                load.dataset.documents.push(doc);
            }
            Err(e) => load.diagnostics.push(e),
        }
    }
    load.dataset
        .documents
        .sort_by(|a, b| a.document.doc_id.cmp(&b.document.doc_id));
    load
}

pub fn load_dataset_report(taxonomy: &Taxonomy, path: impl AsRef<Path>) -> Result<DatasetLoad, IoError> {
    Ok(parse_dataset(taxonomy, &read(path.as_ref())?))
}

/// Strict load: the first diagnostic, if any, is returned as the error.
pub fn load_dataset(taxonomy: &Taxonomy, path: impl AsRef<Path>) -> Result<Dataset, IoError> {
    let load = load_dataset_report(taxonomy, path)?;
    match load.diagnostics.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(load.dataset),
    }
}

pub fn write_dataset(dataset: &Dataset, out: &mut impl Write) -> Result<(), IoError> {
    for doc in &dataset.documents {
        let line = serde_json::to_string(&record_from_annotated(doc)).expect("record serializes");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub type PredictionSet = BTreeMap<String, Prediction>;

/// Parses predictions and checks them against `dataset`. Documents with no
/// prediction record get an empty prediction.
pub fn parse_predictions(taxonomy: &Taxonomy, dataset: &Dataset, text: &str) -> Result<PredictionSet, IoError> {
    let mut out: PredictionSet = dataset
        .documents
        .iter()
        .map(|d| (d.document.doc_id.clone(), Vec::new()))
        .collect();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (line, raw) in records(text) {
        let record: PredictionRecord = parse_line(line, raw)?;
        let Some(doc) = dataset.get(&record.doc_id) else {
            return Err(IoError::UnknownDocument {
                line,
                doc_id: record.doc_id,
            });
        };
        if seen.insert(record.doc_id.clone(), line).is_some() {
            return Err(IoError::DuplicateDocument {
                line,
                doc_id: record.doc_id,
            });
        }
        let pred = record
            .predictions
            .iter()
            .map(|p| Ok(PredEntry::new(Span::new(p.start, p.end), resolve_label(taxonomy, line, &p.label)?)))
            .collect::<Result<Prediction, IoError>>()?;
        validate(&doc.document, &[], &pred).map_err(|violations| IoError::Invalid {
            line,
            doc_id: record.doc_id.clone(),
            violations,
        })?;
        out.insert(record.doc_id, pred);
    }
    Ok(out)
}

pub fn load_predictions(
    taxonomy: &Taxonomy,
    dataset: &Dataset,
    path: impl AsRef<Path>,
) -> Result<PredictionSet, IoError> {
    parse_predictions(taxonomy, dataset, &read(path.as_ref())?)
}

pub fn write_predictions(predictions: &PredictionSet, out: &mut impl Write) -> Result<(), IoError> {
    for (doc_id, pred) in predictions {
        let record = PredictionRecord {
            doc_id: doc_id.clone(),
            predictions: pred
                .iter()
                .map(|p| PredRecord {
                    start: p.span.start,
                    end: p.span.end,
                    label: p.label.canonical_name.clone(),
                })
                .collect(),
        };
        writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))?;
    }
    Ok(())
}

/// Per-document verdicts in sentence order. Every sentence of every dataset
/// document must have exactly one output.
pub fn parse_model_outputs(
    taxonomy: &Taxonomy,
    dataset: &Dataset,
    text: &str,
) -> Result<BTreeMap<String, Vec<SentenceVerdict>>, IoError> {
    let mut out: BTreeMap<String, Vec<SentenceVerdict>> = BTreeMap::new();
    for (line, raw) in records(text) {
        let record: ModelOutputRecord = parse_line(line, raw)?;
        let Some(doc) = dataset.get(&record.doc_id) else {
            return Err(IoError::UnknownDocument {
                line,
                doc_id: record.doc_id,
            });
        };
        if record.sentence_index >= doc.document.len() {
            return Err(IoError::Malformed {
                line,
                message: format!(
                    "sentence index {} out of range for document {:?} with {} sentences",
                    record.sentence_index,
                    record.doc_id,
                    doc.document.len()
                ),
            });
        }
        out.entry(record.doc_id)
            .or_default()
            .push(SentenceVerdict::resolve(taxonomy, record.sentence_index, record.raw_output));
    }
    for doc in &dataset.documents {
        let verdicts = out.entry(doc.document.doc_id.clone()).or_default();
        verdicts.sort_by_key(|v| v.sentence_index);
        for (expected, v) in verdicts.iter().enumerate() {
            if v.sentence_index < expected {
                return Err(crate::error::NormalizeError::DuplicateIndex(v.sentence_index).into());
            }
            if v.sentence_index > expected {
                return Err(crate::error::NormalizeError::IndexGap {
                    expected,
                    found: v.sentence_index,
                }
                .into());
            }
        }
        if verdicts.len() != doc.document.len() {
            return Err(crate::error::NormalizeError::IndexGap {
                expected: verdicts.len(),
                found: doc.document.len(),
            }
            .into());
        }
    }
    Ok(out)
}

pub fn load_model_outputs(
    taxonomy: &Taxonomy,
    dataset: &Dataset,
    path: impl AsRef<Path>,
) -> Result<BTreeMap<String, Vec<SentenceVerdict>>, IoError> {
    parse_model_outputs(taxonomy, dataset, &read(path.as_ref())?)
}

pub fn write_model_outputs(outputs: &BTreeMap<String, Vec<SentenceVerdict>>, out: &mut impl Write) -> Result<(), IoError> {
    for (doc_id, verdicts) in outputs {
        for v in verdicts {
            let record = ModelOutputRecord {
                doc_id: doc_id.clone(),
                sentence_index: v.sentence_index,
                raw_output: v.raw_output.clone(),
            };
            writeln!(out, "{}", serde_json::to_string(&record).expect("record serializes"))?;
        }
    }
    Ok(())
}

pub mod mafalda {
    //! Import shim for the published fallacy corpus.
    //!
    //! Each input line holds the full `text`, character-offset `labels` as
    //! `[start, end, label]` triples and `sentences_with_labels`, a mapping
    //! (possibly JSON-encoded as a string) from each sentence to its labels.
    //! Sentences are ordered by their position in `text`; every character span
    //! becomes the range of sentences it touches. Triples sharing the same
    //! character range are merged into one entry with alternative labels.

    use serde_json::Value;

    use super::*;

    #[derive(Debug, Deserialize)]
    struct RawRecord {
        #[serde(default)]
        id: Option<Value>,
        text: String,
        #[serde(default)]
        labels: Vec<(usize, usize, String)>,
        sentences_with_labels: Value,
        #[serde(default)]
        source: Option<String>,
    }

    fn sentence_keys(value: &Value, line: usize) -> Result<Vec<String>, IoError> {
        let malformed = |message: String| IoError::Malformed { line, message };
        let parsed;
        let object = match value {
            Value::String(s) => {
                parsed = serde_json::from_str::<Value>(s).map_err(|e| malformed(e.to_string()))?;
                &parsed
            }
            other => other,
        };
        match object {
            Value::Object(map) => Ok(map.keys().cloned().collect()),
            _ => Err(malformed("sentences_with_labels is not an object".into())),
        }
    }

    fn char_offsets(text: &str, sentences: &[String], line: usize) -> Result<Vec<(String, usize, usize)>, IoError> {
        let mut located = Vec::with_capacity(sentences.len());
        let mut cursor = 0;
        for sentence in sentences {
            let byte_start = text[cursor..]
                .find(sentence.as_str())
                .map(|i| i + cursor)
                .or_else(|| text.find(sentence.as_str()))
                .ok_or_else(|| IoError::Malformed {
                    line,
                    message: format!("sentence {sentence:?} not found in text"),
                })?;
            cursor = byte_start + sentence.len();
            let start = text[..byte_start].chars().count();
            located.push((sentence.clone(), start, start + sentence.chars().count()));
        }
        located.sort_by_key(|&(_, start, _)| start);
        Ok(located)
    }

    pub fn import_record(taxonomy: &Taxonomy, line: usize, raw: &str) -> Result<DatasetRecord, IoError> {
        let record: RawRecord = parse_line(line, raw)?;
        let keys = sentence_keys(&record.sentences_with_labels, line)?;
        let located = char_offsets(&record.text, &keys, line)?;
        let mut grouped: Vec<((usize, usize), GoldRecord)> = Vec::new();
        for (start, end, label) in &record.labels {
            let touched: Vec<usize> = located
                .iter()
                .enumerate()
                .filter(|(_, (_, s, e))| s < end && start < e)
                .map(|(i, _)| i)
                .collect();
            let (Some(&first), Some(&last)) = (touched.first(), touched.last()) else {
                return Err(IoError::Malformed {
                    line,
                    message: format!("label span [{start}, {end}) covers no sentence"),
                });
            };
            let label = if is_no_fallacy(label) {
                NO_FALLACY_TOKEN.to_string()
            } else {
                resolve_label(taxonomy, line, label)?.canonical_name
            };
            match grouped.iter_mut().find(|(range, _)| *range == (*start, *end)) {
                Some((_, g)) => {
                    if !g.labels.contains(&label) {
                        g.labels.push(label);
                    }
                }
                None => grouped.push((
                    (*start, *end),
                    GoldRecord {
                        start: first,
                        end: last + 1,
                        labels: vec![label],
                    },
                )),
            }
        }
        let doc_id = match record.id {
            Some(Value::String(s)) => s,
            Some(other) => other.to_string(),
            None => format!("doc-{line:05}"),
        };
        Ok(DatasetRecord {
            doc_id,
            sentences: located.into_iter().map(|(s, _, _)| s).collect(),
            source: record.source,
            gold: grouped.into_iter().map(|(_, g)| g).collect(),
        })
    }

    /// Converts a whole file; stops at the first bad line.
    pub fn import(taxonomy: &Taxonomy, text: &str) -> Result<Vec<DatasetRecord>, IoError> {
        records(text)
            .map(|(line, raw)| import_record(taxonomy, line, raw))
            .collect()
    }
}

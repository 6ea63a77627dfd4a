//! Alternative-aware span precision and recall.
//!
//! Every predicted span is credited with its best-matching gold entry and
//! every required gold entry with its best-matching prediction. A pair scores
//! the fraction of shared atoms (normalized by the predicted span for
//! precision and by the gold span for recall), provided the predicted label is
//! one of the gold entry's alternatives. Gold entries that admit "no fallacy"
//! are left out of the recall denominator. An empty prediction has precision 1
//! and an empty required gold set has recall 1.
//!
//! The sum-based variant ([`martino_recall`], [`martino_precision`]) adds up
//! every same-label pair instead of taking the best one, so it can exceed 1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::annotation::{overlap, required_entries, GoldEntry, GoldStandard, PredEntry, Prediction, Span};
use crate::error::ScoreError;
use crate::taxonomy::{to_level, ExtrapolatedLabel, Level1Category, TaxonomyLevel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreTriple {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl ScoreTriple {
    pub fn from_precision_recall(precision: f64, recall: f64) -> Self {
        Self {
            precision,
            recall,
            f1: harmonic_mean(precision, recall),
        }
    }
}

pub fn harmonic_mean(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Numerators and denominators behind one document's precision and recall.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreSums {
    pub precision_sum: f64,
    pub predictions: usize,
    pub recall_sum: f64,
    pub required_gold: usize,
}

impl ScoreSums {
    pub fn precision(&self) -> f64 {
        ratio_or_one(self.precision_sum, self.predictions)
    }

    pub fn recall(&self) -> f64 {
        ratio_or_one(self.recall_sum, self.required_gold)
    }

    pub fn triple(&self) -> ScoreTriple {
        ScoreTriple::from_precision_recall(self.precision(), self.recall())
    }
}

impl std::ops::Add for ScoreSums {
    type Output = ScoreSums;

    fn add(self, rhs: Self) -> Self {
        Self {
            precision_sum: self.precision_sum + rhs.precision_sum,
            predictions: self.predictions + rhs.predictions,
            recall_sum: self.recall_sum + rhs.recall_sum,
            required_gold: self.required_gold + rhs.required_gold,
        }
    }
}

fn ratio_or_one(sum: f64, count: usize) -> f64 {
    if count == 0 {
        1.0
    } else {
        sum / count as f64
    }
}

/// Overlap fraction `|p ∩ g| / norm`, zeroed unless `pred_label` is one of
/// `gold_labels`.
///
/// `norm` must be positive; callers pass `|p|` or `|g|`.
pub fn comparison_score<L: PartialEq>(
    pred: Span,
    pred_label: &L,
    gold: Span,
    gold_labels: &[L],
    norm: usize,
) -> f64 {
    debug_assert!(norm > 0, "normalizer must be positive");
    if !gold_labels.contains(pred_label) {
        return 0.0;
    }
    overlap(pred, gold) as f64 / norm as f64
}

fn best_gold_match<L: PartialEq>(p: &PredEntry<L>, gold: &[GoldEntry<L>]) -> f64 {
    gold.iter()
        .map(|g| comparison_score(p.span, &p.label, g.span, &g.labels, p.span.len()))
        .fold(0.0, f64::max)
}

fn best_pred_match<L: PartialEq>(g: &GoldEntry<L>, pred: &[PredEntry<L>]) -> f64 {
    pred.iter()
        .map(|p| comparison_score(p.span, &p.label, g.span, &g.labels, g.span.len()))
        .fold(0.0, f64::max)
}

pub fn score_sums<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> ScoreSums {
    let precision_sum = pred.iter().map(|p| best_gold_match(p, gold)).sum();
    let (recall_sum, required_gold) = required_entries(gold)
        .map(|g| best_pred_match(g, pred))
        .fold((0.0, 0), |(sum, n), s| (sum + s, n + 1));
    ScoreSums {
        precision_sum,
        predictions: pred.len(),
        recall_sum,
        required_gold,
    }
}

pub fn precision<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> f64 {
    let sum: f64 = pred.iter().map(|p| best_gold_match(p, gold)).sum();
    ratio_or_one(sum, pred.len())
}

pub fn recall<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> f64 {
    let (sum, n) = required_entries(gold)
        .map(|g| best_pred_match(g, pred))
        .fold((0.0, 0), |(sum, n), s| (sum + s, n + 1));
    ratio_or_one(sum, n)
}

pub fn f1<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> ScoreTriple {
    ScoreTriple::from_precision_recall(precision(pred, gold), recall(pred, gold))
}

/// Per-required-gold-entry recall contributions, in gold order.
pub fn recall_contributions<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> Vec<f64> {
    required_entries(gold).map(|g| best_pred_match(g, pred)).collect()
}

pub fn project_gold(gold: &[GoldEntry], level: TaxonomyLevel) -> GoldStandard<ExtrapolatedLabel> {
    gold.iter().map(|g| g.map_labels(|l| to_level(l, level))).collect()
}

pub fn project_prediction(pred: &[PredEntry], level: TaxonomyLevel) -> Prediction<ExtrapolatedLabel> {
    pred.iter().map(|p| p.map_label(|l| to_level(l, level))).collect()
}

/// Projects both sides to `level` entry by entry and scores the result. Spans
/// are neither merged nor deduplicated.
pub fn sums_at_level(pred: &[PredEntry], gold: &[GoldEntry], level: TaxonomyLevel) -> ScoreSums {
    score_sums(&project_prediction(pred, level), &project_gold(gold, level))
}

pub fn score_at_level(pred: &[PredEntry], gold: &[GoldEntry], level: TaxonomyLevel) -> ScoreTriple {
    sums_at_level(pred, gold, level).triple()
}

/// Sum-based recall: every same-label (pred, gold) pair contributes. Not
/// clamped; values above 1 are possible.
pub fn martino_recall<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> f64 {
    let sum: f64 = gold
        .iter()
        .flat_map(|g| {
            pred.iter()
                .map(move |p| comparison_score(p.span, &p.label, g.span, &g.labels, g.span.len()))
        })
        .sum();
    ratio_or_one(sum, gold.len())
}

/// Sum-based precision, the counterpart of [`martino_recall`].
pub fn martino_precision<L: PartialEq>(pred: &[PredEntry<L>], gold: &[GoldEntry<L>]) -> f64 {
    let sum: f64 = pred
        .iter()
        .flat_map(|p| {
            gold.iter()
                .map(move |g| comparison_score(p.span, &p.label, g.span, &g.labels, p.span.len()))
        })
        .sum();
    ratio_or_one(sum, pred.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregateMode {
    /// Average precision and recall over documents, then take the harmonic mean.
    #[default]
    Macro,
    /// Pool numerators and denominators over documents, then divide.
    Micro,
}

impl fmt::Display for AggregateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggregateMode::Macro => "macro",
            AggregateMode::Micro => "micro",
        })
    }
}

pub fn aggregate(docs: &[ScoreSums], mode: AggregateMode) -> Result<ScoreTriple, ScoreError> {
    if docs.is_empty() {
        return Err(ScoreError::NoDocuments);
    }
    Ok(match mode {
        AggregateMode::Macro => {
            let n = docs.len() as f64;
            let p = docs.iter().map(ScoreSums::precision).sum::<f64>() / n;
            let r = docs.iter().map(ScoreSums::recall).sum::<f64>() / n;
            ScoreTriple::from_precision_recall(p, r)
        }
        AggregateMode::Micro => docs
            .iter()
            .copied()
            .fold(ScoreSums::default(), |acc, d| acc + d)
            .triple(),
    })
}

/// Mean of per-document F1 values, the other way to summarize a corpus.
pub fn mean_f1(docs: &[ScoreSums]) -> Result<f64, ScoreError> {
    if docs.is_empty() {
        return Err(ScoreError::NoDocuments);
    }
    Ok(docs.iter().map(|d| d.triple().f1).sum::<f64>() / docs.len() as f64)
}

/// One document's gold and prediction, as fed to [`score_corpus`].
#[derive(Debug, Clone)]
pub struct ScoredDocument<'a> {
    pub doc_id: &'a str,
    pub gold: &'a [GoldEntry],
    pub pred: &'a [PredEntry],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelScores {
    pub level: TaxonomyLevel,
    pub per_document: BTreeMap<String, ScoreTriple>,
    pub aggregate: ScoreTriple,
    pub mean_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreReport {
    pub aggregation_mode: AggregateMode,
    pub levels: Vec<LevelScores>,
}

/// Scores every document at every requested level. Documents are keyed and
/// reported by `doc_id` order regardless of input order.
pub fn score_corpus(
    docs: &[ScoredDocument<'_>],
    levels: &[TaxonomyLevel],
    mode: AggregateMode,
) -> Result<ScoreReport, ScoreError> {
    let levels = levels
        .iter()
        .map(|&level| {
            let sums: BTreeMap<String, ScoreSums> = docs
                .iter()
                .map(|d| (d.doc_id.to_string(), sums_at_level(d.pred, d.gold, level)))
                .collect();
            let ordered: Vec<ScoreSums> = sums.values().copied().collect();
            Ok(LevelScores {
                level,
                aggregate: aggregate(&ordered, mode)?,
                mean_f1: mean_f1(&ordered)?,
                per_document: sums.into_iter().map(|(id, s)| (id, s.triple())).collect(),
            })
        })
        .collect::<Result<Vec<_>, ScoreError>>()?;
    Ok(ScoreReport {
        aggregation_mode: mode,
        levels,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub exact_span: usize,
    pub exact_span_and_correct_label: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactMatchReport {
    pub predicted_span_count: usize,
    pub exact_span_matches: usize,
    pub exact_span_and_correct_label: usize,
    pub per_category: BTreeMap<Level1Category, CategoryCounts>,
    pub unknown_label_count: usize,
}

impl ExactMatchReport {
    pub fn merge(&mut self, other: &ExactMatchReport) {
        self.predicted_span_count += other.predicted_span_count;
        self.exact_span_matches += other.exact_span_matches;
        self.exact_span_and_correct_label += other.exact_span_and_correct_label;
        self.unknown_label_count += other.unknown_label_count;
        for (category, counts) in &other.per_category {
            let entry = self.per_category.entry(*category).or_default();
            entry.exact_span += counts.exact_span;
            entry.exact_span_and_correct_label += counts.exact_span_and_correct_label;
        }
    }
}

/// Counts predictions whose span equals a gold span exactly, and among them
/// those whose label (projected to `level`) is acceptable for that gold span.
///
/// Each matched prediction is attributed to the level-1 category of the gold
/// label it agrees with, or of the first label of the first gold entry on that
/// span when it agrees with none. `unknown_spans` is passed through from
/// normalization, where labels that could not be resolved were dropped.
pub fn exact_match_report(
    pred: &[PredEntry],
    gold: &[GoldEntry],
    level: TaxonomyLevel,
    unknown_spans: usize,
) -> ExactMatchReport {
    let mut report = ExactMatchReport {
        predicted_span_count: pred.len(),
        unknown_label_count: unknown_spans,
        ..Default::default()
    };
    for p in pred {
        let candidates: Vec<&GoldEntry> = gold.iter().filter(|g| g.span == p.span).collect();
        let Some(first) = candidates.first() else {
            continue;
        };
        report.exact_span_matches += 1;
        let projected = to_level(&p.label, level);
        let agreeing = candidates
            .iter()
            .flat_map(|g| g.labels.iter())
            .find(|l| to_level(l, level) == projected);
        let category = match (agreeing, first.labels.first()) {
            (Some(label), _) | (None, Some(label)) => Some(label.level1),
            (None, None) => None,
        };
        if agreeing.is_some() {
            report.exact_span_and_correct_label += 1;
        }
        if let Some(counts) = category.map(|c| report.per_category.entry(c).or_default()) {
            counts.exact_span += 1;
            if agreeing.is_some() {
                counts.exact_span_and_correct_label += 1;
            }
        }
    }
    report
}

/// Each label of each entry becomes its own prediction entry; "no fallacy"
/// alternatives are dropped.
pub fn flatten_to_prediction<L: Clone>(annotation: &[GoldEntry<L>]) -> Prediction<L> {
    annotation
        .iter()
        .flat_map(|g| g.labels.iter().map(move |l| PredEntry::new(g.span, l.clone())))
        .collect()
}

/// Annotation sets keyed by annotator, each keyed by document id.
pub type AnnotatorSets = BTreeMap<String, BTreeMap<String, GoldStandard>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossMatrix {
    pub level: TaxonomyLevel,
    pub annotators: Vec<String>,
    /// `cells[i][j]` scores annotator `j` as the prediction against annotator
    /// `i` as the gold standard.
    pub cells: Vec<Vec<ScoreTriple>>,
}

impl CrossMatrix {
    pub fn get(&self, gold: &str, pred: &str) -> Option<ScoreTriple> {
        let i = self.annotators.iter().position(|a| a == gold)?;
        let j = self.annotators.iter().position(|a| a == pred)?;
        Some(self.cells[i][j])
    }
}

/// Scores every ordered pair of annotators, treating one as gold and the
/// flattened other as prediction. Document-level results are aggregated with
/// `mode`.
pub fn cross_compare(
    annotations: &AnnotatorSets,
    level: TaxonomyLevel,
    mode: AggregateMode,
) -> Result<CrossMatrix, ScoreError> {
    if annotations.len() < 2 {
        return Err(ScoreError::TooFewAnnotators(annotations.len()));
    }
    let doc_ids: BTreeSet<&String> = annotations.values().flat_map(|docs| docs.keys()).collect();
    for (annotator, docs) in annotations {
        if let Some(missing) = doc_ids.iter().find(|id| !docs.contains_key(id.as_str())) {
            return Err(ScoreError::DocumentMismatch {
                annotator: annotator.clone(),
                doc_id: (*missing).clone(),
            });
        }
    }
    let annotators: Vec<String> = annotations.keys().cloned().collect();
    let cells = annotations
        .values()
        .map(|gold_docs| {
            annotations
                .values()
                .map(|pred_docs| {
                    let sums: Vec<ScoreSums> = doc_ids
                        .iter()
                        .map(|id| {
                            let pred = flatten_to_prediction(&pred_docs[id.as_str()]);
                            sums_at_level(&pred, &gold_docs[id.as_str()], level)
                        })
                        .collect();
                    aggregate(&sums, mode)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CrossMatrix {
        level,
        annotators,
        cells,
    })
}

//! Scoring span-level fallacy annotations against disjunctive gold standards.
//!
//! A gold standard may offer several acceptable labels for one span, and may
//! mark a span as optional by including "no fallacy" among its alternatives.
//! [`scoring`] implements precision and recall that respect both, at any level
//! of the three-level [`taxonomy`]. [`normalize`] turns free-form per-sentence
//! model outputs into span predictions, [`baseline`] is a seeded uniform random
//! labeler, and [`io`] reads and writes the line-delimited file formats.

pub mod annotation;
pub mod baseline;
pub mod error;
pub mod io;
pub mod normalize;
pub mod scoring;
pub mod taxonomy;

pub use annotation::{g_minus, overlap, validate, Document, GoldEntry, GoldStandard, PredEntry, Prediction, Span, Violation};
pub use error::{IoError, NormalizeError, ScoreError, TaxonomyError};
pub use scoring::{
    aggregate, comparison_score, cross_compare, exact_match_report, f1, martino_precision, martino_recall, precision,
    recall, score_at_level, AggregateMode, ExactMatchReport, ScoreReport, ScoreSums, ScoreTriple,
};
pub use taxonomy::{parent_category, to_level, ExtrapolatedLabel, FallacyLabel, Level1Category, Taxonomy, TaxonomyLevel};

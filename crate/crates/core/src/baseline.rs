//! Uniform random sentence labeler.
//!
//! Each sentence independently draws one outcome from the taxonomy's labels
//! plus "no fallacy" (24 outcomes with the default inventory). Consecutive
//! sentences with the same outcome are then grouped into spans. The generator
//! for a document is seeded from the run seed and the document id, so results
//! do not depend on the order or parallelism in which documents are processed.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::annotation::{Document, Prediction};
use crate::normalize::{group_spans, SentenceVerdict, Verdict};
use crate::taxonomy::Taxonomy;

pub const DEFAULT_SEED: u64 = 20_231_115;

#[derive(Debug, Clone)]
pub struct BaselineConfig<'a> {
    pub seed: u64,
    pub taxonomy: &'a Taxonomy,
}

impl<'a> BaselineConfig<'a> {
    pub fn new(taxonomy: &'a Taxonomy, seed: u64) -> Self {
        Self { seed, taxonomy }
    }

    /// Every label followed by "no fallacy".
    pub fn label_universe(&self) -> Vec<Verdict> {
        self.taxonomy
            .labels()
            .iter()
            .cloned()
            .map(Verdict::Fallacy)
            .chain(std::iter::once(Verdict::NoFallacy))
            .collect()
    }
}

pub fn document_rng(seed: u64, doc_id: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(doc_id.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Outcome index drawn for each sentence; indices refer to
/// [`BaselineConfig::label_universe`].
pub fn draw_outcomes(doc_id: &str, sentences: usize, cfg: &BaselineConfig<'_>) -> Vec<usize> {
    let universe = cfg.taxonomy.len() + 1;
    let mut rng = document_rng(cfg.seed, doc_id);
    (0..sentences).map(|_| rng.gen_range(0..universe)).collect()
}

pub fn random_predict(doc: &Document, cfg: &BaselineConfig<'_>) -> Prediction {
    let universe = cfg.label_universe();
    let verdicts: Vec<SentenceVerdict> = draw_outcomes(&doc.doc_id, doc.len(), cfg)
        .into_iter()
        .enumerate()
        .map(|(i, outcome)| SentenceVerdict {
            sentence_index: i,
            raw_output: String::new(),
            resolved: universe[outcome].clone(),
        })
        .collect();
    group_spans(&verdicts)
        .expect("verdicts are generated in index order")
        .prediction
}

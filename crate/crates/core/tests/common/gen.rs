//! Random small instances: at most 6 sentences and 4 distinct labels.

use fallacy_eval::{GoldEntry, PredEntry, Span};
use rand::seq::SliceRandom;
use rand::Rng;

pub const MAX_SENTENCES: usize = 6;
pub const MAX_LABELS: u8 = 4;

#[derive(Debug, Clone)]
pub struct Instance {
    pub sentences: usize,
    pub gold: Vec<GoldEntry<u8>>,
    pub pred: Vec<PredEntry<u8>>,
}

pub fn span(rng: &mut impl Rng, n: usize) -> Span {
    let start = rng.gen_range(0..n);
    let end = rng.gen_range(start + 1..=n);
    Span::new(start, end)
}

pub fn label_set(rng: &mut impl Rng) -> Vec<u8> {
    let mut pool: Vec<u8> = (0..MAX_LABELS).collect();
    pool.shuffle(rng);
    pool.truncate(rng.gen_range(1..=2));
    pool
}

pub fn instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(1..=MAX_SENTENCES);
    let gold = (0..rng.gen_range(0..=4))
        .map(|_| GoldEntry {
            span: span(rng, n),
            labels: label_set(rng),
            no_fallacy: rng.gen_bool(0.3),
        })
        .collect();
    let pred = (0..rng.gen_range(0..=5))
        .map(|_| PredEntry::new(span(rng, n), rng.gen_range(0..MAX_LABELS)))
        .collect();
    Instance { sentences: n, gold, pred }
}

/// Single-sentence spans, singleton gold label sets, no optional entries.
pub fn singleton_instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(1..=MAX_SENTENCES);
    let gold = (0..rng.gen_range(0..=4))
        .map(|_| GoldEntry::new(Span::sentence(rng.gen_range(0..n)), vec![rng.gen_range(0..MAX_LABELS)]))
        .collect();
    let pred = (0..rng.gen_range(0..=5))
        .map(|_| PredEntry::new(Span::sentence(rng.gen_range(0..n)), rng.gen_range(0..MAX_LABELS)))
        .collect();
    Instance { sentences: n, gold, pred }
}

fn spans_meet(a: Span, b: Span) -> bool {
    a.start < b.end && b.start < a.end
}

/// No alternatives, no same-label overlaps within either side, and every
/// span overlaps at most one span of the other side.
pub fn satisfies_equivalence_conditions(inst: &Instance) -> bool {
    let no_alternatives = inst.gold.iter().all(|g| g.labels.len() == 1 && !g.no_fallacy);
    let gold_disjoint = inst.gold.iter().enumerate().all(|(i, a)| {
        inst.gold[i + 1..]
            .iter()
            .all(|b| a.labels[0] != b.labels[0] || !spans_meet(a.span, b.span))
    });
    let pred_disjoint = inst.pred.iter().enumerate().all(|(i, a)| {
        inst.pred[i + 1..]
            .iter()
            .all(|b| a.label != b.label || !spans_meet(a.span, b.span))
    });
    let gold_single = inst
        .gold
        .iter()
        .all(|g| inst.pred.iter().filter(|p| spans_meet(g.span, p.span)).count() <= 1);
    let pred_single = inst
        .pred
        .iter()
        .all(|p| inst.gold.iter().filter(|g| spans_meet(g.span, p.span)).count() <= 1);
    no_alternatives && gold_disjoint && pred_disjoint && gold_single && pred_single
}

/// Rejection-samples an instance meeting [`satisfies_equivalence_conditions`].
pub fn equivalence_instance(rng: &mut impl Rng) -> Instance {
    loop {
        let n = rng.gen_range(1..=MAX_SENTENCES);
        let inst = Instance {
            sentences: n,
            gold: (0..rng.gen_range(0..=3))
                .map(|_| GoldEntry::new(span(rng, n), vec![rng.gen_range(0..MAX_LABELS)]))
                .collect(),
            pred: (0..rng.gen_range(0..=3))
                .map(|_| PredEntry::new(span(rng, n), rng.gen_range(0..MAX_LABELS)))
                .collect(),
        };
        if satisfies_equivalence_conditions(&inst) {
            return inst;
        }
    }
}

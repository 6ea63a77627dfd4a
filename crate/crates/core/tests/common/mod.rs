//! Edge-case fixtures for the disjunctive metric, one row per printed case.
#![allow(dead_code)]

use fallacy_eval::{FallacyLabel, GoldEntry, PredEntry, Span, Taxonomy, TaxonomyLevel};

pub struct Labels {
    pub l1: FallacyLabel,
    pub l2: FallacyLabel,
    pub l3: FallacyLabel,
    pub l4: FallacyLabel,
}

/// `l1`..`l3` share the level-1 category logic; `l4` is credibility.
pub fn labels() -> Labels {
    let t = Taxonomy::default();
    let get = |n: &str| t.get(n).unwrap().clone();
    Labels {
        l1: get("hasty generalization"),
        l2: get("false dilemma"),
        l3: get("slippery slope"),
        l4: get("ad populum"),
    }
}

pub struct EdgeCase {
    pub id: &'static str,
    pub levels: &'static [TaxonomyLevel],
    pub gold: Vec<GoldEntry>,
    pub pred: Vec<PredEntry>,
    pub recall: f64,
    pub precision: f64,
}

const L2: &[TaxonomyLevel] = &[TaxonomyLevel::L2];
const L1_L0: &[TaxonomyLevel] = &[TaxonomyLevel::L1, TaxonomyLevel::L0];

// sentence atoms: "Lorem ipsum" = 0, "Ut enim" = 1, "Sed do" = 2
const A: Span = Span::new(0, 1);
const B: Span = Span::new(1, 2);
const C: Span = Span::new(2, 3);
const AB: Span = Span::new(0, 2);

fn req(span: Span, labels: &[&FallacyLabel]) -> GoldEntry {
    GoldEntry::new(span, labels.iter().map(|&l| l.clone()).collect())
}

fn opt(span: Span, labels: &[&FallacyLabel]) -> GoldEntry {
    GoldEntry::optional(span, labels.iter().map(|&l| l.clone()).collect())
}

fn p(span: Span, label: &FallacyLabel) -> PredEntry {
    PredEntry::new(span, label.clone())
}

pub fn edge_cases() -> Vec<EdgeCase> {
    let Labels { l1, l2, l3, l4 } = labels();
    // level-1/level-0 tables predict a label that only agrees with the gold
    // after projection
    let f = &l3;
    let mut cases = Vec::new();
    let mut add = |id, levels, gold: &Vec<GoldEntry>, pred: Vec<PredEntry>, recall, precision| {
        cases.push(EdgeCase {
            id,
            levels,
            gold: gold.clone(),
            pred,
            recall,
            precision,
        })
    };

    let g = vec![opt(A, &[&l1]), req(B, &[&l2]), req(C, &[&l3])];
    add("0.1", L2, &g, vec![p(B, &l2)], 0.5, 1.0);
    add("0.2", L2, &g, vec![p(A, &l1), p(B, &l2)], 0.5, 1.0);
    add("0.3", L2, &g, vec![p(B, &l2), p(C, &l4)], 0.5, 0.5);
    add("0.4", L2, &g, vec![p(A, &l1), p(B, &l2), p(C, &l4)], 0.5, 2.0 / 3.0);

    let g = vec![opt(A, &[&l1])];
    add("1.1", L2, &g, vec![p(A, &l1)], 1.0, 1.0);
    add("1.2", L2, &g, vec![p(A, &l3)], 1.0, 0.0);
    add("1.3", L2, &g, vec![], 1.0, 1.0);
    add("1.4", L2, &g, vec![p(B, &l1)], 1.0, 0.0);
    add("1.5", L2, &g, vec![p(AB, &l3)], 1.0, 0.0);

    let g = vec![req(A, &[&l1])];
    add("2.1", L2, &g, vec![p(A, &l1)], 1.0, 1.0);
    add("2.2", L2, &g, vec![p(A, &l3)], 0.0, 0.0);
    add("2.3", L2, &g, vec![p(B, &l1)], 0.0, 0.0);
    add("2.4", L2, &g, vec![], 0.0, 1.0);

    let g = vec![];
    add("3.1", L2, &g, vec![p(A, &l1)], 1.0, 0.0);
    add("3.2", L2, &g, vec![], 1.0, 1.0);

    let g = vec![opt(A, &[&l1]), req(B, &[&l2])];
    add("4.1", L2, &g, vec![p(A, &l1)], 0.0, 1.0);
    add("4.2", L2, &g, vec![p(A, &l3)], 0.0, 0.0);
    add("4.3", L2, &g, vec![p(B, &l2)], 1.0, 1.0);
    add("4.4", L2, &g, vec![p(B, &l3)], 0.0, 0.0);

    let g = vec![opt(AB, &[&l1])];
    add("5.1", L2, &g, vec![p(AB, &l1)], 1.0, 1.0);
    add("5.2", L2, &g, vec![], 1.0, 1.0);
    add("5.3", L2, &g, vec![p(A, &l1)], 1.0, 1.0);
    add("5.4", L2, &g, vec![p(AB, &l3)], 1.0, 0.0);
    add("5.5", L2, &g, vec![p(B, &l3)], 1.0, 0.0);

    let g = vec![opt(AB, &[&l1]), req(B, &[&l2])];
    add("6.1", L2, &g, vec![p(AB, &l1), p(B, &l2)], 1.0, 1.0);
    add("6.2", L2, &g, vec![p(B, &l2)], 1.0, 1.0);
    add("6.3", L2, &g, vec![p(AB, &l1)], 0.0, 1.0);
    add("6.4", L2, &g, vec![], 0.0, 1.0);
    add("6.5", L2, &g, vec![p(A, &l1), p(B, &l2)], 1.0, 1.0);
    add("6.6", L2, &g, vec![p(A, &l1)], 0.0, 1.0);
    add("6.7", L2, &g, vec![p(B, &l3)], 0.0, 0.0);

    let g = vec![req(AB, &[&l1]), req(B, &[&l2])];
    add("7.1", L2, &g, vec![p(AB, &l1), p(B, &l2)], 1.0, 1.0);
    add("7.2", L2, &g, vec![p(B, &l2)], 0.5, 1.0);
    add("7.3", L2, &g, vec![p(AB, &l1)], 0.5, 1.0);
    add("7.4", L2, &g, vec![], 0.0, 1.0);
    add("7.5", L2, &g, vec![p(A, &l1), p(B, &l2)], 0.75, 1.0);
    add("7.6", L2, &g, vec![p(A, &l1)], 0.25, 1.0);
    add("7.7", L2, &g, vec![p(B, &l3)], 0.0, 0.0);

    let g = vec![req(AB, &[&l1]), req(B, &[&l2])];
    add("8.1", L1_L0, &g, vec![p(AB, f), p(B, f)], 1.0, 1.0);
    add("8.2", L1_L0, &g, vec![p(B, f)], 0.75, 1.0);
    add("8.3", L1_L0, &g, vec![p(AB, f)], 1.0, 1.0);
    add("8.4", L1_L0, &g, vec![p(B, f), p(B, f)], 0.75, 0.5);
    add("8.5", L1_L0, &g, vec![p(A, f), p(B, f)], 0.75, 1.0);
    add("8.6", L1_L0, &g, vec![p(A, &l1)], 0.25, 1.0);
    add("8.7", L1_L0, &g, vec![p(A, &l2)], 0.25, 1.0);

    let g = vec![opt(B, &[&l1]), req(B, &[&l2])];
    add("9.1", L1_L0, &g, vec![p(B, f), p(B, f)], 1.0, 1.0);
    add("9.2", L1_L0, &g, vec![p(B, &l1)], 1.0, 1.0);
    add("9.3", L1_L0, &g, vec![p(B, &l2)], 1.0, 1.0);
    add("9.4", L1_L0, &g, vec![p(AB, f)], 1.0, 0.5);
    add("9.5", L1_L0, &g, vec![], 0.0, 1.0);
    add("9.6", L1_L0, &g, vec![p(A, f)], 0.0, 0.0);

    let g = vec![req(A, &[&l1]), req(A, &[&l2])];
    add("10.1", L2, &g, vec![p(A, &l1)], 0.5, 1.0);
    add("10.2", L2, &g, vec![p(A, &l3)], 0.0, 0.0);
    add("10.3", L2, &g, vec![p(B, &l1)], 0.0, 0.0);
    add("10.4", L2, &g, vec![], 0.0, 1.0);
    add("10.5", L2, &g, vec![p(A, &l1), p(A, &l2)], 1.0, 1.0);

    let g = vec![opt(A, &[&l1]), req(A, &[&l2])];
    add("11.1", L2, &g, vec![p(A, &l1)], 1.0, 1.0);
    add("11.2", L2, &g, vec![p(A, &l3)], 0.0, 0.0);
    add("11.3", L2, &g, vec![p(B, &l1)], 0.0, 0.0);
    add("11.4", L2, &g, vec![], 0.0, 1.0);
    add("11.5", L2, &g, vec![p(A, &l1), p(A, &l2)], 1.0, 1.0);

    cases
}

/// 3-sentence document the fixtures refer to.
pub fn lorem_sentences() -> Vec<String> {
    ["Lorem ipsum dolor sit amet.", "Ut enim ad minim veniam.", "Sed do eiusmod tempor incididunt."]
        .map(String::from)
        .to_vec()
}

pub mod gen;
pub mod oracle;

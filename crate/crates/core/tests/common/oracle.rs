//! Independent reference computations, written without the library's scoring
//! code.

use fallacy_eval::{GoldEntry, PredEntry, Span};

/// Set-based precision and recall for single-sentence spans and singleton
/// label sets: a prediction is a true positive iff an identical (span, label)
/// pair is in the gold, and vice versa.
pub fn standard_precision_recall(gold: &[GoldEntry<u8>], pred: &[PredEntry<u8>]) -> (f64, f64) {
    let gold_has = |s: Span, l: u8| gold.iter().any(|g| g.span == s && g.labels == [l]);
    let pred_has = |s: Span, l: u8| pred.iter().any(|p| p.span == s && p.label == l);
    let tp_pred = pred.iter().filter(|p| gold_has(p.span, p.label)).count();
    let tp_gold = gold.iter().filter(|g| pred_has(g.span, g.labels[0])).count();
    let precision = if pred.is_empty() { 1.0 } else { tp_pred as f64 / pred.len() as f64 };
    let recall = if gold.is_empty() { 1.0 } else { tp_gold as f64 / gold.len() as f64 };
    (precision, recall)
}

/// Maximal runs of one fallacy label, found by checking every interval.
pub fn brute_force_runs<T: PartialEq + Clone>(labels: &[Option<T>]) -> Vec<(Span, T)> {
    let n = labels.len();
    let mut runs = Vec::new();
    for start in 0..n {
        for end in start + 1..=n {
            let Some(first) = labels[start].clone() else { continue };
            let uniform = labels[start..end].iter().all(|l| l.as_ref() == Some(&first));
            let left_closed = start == 0 || labels[start - 1].as_ref() != Some(&first);
            let right_closed = end == n || labels[end].as_ref() != Some(&first);
            if uniform && left_closed && right_closed {
                runs.push((Span::new(start, end), first));
            }
        }
    }
    runs
}

/// Sentence-by-sentence overlap count.
pub fn atom_overlap(a: Span, b: Span) -> usize {
    (a.start..a.end).filter(|i| b.contains(*i)).count()
}

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fallacy_eval::baseline::{random_predict, BaselineConfig};
use fallacy_eval::normalize::{group_spans, SentenceVerdict};
use fallacy_eval::scoring::sums_at_level;
use fallacy_eval::{Document, GoldEntry, PredEntry, Span, Taxonomy, TaxonomyLevel};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_span(rng: &mut StdRng, n: usize) -> Span {
    let start = rng.gen_range(0..n);
    Span::new(start, rng.gen_range(start + 1..=(start + 4).min(n)))
}

/// A document of `n` sentences with roughly one gold and one predicted span
/// per four sentences.
fn instance(t: &Taxonomy, n: usize, seed: u64) -> (Vec<GoldEntry>, Vec<PredEntry>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let labels = t.labels();
    let pick = |rng: &mut StdRng| labels[rng.gen_range(0..labels.len())].clone();
    let gold = (0..n / 4)
        .map(|_| {
            let span = random_span(&mut rng, n);
            let mut entry = GoldEntry::new(span, vec![pick(&mut rng)]);
            if rng.gen_bool(0.2) {
                entry.labels.push(pick(&mut rng));
            }
            entry.no_fallacy = rng.gen_bool(0.1);
            entry
        })
        .collect();
    let pred = (0..n / 4)
        .map(|_| PredEntry::new(random_span(&mut rng, n), pick(&mut rng)))
        .collect();
    (gold, pred)
}

fn bench_scoring(c: &mut Criterion) {
    let t = Taxonomy::default();
    let mut group = c.benchmark_group("score_document");
    for n in [16, 64, 256] {
        let (gold, pred) = instance(&t, n, n as u64);
        for level in [TaxonomyLevel::L2, TaxonomyLevel::L0] {
            group.bench_with_input(BenchmarkId::new(format!("level{level}"), n), &n, |b, _| {
                b.iter(|| sums_at_level(black_box(&pred), black_box(&gold), level))
            });
        }
    }
    group.finish();
}

fn bench_normalize(c: &mut Criterion) {
    let t = Taxonomy::default();
    let outputs: Vec<String> = (0..200)
        .map(|i| match i % 4 {
            0 => "This sentence is an example of the fallacy of hasty generalization.".to_string(),
            1 => "This sentence is not part of a fallacious argument.".to_string(),
            2 => "It looks like an appeal to (false) authority to me.".to_string(),
            _ => "Hard to say.".to_string(),
        })
        .collect();
    c.bench_function("resolve_and_group_200", |b| {
        b.iter(|| {
            let verdicts: Vec<SentenceVerdict> = outputs
                .iter()
                .enumerate()
                .map(|(i, o)| SentenceVerdict::resolve(&t, i, o.as_str()))
                .collect();
            group_spans(black_box(&verdicts)).unwrap()
        })
    });
}

fn bench_baseline(c: &mut Criterion) {
    let t = Taxonomy::default();
    let cfg = BaselineConfig::new(&t, 1);
    let doc = Document::new("bench", (0..500).map(|i| format!("sentence {i}")).collect());
    c.bench_function("random_predict_500", |b| b.iter(|| random_predict(black_box(&doc), &cfg)));
}

criterion_group!(benches, bench_scoring, bench_normalize, bench_baseline);
criterion_main!(benches);

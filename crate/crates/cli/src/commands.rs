use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use fallacy_eval::baseline::{random_predict, BaselineConfig};
use fallacy_eval::io::{self, mafalda, AnnotatedDocument, Dataset, PredictionSet};
use fallacy_eval::normalize::{group_spans, group_spans_multi};
use fallacy_eval::scoring::{
    cross_compare, exact_match_report, project_gold, project_prediction, score_corpus, AnnotatorSets, CrossMatrix,
    ExactMatchReport, ScoreReport, ScoredDocument,
};
use fallacy_eval::{martino_precision, martino_recall, precision, recall, AggregateMode, Taxonomy, TaxonomyLevel};
use serde::Serialize;

use crate::output::{round3, sink, write_json, write_tsv};
use crate::{levels, Command, DatasetArgs, Format, OptionalPredArgs, OutputArgs, PredArgs};

/// Rows whose two metric families differ by more than this are flagged.
const DIVERGENCE_TOL: f64 = 1e-12;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Validate { input, pred } => validate(&input, &pred),
        Command::Score {
            input,
            pred,
            scoring,
            output,
        } => score(&input, &pred, &levels(&scoring.level), scoring.agg.into(), &output),
        Command::Baseline { input, seed, out } => baseline(&input, seed, out.as_deref()),
        Command::Normalize {
            input,
            model_out,
            multi_label,
            out,
        } => normalize(&input, &model_out, multi_label, out.as_deref()),
        Command::CompareMetrics {
            input,
            pred,
            level,
            output,
        } => compare_metrics(&input, &pred, &levels(&level), &output),
        Command::Cross {
            annotators,
            taxonomy,
            scoring,
            output,
        } => cross(&annotators, taxonomy.as_deref(), &levels(&scoring.level), scoring.agg.into(), &output),
        Command::Report {
            input,
            pred,
            level,
            output,
        } => report(&input, &pred, &levels(&level), &output),
        Command::Import {
            input,
            taxonomy,
            strict,
            out,
        } => import(&input, taxonomy.as_deref(), strict, out.as_deref()),
        Command::Taxonomy { taxonomy, out } => {
            let t = load_taxonomy(taxonomy.as_deref())?;
            let mut w = sink(out.as_deref())?;
            writeln!(w, "{}", t.to_json())?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_taxonomy(path: Option<&Path>) -> Result<Taxonomy> {
    match path {
        Some(p) => Taxonomy::from_path(p).with_context(|| format!("cannot load taxonomy {}", p.display())),
        None => Ok(Taxonomy::default()),
    }
}

fn load_inputs(args: &DatasetArgs) -> Result<(Taxonomy, Dataset)> {
    let taxonomy = load_taxonomy(args.taxonomy.as_deref())?;
    let dataset = io::load_dataset(&taxonomy, &args.dataset)
        .with_context(|| format!("invalid dataset {}", args.dataset.display()))?;
    if dataset.is_empty() {
        bail!("dataset {} has no documents", args.dataset.display());
    }
    Ok((taxonomy, dataset))
}

struct Predictions {
    by_doc: PredictionSet,
    /// Unresolved runs per document; zero for prediction files.
    unknown: BTreeMap<String, usize>,
}

fn from_model_outputs(taxonomy: &Taxonomy, dataset: &Dataset, path: &Path, multi_label: bool) -> Result<Predictions> {
    let outputs = io::load_model_outputs(taxonomy, dataset, path)
        .with_context(|| format!("invalid model outputs {}", path.display()))?;
    let mut by_doc = PredictionSet::new();
    let mut unknown = BTreeMap::new();
    for (doc_id, verdicts) in outputs {
        let grouped = if multi_label {
            group_spans_multi(taxonomy, &verdicts)
        } else {
            group_spans(&verdicts)
        }
        .with_context(|| format!("document {doc_id:?}"))?;
        unknown.insert(doc_id.clone(), grouped.unknown_spans);
        by_doc.insert(doc_id, grouped.prediction);
    }
    Ok(Predictions { by_doc, unknown })
}

fn load_predictions(taxonomy: &Taxonomy, dataset: &Dataset, args: &PredArgs) -> Result<Predictions> {
    match (&args.pred, &args.model_out) {
        (Some(path), _) => {
            let by_doc = io::load_predictions(taxonomy, dataset, path)
                .with_context(|| format!("invalid predictions {}", path.display()))?;
            let unknown = by_doc.keys().map(|k| (k.clone(), 0)).collect();
            Ok(Predictions { by_doc, unknown })
        }
        (None, Some(path)) => from_model_outputs(taxonomy, dataset, path, args.multi_label),
        (None, None) => bail!("either --pred or --model-out is required"),
    }
}

fn scored<'a>(dataset: &'a Dataset, preds: &'a PredictionSet) -> Vec<ScoredDocument<'a>> {
    dataset
        .documents
        .iter()
        .map(|d| ScoredDocument {
            doc_id: &d.document.doc_id,
            gold: &d.gold,
            pred: &preds[&d.document.doc_id],
        })
        .collect()
}

fn summarize(report: &ScoreReport, docs: usize) {
    for level in &report.levels {
        let a = level.aggregate;
        eprintln!(
            "level {}: precision {} recall {} f1 {} ({}, {docs} documents; mean per-document f1 {})",
            level.level,
            round3(a.precision),
            round3(a.recall),
            round3(a.f1),
            report.aggregation_mode,
            round3(level.mean_f1)
        );
    }
}

fn score(
    input: &DatasetArgs,
    pred: &PredArgs,
    levels: &[TaxonomyLevel],
    mode: AggregateMode,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let (taxonomy, dataset) = load_inputs(input)?;
    let preds = load_predictions(&taxonomy, &dataset, pred)?;
    let report = score_corpus(&scored(&dataset, &preds.by_doc), levels, mode)?;
    match output.format {
        Format::Json => write_json(output.out.as_deref(), &report)?,
        Format::Tsv => {
            let mut rows = Vec::new();
            for level in &report.levels {
                for (doc_id, t) in &level.per_document {
                    rows.push(triple_row(level.level, doc_id, t.precision, t.recall, t.f1));
                }
                let a = level.aggregate;
                rows.push(triple_row(level.level, "__aggregate__", a.precision, a.recall, a.f1));
                rows.push(vec![
                    level.level.to_string(),
                    "__mean_f1__".into(),
                    String::new(),
                    String::new(),
                    level.mean_f1.to_string(),
                ]);
            }
            write_tsv(
                output.out.as_deref(),
                &["level", "doc_id", "precision", "recall", "f1"],
                &rows,
            )?;
        }
    }
    summarize(&report, dataset.len());
    let unknown: usize = preds.unknown.values().sum();
    if unknown > 0 {
        eprintln!("{unknown} unresolved output runs were dropped");
    }
    Ok(ExitCode::SUCCESS)
}

fn triple_row(level: TaxonomyLevel, doc_id: &str, p: f64, r: f64, f1: f64) -> Vec<String> {
    vec![level.to_string(), doc_id.to_string(), p.to_string(), r.to_string(), f1.to_string()]
}

fn baseline(input: &DatasetArgs, seed: u64, out: Option<&Path>) -> Result<ExitCode> {
    let (taxonomy, dataset) = load_inputs(input)?;
    let cfg = BaselineConfig::new(&taxonomy, seed);
    let preds: PredictionSet = dataset
        .documents
        .iter()
        .map(|d| (d.document.doc_id.clone(), random_predict(&d.document, &cfg)))
        .collect();
    let mut w = sink(out)?;
    io::write_predictions(&preds, &mut w)?;
    w.flush()?;
    eprintln!("random baseline, seed {seed}");
    let report = score_corpus(&scored(&dataset, &preds), &TaxonomyLevel::ALL, AggregateMode::Macro)?;
    summarize(&report, dataset.len());
    Ok(ExitCode::SUCCESS)
}

fn normalize(input: &DatasetArgs, model_out: &Path, multi_label: bool, out: Option<&Path>) -> Result<ExitCode> {
    let (taxonomy, dataset) = load_inputs(input)?;
    let preds = from_model_outputs(&taxonomy, &dataset, model_out, multi_label)?;
    let mut w = sink(out)?;
    io::write_predictions(&preds.by_doc, &mut w)?;
    w.flush()?;
    let spans: usize = preds.by_doc.values().map(Vec::len).sum();
    let unknown: usize = preds.unknown.values().sum();
    eprintln!(
        "{} documents, {spans} predicted spans, {unknown} unresolved output runs",
        preds.by_doc.len()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct MetricComparison {
    doc_id: String,
    level: TaxonomyLevel,
    recall: f64,
    precision: f64,
    sum_recall: f64,
    sum_precision: f64,
    divergent: bool,
    exceeds_one: bool,
}

fn compare_metrics(
    input: &DatasetArgs,
    pred: &PredArgs,
    levels: &[TaxonomyLevel],
    output: &OutputArgs,
) -> Result<ExitCode> {
    let (taxonomy, dataset) = load_inputs(input)?;
    let preds = load_predictions(&taxonomy, &dataset, pred)?;
    let mut rows = Vec::new();
    for &level in levels {
        for doc in &dataset.documents {
            let gold = project_gold(&doc.gold, level);
            let pred = project_prediction(&preds.by_doc[&doc.document.doc_id], level);
            let (r, p) = (recall(&pred, &gold), precision(&pred, &gold));
            let (rm, pm) = (martino_recall(&pred, &gold), martino_precision(&pred, &gold));
            rows.push(MetricComparison {
                doc_id: doc.document.doc_id.clone(),
                level,
                recall: r,
                precision: p,
                sum_recall: rm,
                sum_precision: pm,
                divergent: (r - rm).abs() > DIVERGENCE_TOL || (p - pm).abs() > DIVERGENCE_TOL,
                exceeds_one: rm > 1.0 || pm > 1.0,
            });
        }
    }
    match output.format {
        Format::Json => write_json(output.out.as_deref(), &rows)?,
        Format::Tsv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.level.to_string(),
                        r.doc_id.clone(),
                        r.recall.to_string(),
                        r.precision.to_string(),
                        r.sum_recall.to_string(),
                        r.sum_precision.to_string(),
                        r.divergent.to_string(),
                        r.exceeds_one.to_string(),
                    ]
                })
                .collect();
            write_tsv(
                output.out.as_deref(),
                &[
                    "level",
                    "doc_id",
                    "recall",
                    "precision",
                    "sum_recall",
                    "sum_precision",
                    "divergent",
                    "exceeds_one",
                ],
                &table,
            )?;
        }
    }
    for r in rows.iter().filter(|r| r.divergent) {
        eprintln!(
            "level {} {}: recall {} vs {}, precision {} vs {}{}",
            r.level,
            r.doc_id,
            round3(r.recall),
            round3(r.sum_recall),
            round3(r.precision),
            round3(r.sum_precision),
            if r.exceeds_one { " (sum-based score above 1)" } else { "" }
        );
    }
    eprintln!(
        "{} of {} rows diverge",
        rows.iter().filter(|r| r.divergent).count(),
        rows.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cross(
    annotators: &[(String, std::path::PathBuf)],
    taxonomy: Option<&Path>,
    levels: &[TaxonomyLevel],
    mode: AggregateMode,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let taxonomy = load_taxonomy(taxonomy)?;
    let mut sets = AnnotatorSets::new();
    for (name, path) in annotators {
        let dataset = io::load_dataset(&taxonomy, path)
            .with_context(|| format!("invalid annotation file {}", path.display()))?;
        let docs = dataset
            .documents
            .into_iter()
            .map(|d| (d.document.doc_id, d.gold))
            .collect();
        if sets.insert(name.clone(), docs).is_some() {
            bail!("annotator {name:?} given twice");
        }
    }
    let matrices: Vec<CrossMatrix> = levels
        .iter()
        .map(|&level| cross_compare(&sets, level, mode))
        .collect::<Result<_, _>>()?;
    match output.format {
        Format::Json => write_json(output.out.as_deref(), &matrices)?,
        Format::Tsv => {
            let mut rows = Vec::new();
            for m in &matrices {
                for (i, gold) in m.annotators.iter().enumerate() {
                    for (j, pred) in m.annotators.iter().enumerate() {
                        let t = m.cells[i][j];
                        rows.push(vec![
                            m.level.to_string(),
                            gold.clone(),
                            pred.clone(),
                            t.precision.to_string(),
                            t.recall.to_string(),
                            t.f1.to_string(),
                        ]);
                    }
                }
            }
            write_tsv(
                output.out.as_deref(),
                &["level", "gold", "pred", "precision", "recall", "f1"],
                &rows,
            )?;
        }
    }
    for m in &matrices {
        eprintln!("level {} f1 ({mode}; rows are gold, columns prediction):", m.level);
        eprintln!("\t{}", m.annotators.join("\t"));
        for (name, row) in m.annotators.iter().zip(&m.cells) {
            let cells: Vec<String> = row.iter().map(|t| round3(t.f1)).collect();
            eprintln!("{name}\t{}", cells.join("\t"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct LevelReport {
    level: TaxonomyLevel,
    #[serde(flatten)]
    report: ExactMatchReport,
}

fn report(input: &DatasetArgs, pred: &PredArgs, levels: &[TaxonomyLevel], output: &OutputArgs) -> Result<ExitCode> {
    let (taxonomy, dataset) = load_inputs(input)?;
    let preds = load_predictions(&taxonomy, &dataset, pred)?;
    let reports: Vec<LevelReport> = levels
        .iter()
        .map(|&level| {
            let mut total = ExactMatchReport::default();
            for doc in &dataset.documents {
                let id = &doc.document.doc_id;
                total.merge(&exact_match_report(&preds.by_doc[id], &doc.gold, level, preds.unknown[id]));
            }
            LevelReport { level, report: total }
        })
        .collect();
    match output.format {
        Format::Json => write_json(output.out.as_deref(), &reports)?,
        Format::Tsv => {
            let mut rows = Vec::new();
            for r in &reports {
                let t = &r.report;
                rows.push(vec![
                    r.level.to_string(),
                    "all".into(),
                    t.predicted_span_count.to_string(),
                    t.exact_span_matches.to_string(),
                    t.exact_span_and_correct_label.to_string(),
                    t.unknown_label_count.to_string(),
                ]);
                for (category, c) in &t.per_category {
                    rows.push(vec![
                        r.level.to_string(),
                        category.to_string(),
                        String::new(),
                        c.exact_span.to_string(),
                        c.exact_span_and_correct_label.to_string(),
                        String::new(),
                    ]);
                }
            }
            write_tsv(
                output.out.as_deref(),
                &[
                    "level",
                    "category",
                    "predicted_spans",
                    "exact_span",
                    "exact_span_and_correct_label",
                    "unknown_labels",
                ],
                &rows,
            )?;
        }
    }
    for r in &reports {
        let t = &r.report;
        eprintln!(
            "level {}: {} predicted spans, {} exact span matches, {} with a correct label, {} unknown",
            r.level, t.predicted_span_count, t.exact_span_matches, t.exact_span_and_correct_label, t.unknown_label_count
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct ValidationSummary {
    documents: usize,
    valid: bool,
    diagnostics: Vec<String>,
}

fn validate(input: &DatasetArgs, pred: &OptionalPredArgs) -> Result<ExitCode> {
    let taxonomy = load_taxonomy(input.taxonomy.as_deref())?;
    let load = io::load_dataset_report(&taxonomy, &input.dataset)?;
    let mut diagnostics: Vec<String> = load
        .diagnostics
        .iter()
        .map(|e| format!("{}: {e}", input.dataset.display()))
        .collect();
    let pred_args = PredArgs {
        pred: pred.pred.clone(),
        model_out: pred.model_out.clone(),
        multi_label: false,
    };
    if pred_args.pred.is_some() || pred_args.model_out.is_some() {
        if let Err(e) = load_predictions(&taxonomy, &load.dataset, &pred_args) {
            diagnostics.push(format!("{e:#}"));
        }
    }
    let summary = ValidationSummary {
        documents: load.dataset.len(),
        valid: diagnostics.is_empty(),
        diagnostics,
    };
    write_json(None, &summary)?;
    for d in &summary.diagnostics {
        eprintln!("{d}");
    }
    eprintln!(
        "{} valid documents, {} problems",
        summary.documents,
        summary.diagnostics.len()
    );
    Ok(if summary.valid { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn import(input: &Path, taxonomy: Option<&Path>, strict: bool, out: Option<&Path>) -> Result<ExitCode> {
    let taxonomy = load_taxonomy(taxonomy)?;
    let text = std::fs::read_to_string(input).with_context(|| format!("cannot read {}", input.display()))?;
    let records = mafalda::import(&taxonomy, &text).with_context(|| format!("cannot import {}", input.display()))?;
    let total = records.len();
    let mut documents: Vec<AnnotatedDocument> = Vec::with_capacity(total);
    let mut skipped = 0;
    for (i, record) in records.into_iter().enumerate() {
        match io::annotated_from_record(&taxonomy, i + 1, record) {
            Ok(doc) => documents.push(doc),
            Err(e) if !strict => {
                skipped += 1;
                eprintln!("skipping: {e}");
            }
            Err(e) => return Err(e).context("record failed validation"),
        }
    }
    documents.sort_by(|a, b| a.document.doc_id.cmp(&b.document.doc_id));
    if let Some(w) = documents.windows(2).find(|w| w[0].document.doc_id == w[1].document.doc_id) {
        bail!("duplicate document id {:?}", w[0].document.doc_id);
    }
    let dataset = Dataset { documents };
    let mut w = sink(out)?;
    io::write_dataset(&dataset, &mut w)?;
    w.flush()?;
    eprintln!("imported {} of {total} records ({skipped} skipped)", dataset.len());
    Ok(ExitCode::SUCCESS)
}

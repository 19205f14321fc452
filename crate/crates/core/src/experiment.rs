//! The two-condition experiment harness: TOML configuration, the
//! end-to-end batch runner, and the with/without-conclusion comparison.
//!
//! A run loads a corpus, optionally strips conclusion sections,
//! normalizes, splits per department, trains the sentence segmenter,
//! then pushes every document through preprocess → score → summarize →
//! evaluate, collecting per-document failures without aborting the
//! batch. All artifacts land under `output_root`:
//!
//! ```text
//! splits/<dept>_{train,val,test}.csv
//! segmenters/default.segmodel.json
//! process/Processed_<id>.txt|.xml, Debug_<id>.txt, Processed_<id>_tokens.txt,
//!         Processed_Sentence_Weight_<id>.txt, Processed_TF-IDF_<id>.txt,
//!         Sorted_TF-IDF_<id>.txt
//! summaries/<stage>/<id>.{full,final,state}.txt
//! eval/<stage>/<id>.rouge.csv, eval/report.csv
//! manifest.json
//! ```
//!
//! The manifest echoes the semantic configuration (never absolute
//! paths) and records a SHA-256 of every output file, so reruns with
//! identical inputs are verifiable byte-for-byte. Documents are
//! processed by a small worker pool; each document's artifacts are
//! independent, and results are re-assembled in deterministic order
//! before aggregation, so concurrency never changes any output byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{
    load_corpus, split_corpus, strip_conclusion, write_split_csvs, CorpusDocument, SplitRatios,
    SplitSpec,
};
use crate::error::{AtsError, Result};
use crate::evaluator::{
    aggregate, evaluate_document, write_document_csv, write_report_csv, DocumentEvaluation,
    Metric, Report,
};
use crate::normalizer::Normalizer;
use crate::preprocessor::{preprocess_document, write_artifacts, Stemmer, StopwordList};
use crate::scorer::{score_document, write_sorted_tfidf_file, write_tfidf_file, write_weight_file};
use crate::segmenter::{train_segmenter, SegmenterModel};
use crate::summarizer::{
    count_words, extract_final_summary, extract_full_summary, write_summary, write_summary_state,
    DEFAULT_WORD_LIMIT,
};

/// Environment variable that overrides the configured shuffle seed.
pub const ATS_SEED_ENV: &str = "ATS_SEED";

/// Which documents feed segmenter training.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmenterScope {
    /// Only the training split of each department (the default).
    TrainingSplit,
    /// Every loaded document.
    AllDocuments,
}

impl SegmenterScope {
    fn label(self) -> &'static str {
        match self {
            SegmenterScope::TrainingSplit => "training_split",
            SegmenterScope::AllDocuments => "all_documents",
        }
    }
}

/// The three split stages, in pipeline order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Train,
    Val,
    Test,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Train, Stage::Val, Stage::Test];

    pub fn dir_name(self) -> &'static str {
        match self {
            Stage::Train => "train",
            Stage::Val => "val",
            Stage::Test => "test",
        }
    }
}

/// Everything a run needs. Build directly, or parse from TOML with
/// [`ExperimentConfig::from_file`].
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub corpus_root: PathBuf,
    pub include_conclusions: bool,
    pub output_root: PathBuf,
    pub segmenter_scope: SegmenterScope,
    pub split: SplitSpec,
    /// Directory of stopword JSON files; `None` disables removal.
    pub stopword_dir: Option<PathBuf>,
    pub word_limit: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    corpus_root: String,
    include_conclusions: Option<bool>,
    output_root: String,
    segmenter_training: Option<String>,
    split: Option<RawSplit>,
    stopword_dir: Option<String>,
    word_limit: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSplit {
    seed: Option<u64>,
    test: Option<f64>,
    train: Option<f64>,
    val: Option<f64>,
}

impl ExperimentConfig {
    /// Parses a TOML config. Relative paths are resolved against the
    /// config file's directory. If the `ATS_SEED` environment variable
    /// is set and nonempty, it overrides the configured seed.
    ///
    /// ```toml
    /// corpus_root = "corpus"
    /// output_root = "out/run1"
    /// stopword_dir = "domain_stopwords"   # optional
    /// include_conclusions = true          # default true
    /// word_limit = 182                    # default 182
    /// segmenter_training = "train"        # "train" (default) or "all"
    ///
    /// [split]
    /// train = 0.70
    /// val = 0.15
    /// test = 0.15
    /// seed = 42
    /// ```
    pub fn from_file(path: &Path) -> Result<Self> {
        let bad = |message: String| AtsError::InvalidConfig {
            path: path.to_path_buf(),
            message,
        };
        let text = fs::read_to_string(path).map_err(|e| AtsError::io(path, e))?;
        let raw: RawConfig = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let resolve = |p: &str| {
            let pb = PathBuf::from(p);
            if pb.is_absolute() {
                pb
            } else {
                base.join(pb)
            }
        };
        let segmenter_scope = match raw.segmenter_training.as_deref() {
            None | Some("train") => SegmenterScope::TrainingSplit,
            Some("all") => SegmenterScope::AllDocuments,
            Some(other) => {
                return Err(bad(format!(
                    "segmenter_training must be \"train\" or \"all\", got {other:?}"
                )))
            }
        };
        let word_limit = raw.word_limit.unwrap_or(DEFAULT_WORD_LIMIT);
        if word_limit < 1 {
            return Err(bad("word_limit must be at least 1".to_string()));
        }
        let rs = raw.split.unwrap_or_default();
        let defaults = SplitRatios::default();
        let mut seed = rs.seed.unwrap_or(SplitSpec::default().seed);
        if let Ok(env_seed) = std::env::var(ATS_SEED_ENV) {
            if !env_seed.trim().is_empty() {
                seed = env_seed.trim().parse().map_err(|_| {
                    bad(format!("{ATS_SEED_ENV} must be an unsigned integer, got {env_seed:?}"))
                })?;
            }
        }
        let split = SplitSpec {
            ratios: SplitRatios {
                train: rs.train.unwrap_or(defaults.train),
                val: rs.val.unwrap_or(defaults.val),
                test: rs.test.unwrap_or(defaults.test),
            }
            .validated()?,
            seed,
        };
        Ok(ExperimentConfig {
            corpus_root: resolve(&raw.corpus_root),
            include_conclusions: raw.include_conclusions.unwrap_or(true),
            output_root: resolve(&raw.output_root),
            segmenter_scope,
            split,
            stopword_dir: raw.stopword_dir.as_deref().map(resolve),
            word_limit,
        })
    }
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

/// Semantic configuration echo — no absolute paths, so the manifest is
/// machine-independent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestConfig {
    pub include_conclusions: bool,
    pub seed: u64,
    pub segmenter_scope: String,
    pub split_ratios: ManifestRatios,
    pub word_limit: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestRatios {
    pub test: f64,
    pub train: f64,
    pub val: f64,
}

/// One processed document's bookkeeping entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestDocument {
    pub department: String,
    pub doc_id: String,
    pub stage: String,
    /// `"ok"` or `"error: <message>"`.
    pub status: String,
}

/// The run record written to `manifest.json`: configuration, document
/// statuses, corpus issues, and a SHA-256 per output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub config: ManifestConfig,
    pub conclusions_stripped: usize,
    pub documents: Vec<ManifestDocument>,
    /// Relative path (forward slashes) → SHA-256 hex digest.
    pub files: BTreeMap<String, String>,
    pub load_issues: Vec<String>,
    pub version: u32,
    pub warnings: Vec<String>,
}

pub const MANIFEST_VERSION: u32 = 1;

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn walk_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let entries = fs::read_dir(dir).map_err(|e| AtsError::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| AtsError::io(dir, e))?
        .into_iter()
        .map(|e| e.path())
        .collect();
    paths.sort();
    for path in paths {
        if path.is_dir() {
            walk_files(&path, out)?;
        } else {
            out.push(path);
        }
    }
    Ok(())
}

/// Hashes every file under `root` except the top-level manifest
/// itself; keys are `/`-separated relative paths.
fn hash_output_tree(root: &Path) -> Result<BTreeMap<String, String>> {
    let manifest_path = root.join("manifest.json");
    let mut files = Vec::new();
    walk_files(root, &mut files)?;
    let mut hashes = BTreeMap::new();
    for path in files {
        if path == manifest_path {
            continue;
        }
        let rel: String = path
            .strip_prefix(root)
            .expect("walked file lies under root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy())
            .collect::<Vec<_>>()
            .join("/");
        let bytes = fs::read(&path).map_err(|e| AtsError::io(&path, e))?;
        hashes.insert(rel, sha256_hex(&bytes));
    }
    Ok(hashes)
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

/// What a finished run hands back to callers (the CLI uses `errors` to
/// pick its exit code).
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    /// Documents attempted (including failed ones).
    pub document_count: usize,
    /// (doc_id, message) for every per-document failure.
    pub errors: Vec<(String, String)>,
    pub load_issue_count: usize,
    /// Mean whitespace word count of the experiment input bodies.
    pub mean_body_words: f64,
    pub report: Report,
}

fn process_document(
    doc: &CorpusDocument,
    stage: Stage,
    output_root: &Path,
    model: &SegmenterModel,
    stemmer: &Stemmer,
    stopwords: &StopwordList,
    word_limit: usize,
) -> Result<DocumentEvaluation> {
    let process_dir = output_root.join("process");
    let processed = preprocess_document(
        &doc.doc_id,
        &doc.department,
        &doc.body,
        model,
        stemmer,
        stopwords,
        true,
    )?;
    write_artifacts(&processed, &process_dir)?;

    let scores = score_document(&processed)?;
    write_weight_file(&processed, &scores, &process_dir)?;
    write_tfidf_file(&processed, &scores, &process_dir)?;
    write_sorted_tfidf_file(&processed, &scores, &process_dir)?;

    let full = extract_full_summary(&processed, &scores);
    let final_summary = extract_final_summary(&processed, &scores, word_limit)?;
    let summaries_dir = output_root.join("summaries").join(stage.dir_name());
    write_summary(&full, &summaries_dir.join(format!("{}.full.txt", doc.doc_id)))?;
    write_summary(
        &final_summary,
        &summaries_dir.join(format!("{}.final.txt", doc.doc_id)),
    )?;
    write_summary_state(
        &final_summary,
        &summaries_dir.join(format!("{}.state.txt", doc.doc_id)),
    )?;

    let summary_text: String = final_summary
        .selected
        .iter()
        .map(|s| s.text.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let scores_map = evaluate_document(&summary_text, &doc.abstract_text)?;
    write_document_csv(
        &scores_map,
        &output_root
            .join("eval")
            .join(stage.dir_name())
            .join(format!("{}.rouge.csv", doc.doc_id)),
    )?;
    Ok(DocumentEvaluation {
        doc_id: doc.doc_id.clone(),
        department: doc.department.clone(),
        scores: scores_map,
    })
}

/// Runs one experiment condition end to end and writes the artifact
/// tree described in the module docs. Per-document failures are
/// recorded in the manifest and outcome; only corpus-level problems
/// (unreadable root, too-few documents, invalid config) abort the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    if cfg.word_limit < 1 {
        return Err(AtsError::InvalidLimit(cfg.word_limit));
    }
    let normalizer = Normalizer::sorani_default();
    let stemmer = Stemmer::sorani_default();

    let (raw_docs, load_issues) = load_corpus(&cfg.corpus_root)?;
    if raw_docs.is_empty() {
        return Err(AtsError::EmptyCorpus);
    }

    // Conclusion handling happens on raw bytes (the sidecar offsets
    // index the raw body), then everything is normalized once.
    let mut warnings: Vec<String> = Vec::new();
    let mut conclusions_stripped = 0usize;
    let docs: Vec<CorpusDocument> = raw_docs
        .iter()
        .map(|raw| {
            let adjusted = if cfg.include_conclusions {
                raw.clone()
            } else {
                let (stripped, did_strip) = strip_conclusion(raw);
                if did_strip {
                    conclusions_stripped += 1;
                } else {
                    warnings.push(format!(
                        "{}/{}: no conclusion span recorded; document kept unchanged",
                        raw.department, raw.doc_id
                    ));
                }
                stripped
            };
            CorpusDocument {
                body: normalizer.normalize(&adjusted.body),
                abstract_text: normalizer.normalize(&adjusted.abstract_text),
                conclusion_span: None,
                ..adjusted
            }
        })
        .collect();

    let splits = split_corpus(&docs, &cfg.split)?;
    fs::create_dir_all(&cfg.output_root).map_err(|e| AtsError::io(&cfg.output_root, e))?;
    write_split_csvs(&docs, &splits, &cfg.output_root.join("splits"))?;

    let training_texts: Vec<&str> = match cfg.segmenter_scope {
        SegmenterScope::TrainingSplit => splits
            .iter()
            .flat_map(|s| s.train.iter().map(|&i| docs[i].body.as_str()))
            .collect(),
        SegmenterScope::AllDocuments => docs.iter().map(|d| d.body.as_str()).collect(),
    };
    let model = train_segmenter(&training_texts)?;
    let seg_dir = cfg.output_root.join("segmenters");
    fs::create_dir_all(&seg_dir).map_err(|e| AtsError::io(&seg_dir, e))?;
    model.save(&seg_dir.join("default.segmodel.json"))?;

    let stopwords = match &cfg.stopword_dir {
        Some(dir) => StopwordList::load(dir, &normalizer, &stemmer)?,
        None => StopwordList::empty(),
    };

    // Work items in deterministic order: department (sorted), then
    // stage, then doc id (split indices are pre-sorted by id).
    let mut items: Vec<(Stage, usize)> = Vec::new();
    for split in &splits {
        for (stage, indices) in [
            (Stage::Train, &split.train),
            (Stage::Val, &split.val),
            (Stage::Test, &split.test),
        ] {
            items.extend(indices.iter().map(|&i| (stage, i)));
        }
    }
    for stage in Stage::ALL {
        for top in ["summaries", "eval"] {
            let dir = cfg.output_root.join(top).join(stage.dir_name());
            fs::create_dir_all(&dir).map_err(|e| AtsError::io(&dir, e))?;
        }
    }

    // Worker pool: workers pull the next document index; every slot is
    // written exactly once, and slots are drained in order afterwards,
    // so scheduling cannot influence any output.
    let slots: Vec<Mutex<Option<Result<DocumentEvaluation>>>> =
        (0..items.len()).map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .clamp(1, 8)
        .min(items.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                let Some(&(stage, doc_idx)) = items.get(i) else {
                    break;
                };
                let outcome = process_document(
                    &docs[doc_idx],
                    stage,
                    &cfg.output_root,
                    &model,
                    &stemmer,
                    &stopwords,
                    cfg.word_limit,
                );
                *slots[i].lock().expect("slot lock") = Some(outcome);
            });
        }
    });

    let mut evaluations: Vec<DocumentEvaluation> = Vec::new();
    let mut errors: Vec<(String, String)> = Vec::new();
    let mut records: Vec<ManifestDocument> = Vec::new();
    for (slot, &(stage, doc_idx)) in slots.into_iter().zip(&items) {
        let doc = &docs[doc_idx];
        let outcome = slot
            .into_inner()
            .expect("slot lock")
            .expect("every work item is processed");
        let status = match outcome {
            Ok(eval) => {
                evaluations.push(eval);
                "ok".to_string()
            }
            Err(e) => {
                errors.push((doc.doc_id.clone(), e.to_string()));
                format!("error: {e}")
            }
        };
        records.push(ManifestDocument {
            department: doc.department.clone(),
            doc_id: doc.doc_id.clone(),
            stage: stage.dir_name().to_string(),
            status,
        });
    }

    let report = aggregate(&evaluations)?;
    write_report_csv(&report, &cfg.output_root.join("eval").join("report.csv"))?;

    let mean_body_words =
        docs.iter().map(|d| count_words(&d.body)).sum::<usize>() as f64 / docs.len() as f64;

    let manifest = Manifest {
        config: ManifestConfig {
            include_conclusions: cfg.include_conclusions,
            seed: cfg.split.seed,
            segmenter_scope: cfg.segmenter_scope.label().to_string(),
            split_ratios: ManifestRatios {
                test: cfg.split.ratios.test,
                train: cfg.split.ratios.train,
                val: cfg.split.ratios.val,
            },
            word_limit: cfg.word_limit,
        },
        conclusions_stripped,
        documents: records,
        files: hash_output_tree(&cfg.output_root)?,
        load_issues: load_issues.iter().map(|i| i.to_string()).collect(),
        version: MANIFEST_VERSION,
        warnings,
    };
    let manifest_path = cfg.output_root.join("manifest.json");
    let mut manifest_json =
        serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    manifest_json.push('\n');
    fs::write(&manifest_path, manifest_json).map_err(|e| AtsError::io(&manifest_path, e))?;

    Ok(ExperimentOutcome {
        document_count: items.len(),
        errors,
        load_issue_count: load_issues.len(),
        mean_body_words,
        report,
    })
}

// ---------------------------------------------------------------------------
// Comparison harness
// ---------------------------------------------------------------------------

/// Results of running both conditions back to back.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub with_conclusion: ExperimentOutcome,
    pub without_conclusion: ExperimentOutcome,
    /// Where `comparison.csv` was written.
    pub csv_path: PathBuf,
}

fn best_department_result(report: &Report) -> String {
    let best = report
        .departments
        .iter()
        .max_by(|a, b| {
            a.scores[&Metric::Rouge1]
                .f
                .total_cmp(&b.scores[&Metric::Rouge1].f)
        })
        .expect("report has at least one department");
    format!(
        "{:.2}% (ROUGE-1, {})",
        best.scores[&Metric::Rouge1].f * 100.0,
        best.label
    )
}

/// Runs both experiment conditions under `base.output_root` (in
/// `with_conclusion/` and `without_conclusion/` subtrees; the
/// configured `include_conclusions` flag is overridden per condition)
/// and writes a side-by-side `comparison.csv` with one row per
/// experimental feature.
pub fn run_comparison(base: &ExperimentConfig) -> Result<ComparisonOutcome> {
    let condition = |include: bool, dir: &str| ExperimentConfig {
        include_conclusions: include,
        output_root: base.output_root.join(dir),
        ..base.clone()
    };
    let with_outcome = run_experiment(&condition(true, "with_conclusion"))?;
    let without_outcome = run_experiment(&condition(false, "without_conclusion"))?;

    let ratios = base.split.ratios;
    let ratio_text = format!(
        "{:.0}% training, {:.0}% validation, {:.0}% testing",
        ratios.train * 100.0,
        ratios.val * 100.0,
        ratios.test * 100.0
    );
    let rows: [[String; 4]; 5] = [
        [
            "dataset".into(),
            "research documents including conclusion sections".into(),
            "research documents excluding conclusion sections".into(),
            "second condition excises the recorded conclusion span of each document".into(),
        ],
        [
            "documents".into(),
            with_outcome.document_count.to_string(),
            without_outcome.document_count.to_string(),
            "documents processed per condition".into(),
        ],
        [
            "data_split_ratio".into(),
            ratio_text.clone(),
            ratio_text,
            "per-department shuffle with a fixed seed".into(),
        ],
        [
            "average_document_word_count".into(),
            format!("{:.2}", with_outcome.mean_body_words),
            format!("{:.2}", without_outcome.mean_body_words),
            "whitespace word count of experiment input bodies".into(),
        ],
        [
            "best_evaluation_result".into(),
            best_department_result(&with_outcome.report),
            best_department_result(&without_outcome.report),
            "best department-level ROUGE-1 F-measure".into(),
        ],
    ];
    let csv_path = base.output_root.join("comparison.csv");
    let to_io = |e: csv::Error| AtsError::io(&csv_path, std::io::Error::other(e.to_string()));
    let mut wtr = csv::Writer::from_path(&csv_path).map_err(to_io)?;
    wtr.write_record(["feature", "experiment_1", "experiment_2", "remarks"])
        .map_err(to_io)?;
    for row in &rows {
        wtr.write_record(row).map_err(to_io)?;
    }
    wtr.flush().map_err(|e| AtsError::io(&csv_path, e))?;

    Ok(ComparisonOutcome {
        with_conclusion: with_outcome,
        without_conclusion: without_outcome,
        csv_path,
    })
}

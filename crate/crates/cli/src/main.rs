//! `ats` — command-line front end for the Sorani Kurdish extractive
//! summarization pipeline.
//!
//! Exit codes: 0 on full success, 1 when the requested batch completed
//! but some documents failed (failures are reported on stderr and, for
//! experiments, in the manifest), 2 on fatal errors.

use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ats_core::corpus::{
    abstract_word_stats, load_corpus, split_corpus, write_split_csvs, SplitRatios, SplitSpec,
};
use ats_core::error::AtsError;
use ats_core::evaluator::{evaluate_document, write_document_csv, Metric};
use ats_core::experiment::{
    run_comparison, run_experiment, ExperimentConfig, ExperimentOutcome, ATS_SEED_ENV,
};
use ats_core::normalizer::{NormalizationConfig, Normalizer};
use ats_core::preprocessor::{preprocess_document, write_artifacts, Stemmer, StopwordList};
use ats_core::scorer::score_document;
use ats_core::segmenter::{train_segmenter, SegmenterModel};
use ats_core::summarizer::{
    extract_final_summary, extract_full_summary, write_summary, write_summary_state,
    DEFAULT_WORD_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "ats",
    version,
    about = "Extractive summarization toolkit for Sorani Kurdish research documents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Canonicalize raw text (character table, numerals, layout)
    Normalize {
        /// Character mapping table; defaults to the bundled Sorani table
        #[arg(long)]
        charmap: Option<PathBuf>,
        /// Preserve original line breaks and spacing
        #[arg(long)]
        keep_layout: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Train the sentence-boundary model on a directory of documents
    TrainSegmenter {
        /// Corpus directory: uses `**/body.txt` when present, else every `*.txt`
        #[arg(long)]
        corpus: PathBuf,
        /// Where to write the model JSON
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a text into sentences, one per line on stdout
    Segment {
        #[arg(long)]
        model: PathBuf,
        input: PathBuf,
    },
    /// Segment, stem, and stopword-annotate documents; write stage artifacts
    Preprocess {
        #[arg(long)]
        model: PathBuf,
        /// Directory of stopword JSON files
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long)]
        department: String,
        /// Artifact directory
        #[arg(long, default_value = "process")]
        out: PathBuf,
        #[arg(required = true)]
        docs: Vec<PathBuf>,
    },
    /// Produce full and word-limited summaries for documents
    Summarize {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        stopwords: Option<PathBuf>,
        #[arg(long, default_value = "general")]
        department: String,
        /// Word budget for the final summary
        #[arg(long, default_value_t = DEFAULT_WORD_LIMIT)]
        limit: usize,
        /// Write `<id>.{full,final,state}.txt` here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        docs: Vec<PathBuf>,
    },
    /// Score a summary against a reference abstract with ROUGE-1/2/L
    Evaluate {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        /// Also write the scores as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write deterministic per-department train/val/test CSVs
    Split {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Shuffle seed (the ATS_SEED environment variable overrides it)
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.70)]
        train: f64,
        #[arg(long, default_value_t = 0.15)]
        val: f64,
        #[arg(long, default_value_t = 0.15)]
        test: f64,
    },
    /// Report mean abstract word counts per department and overall
    Stats {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Run an experiment condition from a TOML config
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Run both conditions and write comparison.csv
        #[arg(long)]
        compare: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, AtsError> {
    fs::read_to_string(path).map_err(|e| AtsError::io(path, e))
}

fn doc_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "doc".to_string())
}

fn load_stopwords(
    dir: Option<&Path>,
    normalizer: &Normalizer,
    stemmer: &Stemmer,
) -> Result<StopwordList, AtsError> {
    match dir {
        Some(dir) => StopwordList::load(dir, normalizer, stemmer),
        None => Ok(StopwordList::empty()),
    }
}

/// Collects segmenter training texts: every `body.txt` under `dir` if
/// the corpus layout is present, otherwise every `*.txt` file. Sorted
/// walk, normalized content.
fn collect_training_texts(dir: &Path, normalizer: &Normalizer) -> Result<Vec<String>, AtsError> {
    fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), AtsError> {
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
                walk(&path, out)?;
            } else if path.extension().is_some_and(|ext| ext == "txt") {
                out.push(path);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(dir, &mut files)?;
    let bodies: Vec<&PathBuf> = files
        .iter()
        .filter(|p| p.file_name().is_some_and(|n| n == "body.txt"))
        .collect();
    let chosen: Vec<&PathBuf> = if bodies.is_empty() {
        files.iter().collect()
    } else {
        bodies
    };
    let mut texts = Vec::with_capacity(chosen.len());
    for path in chosen {
        texts.push(normalizer.normalize(&read(path)?));
    }
    Ok(texts)
}

fn env_seed_override(configured: u64) -> Result<u64, Box<dyn Error>> {
    match std::env::var(ATS_SEED_ENV) {
        Ok(value) if !value.trim().is_empty() => value
            .trim()
            .parse()
            .map_err(|_| format!("{ATS_SEED_ENV} must be an unsigned integer, got {value:?}").into()),
        _ => Ok(configured),
    }
}

fn print_outcome(label: &str, outcome: &ExperimentOutcome) {
    println!(
        "{label}: {} documents, {} per-document errors, {} load issues, mean body words {:.2}",
        outcome.document_count,
        outcome.errors.len(),
        outcome.load_issue_count,
        outcome.mean_body_words
    );
    for metric in Metric::ALL {
        let s = &outcome.report.overall.scores[&metric];
        println!(
            "{label}: average {} precision={:.6} recall={:.6} f={:.6}",
            metric.label(),
            s.precision,
            s.recall,
            s.f
        );
    }
    for (doc_id, message) in &outcome.errors {
        eprintln!("{label}: document {doc_id} failed: {message}");
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    match cli.command {
        Command::Normalize {
            charmap,
            keep_layout,
            input,
            output,
        } => {
            let cfg = match charmap {
                Some(path) => NormalizationConfig::from_charmap_file(&path)?,
                None => NormalizationConfig::sorani_default(),
            };
            let mut normalizer = Normalizer::new(cfg);
            if keep_layout {
                normalizer = normalizer.keep_layout();
            }
            let text = normalizer.normalize(&read(&input)?);
            fs::write(&output, text).map_err(|e| AtsError::io(&output, e))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::TrainSegmenter { corpus, out } => {
            let normalizer = Normalizer::sorani_default();
            let texts = collect_training_texts(&corpus, &normalizer)?;
            let model = train_segmenter(&texts)?;
            if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| AtsError::io(parent, e))?;
            }
            model.save(&out)?;
            println!(
                "trained on {} documents: {} abbreviation types, {} collocations, {} sentence starters",
                texts.len(),
                model.abbreviations().len(),
                model.collocations().len(),
                model.sentence_starters().len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Segment { model, input } => {
            let model = SegmenterModel::load(&model)?;
            let normalizer = Normalizer::sorani_default();
            let text = normalizer.normalize(&read(&input)?);
            for span in model.segment(&text) {
                println!("{}", span.text);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Preprocess {
            model,
            stopwords,
            department,
            out,
            docs,
        } => {
            let model = SegmenterModel::load(&model)?;
            let normalizer = Normalizer::sorani_default();
            let stemmer = Stemmer::sorani_default();
            let stopwords = load_stopwords(stopwords.as_deref(), &normalizer, &stemmer)?;
            let mut failures = 0usize;
            for doc_path in &docs {
                let doc_id = doc_id_of(doc_path);
                let result = read(doc_path).and_then(|raw| {
                    let body = normalizer.normalize(&raw);
                    let processed = preprocess_document(
                        &doc_id,
                        &department,
                        &body,
                        &model,
                        &stemmer,
                        &stopwords,
                        true,
                    )?;
                    write_artifacts(&processed, &out)?;
                    Ok(processed)
                });
                match result {
                    Ok(processed) => {
                        for warning in &processed.warnings {
                            eprintln!("warning: {doc_id}: {warning}");
                        }
                        println!(
                            "{doc_id}: {} sentences, {} tokens, {} stopwords removed",
                            processed.sentences.len(),
                            processed.token_count(),
                            processed.removed_count()
                        );
                    }
                    Err(e) => {
                        failures += 1;
                        eprintln!("error: {doc_id}: {e}");
                    }
                }
            }
            Ok(batch_exit(failures))
        }
        Command::Summarize {
            model,
            stopwords,
            department,
            limit,
            out,
            docs,
        } => {
            let model = SegmenterModel::load(&model)?;
            let normalizer = Normalizer::sorani_default();
            let stemmer = Stemmer::sorani_default();
            let stopwords = load_stopwords(stopwords.as_deref(), &normalizer, &stemmer)?;
            if let Some(dir) = &out {
                fs::create_dir_all(dir).map_err(|e| AtsError::io(dir, e))?;
            }
            let mut failures = 0usize;
            for (i, doc_path) in docs.iter().enumerate() {
                let doc_id = doc_id_of(doc_path);
                let result = read(doc_path).and_then(|raw| {
                    let body = normalizer.normalize(&raw);
                    let processed = preprocess_document(
                        &doc_id,
                        &department,
                        &body,
                        &model,
                        &stemmer,
                        &stopwords,
                        true,
                    )?;
                    let scores = score_document(&processed)?;
                    let full = extract_full_summary(&processed, &scores);
                    let final_summary = extract_final_summary(&processed, &scores, limit)?;
                    Ok((full, final_summary))
                });
                match result {
                    Ok((full, final_summary)) => match &out {
                        Some(dir) => {
                            write_summary(&full, &dir.join(format!("{doc_id}.full.txt")))?;
                            write_summary(&final_summary, &dir.join(format!("{doc_id}.final.txt")))?;
                            write_summary_state(
                                &final_summary,
                                &dir.join(format!("{doc_id}.state.txt")),
                            )?;
                            println!(
                                "{doc_id}: {} sentences, {} words",
                                final_summary.total_sentences, final_summary.total_words
                            );
                        }
                        None => {
                            if docs.len() > 1 && i > 0 {
                                println!();
                            }
                            if docs.len() > 1 {
                                println!("# {doc_id}");
                            }
                            for sentence in &final_summary.selected {
                                println!("{}", sentence.text);
                            }
                        }
                    },
                    Err(e) => {
                        failures += 1;
                        eprintln!("error: {doc_id}: {e}");
                    }
                }
            }
            Ok(batch_exit(failures))
        }
        Command::Evaluate {
            summary,
            reference,
            out,
        } => {
            let scores = evaluate_document(&read(&summary)?, &read(&reference)?)?;
            for metric in Metric::ALL {
                let s = &scores[&metric];
                println!(
                    "{} precision={:.6} recall={:.6} f={:.6}",
                    metric.label(),
                    s.precision,
                    s.recall,
                    s.f
                );
            }
            if let Some(path) = out {
                write_document_csv(&scores, &path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Split {
            corpus,
            out,
            seed,
            train,
            val,
            test,
        } => {
            let spec = SplitSpec {
                ratios: SplitRatios { train, val, test },
                seed: env_seed_override(seed)?,
            };
            let (docs, issues) = load_corpus(&corpus)?;
            for issue in &issues {
                eprintln!("warning: {issue}");
            }
            let splits = split_corpus(&docs, &spec)?;
            write_split_csvs(&docs, &splits, &out)?;
            for split in &splits {
                println!(
                    "{}: train={} val={} test={}",
                    split.department,
                    split.train.len(),
                    split.val.len(),
                    split.test.len()
                );
            }
            Ok(batch_exit(issues.len()))
        }
        Command::Stats { corpus } => {
            let (docs, issues) = load_corpus(&corpus)?;
            for issue in &issues {
                eprintln!("warning: {issue}");
            }
            let stats = abstract_word_stats(&docs)?;
            for (department, mean) in &stats.departments {
                println!("{department}: {mean:.2}");
            }
            println!("average: {:.2}", stats.overall);
            Ok(batch_exit(issues.len()))
        }
        Command::Experiment { config, compare } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let failures = if compare {
                let outcome = run_comparison(&cfg)?;
                print_outcome("with_conclusion", &outcome.with_conclusion);
                print_outcome("without_conclusion", &outcome.without_conclusion);
                println!("comparison: {}", outcome.csv_path.display());
                outcome.with_conclusion.errors.len()
                    + outcome.with_conclusion.load_issue_count
                    + outcome.without_conclusion.errors.len()
                    + outcome.without_conclusion.load_issue_count
            } else {
                let outcome = run_experiment(&cfg)?;
                print_outcome("experiment", &outcome);
                outcome.errors.len() + outcome.load_issue_count
            };
            Ok(batch_exit(failures))
        }
    }
}

/// 0 when everything succeeded, 1 when some documents failed.
fn batch_exit(failures: usize) -> ExitCode {
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

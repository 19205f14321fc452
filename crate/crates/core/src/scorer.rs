//! Two-stage sentence scoring.
//!
//! Stage one assigns every sentence a normalized-frequency weight in
//! [0,1] (the mean over its kept stems of `freq(stem)/max_freq`) and
//! eliminates the bottom half. Stage two treats the retained sentences
//! as a miniature document collection and scores each by mean TF-IDF
//! of its stem types, then ranks the retained sentences in descending
//! score order. All ties break toward the earlier document position,
//! so scoring a document twice gives identical output.
//!
//! Scoring works on the kept word stems only — punctuation tokens and
//! removed stopwords carry no content and would otherwise dilute (or
//! inflate) every ratio.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{AtsError, Result};
use crate::preprocessor::{render_stem_line, ProcessedDocument};

/// Per-sentence scoring state across the three stages.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceScore {
    pub sentence_index: usize,
    /// Stage-1 normalized frequency weight, always in [0,1].
    pub weight: f64,
    /// Stage-2 TF-IDF score; present iff the sentence was retained.
    pub tfidf: Option<f64>,
    /// Stage-3 rank (1 = best); present iff retained.
    pub rank: Option<usize>,
    pub retained: bool,
}

/// Stage 1: weight(s) = (Σ_{t∈s} freq(stem(t)) / max_freq) / |s|, with
/// stem frequencies counted over the whole document. Sentences with no
/// kept stems weigh 0.
pub fn sentence_weights(sentences: &[Vec<String>]) -> Result<Vec<SentenceScore>> {
    if sentences.is_empty() {
        return Err(AtsError::EmptyDocument);
    }
    let mut freq: BTreeMap<&str, usize> = BTreeMap::new();
    for sentence in sentences {
        for stem in sentence {
            *freq.entry(stem).or_default() += 1;
        }
    }
    let max_freq = freq.values().copied().max().unwrap_or(0);
    Ok(sentences
        .iter()
        .enumerate()
        .map(|(idx, sentence)| {
            // Single exact-integer division: Σfreq and max·|s| are
            // integers, so the weight (and thus the pruning argsort)
            // is invariant under frequency scaling — token-by-token
            // float summation would break ties by rounding noise.
            let weight = if sentence.is_empty() || max_freq == 0 {
                0.0
            } else {
                let sum: u64 = sentence
                    .iter()
                    .map(|stem| freq[stem.as_str()] as u64)
                    .sum();
                sum as f64 / (max_freq as f64 * sentence.len() as f64)
            };
            SentenceScore {
                sentence_index: idx,
                weight,
                tfidf: None,
                rank: None,
                retained: false,
            }
        })
        .collect())
}

/// Stage 1b: retain exactly ⌈n/2⌉ sentences — the heaviest, ties going
/// to the earlier document position.
pub fn prune_bottom_half(scores: &mut [SentenceScore]) {
    let keep = scores.len().div_ceil(2);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .weight
            .total_cmp(&scores[a].weight)
            .then(a.cmp(&b))
    });
    for &idx in order.iter().take(keep) {
        scores[idx].retained = true;
    }
    for &idx in order.iter().skip(keep) {
        scores[idx].retained = false;
    }
}

/// Stage 2: TF-IDF with the retained sentences as the collection. For
/// each stem type w in a retained sentence s: tf = count(w,s)/|s|,
/// idf = ln(R/df(w)); the sentence score is (Σ_w tf·idf)/|s|.
pub fn tfidf_scores(sentences: &[Vec<String>], scores: &mut [SentenceScore]) {
    let retained: Vec<usize> = scores
        .iter()
        .filter(|s| s.retained)
        .map(|s| s.sentence_index)
        .collect();
    let r = retained.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for &idx in &retained {
        let mut seen: Vec<&str> = sentences[idx].iter().map(String::as_str).collect();
        seen.sort_unstable();
        seen.dedup();
        for stem in seen {
            *df.entry(stem).or_default() += 1;
        }
    }
    for score in scores.iter_mut() {
        if !score.retained {
            score.tfidf = None;
            continue;
        }
        let sentence = &sentences[score.sentence_index];
        if sentence.is_empty() {
            score.tfidf = Some(0.0);
            continue;
        }
        let len = sentence.len() as f64;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for stem in sentence {
            *counts.entry(stem).or_default() += 1;
        }
        let sum: f64 = counts
            .iter()
            .map(|(stem, &count)| {
                let tf = count as f64 / len;
                let idf = (r / df[stem] as f64).ln();
                tf * idf
            })
            .sum();
        score.tfidf = Some(sum / len);
    }
}

/// Stage 3: ranks 1..R over retained sentences, descending TF-IDF,
/// ties to the earlier position.
pub fn rank_descending(scores: &mut [SentenceScore]) {
    let mut retained: Vec<usize> = (0..scores.len()).filter(|&i| scores[i].retained).collect();
    retained.sort_by(|&a, &b| {
        let ta = scores[a].tfidf.unwrap_or(0.0);
        let tb = scores[b].tfidf.unwrap_or(0.0);
        tb.total_cmp(&ta).then(a.cmp(&b))
    });
    for (rank0, &idx) in retained.iter().enumerate() {
        scores[idx].rank = Some(rank0 + 1);
    }
    for score in scores.iter_mut() {
        if !score.retained {
            score.rank = None;
        }
    }
}

/// Runs all three stages over a preprocessed document.
pub fn score_document(doc: &ProcessedDocument) -> Result<Vec<SentenceScore>> {
    let sentences = doc.kept_stem_sentences();
    let mut scores = sentence_weights(&sentences)?;
    prune_bottom_half(&mut scores);
    tfidf_scores(&sentences, &mut scores);
    rank_descending(&mut scores);
    Ok(scores)
}

// ---------------------------------------------------------------------------
// Artifact files
// ---------------------------------------------------------------------------

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| AtsError::io(path, e))
}

fn entry(doc: &ProcessedDocument, idx: usize, label: &str, value: f64) -> String {
    format!(
        "Sentence: {}\n{label}: {value:.3}\n",
        render_stem_line(doc, idx)
    )
}

/// `Processed_Sentence_Weight_<id>.txt`: every sentence with its
/// stage-1 weight, document order.
pub fn write_weight_file(
    doc: &ProcessedDocument,
    scores: &[SentenceScore],
    out_dir: &Path,
) -> Result<()> {
    let mut text = String::new();
    for score in scores {
        text.push_str(&entry(doc, score.sentence_index, "Weight", score.weight));
    }
    write_file(
        &out_dir.join(format!("Processed_Sentence_Weight_{}.txt", doc.doc_id)),
        &text,
    )
}

/// `Processed_TF-IDF_<id>.txt`: retained sentences with their TF-IDF
/// scores, document order.
pub fn write_tfidf_file(
    doc: &ProcessedDocument,
    scores: &[SentenceScore],
    out_dir: &Path,
) -> Result<()> {
    let mut text = String::new();
    for score in scores.iter().filter(|s| s.retained) {
        text.push_str(&entry(
            doc,
            score.sentence_index,
            "TF-IDF Weight",
            score.tfidf.unwrap_or(0.0),
        ));
    }
    write_file(
        &out_dir.join(format!("Processed_TF-IDF_{}.txt", doc.doc_id)),
        &text,
    )
}

/// `Sorted_TF-IDF_<id>.txt`: retained sentences in rank order.
pub fn write_sorted_tfidf_file(
    doc: &ProcessedDocument,
    scores: &[SentenceScore],
    out_dir: &Path,
) -> Result<()> {
    let mut retained: Vec<&SentenceScore> = scores.iter().filter(|s| s.retained).collect();
    retained.sort_by_key(|s| s.rank.unwrap_or(usize::MAX));
    let mut text = String::new();
    for score in retained {
        text.push_str(&entry(
            doc,
            score.sentence_index,
            "TF-IDF Weight",
            score.tfidf.unwrap_or(0.0),
        ));
    }
    write_file(
        &out_dir.join(format!("Sorted_TF-IDF_{}.txt", doc.doc_id)),
        &text,
    )
}

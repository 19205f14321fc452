//! Summary extraction: the full summary (all retained sentences) and
//! the word-limited final summary.
//!
//! The final summary packs sentences greedily in rank order: a
//! sentence is taken only if it fits the remaining word budget,
//! otherwise it is skipped and packing continues with the next rank
//! (skip-and-continue). If even the rank-1 sentence exceeds the limit
//! and nothing else was selected, that sentence is emitted alone with
//! an override flag — a summary must never be empty. Both summaries
//! present their sentences in original document order with original
//! surface text: they are read by people, so stemmed forms stay in the
//! artifact files.
//!
//! Words are whitespace-delimited tokens of the original sentence,
//! punctuation attached — the same rule used for abstract word-count
//! statistics, so the default budget of 182 words is comparable.

use std::path::Path;

use crate::error::{AtsError, Result};
use crate::preprocessor::ProcessedDocument;
use crate::scorer::SentenceScore;

/// Default word budget for final summaries: the corpus-wide average
/// abstract length, rounded.
pub const DEFAULT_WORD_LIMIT: usize = 182;

/// Which summary variant a [`Summary`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryKind {
    Full,
    Final,
}

/// One selected sentence with its original text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectedSentence {
    pub sentence_index: usize,
    pub text: String,
    pub word_count: usize,
}

/// An extractive summary in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub doc_id: String,
    pub kind: SummaryKind,
    pub selected: Vec<SelectedSentence>,
    pub total_words: usize,
    pub total_sentences: usize,
    /// The word budget (final summaries only).
    pub word_limit: Option<usize>,
    /// True when a single over-long sentence was emitted despite the
    /// budget.
    pub limit_overridden: bool,
}

/// Whitespace word count, punctuation attached to its word.
pub fn count_words(text: &str) -> usize {
    text.split_whitespace().count()
}

fn selected_sentence(doc: &ProcessedDocument, idx: usize) -> SelectedSentence {
    let text = doc.sentence_text(idx).to_string();
    let word_count = count_words(&text);
    SelectedSentence {
        sentence_index: idx,
        text,
        word_count,
    }
}

fn build(doc: &ProcessedDocument, kind: SummaryKind, mut indices: Vec<usize>) -> Summary {
    indices.sort_unstable();
    let selected: Vec<SelectedSentence> = indices
        .into_iter()
        .map(|idx| selected_sentence(doc, idx))
        .collect();
    Summary {
        doc_id: doc.doc_id.clone(),
        kind,
        total_words: selected.iter().map(|s| s.word_count).sum(),
        total_sentences: selected.len(),
        selected,
        word_limit: None,
        limit_overridden: false,
    }
}

/// All retained sentences, document order, original text.
pub fn extract_full_summary(doc: &ProcessedDocument, scores: &[SentenceScore]) -> Summary {
    let indices: Vec<usize> = scores
        .iter()
        .filter(|s| s.retained)
        .map(|s| s.sentence_index)
        .collect();
    build(doc, SummaryKind::Full, indices)
}

/// Greedy word-limited selection over the ranked sentences.
pub fn extract_final_summary(
    doc: &ProcessedDocument,
    scores: &[SentenceScore],
    word_limit: usize,
) -> Result<Summary> {
    if word_limit < 1 {
        return Err(AtsError::InvalidLimit(word_limit));
    }
    let mut ranked: Vec<&SentenceScore> = scores.iter().filter(|s| s.retained).collect();
    ranked.sort_by_key(|s| s.rank.unwrap_or(usize::MAX));

    let mut indices = Vec::new();
    let mut total = 0usize;
    for score in &ranked {
        let wc = count_words(doc.sentence_text(score.sentence_index));
        if total + wc <= word_limit {
            indices.push(score.sentence_index);
            total += wc;
        }
        // Over-budget sentences are skipped; later, shorter ones may
        // still fit.
    }
    let mut overridden = false;
    if indices.is_empty() {
        if let Some(first) = ranked.first() {
            indices.push(first.sentence_index);
            overridden = true;
        }
    }
    let mut summary = build(doc, SummaryKind::Final, indices);
    summary.word_limit = Some(word_limit);
    summary.limit_overridden = overridden;
    Ok(summary)
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Plain-text summary: one sentence per line.
pub fn write_summary(summary: &Summary, path: &Path) -> Result<()> {
    let mut text = String::new();
    for s in &summary.selected {
        text.push_str(&s.text);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| AtsError::io(path, e))
}

/// Summary-state report: sentence count, per-sentence word counts,
/// total words, total sentences.
pub fn write_summary_state(summary: &Summary, path: &Path) -> Result<()> {
    let counts = summary
        .selected
        .iter()
        .map(|s| s.word_count.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let text = format!(
        "Sentences in summary: {}\nWord counts: {}\nTotal words: {}\nTotal sentences: {}\n",
        summary.selected.len(),
        counts,
        summary.total_words,
        summary.total_sentences,
    );
    std::fs::write(path, text).map_err(|e| AtsError::io(path, e))
}

/// The four fields of a summary-state file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryState {
    pub sentences_in_summary: usize,
    pub word_counts: Vec<usize>,
    pub total_words: usize,
    pub total_sentences: usize,
}

impl SummaryState {
    /// The state a summary would serialize to.
    pub fn of(summary: &Summary) -> Self {
        SummaryState {
            sentences_in_summary: summary.selected.len(),
            word_counts: summary.selected.iter().map(|s| s.word_count).collect(),
            total_words: summary.total_words,
            total_sentences: summary.total_sentences,
        }
    }
}

/// Parses a summary-state file back into its four fields.
pub fn parse_summary_state(text: &str) -> Result<SummaryState> {
    fn field<'a>(line: Option<&'a str>, label: &str) -> Result<&'a str> {
        line.and_then(|l| l.strip_prefix(label))
            .and_then(|l| l.strip_prefix(": "))
            .ok_or_else(|| AtsError::MalformedState(format!("missing field {label:?}")))
    }
    fn int(text: &str) -> Result<usize> {
        text.trim()
            .parse()
            .map_err(|_| AtsError::MalformedState(format!("bad integer {text:?}")))
    }
    let mut lines = text.lines();
    let sentences_in_summary = int(field(lines.next(), "Sentences in summary")?)?;
    let counts_raw = field(lines.next(), "Word counts")?;
    let word_counts = counts_raw
        .split_whitespace()
        .map(int)
        .collect::<Result<Vec<usize>>>()?;
    let total_words = int(field(lines.next(), "Total words")?)?;
    let total_sentences = int(field(lines.next(), "Total sentences")?)?;
    Ok(SummaryState {
        sentences_in_summary,
        word_counts,
        total_words,
        total_sentences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocessor::{preprocess_document, Stemmer, StopwordList};
    use crate::scorer::score_document;
    use crate::segmenter::{SegmenterModel, SegmenterParams};
    use std::collections::BTreeSet;

    fn bare_model() -> SegmenterModel {
        SegmenterModel::from_parts(
            BTreeSet::new(),
            BTreeSet::new(),
            BTreeSet::new(),
            SegmenterParams::default(),
        )
    }

    /// A document whose sentences have the given word counts; every
    /// sentence gets distinct stems so scoring stays simple.
    fn doc_with_word_counts(counts: &[usize]) -> ProcessedDocument {
        let body: String = counts
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let words: Vec<String> = (0..n - 1).map(|j| format!("وشە{i}x{j}")).collect();
                // The final word carries the period: "… wordN." is n
                // whitespace tokens.
                format!("{} کۆتا{i}.", words.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" ");
        preprocess_document(
            "d",
            "x",
            &body,
            &bare_model(),
            &Stemmer::sorani_default(),
            &StopwordList::empty(),
            true,
        )
        .unwrap()
    }

    /// Scores forcing the given rank order (rank[i] is the rank of
    /// sentence i; None = pruned).
    fn scores_with_ranks(ranks: &[Option<usize>]) -> Vec<SentenceScore> {
        ranks
            .iter()
            .enumerate()
            .map(|(idx, &rank)| SentenceScore {
                sentence_index: idx,
                weight: 0.5,
                tfidf: rank.map(|r| 1.0 / r as f64),
                rank,
                retained: rank.is_some(),
            })
            .collect()
    }

    #[test]
    fn word_counts_match_whitespace_tokens() {
        assert_eq!(count_words("یەک دوو سێ."), 3);
        assert_eq!(count_words("  a   b "), 2);
        assert_eq!(count_words(""), 0);
        let doc = doc_with_word_counts(&[4, 7]);
        assert_eq!(count_words(doc.sentence_text(0)), 4);
        assert_eq!(count_words(doc.sentence_text(1)), 7);
    }

    #[test]
    fn full_summary_keeps_retained_in_document_order() {
        let doc = doc_with_word_counts(&[3, 3, 3, 3]);
        let scores = scores_with_ranks(&[Some(2), None, Some(1), None]);
        let full = extract_full_summary(&doc, &scores);
        assert_eq!(full.total_sentences, 2);
        let idx: Vec<usize> = full.selected.iter().map(|s| s.sentence_index).collect();
        // Rank 1 is sentence 2, but emission is document order.
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(full.total_words, 6);
        assert_eq!(full.selected[0].text, doc.sentence_text(0));
    }

    #[test]
    fn single_sentence_doc_summarizes_to_itself() {
        let doc = doc_with_word_counts(&[5]);
        let scores = score_document(&doc).unwrap();
        let full = extract_full_summary(&doc, &scores);
        assert_eq!(full.total_sentences, 1);
        assert_eq!(full.selected[0].text, doc.sentence_text(0));
    }

    #[test]
    fn greedy_packing_skips_and_continues() {
        // Ranked word counts [100, 90, 50] with limit 182: rank 1
        // fits (100), rank 2 would overflow (190), rank 3 fits (150).
        let doc = doc_with_word_counts(&[100, 90, 50]);
        let scores = scores_with_ranks(&[Some(1), Some(2), Some(3)]);
        let final_ = extract_final_summary(&doc, &scores, 182).unwrap();
        let idx: Vec<usize> = final_.selected.iter().map(|s| s.sentence_index).collect();
        assert_eq!(idx, vec![0, 2]);
        assert_eq!(final_.total_words, 150);
        assert!(!final_.limit_overridden);
        assert_eq!(final_.word_limit, Some(182));
    }

    #[test]
    fn oversized_top_sentence_is_emitted_with_override() {
        let doc = doc_with_word_counts(&[300]);
        let scores = scores_with_ranks(&[Some(1)]);
        let final_ = extract_final_summary(&doc, &scores, 182).unwrap();
        assert_eq!(final_.total_sentences, 1);
        assert_eq!(final_.total_words, 300);
        assert!(final_.limit_overridden);
    }

    #[test]
    fn zero_limit_is_rejected() {
        let doc = doc_with_word_counts(&[3]);
        let scores = scores_with_ranks(&[Some(1)]);
        assert!(matches!(
            extract_final_summary(&doc, &scores, 0),
            Err(AtsError::InvalidLimit(0))
        ));
    }

    #[test]
    fn summary_file_is_one_sentence_per_line() {
        let dir = tempfile::tempdir().unwrap();
        let doc = doc_with_word_counts(&[3, 4]);
        let scores = scores_with_ranks(&[Some(1), Some(2)]);
        let full = extract_full_summary(&doc, &scores);
        let path = dir.path().join("d.full.txt");
        write_summary(&full, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], doc.sentence_text(0));
        assert_eq!(lines[1], doc.sentence_text(1));
    }

    #[test]
    fn state_file_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let doc = doc_with_word_counts(&[20, 30]);
        let scores = scores_with_ranks(&[Some(1), Some(2)]);
        let final_ = extract_final_summary(&doc, &scores, 182).unwrap();
        let path = dir.path().join("d.state.txt");
        write_summary_state(&final_, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "Sentences in summary: 2\nWord counts: 20 30\nTotal words: 50\nTotal sentences: 2\n"
        );
        let state = parse_summary_state(&text).unwrap();
        assert_eq!(state, SummaryState::of(&final_));
    }

    #[test]
    fn state_round_trip_over_random_summaries() {
        // 50 seeded random summaries, parse-back equality each time.
        let dir = tempfile::tempdir().unwrap();
        let mut seed = 0x9E3779B97F4A7C15u64;
        for case in 0..50 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = 1 + (seed >> 33) as usize % 8;
            let counts: Vec<usize> = (0..n)
                .map(|i| 2 + ((seed >> (i % 48)) as usize % 37))
                .collect();
            let doc = doc_with_word_counts(&counts);
            let ranks: Vec<Option<usize>> = (0..n).map(|i| Some(i + 1)).collect();
            let scores = scores_with_ranks(&ranks);
            let final_ = extract_final_summary(&doc, &scores, 60).unwrap();
            let path = dir.path().join(format!("case{case}.state.txt"));
            write_summary_state(&final_, &path).unwrap();
            let state =
                parse_summary_state(&std::fs::read_to_string(&path).unwrap()).unwrap();
            assert_eq!(state, SummaryState::of(&final_), "case {case}");
        }
    }

    #[test]
    fn malformed_state_files_are_rejected() {
        assert!(matches!(
            parse_summary_state("nonsense"),
            Err(AtsError::MalformedState(_))
        ));
        assert!(matches!(
            parse_summary_state("Sentences in summary: x\n"),
            Err(AtsError::MalformedState(_))
        ));
    }

    #[test]
    fn final_is_subset_of_full_in_document_order() {
        // Fuzz lightly over word counts and rank permutations.
        let mut seed = 42u64;
        for _ in 0..200 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = 1 + (seed >> 60) as usize % 6;
            let counts: Vec<usize> = (0..n)
                .map(|i| 2 + ((seed >> (5 * i)) as usize % 120))
                .collect();
            let doc = doc_with_word_counts(&counts);
            // Retain the ceiling half with ranks by position rotation.
            let keep = n.div_ceil(2);
            let mut ranks = vec![None; n];
            for (r, slot) in ranks.iter_mut().take(keep).enumerate() {
                *slot = Some(keep - r);
            }
            let scores = scores_with_ranks(&ranks);
            let full = extract_full_summary(&doc, &scores);
            let final_ = extract_final_summary(&doc, &scores, 182).unwrap();
            let full_idx: Vec<usize> =
                full.selected.iter().map(|s| s.sentence_index).collect();
            let final_idx: Vec<usize> =
                final_.selected.iter().map(|s| s.sentence_index).collect();
            // Subset.
            assert!(final_idx.iter().all(|i| full_idx.contains(i)));
            // Strictly increasing (document order).
            assert!(final_idx.windows(2).all(|w| w[0] < w[1]));
            assert!(full_idx.windows(2).all(|w| w[0] < w[1]));
            // Budget or override.
            assert!(final_.total_words <= 182 || (final_.total_sentences == 1 && final_.limit_overridden));
        }
    }
}

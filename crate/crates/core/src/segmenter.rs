//! Trainable sentence-boundary detection.
//!
//! Sorani research prose uses `.` both as a sentence terminal and after
//! abbreviations (`د.` for doctor, initials, section labels), so a fixed
//! split-on-period rule over-segments. This module learns, without any
//! labelled data, which period-bearing types are abbreviations, which
//! word pairs are collocations spanning a period, and which types
//! typically start sentences. It follows the unsupervised
//! punctuation-statistics approach of Kiss & Strunk (2006): a modified
//! Dunning log-likelihood ratio scores each candidate against fixed
//! thresholds.
//!
//! Training is two passes over the corpus: pass one builds the type
//! frequency table and decides abbreviations, pass two places
//! provisional breaks with those abbreviations and gathers
//! period-adjacent pair statistics for collocations and sentence
//! starters. Sentence starters are decided before collocations because
//! a pair whose second member is itself a frequent sentence starter is
//! evidence of a real boundary, not of a collocation.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{AtsError, Result};
use crate::normalizer::{is_sentence_terminal, is_word_char};

/// Current on-disk model schema version. Bump on any format change.
const MODEL_VERSION: u32 = 1;

/// Decision thresholds for the three statistical tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmenterParams {
    /// Minimum abbreviation score (length- and penalty-weighted
    /// log-likelihood) for a type to count as an abbreviation.
    pub abbrev_threshold: f64,
    /// Minimum log-likelihood for a period-spanning pair to count as a
    /// collocation.
    pub colloc_threshold: f64,
    /// Minimum log-likelihood for a type to count as a sentence starter.
    pub starter_threshold: f64,
}

impl Default for SegmenterParams {
    fn default() -> Self {
        SegmenterParams {
            abbrev_threshold: 0.3,
            colloc_threshold: 7.88,
            starter_threshold: 30.0,
        }
    }
}

/// One detected sentence: half-open codepoint offsets into the input
/// plus the covered text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceSpan {
    /// Codepoint (not byte) index of the first character.
    pub start: usize,
    /// Codepoint index one past the last character.
    pub end: usize,
    /// The characters at `start..end`.
    pub text: String,
}

/// A trained boundary model: the three learned sets plus the type
/// frequency table they were derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmenterModel {
    abbreviations: BTreeSet<String>,
    collocations: BTreeSet<(String, String)>,
    params: SegmenterParams,
    sentence_starters: BTreeSet<String>,
    type_counts: BTreeMap<String, u64>,
    version: u32,
}

// ---------------------------------------------------------------------------
// Token scanning
// ---------------------------------------------------------------------------

/// A whitespace-delimited chunk, reduced to the features the boundary
/// statistics need.
#[derive(Debug, Clone)]
struct ScanToken {
    /// Codepoint index of the chunk's first character.
    start: usize,
    /// Codepoint index one past the chunk's last character.
    end: usize,
    /// Lowercased type: the chunk with non-word characters stripped
    /// from both ends (which removes any trailing period). Empty for
    /// pure punctuation chunks.
    typ: String,
    /// Chunk's final character is `.`.
    period_final: bool,
    /// Chunk's final character is `!`, `?`, or `؟`.
    terminal_final: bool,
    /// Type contains at least one letter or digit.
    is_word: bool,
}

/// Splits `chars` into whitespace-delimited tokens with their types.
fn scan_tokens(chars: &[char]) -> Vec<ScanToken> {
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        toks.push(make_token(chars, start, i));
    }
    toks
}

fn make_token(chars: &[char], start: usize, end: usize) -> ScanToken {
    let last = chars[end - 1];
    let terminal_final = last != '.' && is_sentence_terminal(last);
    let period_final = last == '.';
    // Trim non-word characters (quotes, brackets, commas, the trailing
    // period itself) off both ends before lowercasing.
    let mut a = start;
    let mut b = end;
    while a < b && !is_word_char(chars[a]) {
        a += 1;
    }
    while b > a && !is_word_char(chars[b - 1]) {
        b -= 1;
    }
    let typ: String = chars[a..b].iter().flat_map(|c| c.to_lowercase()).collect();
    let is_word = typ.chars().any(char::is_alphanumeric);
    ScanToken {
        start,
        end,
        typ,
        period_final,
        terminal_final,
        is_word,
    }
}

// ---------------------------------------------------------------------------
// Likelihood statistics
// ---------------------------------------------------------------------------

/// `count * ln(p)` with the convention `0 * ln(0) = 0`.
fn ll_term(count: f64, p: f64) -> f64 {
    if count == 0.0 {
        0.0
    } else {
        count * p.ln()
    }
}

/// Dunning log-likelihood for abbreviation detection: how much better
/// "periods follow this type with probability 0.99" explains the data
/// than the corpus-wide period rate does.
fn dunning_log_likelihood(count_a: f64, count_b: f64, count_ab: f64, n: f64) -> f64 {
    // Clamping keeps ln(1 - p1) finite on degenerate corpora where
    // nearly every token ends with a period.
    let p1 = (count_b / n).min(0.99);
    let p2 = 0.99;
    let null_hypo = ll_term(count_ab, p1) + ll_term(count_a - count_ab, 1.0 - p1);
    let alt_hypo = ll_term(count_ab, p2) + ll_term(count_a - count_ab, 1.0 - p2);
    -2.0 * (null_hypo - alt_hypo)
}

/// Dunning log-likelihood for bigram statistics (collocations and
/// sentence starters): evidence that seeing `a` changes the probability
/// of seeing `b` next.
fn col_log_likelihood(count_a: f64, count_b: f64, count_ab: f64, n: f64) -> f64 {
    let p = count_b / n;
    let p1 = count_ab / count_a;
    let p2 = (count_b - count_ab) / (n - count_a);
    let summand1 = ll_term(count_ab, p) + ll_term(count_a - count_ab, 1.0 - p);
    let summand2 =
        ll_term(count_b - count_ab, p) + ll_term(n - count_a - count_b + count_ab, 1.0 - p);
    let summand3 = if count_a == count_ab {
        0.0
    } else {
        ll_term(count_ab, p1) + ll_term(count_a - count_ab, 1.0 - p1)
    };
    let summand4 = if count_b == count_ab {
        0.0
    } else {
        ll_term(count_b - count_ab, p2) + ll_term(n - count_a - count_b + count_ab, 1.0 - p2)
    };
    let ll = -2.0 * (summand1 + summand2 - summand3 - summand4);
    // Degenerate corpora (e.g. a single repeated type) can push a
    // summand to ±inf; treat those as "no evidence".
    if ll.is_finite() {
        ll
    } else {
        0.0
    }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

/// Trains a boundary model on raw (already normalized) document texts
/// with default thresholds.
pub fn train_segmenter<S: AsRef<str>>(corpus: &[S]) -> Result<SegmenterModel> {
    train_segmenter_with_params(corpus, SegmenterParams::default())
}

/// Trains a boundary model with explicit thresholds.
pub fn train_segmenter_with_params<S: AsRef<str>>(
    corpus: &[S],
    params: SegmenterParams,
) -> Result<SegmenterModel> {
    let tokenized: Vec<Vec<ScanToken>> = corpus
        .iter()
        .map(|text| {
            let chars: Vec<char> = text.as_ref().chars().collect();
            scan_tokens(&chars)
        })
        .collect();

    let mut total_tokens: u64 = 0;
    let mut period_tokens: u64 = 0;
    // Types are counted separately by whether the occurrence carried a
    // trailing period; the abbreviation test needs both sides.
    let mut with_period: HashMap<String, u64> = HashMap::new();
    let mut without_period: HashMap<String, u64> = HashMap::new();
    for toks in &tokenized {
        for tok in toks {
            total_tokens += 1;
            if tok.period_final {
                period_tokens += 1;
            }
            if tok.typ.is_empty() {
                continue;
            }
            let map = if tok.period_final {
                &mut with_period
            } else {
                &mut without_period
            };
            *map.entry(tok.typ.clone()).or_default() += 1;
        }
    }
    if total_tokens == 0 {
        return Err(AtsError::EmptyCorpus);
    }
    let n = total_tokens as f64;

    // Pass one: abbreviation candidates are word types seen with a
    // trailing period. The raw log-likelihood is weighted down
    // exponentially by type length, up by internal periods, and down by
    // occurrences without a period.
    let mut abbreviations: BTreeSet<String> = BTreeSet::new();
    for (typ, &cwp) in &with_period {
        if !typ.chars().any(char::is_alphanumeric) {
            continue;
        }
        let cwop = without_period.get(typ).copied().unwrap_or(0);
        let ll = dunning_log_likelihood(
            (cwp + cwop) as f64,
            period_tokens as f64,
            cwp as f64,
            n,
        );
        let num_periods = typ.matches('.').count() as f64 + 1.0;
        let num_nonperiods = typ.chars().count() as f64 - num_periods + 1.0;
        let f_length = (-num_nonperiods).exp();
        let f_penalty = num_nonperiods.powf(-(cwop as f64));
        let score = ll * f_length * num_periods * f_penalty;
        if score >= params.abbrev_threshold {
            abbreviations.insert(typ.clone());
        }
    }

    // Pass two: place provisional breaks using the abbreviation set,
    // then collect statistics over period-adjacent token pairs.
    let mut sentbreak_count: u64 = 0;
    let mut starter_counts: HashMap<String, u64> = HashMap::new();
    let mut colloc_counts: HashMap<(String, String), u64> = HashMap::new();
    for toks in &tokenized {
        for i in 0..toks.len() {
            let tok = &toks[i];
            let breaks = tok.terminal_final
                || (tok.period_final && !abbreviations.contains(&tok.typ));
            if breaks {
                sentbreak_count += 1;
            }
            let Some(next) = toks.get(i + 1) else { continue };
            if !tok.period_final {
                continue;
            }
            if breaks && next.is_word {
                *starter_counts.entry(next.typ.clone()).or_default() += 1;
            }
            if tok.is_word && next.is_word {
                // Candidate pairs are gathered whether or not the first
                // pass broke here, so collocations the abbreviation
                // stage missed can still rescue a false break.
                *colloc_counts
                    .entry((tok.typ.clone(), next.typ.clone()))
                    .or_default() += 1;
            }
        }
    }

    let type_count = |typ: &str| -> u64 {
        with_period.get(typ).copied().unwrap_or(0)
            + without_period.get(typ).copied().unwrap_or(0)
    };

    // Sentence starters first; the collocation stage consults them.
    let mut sentence_starters: BTreeSet<String> = BTreeSet::new();
    if sentbreak_count > 0 {
        for (typ, &at_break) in &starter_counts {
            let typ_count = type_count(typ);
            if typ_count < at_break {
                continue;
            }
            let ll = col_log_likelihood(
                sentbreak_count as f64,
                typ_count as f64,
                at_break as f64,
                n,
            );
            let skewed_toward_breaks = n / sentbreak_count as f64
                > typ_count as f64 / at_break as f64;
            if ll >= params.starter_threshold && skewed_toward_breaks {
                sentence_starters.insert(typ.clone());
            }
        }
    }

    let mut collocations: BTreeSet<(String, String)> = BTreeSet::new();
    for ((typ1, typ2), &pair_count) in &colloc_counts {
        if sentence_starters.contains(typ2) {
            continue;
        }
        let c1 = type_count(typ1);
        let c2 = type_count(typ2);
        if c1 > 1 && c2 > 1 && pair_count > 1 && pair_count <= c1.min(c2) {
            let ll = col_log_likelihood(c1 as f64, c2 as f64, pair_count as f64, n);
            let skewed_toward_pair = n as f64 / c1 as f64 > c2 as f64 / pair_count as f64;
            if ll >= params.colloc_threshold && skewed_toward_pair {
                collocations.insert((typ1.clone(), typ2.clone()));
            }
        }
    }

    let mut type_counts: BTreeMap<String, u64> = BTreeMap::new();
    for (typ, &c) in &with_period {
        *type_counts.entry(typ.clone()).or_default() += c;
    }
    for (typ, &c) in &without_period {
        *type_counts.entry(typ.clone()).or_default() += c;
    }

    Ok(SegmenterModel {
        abbreviations,
        collocations,
        params,
        sentence_starters,
        type_counts,
        version: MODEL_VERSION,
    })
}

// ---------------------------------------------------------------------------
// Model API
// ---------------------------------------------------------------------------

impl SegmenterModel {
    /// Builds a model directly from its learned sets. Types mentioned
    /// by the sets are entered into the frequency table if missing, so
    /// the table always covers them.
    pub fn from_parts(
        abbreviations: BTreeSet<String>,
        collocations: BTreeSet<(String, String)>,
        sentence_starters: BTreeSet<String>,
        params: SegmenterParams,
    ) -> Self {
        let mut type_counts = BTreeMap::new();
        for t in &abbreviations {
            type_counts.insert(t.clone(), 1);
        }
        for t in &sentence_starters {
            type_counts.entry(t.clone()).or_insert(1);
        }
        for (a, b) in &collocations {
            type_counts.entry(a.clone()).or_insert(1);
            type_counts.entry(b.clone()).or_insert(1);
        }
        SegmenterModel {
            abbreviations,
            collocations,
            params,
            sentence_starters,
            type_counts,
            version: MODEL_VERSION,
        }
    }

    /// Adds one abbreviation type (lowercased) after training, the hook
    /// for manual lexicon overrides.
    pub fn insert_abbreviation(&mut self, typ: &str) {
        let typ: String = typ.chars().flat_map(|c| c.to_lowercase()).collect();
        self.type_counts.entry(typ.clone()).or_insert(1);
        self.abbreviations.insert(typ);
    }

    pub fn abbreviations(&self) -> &BTreeSet<String> {
        &self.abbreviations
    }

    pub fn collocations(&self) -> &BTreeSet<(String, String)> {
        &self.collocations
    }

    pub fn sentence_starters(&self) -> &BTreeSet<String> {
        &self.sentence_starters
    }

    pub fn type_counts(&self) -> &BTreeMap<String, u64> {
        &self.type_counts
    }

    pub fn params(&self) -> SegmenterParams {
        self.params
    }

    /// Splits `text` into sentence spans.
    ///
    /// `!`, `?`, and `؟` always end a sentence. A `.` ends one unless
    /// the model says otherwise: a learned collocation across the
    /// period suppresses the break; after a learned abbreviation the
    /// break survives only when the next type is a learned sentence
    /// starter. Span offsets are codepoint indices; concatenating the
    /// spans and the gaps between them reproduces `text` exactly.
    pub fn segment(&self, text: &str) -> Vec<SentenceSpan> {
        let chars: Vec<char> = text.chars().collect();
        let toks = scan_tokens(&chars);
        let mut spans = Vec::new();
        let mut sent_start: Option<usize> = None;
        for i in 0..toks.len() {
            let tok = &toks[i];
            if sent_start.is_none() {
                sent_start = Some(tok.start);
            }
            let boundary = tok.terminal_final
                || (tok.period_final && self.period_is_boundary(tok, toks.get(i + 1)));
            if boundary {
                let start = sent_start.take().expect("span start set above");
                spans.push(SentenceSpan {
                    start,
                    end: tok.end,
                    text: chars[start..tok.end].iter().collect(),
                });
            }
        }
        if let Some(start) = sent_start {
            let end = toks.last().expect("nonempty while a span is open").end;
            spans.push(SentenceSpan {
                start,
                end,
                text: chars[start..end].iter().collect(),
            });
        }
        spans
    }

    fn period_is_boundary(&self, tok: &ScanToken, next: Option<&ScanToken>) -> bool {
        let Some(next) = next else {
            // Document-final period: close the last sentence at it.
            return true;
        };
        if self
            .collocations
            .contains(&(tok.typ.clone(), next.typ.clone()))
        {
            return false;
        }
        if self.abbreviations.contains(&tok.typ) {
            return self.sentence_starters.contains(&next.typ);
        }
        true
    }

    /// Serializes the model as pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    /// Parses a model from JSON, checking version and set/table
    /// consistency.
    pub fn from_json(json: &str) -> Result<Self> {
        let model: SegmenterModel = serde_json::from_str(json)
            .map_err(|e| AtsError::MalformedModel(e.to_string()))?;
        if model.version != MODEL_VERSION {
            return Err(AtsError::MalformedModel(format!(
                "unsupported model version {} (expected {})",
                model.version, MODEL_VERSION
            )));
        }
        let known = |typ: &String| model.type_counts.get(typ).copied().unwrap_or(0) >= 1;
        let sets_covered = model.abbreviations.iter().all(known)
            && model.sentence_starters.iter().all(known)
            && model
                .collocations
                .iter()
                .all(|(a, b)| known(a) && known(b));
        if !sets_covered {
            return Err(AtsError::MalformedModel(
                "learned sets mention types absent from the frequency table".into(),
            ));
        }
        Ok(model)
    }

    /// Writes the model to `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| AtsError::io(path, e))
    }

    /// Reads a model from `path`.
    pub fn load(path: &Path) -> Result<Self> {
        let json = fs::read_to_string(path).map_err(|e| AtsError::io(path, e))?;
        Self::from_json(&json)
    }
}

//! Tokenization, light stemming, and two-tier stopword removal.
//!
//! Each normalized document body is segmented into sentences, split
//! into tokens (punctuation split off as standalone tokens, ZWNJ kept
//! word-internal), light-stemmed with an ordered suffix inventory, and
//! filtered against a general stopword list plus a per-department
//! domain list. Stopword matching happens on stems: the function words
//! the lists target are unchanged by stemming, while inflected content
//! words would otherwise slip past surface matching.
//!
//! The stage also emits the four per-document verification artifacts
//! (`Processed_<id>.txt`, `Processed_<id>.xml`, `Debug_<id>.txt`,
//! `Processed_<id>_tokens.txt`) used to eyeball every stage of the
//! pipeline. In those files word stems are wrapped in underscore
//! markers (`_stem_`) — the stem-boundary notation of the artifact
//! format — while in-memory stems never carry markers.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::error::{AtsError, Result};
use crate::normalizer::{is_word_char, Normalizer};
use crate::segmenter::{SegmenterModel, SentenceSpan};

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

/// Splits a normalized sentence into surface tokens.
///
/// Whitespace separates tokens; every non-word character (punctuation,
/// quotes, brackets) becomes a standalone single-character token. ZWNJ
/// and Arabic combining marks count as word characters.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for c in sentence.chars() {
        if c.is_whitespace() {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
        } else if is_word_char(c) {
            word.push(c);
        } else {
            if !word.is_empty() {
                tokens.push(std::mem::take(&mut word));
            }
            tokens.push(c.to_string());
        }
    }
    if !word.is_empty() {
        tokens.push(word);
    }
    tokens
}

// ---------------------------------------------------------------------------
// Stemmer
// ---------------------------------------------------------------------------

/// Rule-based light stemmer over an ordered suffix inventory.
///
/// At each step the longest matching suffix is stripped (ties broken by
/// inventory order), at most `max_strips` times, never leaving fewer
/// than `min_stem_chars` characters. Punctuation tokens pass through
/// unchanged.
#[derive(Debug, Clone)]
pub struct Stemmer {
    suffixes: Vec<Vec<char>>,
    min_stem_chars: usize,
    max_strips: usize,
}

impl Stemmer {
    /// The bundled Sorani suffix inventory.
    pub fn sorani_default() -> Self {
        Self::from_inventory_str(include_str!("../data/sorani.suffixes"))
            .expect("bundled inventory is valid")
    }

    /// Parses an inventory: one suffix per line, `#` comments, blank
    /// lines ignored.
    pub fn from_inventory_str(text: &str) -> Result<Self> {
        let mut suffixes = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.chars().any(|c| c.is_whitespace()) {
                return Err(AtsError::MalformedSuffixes(format!(
                    "suffix {line:?} contains whitespace"
                )));
            }
            suffixes.push(line.chars().collect());
        }
        if suffixes.is_empty() {
            return Err(AtsError::MalformedSuffixes(
                "inventory lists no suffixes".into(),
            ));
        }
        Ok(Stemmer {
            suffixes,
            min_stem_chars: 2,
            max_strips: 2,
        })
    }

    /// Loads an inventory file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| AtsError::io(path, e))?;
        Self::from_inventory_str(&text)
    }

    /// Stems one surface token.
    pub fn stem(&self, surface: &str) -> String {
        if !surface.chars().any(char::is_alphanumeric) {
            return surface.to_string();
        }
        let mut stem: Vec<char> = surface.chars().collect();
        for _ in 0..self.max_strips {
            let best = self
                .suffixes
                .iter()
                .filter(|suf| {
                    stem.len() >= suf.len() + self.min_stem_chars
                        && stem[stem.len() - suf.len()..] == suf[..]
                })
                .max_by_key(|suf| suf.len());
            match best {
                Some(suf) => {
                    let keep = stem.len() - suf.len();
                    stem.truncate(keep);
                }
                None => break,
            }
        }
        stem.into_iter().collect()
    }
}

// ---------------------------------------------------------------------------
// Stopword lists
// ---------------------------------------------------------------------------

/// Which list removed a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopwordSource {
    None,
    General,
    Domain,
}

/// General + per-department stopword stems. Entries are normalized and
/// stemmed at load time, so membership tests are exact string equality.
#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    general: BTreeSet<String>,
    domain: BTreeMap<String, BTreeSet<String>>,
}

#[derive(Deserialize)]
struct StopwordFile {
    #[serde(default)]
    department: Option<String>,
    stopwords: Vec<String>,
}

impl StopwordList {
    /// No stopwords at all.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a list from already-normalized stem sets (test hook and
    /// programmatic use).
    pub fn from_stem_sets(
        general: BTreeSet<String>,
        domain: BTreeMap<String, BTreeSet<String>>,
    ) -> Self {
        StopwordList { general, domain }
    }

    /// Loads `general.json` plus one JSON file per department from
    /// `dir`. Every entry is normalized and stemmed with the same
    /// configuration as document text.
    pub fn load(dir: &Path, normalizer: &Normalizer, stemmer: &Stemmer) -> Result<Self> {
        let mut list = StopwordList::default();
        let entries = fs::read_dir(dir).map_err(|e| AtsError::io(dir, e))?;
        let mut paths: Vec<_> = entries
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(|e| AtsError::io(dir, e))?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let text = fs::read_to_string(&path).map_err(|e| AtsError::io(&path, e))?;
            let file: StopwordFile =
                serde_json::from_str(&text).map_err(|e| AtsError::MalformedStopwords {
                    path: path.clone(),
                    message: e.to_string(),
                })?;
            let stems: BTreeSet<String> = file
                .stopwords
                .iter()
                .map(|w| stemmer.stem(normalizer.normalize(w).trim()))
                .filter(|s| !s.is_empty())
                .collect();
            let is_general = path
                .file_stem()
                .is_some_and(|s| s.eq_ignore_ascii_case("general"));
            if is_general {
                list.general.extend(stems);
            } else {
                let department = file.department.ok_or_else(|| AtsError::MalformedStopwords {
                    path: path.clone(),
                    message: "missing \"department\" field".into(),
                })?;
                list.domain.entry(department).or_default().extend(stems);
            }
        }
        Ok(list)
    }

    pub fn general(&self) -> &BTreeSet<String> {
        &self.general
    }

    pub fn domain(&self, department: &str) -> Option<&BTreeSet<String>> {
        self.domain.get(department)
    }

    pub fn departments(&self) -> impl Iterator<Item = &str> {
        self.domain.keys().map(String::as_str)
    }

    /// Classifies a stem: the general tier wins over the domain tier.
    fn source_of(&self, stem: &str, domain: Option<&BTreeSet<String>>) -> StopwordSource {
        if self.general.contains(stem) {
            StopwordSource::General
        } else if domain.is_some_and(|d| d.contains(stem)) {
            StopwordSource::Domain
        } else {
            StopwordSource::None
        }
    }
}

// ---------------------------------------------------------------------------
// Tokens and processed documents
// ---------------------------------------------------------------------------

/// One surface token with its stem and stopword classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub stem: String,
    pub sentence_index: usize,
    pub is_stopword: bool,
    pub stopword_source: StopwordSource,
}

impl Token {
    /// Word tokens contain at least one letter or digit; everything
    /// else is punctuation.
    pub fn is_word(&self) -> bool {
        self.surface.chars().any(char::is_alphanumeric)
    }
}

/// A fully preprocessed document: every token kept, stopwords flagged
/// rather than deleted, so downstream stages can choose their view.
#[derive(Debug, Clone)]
pub struct ProcessedDocument {
    pub doc_id: String,
    pub department: String,
    /// All sentences with all their tokens (stopwords flagged).
    pub sentences: Vec<(SentenceSpan, Vec<Token>)>,
    /// Removal log in document order: (surface, which list).
    pub removed_stopwords: Vec<(String, StopwordSource)>,
    /// Non-fatal notes (e.g. a missing domain list that was skipped).
    pub warnings: Vec<String>,
}

impl ProcessedDocument {
    /// Total token count across all sentences.
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(|(_, toks)| toks.len()).sum()
    }

    /// Number of removed stopwords.
    pub fn removed_count(&self) -> usize {
        self.removed_stopwords.len()
    }

    /// Kept (non-stopword) tokens of one sentence.
    pub fn kept_tokens(&self, sentence: usize) -> impl Iterator<Item = &Token> {
        self.sentences[sentence].1.iter().filter(|t| !t.is_stopword)
    }

    /// Kept word-token stems per sentence — the scorer's view.
    pub fn kept_stem_sentences(&self) -> Vec<Vec<String>> {
        self.sentences
            .iter()
            .map(|(_, toks)| {
                toks.iter()
                    .filter(|t| !t.is_stopword && t.is_word())
                    .map(|t| t.stem.clone())
                    .collect()
            })
            .collect()
    }

    /// Original surface text of one sentence.
    pub fn sentence_text(&self, sentence: usize) -> &str {
        &self.sentences[sentence].0.text
    }
}

/// Marks stopwords among stemmed tokens and extracts the removal log.
///
/// A token is removed iff its stem is in the general list or in the
/// department's domain list. Kept tokens stay in original order; the
/// log preserves removal (document) order. A department without a
/// domain list is an error unless `allow_missing_domain` is set, in
/// which case the domain tier is skipped and a warning returned.
pub fn remove_stopwords(
    mut tokens: Vec<Token>,
    lists: &StopwordList,
    department: &str,
    allow_missing_domain: bool,
) -> Result<(Vec<Token>, Vec<(String, StopwordSource)>, Vec<String>)> {
    let mut warnings = Vec::new();
    let domain = match lists.domain(department) {
        Some(d) => Some(d),
        // A configured domain tier that lacks this department is worth
        // flagging; an entirely absent domain tier is not.
        None if allow_missing_domain => {
            if lists.departments().next().is_some() {
                warnings.push(format!(
                    "no domain stopword list for department {department:?}; domain tier skipped"
                ));
            }
            None
        }
        None => return Err(AtsError::UnknownDepartment(department.to_string())),
    };
    let mut removed = Vec::new();
    for tok in &mut tokens {
        let source = lists.source_of(&tok.stem, domain);
        if source != StopwordSource::None {
            tok.is_stopword = true;
            tok.stopword_source = source;
            removed.push((tok.surface.clone(), source));
        }
    }
    Ok((tokens, removed, warnings))
}

/// Runs segment → tokenize → stem → remove_stopwords over a normalized
/// document body.
pub fn preprocess_document(
    doc_id: &str,
    department: &str,
    body: &str,
    model: &SegmenterModel,
    stemmer: &Stemmer,
    stopwords: &StopwordList,
    allow_missing_domain: bool,
) -> Result<ProcessedDocument> {
    let spans = model.segment(body);
    let mut all_tokens: Vec<Token> = Vec::new();
    let mut sentence_bounds = Vec::new();
    for (idx, span) in spans.iter().enumerate() {
        let start = all_tokens.len();
        for surface in tokenize(&span.text) {
            let stem = stemmer.stem(&surface);
            all_tokens.push(Token {
                surface,
                stem,
                sentence_index: idx,
                is_stopword: false,
                stopword_source: StopwordSource::None,
            });
        }
        sentence_bounds.push(start..all_tokens.len());
    }
    let (flagged, removed, warnings) =
        remove_stopwords(all_tokens, stopwords, department, allow_missing_domain)?;
    let sentences = spans
        .into_iter()
        .zip(sentence_bounds)
        .map(|(span, range)| (span, flagged[range].to_vec()))
        .collect();
    Ok(ProcessedDocument {
        doc_id: doc_id.to_string(),
        department: department.to_string(),
        sentences,
        removed_stopwords: removed,
        warnings,
    })
}

// ---------------------------------------------------------------------------
// Artifact files
// ---------------------------------------------------------------------------

/// Renders one token for artifact files: word stems wrapped in
/// underscore markers, punctuation bare.
fn render_token(tok: &Token) -> String {
    if tok.is_word() {
        format!("_{}_", tok.stem)
    } else {
        tok.surface.clone()
    }
}

/// One artifact line per sentence: kept tokens, marker notation.
pub fn render_stem_line(doc: &ProcessedDocument, sentence: usize) -> String {
    doc.kept_tokens(sentence)
        .map(render_token)
        .collect::<Vec<_>>()
        .join(" ")
}

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| AtsError::io(path, e))
}

/// Writes the four verification artifacts into `out_dir`.
///
/// * `Processed_<id>.txt` — one line per sentence, kept stems.
/// * `Processed_<id>.xml` — the same lines wrapped in `<s>` elements.
/// * `Debug_<id>.txt` — the stopword removal log plus its count.
/// * `Processed_<id>_tokens.txt` — every token (kept and removed),
///   one per line.
pub fn write_artifacts(doc: &ProcessedDocument, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| AtsError::io(out_dir, e))?;
    let id = &doc.doc_id;

    let mut processed = String::new();
    for i in 0..doc.sentences.len() {
        processed.push_str(&render_stem_line(doc, i));
        processed.push('\n');
    }
    write_file(&out_dir.join(format!("Processed_{id}.txt")), &processed)?;

    let mut xml = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    xml.push_str(&format!("<doc id=\"{}\">\n", xml_escape(id)));
    for i in 0..doc.sentences.len() {
        xml.push_str(&format!("  <s>{}</s>\n", xml_escape(&render_stem_line(doc, i))));
    }
    xml.push_str("</doc>\n");
    write_file(&out_dir.join(format!("Processed_{id}.xml")), &xml)?;

    let log = doc
        .removed_stopwords
        .iter()
        .map(|(surface, _)| surface.as_str())
        .collect::<Vec<_>>()
        .join(" , ");
    let debug = format!(
        "Stop words removed one by one: ({log})\nNumber of stop words removed: {}\n",
        doc.removed_count()
    );
    write_file(&out_dir.join(format!("Debug_{id}.txt")), &debug)?;

    let mut tokens_txt = String::new();
    for (_, toks) in &doc.sentences {
        for tok in toks {
            tokens_txt.push_str(&render_token(tok));
            tokens_txt.push('\n');
        }
    }
    write_file(
        &out_dir.join(format!("Processed_{id}_tokens.txt")),
        &tokens_txt,
    )?;
    Ok(())
}

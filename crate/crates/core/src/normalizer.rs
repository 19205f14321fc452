//! Canonicalization of raw converted text.
//!
//! PDF-extracted Sorani text arrives with mixed Arabic/Farsi codepoints
//! for the same letters, mixed digit families, stray tatweel, and the
//! broken line layout typical of column extraction. Everything
//! downstream (segmentation, token statistics, ROUGE) assumes one
//! canonical form, produced here. The full chain is idempotent:
//! normalizing already-normalized text changes nothing.

use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{AtsError, Result};

/// Characters that end a sentence. `،` (Arabic comma) and `;` do not.
pub const SENTENCE_TERMINALS: [char; 4] = ['.', '!', '?', '\u{061F}'];

const TATWEEL: char = '\u{0640}';
const ZWNJ: char = '\u{200C}';

/// Returns true for characters that may precede a kept line break.
pub fn is_sentence_terminal(c: char) -> bool {
    SENTENCE_TERMINALS.contains(&c)
}

/// Returns true for characters that belong inside a word token.
///
/// Besides letters and digits this admits ZWNJ (word-internal joiner
/// control in Sorani orthography) and the Arabic combining marks
/// U+064B..=U+065F and U+0670, so a vocalized word stays one token.
pub fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == ZWNJ || ('\u{064B}'..='\u{065F}').contains(&c) || c == '\u{0670}'
}

/// Target digit family for numeral unification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumeralFamily {
    /// ASCII 0-9, so word counts and term statistics treat `5` and `٥`
    /// identically and the CSV layer stays plain.
    #[default]
    Ascii,
}

/// Character-level normalization settings.
///
/// The character map is a function (each source codepoint maps to
/// exactly one target) and no target appears as a source, so the map
/// reaches a fixpoint after one application.
#[derive(Debug, Clone)]
pub struct NormalizationConfig {
    char_map: Vec<(char, char)>,
    pub numeral_policy: NumeralFamily,
    pub strip_tatweel: bool,
    pub collapse_whitespace: bool,
    pub preserve_zwnj: bool,
}

impl NormalizationConfig {
    /// The standard Sorani table: Arabic yeh → Farsi yeh, Arabic kaf →
    /// keheh, tatweel stripped, ZWNJ preserved.
    pub fn sorani_default() -> Self {
        Self::from_charmap_str(include_str!("../data/sorani.charmap"))
            .expect("bundled charmap is valid")
    }

    /// Parses a charmap file: one `SOURCE_HEX TARGET_HEX` pair per
    /// line, `#` comments.
    pub fn from_charmap_str(text: &str) -> Result<Self> {
        let mut char_map = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(AtsError::MalformedCharMap {
                    line: line_no,
                    message: format!("expected `SOURCE_HEX TARGET_HEX`, got {line:?}"),
                });
            }
            let source = parse_codepoint(fields[0], line_no)?;
            let target = parse_codepoint(fields[1], line_no)?;
            char_map.push((source, target));
        }
        Self::validated(char_map)
    }

    pub fn from_charmap_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AtsError::io(path, e))?;
        Self::from_charmap_str(&text)
    }

    fn validated(char_map: Vec<(char, char)>) -> Result<Self> {
        let mut sources = BTreeSet::new();
        for (source, _) in &char_map {
            if !sources.insert(*source) {
                return Err(AtsError::MalformedCharMap {
                    line: 0,
                    message: format!("duplicate source U+{:04X}", *source as u32),
                });
            }
        }
        for (_, target) in &char_map {
            if sources.contains(target) {
                return Err(AtsError::MalformedCharMap {
                    line: 0,
                    message: format!(
                        "target U+{:04X} also appears as a source (map would not be idempotent)",
                        *target as u32
                    ),
                });
            }
            if is_nonascii_digit(*target) || *target == TATWEEL {
                return Err(AtsError::MalformedCharMap {
                    line: 0,
                    message: format!(
                        "target U+{:04X} would be rewritten by a later stage",
                        *target as u32
                    ),
                });
            }
        }
        if sources.contains(&ZWNJ) {
            return Err(AtsError::MalformedCharMap {
                line: 0,
                message: "ZWNJ (U+200C) is word-internal in Kurdish and may not be remapped".into(),
            });
        }
        Ok(NormalizationConfig {
            char_map,
            numeral_policy: NumeralFamily::Ascii,
            strip_tatweel: true,
            collapse_whitespace: true,
            preserve_zwnj: true,
        })
    }

    pub fn char_map(&self) -> &[(char, char)] {
        &self.char_map
    }

    fn map(&self, c: char) -> Option<char> {
        self.char_map
            .iter()
            .find(|(source, _)| *source == c)
            .map(|(_, target)| *target)
    }
}

fn parse_codepoint(field: &str, line: usize) -> Result<char> {
    let value = u32::from_str_radix(field, 16).map_err(|_| AtsError::MalformedCharMap {
        line,
        message: format!("{field:?} is not a hex codepoint"),
    })?;
    char::from_u32(value).ok_or_else(|| AtsError::MalformedCharMap {
        line,
        message: format!("U+{value:04X} is not a valid scalar value"),
    })
}

fn is_nonascii_digit(c: char) -> bool {
    ('\u{0660}'..='\u{0669}').contains(&c) || ('\u{06F0}'..='\u{06F9}').contains(&c)
}

/// Applies the character map, tatweel stripping, and ZWNJ policy.
/// Unmapped codepoints pass through.
pub fn standardize_characters(raw: &str, cfg: &NormalizationConfig) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        if c == TATWEEL && cfg.strip_tatweel {
            continue;
        }
        if c == ZWNJ && !cfg.preserve_zwnj {
            continue;
        }
        out.push(cfg.map(c).unwrap_or(c));
    }
    out
}

/// Maps Arabic-Indic (U+0660–U+0669) and Extended Arabic-Indic
/// (U+06F0–U+06F9) digits to ASCII digit-by-digit. Character count is
/// unchanged.
pub fn unify_numerals(raw: &str, cfg: &NormalizationConfig) -> String {
    let NumeralFamily::Ascii = cfg.numeral_policy;
    raw.chars()
        .map(|c| match c {
            '\u{0660}'..='\u{0669}' => ascii_digit(c as u32 - 0x0660),
            '\u{06F0}'..='\u{06F9}' => ascii_digit(c as u32 - 0x06F0),
            _ => c,
        })
        .collect()
}

fn ascii_digit(value: u32) -> char {
    char::from_u32('0' as u32 + value).unwrap()
}

/// Repairs the line layout of converted text: trims every line,
/// collapses runs of blank lines to a single paragraph break, and joins
/// a line break with a space whenever the preceding line does not end
/// in sentence-terminal punctuation (such breaks are extraction
/// artifacts, not sentence boundaries).
pub fn repair_layout(raw: &str) -> String {
    let unified = raw.replace("\r\n", "\n").replace('\r', "\n");
    let mut out = String::with_capacity(unified.len());
    let mut blank_seen = false;
    for line in unified.split('\n').map(str::trim) {
        if line.is_empty() {
            blank_seen = true;
            continue;
        }
        if out.is_empty() {
            out.push_str(line);
        } else if out.ends_with(is_sentence_terminal) {
            out.push_str(if blank_seen { "\n\n" } else { "\n" });
            out.push_str(line);
        } else {
            // mid-sentence break, regardless of intervening blank lines
            out.push(' ');
            out.push_str(line);
        }
        blank_seen = false;
    }
    out
}

fn collapse_inline_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c == '\n' {
            out.push('\n');
            pending_space = false;
        } else if c.is_whitespace() {
            pending_space = true;
        } else {
            if pending_space && !out.is_empty() && !out.ends_with('\n') {
                out.push(' ');
            }
            out.push(c);
            pending_space = false;
        }
    }
    out
}

/// The full normalization chain: character standardization, numeral
/// unification, whitespace collapse, and (unless disabled) layout
/// repair.
#[derive(Debug, Clone)]
pub struct Normalizer {
    cfg: NormalizationConfig,
    repair: bool,
}

impl Normalizer {
    pub fn new(cfg: NormalizationConfig) -> Self {
        Normalizer { cfg, repair: true }
    }

    pub fn sorani_default() -> Self {
        Normalizer::new(NormalizationConfig::sorani_default())
    }

    /// Skips layout repair (`--keep-layout`).
    pub fn keep_layout(mut self) -> Self {
        self.repair = false;
        self
    }

    pub fn config(&self) -> &NormalizationConfig {
        &self.cfg
    }

    pub fn normalize(&self, raw: &str) -> String {
        let text = standardize_characters(raw, &self.cfg);
        let text = unify_numerals(&text, &self.cfg);
        let text = if self.cfg.collapse_whitespace {
            collapse_inline_whitespace(&text)
        } else {
            text
        };
        if self.repair {
            repair_layout(&text)
        } else {
            text
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn test_cfg() -> NormalizationConfig {
        NormalizationConfig::sorani_default()
    }

    #[test]
    fn maps_yeh_and_kaf() {
        // ي (064A) -> ی (06CC); ك (0643) -> ک (06A9)
        assert_eq!(standardize_characters("علي", &test_cfg()), "علی");
        assert_eq!(standardize_characters("كتاب", &test_cfg()), "کتاب");
        assert_eq!(standardize_characters("", &test_cfg()), "");
    }

    #[test]
    fn strips_tatweel_keeps_zwnj() {
        assert_eq!(standardize_characters("كـتاب", &test_cfg()), "کتاب");
        let with_zwnj = "دەست\u{200C}پێک";
        assert_eq!(standardize_characters(with_zwnj, &test_cfg()), with_zwnj);
    }

    #[test]
    fn unifies_both_digit_families() {
        assert_eq!(unify_numerals("٢٠٢٣", &test_cfg()), "2023");
        assert_eq!(unify_numerals("۱۹٥ and 42", &test_cfg()), "195 and 42");
    }

    #[test]
    fn repair_joins_mid_sentence_breaks() {
        assert_eq!(repair_layout("abc\ndef."), "abc def.");
        assert_eq!(repair_layout("abc.\n\n\nDef."), "abc.\n\nDef.");
        assert_eq!(repair_layout("abc.\ndef."), "abc.\ndef.");
        assert_eq!(repair_layout("  abc \n   def.  "), "abc def.");
        assert_eq!(repair_layout("چۆنی؟\nباشم."), "چۆنی؟\nباشم.");
    }

    #[test]
    fn charmap_rejects_duplicate_source() {
        let err = NormalizationConfig::from_charmap_str("064A 06CC\n064A 06A9").unwrap_err();
        assert!(matches!(err, AtsError::MalformedCharMap { .. }));
    }

    #[test]
    fn charmap_rejects_target_that_is_a_source() {
        let err = NormalizationConfig::from_charmap_str("0061 0062\n0062 0063").unwrap_err();
        assert!(matches!(err, AtsError::MalformedCharMap { .. }));
    }

    #[test]
    fn charmap_rejects_bad_hex() {
        assert!(NormalizationConfig::from_charmap_str("zz 06CC").is_err());
        assert!(NormalizationConfig::from_charmap_str("064A").is_err());
        assert!(NormalizationConfig::from_charmap_str("D800 0061").is_err());
    }

    // Alphabet skewed toward the interesting codepoints: map sources,
    // digits of all three families, tatweel, ZWNJ, terminals, layout.
    fn fuzz_char() -> impl Strategy<Value = char> {
        prop_oneof![
            Just('\u{064A}'),
            Just('\u{0643}'),
            Just('\u{0640}'),
            Just('\u{200C}'),
            Just('ک'),
            Just('ب'),
            Just('٥'),
            Just('۳'),
            Just('7'),
            Just('.'),
            Just('؟'),
            Just('،'),
            Just(' '),
            Just('\n'),
            Just('\t'),
            any::<char>(),
        ]
    }

    fn fuzz_text() -> impl Strategy<Value = String> {
        proptest::collection::vec(fuzz_char(), 0..80).prop_map(String::from_iter)
    }

    proptest! {
        #[test]
        fn standardize_is_idempotent(s in fuzz_text()) {
            let cfg = test_cfg();
            let once = standardize_characters(&s, &cfg);
            prop_assert_eq!(standardize_characters(&once, &cfg), once);
        }

        #[test]
        fn unify_leaves_no_source_digits(s in fuzz_text()) {
            let out = unify_numerals(&s, &test_cfg());
            prop_assert!(!out.chars().any(is_nonascii_digit));
        }

        #[test]
        fn unify_preserves_char_count(s in fuzz_text()) {
            let out = unify_numerals(&s, &test_cfg());
            prop_assert_eq!(out.chars().count(), s.chars().count());
        }

        #[test]
        fn repair_output_is_clean(s in fuzz_text()) {
            let out = repair_layout(&s);
            prop_assert!(!out.contains("\n\n\n"));
            // every newline follows a terminal or another newline
            let chars: Vec<char> = out.chars().collect();
            for i in 1..chars.len() {
                if chars[i] == '\n' {
                    let prev = chars[i - 1];
                    prop_assert!(is_sentence_terminal(prev) || prev == '\n',
                        "newline after non-terminal {:?} in {:?}", prev, out);
                }
            }
        }

        #[test]
        fn full_chain_is_idempotent(s in fuzz_text()) {
            let norm = Normalizer::sorani_default();
            let once = norm.normalize(&s);
            prop_assert_eq!(norm.normalize(&once), once);
        }

        #[test]
        fn no_new_information_classes(s in fuzz_text()) {
            let norm = Normalizer::sorani_default();
            let out = norm.normalize(&s);
            let inputs: std::collections::BTreeSet<char> = s.chars().collect();
            for c in out.chars() {
                let allowed = inputs.contains(&c)
                    || norm.config().char_map().iter().any(|(_, t)| *t == c)
                    || c == ' '
                    || c == '\n'
                    || c.is_ascii_digit();
                prop_assert!(allowed, "invented character {:?}", c);
            }
        }
    }
}

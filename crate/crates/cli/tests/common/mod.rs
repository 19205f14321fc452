//! Deterministic synthetic Sorani corpus generator shared by the
//! acceptance suite. Documents are built from a fixed word bank with a
//! seeded generator, so every run produces byte-identical corpora.

use std::fs;
use std::path::Path;

use ats_core::rng::{fnv1a64, SplitMix64};

/// Content words plus a few connectives that the generated stopword
/// lists will remove.
const WORD_BANK: [&str; 45] = [
    "زانست",
    "توێژینەوە",
    "زانکۆ",
    "قوتابی",
    "مامۆستا",
    "بەش",
    "کتێب",
    "وانە",
    "زمان",
    "کولتوور",
    "مێژوو",
    "داتا",
    "شیکاری",
    "ئەنجام",
    "گرنگ",
    "بەرز",
    "نوێ",
    "کۆن",
    "فراوان",
    "ورد",
    "دەخوێنرێت",
    "دەنووسرێت",
    "کۆدەکرێتەوە",
    "باسدەکرێت",
    "پێشدەکەوێت",
    "هەیە",
    "دەبێت",
    "بوو",
    "زۆر",
    "کەم",
    "هەموو",
    "هەندێک",
    "ساڵ",
    "ڕۆژ",
    "کار",
    "شار",
    "گوند",
    "خێزان",
    "کۆمەڵگا",
    "ڕەفتار",
    "و",
    "لە",
    "بە",
    "بۆ",
    "کە",
];

const NAMES: [&str; 4] = ["ئازاد", "ژیان", "هێمن", "شیرین"];

pub struct CorpusSpec<'a> {
    /// (department, document count) pairs.
    pub departments: &'a [(&'a str, usize)],
    /// Approximate body length in words.
    pub body_words: usize,
    /// Approximate abstract length in words.
    pub abstract_words: usize,
    pub seed: u64,
    /// Append a conclusion section and record its offsets in a sidecar.
    pub with_conclusions: bool,
}

fn pick<'a>(rng: &mut SplitMix64, items: &[&'a str]) -> &'a str {
    items[rng.next_below(items.len() as u64) as usize]
}

/// One sentence of 8–16 bank words; roughly every seventh sentence
/// plants the abbreviation "د." before a name, mid-sentence, so the
/// trained segmenter has a recurring false-boundary site to learn.
fn sentence(rng: &mut SplitMix64, plant_abbreviation: bool) -> String {
    let n = 8 + rng.next_below(9) as usize;
    let mut words: Vec<String> = (0..n).map(|_| pick(rng, &WORD_BANK).to_string()).collect();
    if plant_abbreviation {
        let slot = 1 + rng.next_below((n - 2) as u64) as usize;
        words.insert(slot, format!("د. {}", pick(rng, &NAMES)));
    }
    let terminal = match rng.next_below(10) {
        0 => "؟",
        1 => "!",
        _ => ".",
    };
    format!("{}{}", words.join(" "), terminal)
}

fn passage(rng: &mut SplitMix64, target_words: usize, plant_abbreviations: bool) -> String {
    let mut out = String::new();
    let mut words = 0usize;
    let mut count = 0usize;
    while words < target_words {
        if !out.is_empty() {
            out.push(' ');
        }
        let plant = plant_abbreviations && count % 7 == 3;
        let s = sentence(rng, plant);
        words += s.split_whitespace().count();
        out.push_str(&s);
        count += 1;
    }
    out
}

/// Writes `<root>/<department>/<id>/{body.txt,abstract.txt[,conclusion.meta]}`
/// for every document described by `spec`. Generation order and
/// content are fully determined by the seed.
pub fn generate_corpus(root: &Path, spec: &CorpusSpec) {
    for (dept, count) in spec.departments {
        for i in 0..*count {
            let mut rng = SplitMix64::new(spec.seed ^ fnv1a64(dept) ^ (i as u64).wrapping_mul(0x9E3779B97F4A7C15));
            let dir = root.join(dept).join(format!("{dept}_{i:03}"));
            fs::create_dir_all(&dir).unwrap();
            let mut body = passage(&mut rng, spec.body_words, true);
            if spec.with_conclusions {
                let conclusion = format!(
                    "دەرئەنجامی توێژینەوەکە لێرە کۆدەکرێتەوە. {}",
                    passage(&mut rng, spec.body_words / 20 + 10, false)
                );
                let start = body.len() + 1;
                body.push(' ');
                body.push_str(&conclusion);
                fs::write(dir.join("conclusion.meta"), format!("{start} {}\n", body.len()))
                    .unwrap();
            }
            fs::write(dir.join("body.txt"), &body).unwrap();
            fs::write(
                dir.join("abstract.txt"),
                passage(&mut rng, spec.abstract_words, false),
            )
            .unwrap();
        }
    }
}

/// Writes a two-tier stopword directory covering the generated
/// connectives plus one domain list.
pub fn write_stopword_dir(dir: &Path, departments: &[&str]) {
    fs::create_dir_all(dir).unwrap();
    fs::write(
        dir.join("general.json"),
        "{\n  \"stopwords\": [\"و\", \"لە\", \"بە\", \"بۆ\", \"کە\"]\n}\n",
    )
    .unwrap();
    for dept in departments {
        fs::write(
            dir.join(format!("{dept}.json")),
            format!("{{\n  \"department\": \"{dept}\",\n  \"stopwords\": [\"زانکۆ\"]\n}}\n"),
        )
        .unwrap();
    }
}

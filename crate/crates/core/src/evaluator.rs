//! ROUGE-1, ROUGE-2, and ROUGE-L evaluation, implemented from scratch.
//!
//! Candidates and references are compared as whitespace token
//! sequences of normalized surface text — no stemming or stopword
//! removal, since generated summaries are judged as prose against the
//! reference abstracts. ROUGE-N uses clipped n-gram counting (overlap
//! of each n-gram type capped at its reference count); ROUGE-L uses
//! the longest common subsequence via dynamic programming. Degenerate
//! inputs (either side too short to form a single n-gram) score zero
//! rather than erroring, so batch evaluation never aborts.
//!
//! Aggregation mirrors the report layout: per-department arithmetic
//! means of precision/recall/F per metric, with the overall row being
//! the unweighted mean of the department means.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{AtsError, Result};

/// The three supported metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Rouge1,
    Rouge2,
    RougeL,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rouge1, Metric::Rouge2, Metric::RougeL];

    /// Stable label used in CSV files.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Rouge1 => "rouge1",
            Metric::Rouge2 => "rouge2",
            Metric::RougeL => "rougeL",
        }
    }
}

/// Precision/recall/F for one metric on one document pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RougeScore {
    pub metric: Metric,
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

impl RougeScore {
    fn new(metric: Metric, precision: f64, recall: f64) -> Self {
        let f = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        RougeScore {
            metric,
            precision,
            recall,
            f,
        }
    }

    fn zero(metric: Metric) -> Self {
        RougeScore {
            metric,
            precision: 0.0,
            recall: 0.0,
            f: 0.0,
        }
    }
}

/// All three metrics for one document pair.
pub type RougeMap = BTreeMap<Metric, RougeScore>;

fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// ROUGE-N (n ∈ {1,2}): clipped n-gram overlap.
pub fn rouge_n(candidate: &str, reference: &str, n: usize) -> RougeScore {
    let metric = match n {
        1 => Metric::Rouge1,
        2 => Metric::Rouge2,
        _ => panic!("rouge_n supports n = 1 or 2, got {n}"),
    };
    let cand = tokens(candidate);
    let refr = tokens(reference);
    if cand.len() < n || refr.len() < n {
        return RougeScore::zero(metric);
    }
    let mut ref_counts: BTreeMap<&[&str], usize> = BTreeMap::new();
    for gram in refr.windows(n) {
        *ref_counts.entry(gram).or_default() += 1;
    }
    let mut cand_counts: BTreeMap<&[&str], usize> = BTreeMap::new();
    for gram in cand.windows(n) {
        *cand_counts.entry(gram).or_default() += 1;
    }
    // Clipped: each n-gram type contributes at most its reference count.
    let overlap: usize = cand_counts
        .iter()
        .map(|(gram, &c)| c.min(ref_counts.get(gram).copied().unwrap_or(0)))
        .sum();
    let cand_grams = cand.len() - n + 1;
    let ref_grams = refr.len() - n + 1;
    RougeScore::new(
        metric,
        overlap as f64 / cand_grams as f64,
        overlap as f64 / ref_grams as f64,
    )
}

/// ROUGE-L: longest common subsequence over token sequences.
pub fn rouge_l(candidate: &str, reference: &str) -> RougeScore {
    let cand = tokens(candidate);
    let refr = tokens(reference);
    if cand.is_empty() || refr.is_empty() {
        return RougeScore::zero(Metric::RougeL);
    }
    let lcs = lcs_len(&cand, &refr);
    RougeScore::new(
        Metric::RougeL,
        lcs as f64 / cand.len() as f64,
        lcs as f64 / refr.len() as f64,
    )
}

/// Classic DP over two rows.
fn lcs_len(a: &[&str], b: &[&str]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &wa in a {
        for (j, &wb) in b.iter().enumerate() {
            cur[j + 1] = if wa == wb {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// All three metrics for a summary against its reference abstract.
pub fn evaluate_document(summary: &str, reference: &str) -> Result<RougeMap> {
    if reference.trim().is_empty() {
        return Err(AtsError::MissingReference);
    }
    let mut map = RougeMap::new();
    map.insert(Metric::Rouge1, rouge_n(summary, reference, 1));
    map.insert(Metric::Rouge2, rouge_n(summary, reference, 2));
    map.insert(Metric::RougeL, rouge_l(summary, reference));
    Ok(map)
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// One evaluated document, tagged for aggregation.
#[derive(Debug, Clone)]
pub struct DocumentEvaluation {
    pub doc_id: String,
    pub department: String,
    pub scores: RougeMap,
}

/// One report row: a department (or the overall average) with mean
/// scores per metric.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub scores: RougeMap,
}

/// Department rows in sorted label order plus the overall average row.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub departments: Vec<ReportRow>,
    pub overall: ReportRow,
}

fn mean_scores<'a, I>(rows: I) -> RougeMap
where
    I: Iterator<Item = &'a RougeMap> + Clone,
{
    let count = rows.clone().count() as f64;
    let mut map = RougeMap::new();
    for metric in Metric::ALL {
        let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
        for scores in rows.clone() {
            let s = &scores[&metric];
            p += s.precision;
            r += s.recall;
            f += s.f;
        }
        map.insert(
            metric,
            RougeScore {
                metric,
                precision: p / count,
                recall: r / count,
                f: f / count,
            },
        );
    }
    map
}

/// Per-department means plus the unweighted mean of department means.
pub fn aggregate(evaluations: &[DocumentEvaluation]) -> Result<Report> {
    if evaluations.is_empty() {
        return Err(AtsError::EmptyCorpus);
    }
    let mut by_dept: BTreeMap<&str, Vec<&RougeMap>> = BTreeMap::new();
    for eval in evaluations {
        by_dept
            .entry(eval.department.as_str())
            .or_default()
            .push(&eval.scores);
    }
    let departments: Vec<ReportRow> = by_dept
        .iter()
        .map(|(dept, rows)| ReportRow {
            label: dept.to_string(),
            scores: mean_scores(rows.iter().copied()),
        })
        .collect();
    let overall = ReportRow {
        label: "Average".to_string(),
        scores: mean_scores(departments.iter().map(|row| &row.scores)),
    };
    Ok(Report {
        departments,
        overall,
    })
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

/// `<id>.rouge.csv`: metric,precision,recall,f at 6 decimals.
pub fn write_document_csv(scores: &RougeMap, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path).map_err(|e| {
        AtsError::io(path, std::io::Error::other(e.to_string()))
    })?;
    wtr.write_record(["metric", "precision", "recall", "f"])
        .and_then(|()| {
            Metric::ALL.iter().try_for_each(|m| {
                let s = &scores[m];
                wtr.write_record([
                    m.label(),
                    &format!("{:.6}", s.precision),
                    &format!("{:.6}", s.recall),
                    &format!("{:.6}", s.f),
                ])
            })
        })
        .and_then(|()| wtr.flush().map_err(csv::Error::from))
        .map_err(|e| AtsError::io(path, std::io::Error::other(e.to_string())))
}

/// `report.csv`: one row per department plus the Average row, all
/// three metrics across the columns.
pub fn write_report_csv(report: &Report, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path).map_err(|e| {
        AtsError::io(path, std::io::Error::other(e.to_string()))
    })?;
    let mut header = vec!["department".to_string()];
    for metric in Metric::ALL {
        for part in ["precision", "recall", "f"] {
            header.push(format!("{}_{}", metric.label(), part));
        }
    }
    let write_row = |wtr: &mut csv::Writer<std::fs::File>, row: &ReportRow| {
        let mut record = vec![row.label.clone()];
        for metric in Metric::ALL {
            let s = &row.scores[&metric];
            record.push(format!("{:.6}", s.precision));
            record.push(format!("{:.6}", s.recall));
            record.push(format!("{:.6}", s.f));
        }
        wtr.write_record(&record)
    };
    wtr.write_record(&header)
        .and_then(|()| {
            report
                .departments
                .iter()
                .try_for_each(|row| write_row(&mut wtr, row))
        })
        .and_then(|()| write_row(&mut wtr, &report.overall))
        .and_then(|()| wtr.flush().map_err(csv::Error::from))
        .map_err(|e| AtsError::io(path, std::io::Error::other(e.to_string())))
}

//! The segmentation comparison: fuzzy cut against the two single-feature
//! baselines on a corpus of touching pairs.

use std::io::Write;
use std::path::PathBuf;

use charkit::data::{load_corpus, TouchingPair};
use charkit::fuzzy::{baseline_cut, fuzzy_cut, BaselineMethod, FuzzyConfig};
use rayon::prelude::*;

use crate::init_bench::worker_pool;
use crate::report::fmt_sig6;

pub const METHODS: [&str; 3] = ["fuzzy", "g_only", "h_only"];

#[derive(Debug, Clone)]
pub struct SegmentCompareConfig {
    pub corpus_dir: PathBuf,
    pub fuzzy: FuzzyConfig,
    /// Recorded in the report header.
    pub config_label: String,
}

/// One (pair, method) evaluation. `cut = None` records a failed evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SegRow {
    pub file: String,
    pub method: &'static str,
    pub cut: Option<usize>,
    pub lo: usize,
    pub hi: usize,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodAccuracy {
    pub method: &'static str,
    pub correct: usize,
    pub total: usize,
}

impl MethodAccuracy {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

#[derive(Debug, Clone)]
pub struct SegmentCompareReport {
    pub config_lines: Vec<String>,
    pub rows: Vec<SegRow>,
    pub summary: Vec<MethodAccuracy>,
}

/// A cut is correct when it falls inside the truth range expanded by one
/// column on each side; edge assignment makes an off-by-one cut physically
/// equivalent.
pub fn cut_is_correct(cut: usize, lo: usize, hi: usize) -> bool {
    cut + 1 >= lo && cut <= hi + 1
}

fn evaluate_pair(name: &str, pair: &TouchingPair, fuzzy: &FuzzyConfig) -> Vec<SegRow> {
    let cuts = [
        fuzzy_cut(&pair.image, fuzzy),
        baseline_cut(&pair.image, BaselineMethod::GOnly, fuzzy),
        baseline_cut(&pair.image, BaselineMethod::HOnly, fuzzy),
    ];
    METHODS
        .iter()
        .zip(cuts)
        .map(|(&method, cut)| {
            let cut = match cut {
                Ok(c) => Some(c),
                Err(e) => {
                    eprintln!("warning: {name} [{method}]: {e}");
                    None
                }
            };
            SegRow {
                file: name.to_string(),
                method,
                cut,
                lo: pair.truth_lo,
                hi: pair.truth_hi,
                correct: cut.is_some_and(|c| cut_is_correct(c, pair.truth_lo, pair.truth_hi)),
            }
        })
        .collect()
}

/// Evaluate every pair with every method; unreadable or unscorable samples
/// become failed rows, never abort the sweep.
pub fn run_segment_compare(cfg: &SegmentCompareConfig) -> anyhow::Result<SegmentCompareReport> {
    let corpus = load_corpus(&cfg.corpus_dir)?;
    let pool = worker_pool()?;
    let rows: Vec<SegRow> = pool.install(|| {
        corpus
            .par_iter()
            .flat_map_iter(|(name, pair)| evaluate_pair(name, pair, &cfg.fuzzy))
            .collect()
    });

    let summary = METHODS
        .iter()
        .map(|&method| MethodAccuracy {
            method,
            correct: rows
                .iter()
                .filter(|r| r.method == method && r.correct)
                .count(),
            total: rows.iter().filter(|r| r.method == method).count(),
        })
        .collect();

    Ok(SegmentCompareReport {
        config_lines: vec![
            "# charkit segment-compare v1".to_string(),
            format!(
                "# corpus={} pairs={} config={}",
                cfg.corpus_dir.display(),
                corpus.len(),
                cfg.config_label
            ),
        ],
        rows,
        summary,
    })
}

impl SegmentCompareReport {
    pub fn accuracy(&self, method: &str) -> f64 {
        self.summary
            .iter()
            .find(|m| m.method == method)
            .map(MethodAccuracy::accuracy)
            .unwrap_or(0.0)
    }

    /// `file,method,cut,lo,hi,correct` rows (empty `cut` for failed
    /// evaluations), a blank line, then per-method accuracies.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        for line in &self.config_lines {
            writeln!(w, "{line}")?;
        }
        writeln!(w, "file,method,cut,lo,hi,correct")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                r.file,
                r.method,
                r.cut.map(|c| c.to_string()).unwrap_or_default(),
                r.lo,
                r.hi,
                r.correct
            )?;
        }
        writeln!(w)?;
        writeln!(w, "method,correct,total,accuracy")?;
        for m in &self.summary {
            writeln!(
                w,
                "{},{},{},{}",
                m.method,
                m.correct,
                m.total,
                fmt_sig6(m.accuracy())
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }
}

//! Annotation-artifact statistics over NLI corpora.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::normalize;
use crate::nli::{Label, NLIPair};

/// Default add-k constant for [`pmi`].
pub const DEFAULT_SMOOTHING: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PmiEntry {
    pub word: String,
    pub pmi: f64,
    /// Share of the class's examples whose hypothesis contains the word.
    pub percent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PmiTable {
    pub smoothing: f64,
    pub vocabulary_size: usize,
    pub classes: BTreeMap<Label, Vec<PmiEntry>>,
}

/// Document-level co-occurrence counts: each hypothesis counts once per word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub n_docs: u64,
    pub per_class: BTreeMap<Label, u64>,
    pub per_word: BTreeMap<String, u64>,
    pub joint: BTreeMap<(String, Label), u64>,
}

impl Counts {
    pub fn from_pairs(pairs: &[NLIPair]) -> Self {
        let mut c = Counts::default();
        for p in pairs {
            c.n_docs += 1;
            *c.per_class.entry(p.label).or_insert(0) += 1;
            let words: BTreeSet<String> = normalize(&p.hypothesis).into_iter().collect();
            for w in words {
                *c.per_word.entry(w.clone()).or_insert(0) += 1;
                *c.joint.entry((w, p.label)).or_insert(0) += 1;
            }
        }
        c
    }

    /// Every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Counts {
            n_docs: self.n_docs * factor,
            per_class: self
                .per_class
                .iter()
                .map(|(k, v)| (*k, v * factor))
                .collect(),
            per_word: self
                .per_word
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
            joint: self
                .joint
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }
}

/// Smoothed PMI from counts. Each class receives `k` pseudo-documents that
/// contain the word, so with `C` classes:
///
/// `ln((n_wc + k)(N + kC) / ((n_w + kC)(n_c + k)))`
pub fn pmi_value(n_wc: u64, n_w: u64, n_c: u64, n: u64, classes: usize, k: f64) -> f64 {
    let kc = k * classes as f64;
    let num = (n_wc as f64 + k) * (n as f64 + kc);
    let den = (n_w as f64 + kc) * (n_c as f64 + k);
    (num / den).ln()
}

/// Ranks words per class by PMI over precomputed counts. Words that never
/// occur with a class are left out of its list.
pub fn pmi_from_counts(counts: &Counts, k: f64, top_n: usize) -> Result<PmiTable> {
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::Argument(format!("smoothing must be >= 0, got {k}")));
    }
    if counts.per_class.len() < 2 {
        return Err(Error::Argument(
            "PMI needs at least two labels in the corpus".into(),
        ));
    }
    let n_classes = counts.per_class.len();
    let mut classes: BTreeMap<Label, Vec<PmiEntry>> = BTreeMap::new();
    for ((word, label), &n_wc) in &counts.joint {
        let n_c = counts.per_class[label];
        let entry = PmiEntry {
            word: word.clone(),
            pmi: pmi_value(
                n_wc,
                counts.per_word[word],
                n_c,
                counts.n_docs,
                n_classes,
                k,
            ),
            percent: 100.0 * n_wc as f64 / n_c as f64,
        };
        classes.entry(*label).or_default().push(entry);
    }
    for label in counts.per_class.keys() {
        let list = classes.entry(*label).or_default();
        list.sort_by(|a, b| b.pmi.total_cmp(&a.pmi).then_with(|| a.word.cmp(&b.word)));
        list.truncate(top_n);
    }
    Ok(PmiTable {
        smoothing: k,
        vocabulary_size: counts.per_word.len(),
        classes,
    })
}

/// PMI(word, label) over hypotheses.
pub fn pmi(pairs: &[NLIPair], k: f64, top_n: usize) -> Result<PmiTable> {
    pmi_from_counts(&Counts::from_pairs(pairs), k, top_n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelLengths {
    pub counts: BTreeMap<usize, usize>,
    pub n: usize,
    pub mean: f64,
    pub median: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LengthHistogram {
    pub per_label: BTreeMap<Label, LabelLengths>,
}

/// Hypothesis token counts by label.
pub fn length_histogram(pairs: &[NLIPair]) -> LengthHistogram {
    let mut lengths: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
    for p in pairs {
        lengths
            .entry(p.label)
            .or_default()
            .push(normalize(&p.hypothesis).len());
    }
    let per_label = lengths
        .into_iter()
        .map(|(label, mut v)| {
            v.sort_unstable();
            let n = v.len();
            let mut counts = BTreeMap::new();
            for &l in &v {
                *counts.entry(l).or_insert(0) += 1;
            }
            let mean = v.iter().sum::<usize>() as f64 / n as f64;
            let median = if n % 2 == 1 {
                v[n / 2] as f64
            } else {
                (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
            };
            (
                label,
                LabelLengths {
                    counts,
                    n,
                    mean,
                    median,
                },
            )
        })
        .collect();
    LengthHistogram { per_label }
}

impl LengthHistogram {
    /// `label,length,count` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,length,count\n");
        for (label, l) in &self.per_label {
            for (len, count) in &l.counts {
                let _ = writeln!(s, "{label},{len},{count}");
            }
        }
        s
    }
}

impl PmiTable {
    /// `label,rank,word,pmi,percent` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,rank,word,pmi,percent\n");
        for (label, list) in &self.classes {
            for (i, e) in list.iter().enumerate() {
                let _ = writeln!(s, "{label},{},{},{},{}", i + 1, e.word, e.pmi, e.percent);
            }
        }
        s
    }
}

/// Percentage of distinct question tokens that occur in the passage.
pub fn word_overlap(question: &str, passage: &str) -> Result<f64> {
    let q: BTreeSet<String> = normalize(question).into_iter().collect();
    if q.is_empty() {
        return Err(Error::Argument("empty question".into()));
    }
    let p: HashSet<String> = normalize(passage).into_iter().collect();
    let shared = q.iter().filter(|w| p.contains(*w)).count();
    Ok(100.0 * shared as f64 / q.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OverlapSummary {
    pub mean: f64,
    pub n: usize,
}

/// Mean hypothesis-to-premise overlap per label.
pub fn overlap_by_label(pairs: &[NLIPair]) -> BTreeMap<Label, OverlapSummary> {
    let mut acc: BTreeMap<Label, (f64, usize)> = BTreeMap::new();
    for p in pairs {
        if let Ok(v) = word_overlap(&p.hypothesis, &p.premise) {
            let e = acc.entry(p.label).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
    }
    acc.into_iter()
        .map(|(l, (sum, n))| {
            (
                l,
                OverlapSummary {
                    mean: sum / n as f64,
                    n,
                },
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub n_pairs: usize,
    pub top_n: usize,
    pub pmi: PmiTable,
    pub lengths: LengthHistogram,
    pub hypothesis_premise_overlap: BTreeMap<Label, OverlapSummary>,
}

pub fn analyze_corpus(pairs: &[NLIPair], k: f64, top_n: usize) -> Result<AnalysisReport> {
    Ok(AnalysisReport {
        n_pairs: pairs.len(),
        top_n,
        pmi: pmi(pairs, k, top_n)?,
        lengths: length_histogram(pairs),
        hypothesis_premise_overlap: overlap_by_label(pairs),
    })
}

impl AnalysisReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} pairs, smoothing k = {}",
            self.n_pairs, self.pmi.smoothing
        );
        for (label, list) in &self.pmi.classes {
            let _ = writeln!(s, "\ntop PMI words: {label}");
            for e in list {
                let _ = writeln!(s, "  {:<16} {:>8.4} {:>6.1}%", e.word, e.pmi, e.percent);
            }
        }
        let _ = writeln!(s, "\nhypothesis length");
        for (label, l) in &self.lengths.per_label {
            let _ = writeln!(
                s,
                "  {:<12} n={:<6} mean={:.2} median={}",
                label.to_string(),
                l.n,
                l.mean,
                l.median
            );
        }
        let _ = writeln!(s, "\nhypothesis/premise overlap");
        for (label, o) in &self.hypothesis_premise_overlap {
            let _ = writeln!(s, "  {:<12} {:.2}%", label.to_string(), o.mean);
        }
        s
    }
}

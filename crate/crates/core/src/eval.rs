//! BLEU, exact match and the per-type / per-length breakdowns.
//!
//! All scoring runs on [`normalize`] tokens. Corpus BLEU is unsmoothed;
//! sentence BLEU (used only to break ties between candidates) is add-one
//! smoothed at every order.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::question::QuestionType;

const MAX_N: usize = 4;

/// Lowercases, deletes ASCII punctuation and splits on whitespace.
pub fn normalize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .chars()
        .filter(|c| !c.is_ascii_punctuation())
        .collect::<String>()
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

pub fn exact_match<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Result<bool> {
    if references.is_empty() {
        return Err(Error::Argument(
            "exact match needs at least one reference".into(),
        ));
    }
    let h = normalize(hypothesis);
    Ok(references.iter().any(|r| normalize(r.as_ref()) == h))
}

/// Sufficient statistics for BLEU, summed over a corpus.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: [u64; MAX_N],
    pub totals: [u64; MAX_N],
    pub hyp_len: u64,
    pub ref_len: u64,
}

impl std::ops::AddAssign for BleuStats {
    fn add_assign(&mut self, o: Self) {
        for n in 0..MAX_N {
            self.matches[n] += o.matches[n];
            self.totals[n] += o.totals[n];
        }
        self.hyp_len += o.hyp_len;
        self.ref_len += o.ref_len;
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut out = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *out.entry(w).or_insert(0) += 1;
        }
    }
    out
}

impl BleuStats {
    pub fn for_sentence<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Result<Self> {
        if references.is_empty() {
            return Err(Error::Argument("BLEU needs at least one reference".into()));
        }
        let h = normalize(hypothesis);
        let refs: Vec<Vec<String>> = references.iter().map(|r| normalize(r.as_ref())).collect();
        Ok(Self::for_tokens(&h, &refs))
    }

    pub fn for_tokens(h: &[String], refs: &[Vec<String>]) -> Self {
        let mut s = BleuStats {
            hyp_len: h.len() as u64,
            ..Default::default()
        };
        for n in 1..=MAX_N {
            let hc = ngram_counts(h, n);
            let mut max_ref: HashMap<&[String], u64> = HashMap::new();
            for r in refs {
                for (g, c) in ngram_counts(r, n) {
                    let e = max_ref.entry(g).or_insert(0);
                    *e = (*e).max(c);
                }
            }
            s.totals[n - 1] = h.len().saturating_sub(n - 1) as u64;
            s.matches[n - 1] = hc
                .iter()
                .map(|(g, &c)| c.min(max_ref.get(g).copied().unwrap_or(0)))
                .sum();
        }
        // closest reference length, ties to the shorter one
        s.ref_len = refs
            .iter()
            .map(|r| r.len() as u64)
            .min_by_key(|&l| (l.abs_diff(s.hyp_len), l))
            .unwrap_or(0);
        s
    }

    fn brevity_penalty(&self) -> f64 {
        if self.hyp_len > self.ref_len {
            1.0
        } else {
            (1.0 - self.ref_len as f64 / self.hyp_len as f64).exp()
        }
    }

    /// Unsmoothed BLEU × 100; zero when any order has no match.
    pub fn score(&self) -> f64 {
        if self.hyp_len == 0 || self.matches.contains(&0) {
            return 0.0;
        }
        let log_p: f64 = (0..MAX_N)
            .map(|n| (self.matches[n] as f64 / self.totals[n] as f64).ln())
            .sum::<f64>()
            / MAX_N as f64;
        100.0 * self.brevity_penalty() * log_p.exp()
    }

    /// Add-one smoothed BLEU × 100.
    pub fn smoothed_score(&self) -> f64 {
        if self.hyp_len == 0 {
            return if self.ref_len == 0 { 100.0 } else { 0.0 };
        }
        let log_p: f64 = (0..MAX_N)
            .map(|n| ((self.matches[n] + 1) as f64 / (self.totals[n] + 1) as f64).ln())
            .sum::<f64>()
            / MAX_N as f64;
        100.0 * self.brevity_penalty() * log_p.exp()
    }
}

pub fn sentence_bleu<S: AsRef<str>>(hypothesis: &str, references: &[S]) -> Result<f64> {
    Ok(BleuStats::for_sentence(hypothesis, references)?.smoothed_score())
}

/// Corpus BLEU (0 to 100) of hypotheses against aligned reference sets.
pub fn bleu_corpus<H: AsRef<str>, R: AsRef<str>>(
    hypotheses: &[H],
    references: &[Vec<R>],
) -> Result<f64> {
    if hypotheses.len() != references.len() {
        return Err(Error::Argument(format!(
            "{} hypotheses but {} reference sets",
            hypotheses.len(),
            references.len()
        )));
    }
    let mut total = BleuStats::default();
    for (h, refs) in hypotheses.iter().zip(references) {
        total += BleuStats::for_sentence(h.as_ref(), refs)?;
    }
    Ok(total.score())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopK {
    pub k: usize,
    pub match_rate: f64,
    pub bleu: f64,
    /// 0-based index of the selected candidate per example.
    pub selected: Vec<usize>,
}

/// Index of the best of the first `k` candidates: an exact match first,
/// then higher smoothed sentence BLEU, then lower rank.
pub fn select_candidate<C: AsRef<str>, R: AsRef<str>>(
    candidates: &[C],
    references: &[R],
    k: usize,
) -> Result<usize> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if candidates.is_empty() {
        return Err(Error::Argument("empty candidate list".into()));
    }
    let mut best: Option<(bool, f64, usize)> = None;
    for (i, c) in candidates.iter().take(k).enumerate() {
        let key = (
            exact_match(c.as_ref(), references)?,
            sentence_bleu(c.as_ref(), references)?,
            i,
        );
        let better = match best {
            None => true,
            Some((m, b, _)) => (key.0, key.1) > (m, b),
        };
        if better {
            best = Some(key);
        }
    }
    Ok(best.map(|b| b.2).unwrap_or(0))
}

pub fn topk_match<C: AsRef<str>, R: AsRef<str>>(
    candidate_sets: &[Vec<C>],
    references: &[Vec<R>],
    k: usize,
) -> Result<TopK> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if candidate_sets.len() != references.len() {
        return Err(Error::Argument(format!(
            "{} candidate sets but {} reference sets",
            candidate_sets.len(),
            references.len()
        )));
    }
    let selected = candidate_sets
        .iter()
        .zip(references)
        .map(|(c, r)| select_candidate(c, r, k))
        .collect::<Result<Vec<_>>>()?;
    let chosen: Vec<&str> = candidate_sets
        .iter()
        .zip(&selected)
        .map(|(c, &i)| c[i].as_ref())
        .collect();
    let matches = chosen
        .iter()
        .zip(references)
        .map(|(h, r)| exact_match(h, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(TopK {
        k,
        match_rate: rate(matches.iter().filter(|&&m| m).count(), matches.len()),
        bleu: bleu_corpus(&chosen, references)?,
        selected,
    })
}

fn rate(hits: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        hits as f64 / n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LengthBucket {
    #[serde(rename = "1-9")]
    Under10,
    #[serde(rename = "10-19")]
    Teens,
    #[serde(rename = "20-29")]
    Twenties,
    #[serde(rename = "30+")]
    ThirtyPlus,
}

impl LengthBucket {
    pub fn of(len: usize) -> Self {
        match len {
            0..=9 => LengthBucket::Under10,
            10..=19 => LengthBucket::Teens,
            20..=29 => LengthBucket::Twenties,
            _ => LengthBucket::ThirtyPlus,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LengthBucket::Under10 => "1-9",
            LengthBucket::Teens => "10-19",
            LengthBucket::Twenties => "20-29",
            LengthBucket::ThirtyPlus => "30+",
        }
    }
}

/// One scored example.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub id: String,
    pub qtype: QuestionType,
    /// Token length of question plus answer.
    pub length: usize,
    /// Ranked candidates; the first is the system output.
    pub candidates: Vec<String>,
    pub references: Vec<String>,
}

impl EvalRecord {
    /// Builds a record, deriving type and length from the question and answer.
    pub fn new(
        id: &str,
        question: &str,
        answer: &str,
        candidates: Vec<String>,
        references: Vec<String>,
    ) -> Result<Self> {
        let qtype = QuestionType::from_text(question)
            .ok_or_else(|| Error::NotWhQuestion(question.to_owned()))?;
        Ok(EvalRecord {
            id: id.to_owned(),
            qtype,
            length: normalize(question).len() + normalize(answer).len(),
            candidates,
            references,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupScore {
    pub bleu: f64,
    pub exact_match_rate: f64,
    pub n: usize,
}

fn group_score(records: &[&EvalRecord]) -> Result<GroupScore> {
    let hyps: Vec<&str> = records.iter().map(|r| r.candidates[0].as_str()).collect();
    let refs: Vec<&Vec<String>> = records.iter().map(|r| &r.references).collect();
    let mut hits = 0;
    let mut stats = BleuStats::default();
    for (h, r) in hyps.iter().zip(&refs) {
        hits += usize::from(exact_match(h, r)?);
        stats += BleuStats::for_sentence(h, r)?;
    }
    Ok(GroupScore {
        bleu: stats.score(),
        exact_match_rate: rate(hits, records.len()),
        n: records.len(),
    })
}

pub type Breakdowns = (
    BTreeMap<QuestionType, GroupScore>,
    BTreeMap<LengthBucket, GroupScore>,
);

pub fn breakdowns(records: &[EvalRecord]) -> Result<Breakdowns> {
    let mut by_type: BTreeMap<QuestionType, Vec<&EvalRecord>> = BTreeMap::new();
    let mut by_len: BTreeMap<LengthBucket, Vec<&EvalRecord>> = BTreeMap::new();
    for r in records {
        by_type.entry(r.qtype).or_default().push(r);
        by_len
            .entry(LengthBucket::of(r.length))
            .or_default()
            .push(r);
    }
    let by_type = by_type
        .into_iter()
        .map(|(k, v)| Ok((k, group_score(&v)?)))
        .collect::<Result<_>>()?;
    let by_len = by_len
        .into_iter()
        .map(|(k, v)| Ok((k, group_score(&v)?)))
        .collect::<Result<_>>()?;
    Ok((by_type, by_len))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalMetadata {
    pub tokenization: &'static str,
    pub corpus_bleu: &'static str,
    pub sentence_bleu: &'static str,
    pub topk_tie_break: &'static str,
    pub k: Option<usize>,
}

impl EvalMetadata {
    fn new(k: Option<usize>) -> Self {
        EvalMetadata {
            tokenization: "lowercase, ASCII punctuation removed, whitespace split",
            corpus_bleu: "n=1..4, max-over-references clipping, closest reference length (ties shorter), unsmoothed",
            sentence_bleu: "add-one smoothing at every order",
            topk_tie_break: "exact match > sentence BLEU > lower rank",
            k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub metadata: EvalMetadata,
    pub n_examples: usize,
    pub corpus_bleu: f64,
    pub exact_match_rate: f64,
    pub topk_bleu: Option<f64>,
    pub topk_match_rate: Option<f64>,
    pub by_qtype: BTreeMap<QuestionType, GroupScore>,
    pub by_length: BTreeMap<LengthBucket, GroupScore>,
}

/// Scores rank-1 candidates, plus the best of the top `k` when given.
pub fn evaluate(records: &[EvalRecord], k: Option<usize>) -> Result<EvalReport> {
    if let Some(r) = records.iter().find(|r| r.candidates.is_empty()) {
        return Err(Error::Argument(format!("no candidates for `{}`", r.id)));
    }
    let all: Vec<&EvalRecord> = records.iter().collect();
    let overall = group_score(&all)?;
    let topk = match k {
        Some(k) => {
            let cands: Vec<Vec<String>> = records.iter().map(|r| r.candidates.clone()).collect();
            let refs: Vec<Vec<String>> = records.iter().map(|r| r.references.clone()).collect();
            Some(topk_match(&cands, &refs, k)?)
        }
        None => None,
    };
    let (by_qtype, by_length) = breakdowns(records)?;
    Ok(EvalReport {
        metadata: EvalMetadata::new(k),
        n_examples: records.len(),
        corpus_bleu: overall.bleu,
        exact_match_rate: overall.exact_match_rate,
        topk_bleu: topk.as_ref().map(|t| t.bleu),
        topk_match_rate: topk.as_ref().map(|t| t.match_rate),
        by_qtype,
        by_length,
    })
}

impl EvalReport {
    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let row = |s: &mut String, name: &str, g: &GroupScore| {
            let _ = writeln!(
                s,
                "{name:<12} {:>8.2} {:>8.2} {:>6}",
                g.bleu,
                100.0 * g.exact_match_rate,
                g.n
            );
        };
        let _ = writeln!(s, "{:<12} {:>8} {:>8} {:>6}", "", "BLEU", "Match", "n");
        row(
            &mut s,
            "Top-1",
            &GroupScore {
                bleu: self.corpus_bleu,
                exact_match_rate: self.exact_match_rate,
                n: self.n_examples,
            },
        );
        if let (Some(b), Some(m), Some(k)) = (self.topk_bleu, self.topk_match_rate, self.metadata.k)
        {
            row(
                &mut s,
                &format!("Top-{k}"),
                &GroupScore {
                    bleu: b,
                    exact_match_rate: m,
                    n: self.n_examples,
                },
            );
        }
        if !self.by_qtype.is_empty() {
            let _ = writeln!(s, "\nby question type");
            for (q, g) in &self.by_qtype {
                row(&mut s, q.as_str(), g);
            }
        }
        if !self.by_length.is_empty() {
            let _ = writeln!(s, "\nby length of Q+A");
            for (b, g) in &self.by_length {
                row(&mut s, b.as_str(), g);
            }
        }
        s
    }
}

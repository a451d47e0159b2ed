//! QA datasets in, two-way labeled NLI pairs out.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conllu::DepSentence;
use crate::engine::{Engine, EngineConfig};
use crate::error::{Error, Result};
use crate::question::analyze;

/// Input record layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schema {
    /// `{id, passage, question, answer}`
    Span,
    /// `{id, passage, question, options, correct}`
    Multichoice,
    /// span fields plus `{is_impossible, plausible_answer?}`
    Unanswerable,
}

impl FromStr for Schema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "span" => Ok(Schema::Span),
            "multichoice" => Ok(Schema::Multichoice),
            "unanswerable" | "unanswerable-aware" => Ok(Schema::Unanswerable),
            _ => Err(Error::Argument(format!("unknown schema `{s}`"))),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::Span => "span",
            Schema::Multichoice => "multichoice",
            Schema::Unanswerable => "unanswerable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerOption {
    pub text: String,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QAExample {
    pub id: String,
    pub passage: String,
    pub question: String,
    /// For unanswerable examples, the plausible answer (if any) flagged incorrect.
    pub options: Vec<AnswerOption>,
    pub answerable: bool,
    pub source: String,
    #[serde(skip)]
    pub parse: Option<DepSentence>,
}

impl QAExample {
    pub fn correct(&self) -> Option<&AnswerOption> {
        self.options.iter().find(|o| o.correct)
    }

    pub fn incorrect(&self) -> impl Iterator<Item = &AnswerOption> {
        self.options.iter().filter(|o| !o.correct)
    }
}

#[derive(Deserialize)]
struct SpanLine {
    id: String,
    passage: String,
    question: String,
    answer: String,
    source: Option<String>,
}

#[derive(Deserialize)]
struct MultichoiceLine {
    id: String,
    passage: String,
    question: String,
    options: Vec<String>,
    correct: usize,
    source: Option<String>,
}

#[derive(Deserialize)]
struct UnanswerableLine {
    id: String,
    passage: String,
    question: String,
    answer: Option<String>,
    is_impossible: bool,
    plausible_answer: Option<String>,
    source: Option<String>,
}

fn option(text: String, correct: bool) -> AnswerOption {
    AnswerOption { text, correct }
}

fn parse_line(line: &str, schema: Schema) -> std::result::Result<QAExample, String> {
    let default_source = schema.to_string();
    let ex = match schema {
        Schema::Span => {
            let r: SpanLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
            QAExample {
                id: r.id,
                passage: r.passage,
                question: r.question,
                options: vec![option(r.answer, true)],
                answerable: true,
                source: r.source.unwrap_or(default_source),
                parse: None,
            }
        }
        Schema::Multichoice => {
            let r: MultichoiceLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
            if r.options.is_empty() {
                return Err("`options` is empty".into());
            }
            if r.correct >= r.options.len() {
                return Err(format!(
                    "`correct` index {} out of range for {} options",
                    r.correct,
                    r.options.len()
                ));
            }
            let correct = r.correct;
            QAExample {
                id: r.id,
                passage: r.passage,
                question: r.question,
                options: r
                    .options
                    .into_iter()
                    .enumerate()
                    .map(|(i, t)| option(t, i == correct))
                    .collect(),
                answerable: true,
                source: r.source.unwrap_or(default_source),
                parse: None,
            }
        }
        Schema::Unanswerable => {
            let r: UnanswerableLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
            let options = if r.is_impossible {
                r.plausible_answer
                    .filter(|p| !p.trim().is_empty())
                    .map(|p| vec![option(p, false)])
                    .unwrap_or_default()
            } else {
                let answer = r.answer.ok_or("answerable record is missing `answer`")?;
                vec![option(answer, true)]
            };
            QAExample {
                id: r.id,
                passage: r.passage,
                question: r.question,
                options,
                answerable: !r.is_impossible,
                source: r.source.unwrap_or(default_source),
                parse: None,
            }
        }
    };
    if ex.id.is_empty() {
        return Err("`id` is empty".into());
    }
    if ex.answerable && ex.options.iter().any(|o| o.text.trim().is_empty()) {
        return Err("empty answer text".into());
    }
    Ok(ex)
}

/// Parses JSONL text; errors name `source` and the 1-based line.
pub fn parse_qa_jsonl(text: &str, schema: Schema, source: &str) -> Result<Vec<QAExample>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let load = |message: String| Error::Load {
            path: source.to_owned(),
            line: i + 1,
            message,
        };
        let ex = parse_line(line, schema).map_err(load)?;
        if !seen.insert(ex.id.clone()) {
            return Err(load(format!("duplicate id `{}`", ex.id)));
        }
        out.push(ex);
    }
    Ok(out)
}

pub fn load_qa_jsonl(path: &Path, schema: Schema) -> Result<Vec<QAExample>> {
    parse_qa_jsonl(
        &fs::read_to_string(path)?,
        schema,
        &path.display().to_string(),
    )
}

/// Ids left unmatched after aligning parses to examples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Alignment {
    /// Examples with no parse.
    pub missing: Vec<String>,
    /// Parses with no example (or no `sent_id`).
    pub unused: Vec<String>,
}

/// Attaches parses to examples by their `# sent_id` comment.
pub fn attach_parses(examples: &mut [QAExample], parses: Vec<DepSentence>) -> Alignment {
    let mut by_id: HashMap<String, DepSentence> = HashMap::new();
    let mut unused = Vec::new();
    for (i, s) in parses.into_iter().enumerate() {
        match s.sent_id() {
            Some(id) => {
                by_id.insert(id.to_owned(), s);
            }
            None => unused.push(format!("#{}", i + 1)),
        }
    }
    let mut missing = Vec::new();
    for ex in examples.iter_mut() {
        ex.parse = by_id.remove(&ex.id);
        if ex.parse.is_none() {
            missing.push(ex.id.clone());
        }
    }
    let mut rest: Vec<String> = by_id.into_keys().collect();
    rest.sort();
    unused.extend(rest);
    Alignment { missing, unused }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Entailed,
    NotEntailed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    CorrectAnswer,
    IncorrectOption,
    Unanswerable,
}

impl Provenance {
    pub fn label(self) -> Label {
        match self {
            Provenance::CorrectAnswer => Label::Entailed,
            _ => Label::NotEntailed,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NLIPair {
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub source_id: String,
    pub provenance: Provenance,
}

/// Which incorrect options become negative pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Negatives {
    All,
    #[default]
    OneRandom,
}

impl FromStr for Negatives {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Negatives::All),
            "one-random" => Ok(Negatives::OneRandom),
            _ => Err(Error::Argument(format!("unknown negatives policy `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skip {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildReport {
    pub pairs: Vec<NLIPair>,
    pub skipped: Vec<Skip>,
}

impl BuildReport {
    pub fn counts(&self) -> BTreeMap<Provenance, usize> {
        let mut out = BTreeMap::new();
        for p in &self.pairs {
            *out.entry(p.provenance).or_insert(0) += 1;
        }
        out
    }
}

/// The options of `ex` that become pairs under `policy`, in option order.
/// `index` selects the example's RNG stream.
fn selected(
    ex: &QAExample,
    policy: Negatives,
    seed: u64,
    index: usize,
) -> Vec<(&AnswerOption, Provenance)> {
    if !ex.answerable {
        return ex
            .options
            .iter()
            .take(1)
            .map(|o| (o, Provenance::Unanswerable))
            .collect();
    }
    let incorrect: Vec<&AnswerOption> = ex.incorrect().collect();
    let mut out: Vec<(&AnswerOption, Provenance)> = ex
        .correct()
        .map(|o| (o, Provenance::CorrectAnswer))
        .into_iter()
        .collect();
    match policy {
        Negatives::All => out.extend(
            incorrect
                .into_iter()
                .map(|o| (o, Provenance::IncorrectOption)),
        ),
        Negatives::OneRandom if !incorrect.is_empty() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let pick = rng.random_range(0..incorrect.len());
            out.push((incorrect[pick], Provenance::IncorrectOption));
        }
        Negatives::OneRandom => {}
    }
    out
}

fn pairs_for(
    engine: &Engine<'_>,
    ex: &QAExample,
    config: &EngineConfig,
    policy: Negatives,
    seed: u64,
    index: usize,
) -> std::result::Result<Vec<NLIPair>, String> {
    let parse = ex.parse.as_ref().ok_or("no parse for question")?;
    let analysis = analyze(parse).map_err(|e| e.to_string())?;
    let chosen = selected(ex, policy, seed, index);
    if chosen.is_empty() {
        return Err("no answer text to substitute".into());
    }
    chosen
        .into_iter()
        .map(|(opt, provenance)| {
            let candidates = engine
                .transform(&analysis, &opt.text, config)
                .map_err(|e| format!("answer `{}`: {e}", opt.text))?;
            Ok(NLIPair {
                premise: ex.passage.clone(),
                hypothesis: candidates[0].text.clone(),
                label: provenance.label(),
                source_id: ex.id.clone(),
                provenance,
            })
        })
        .collect()
}

/// Converts examples to NLI pairs with the given engine. An example whose
/// parse is missing or whose transformation fails contributes no pairs and
/// is listed in the skip report.
pub fn build_pairs_with(
    engine: &Engine<'_>,
    examples: &[QAExample],
    config: &EngineConfig,
    negatives: Negatives,
    seed: u64,
) -> Result<BuildReport> {
    config.validate()?;
    let results: Vec<_> = examples
        .par_iter()
        .enumerate()
        .map(|(i, ex)| pairs_for(engine, ex, config, negatives, seed, i))
        .collect();
    let mut report = BuildReport::default();
    for (ex, result) in examples.iter().zip(results) {
        match result {
            Ok(pairs) => report.pairs.extend(pairs),
            Err(reason) => report.skipped.push(Skip {
                id: ex.id.clone(),
                reason,
            }),
        }
    }
    Ok(report)
}

/// [`build_pairs_with`] using the bundled engine resources.
pub fn build_pairs(
    examples: &[QAExample],
    config: &EngineConfig,
    negatives: Negatives,
    seed: u64,
) -> Result<BuildReport> {
    build_pairs_with(&Engine::bundled(), examples, config, negatives, seed)
}

pub fn write_nli_jsonl_to<W: Write>(pairs: &[NLIPair], out: W) -> Result<usize> {
    let mut out = BufWriter::new(out);
    for p in pairs {
        serde_json::to_writer(&mut out, p)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(pairs.len())
}

pub fn write_nli_jsonl(pairs: &[NLIPair], path: &Path) -> Result<usize> {
    write_nli_jsonl_to(pairs, fs::File::create(path)?)
}

pub fn parse_nli_jsonl(text: &str, source: &str) -> Result<Vec<NLIPair>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Load {
                path: source.to_owned(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn read_nli_jsonl(path: &Path) -> Result<Vec<NLIPair>> {
    parse_nli_jsonl(&fs::read_to_string(path)?, &path.display().to_string())
}

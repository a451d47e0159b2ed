//! The `qa2nli` command line.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{analyze_corpus, DEFAULT_SMOOTHING};
use crate::conllu::parse_conllu;
use crate::engine::{Engine, EngineConfig, PrepositionTable, VerbLexicon};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalRecord};
use crate::nli::{
    attach_parses, build_pairs_with, load_qa_jsonl, read_nli_jsonl, write_nli_jsonl, Negatives,
    QAExample, Schema,
};

#[derive(Debug, Parser)]
#[command(
    name = "qa2nli",
    version,
    about = "Question+answer to declarative rewriting and QA-to-NLI conversion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite each question and its correct answer as a declarative sentence.
    Qa2d(Qa2dArgs),
    /// Convert a QA dataset into labeled NLI pairs.
    Convert(ConvertArgs),
    /// Score declaratives against reference sentences.
    Eval(EvalArgs),
    /// PMI, length and overlap statistics for an NLI corpus.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemaArg {
    Span,
    Multichoice,
    Unanswerable,
}

impl From<SchemaArg> for Schema {
    fn from(s: SchemaArg) -> Self {
        match s {
            SchemaArg::Span => Schema::Span,
            SchemaArg::Multichoice => Schema::Multichoice,
            SchemaArg::Unanswerable => Schema::Unanswerable,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NegativesArg {
    All,
    OneRandom,
}

impl From<NegativesArg> for Negatives {
    fn from(n: NegativesArg) -> Self {
        match n {
            NegativesArg::All => Negatives::All,
            NegativesArg::OneRandom => Negatives::OneRandom,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Args, Serialize)]
pub struct EngineArgs {
    /// Keep the noun of a which/how phrase after the answer.
    #[arg(long)]
    pub copy_wh_phrase: bool,
    /// Candidates per question.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub candidates: u32,
    /// Directory with irregular_past.tsv, irregular_3sg.tsv, doubling.tsv,
    /// prepositions.tsv and article_exceptions.tsv replacing the bundled data.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct Qa2dArgs {
    /// QA JSONL file.
    #[arg(long)]
    pub input: PathBuf,
    /// CoNLL-U question parses keyed by `# sent_id`.
    #[arg(long)]
    pub parses: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = SchemaArg::Span)]
    pub schema: SchemaArg,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub parses: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = SchemaArg::Span)]
    pub schema: SchemaArg,
    #[arg(long, value_enum, default_value_t = NegativesArg::OneRandom)]
    pub negatives: NegativesArg,
    /// Required with `--negatives one-random`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Declaratives as written by `qa2d` (`id`, `declarative`, `rank`).
    #[arg(long)]
    pub input: PathBuf,
    /// JSONL of `{id, question, answer, references}`.
    #[arg(long)]
    pub references: PathBuf,
    /// Also score the best of the top k candidates.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub k: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Report file; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    /// NLI JSONL file.
    #[arg(long)]
    pub input: PathBuf,
    /// Directory for report.json/report.txt, pmi.csv and lengths.csv.
    #[arg(long)]
    pub output: PathBuf,
    /// Add-k constant for PMI.
    #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
    pub smoothing: f64,
    /// Words listed per label.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// One line of `qa2d` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qa2dLine {
    pub id: String,
    pub declarative: String,
    pub rank: usize,
    pub applied_rules: Vec<String>,
}

/// One line of an `eval` reference file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceLine {
    pub id: String,
    pub question: String,
    pub answer: String,
    pub references: Vec<String>,
}

/// A failure that ends the run with exit status 2.
#[derive(Debug)]
struct Fatal(String);

impl From<Error> for Fatal {
    fn from(e: Error) -> Self {
        Fatal(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Fatal>;

struct Resources {
    lexicon: Option<VerbLexicon>,
    prepositions: Option<PrepositionTable>,
    config: EngineConfig,
}

impl Resources {
    fn load(args: &EngineArgs) -> Result<Self> {
        let mut config = EngineConfig {
            copy_wh_phrase: args.copy_wh_phrase,
            emit_alternatives: args.candidates as usize,
            ..EngineConfig::default()
        };
        let (lexicon, prepositions) = match &args.data_dir {
            Some(dir) => {
                config.load_article_exceptions(&dir.join("article_exceptions.tsv"))?;
                (
                    Some(VerbLexicon::load_dir(dir)?),
                    Some(PrepositionTable::load(&dir.join("prepositions.tsv"))?),
                )
            }
            None => (None, None),
        };
        Ok(Resources {
            lexicon,
            prepositions,
            config,
        })
    }

    fn engine(&self) -> Engine<'_> {
        Engine {
            lexicon: self
                .lexicon
                .as_ref()
                .unwrap_or_else(|| VerbLexicon::bundled()),
            prepositions: self
                .prepositions
                .as_ref()
                .unwrap_or_else(|| PrepositionTable::bundled()),
        }
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Argument(format!("thread pool: {e}")))
}

fn load_examples(input: &Path, parses: &Path, schema: SchemaArg) -> Result<Vec<QAExample>> {
    let mut examples = load_qa_jsonl(input, schema.into())?;
    let sentences = parse_conllu(&fs::read_to_string(parses)?)?;
    attach_parses(&mut examples, sentences);
    Ok(examples)
}

fn write_lines<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn eprint_json<T: Serialize>(value: &T) {
    if let Ok(s) = serde_json::to_string(value) {
        eprintln!("{s}");
    }
}

fn cmd_qa2d(args: &Qa2dArgs) -> CmdResult {
    let res = Resources::load(&args.engine)?;
    res.config.validate()?;
    let examples = load_examples(&args.input, &args.parses, args.schema)?;
    let engine = res.engine();
    let results: Vec<std::result::Result<Vec<Qa2dLine>, String>> =
        pool(args.engine.jobs)?.install(|| {
            examples
                .par_iter()
                .map(|ex| {
                    let parse = ex.parse.as_ref().ok_or("no parse for question")?;
                    let answer = ex.correct().ok_or("no correct answer")?;
                    let cands = crate::engine::transform_question(
                        &engine,
                        parse,
                        &answer.text,
                        &res.config,
                        &ex.id,
                    )
                    .map_err(|e| e.to_string())?;
                    Ok(cands
                        .into_iter()
                        .map(|c| Qa2dLine {
                            id: ex.id.clone(),
                            declarative: c.text,
                            rank: c.rank,
                            applied_rules: c.applied_rules,
                        })
                        .collect())
                })
                .collect()
        });
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for (ex, r) in examples.iter().zip(results) {
        match r {
            Ok(lines) => rows.extend(lines),
            Err(reason) => skipped.push(crate::nli::Skip {
                id: ex.id.clone(),
                reason,
            }),
        }
    }
    write_lines(&args.output, &rows)?;
    for s in &skipped {
        eprintln!("skipped {}: {}", s.id, s.reason);
    }
    eprint_json(&serde_json::json!({
        "command": "qa2d",
        "config": args,
        "examples": examples.len(),
        "written": rows.len(),
        "skipped": skipped.len(),
    }));
    Ok(())
}

fn cmd_convert(args: &ConvertArgs) -> CmdResult {
    let seed = match (args.negatives, args.seed) {
        (NegativesArg::OneRandom, None) => {
            return Err(Fatal(
                "--seed is required with --negatives one-random".into(),
            ))
        }
        (_, seed) => seed.unwrap_or(0),
    };
    let res = Resources::load(&args.engine)?;
    let examples = load_examples(&args.input, &args.parses, args.schema)?;
    let engine = res.engine();
    let report = pool(args.engine.jobs)?.install(|| {
        build_pairs_with(&engine, &examples, &res.config, args.negatives.into(), seed)
    })?;
    write_nli_jsonl(&report.pairs, &args.output)?;
    for s in &report.skipped {
        eprintln!("skipped {}: {}", s.id, s.reason);
    }
    let counts: BTreeMap<String, usize> = report
        .counts()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    eprint_json(&serde_json::json!({
        "command": "convert",
        "config": args,
        "examples": examples.len(),
        "pairs": report.pairs.len(),
        "by_provenance": counts,
        "skipped": report.skipped,
    }));
    Ok(())
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Load {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Joins ranked hypotheses with references; ids present on only one side are fatal.
fn eval_records(
    hyps: Vec<Qa2dLine>,
    refs: Vec<ReferenceLine>,
) -> std::result::Result<Vec<EvalRecord>, Fatal> {
    let mut by_id: HashMap<String, Vec<(usize, String)>> = HashMap::new();
    for h in hyps {
        by_id.entry(h.id).or_default().push((h.rank, h.declarative));
    }
    let ref_ids: BTreeSet<&str> = refs.iter().map(|r| r.id.as_str()).collect();
    let mut orphans: Vec<String> = by_id
        .keys()
        .filter(|id| !ref_ids.contains(id.as_str()))
        .map(|id| format!("hypothesis without reference: {id}"))
        .collect();
    orphans.extend(
        refs.iter()
            .filter(|r| !by_id.contains_key(&r.id))
            .map(|r| format!("reference without hypothesis: {}", r.id)),
    );
    if !orphans.is_empty() {
        orphans.sort();
        return Err(Fatal(format!("id mismatch\n{}", orphans.join("\n"))));
    }
    let mut seen = BTreeSet::new();
    refs.into_iter()
        .map(|r| {
            if !seen.insert(r.id.clone()) {
                return Err(Fatal(format!("duplicate reference id {}", r.id)));
            }
            if r.references.is_empty() || r.references.len() > 3 {
                return Err(Fatal(format!(
                    "{}: expected 1 to 3 references, found {}",
                    r.id,
                    r.references.len()
                )));
            }
            let mut cands = by_id.remove(&r.id).unwrap_or_default();
            cands.sort_by_key(|c| c.0);
            let candidates = cands.into_iter().map(|c| c.1).collect();
            Ok(EvalRecord::new(
                &r.id,
                &r.question,
                &r.answer,
                candidates,
                r.references,
            )?)
        })
        .collect()
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_eval(args: &EvalArgs) -> CmdResult {
    let hyps: Vec<Qa2dLine> = read_jsonl(&args.input)?;
    let refs: Vec<ReferenceLine> = read_jsonl(&args.references)?;
    let records = eval_records(hyps, refs)?;
    let report = evaluate(&records, args.k.map(|k| k as usize))?;
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(Error::from)?;
            s.push('\n');
            s
        }
        Format::Text => report.to_text(),
    };
    emit(args.output.as_deref(), &text)?;
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> CmdResult {
    let pairs = read_nli_jsonl(&args.input)?;
    let report = analyze_corpus(&pairs, args.smoothing, args.top)?;
    fs::create_dir_all(&args.output).map_err(Error::from)?;
    match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).map_err(Error::from)?;
            s.push('\n');
            fs::write(args.output.join("report.json"), s).map_err(Error::from)?;
        }
        Format::Text => {
            fs::write(args.output.join("report.txt"), report.to_text()).map_err(Error::from)?
        }
    }
    fs::write(args.output.join("pmi.csv"), report.pmi.to_csv()).map_err(Error::from)?;
    fs::write(args.output.join("lengths.csv"), report.lengths.to_csv()).map_err(Error::from)?;
    eprint_json(&serde_json::json!({ "command": "analyze", "config": args, "pairs": pairs.len() }));
    Ok(())
}

/// Parses arguments and runs a subcommand; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Qa2d(a) => cmd_qa2d(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => 0,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

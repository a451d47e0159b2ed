//! Preposition choice for answers that fill a `when`/`where` slot.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::question::{QuestionType, WhAnalysis};
use crate::tsv::parse_numbered;

const BUNDLED: &str = include_str!("../../data/prepositions.tsv");

/// Answers starting with one of these never receive an inserted preposition.
const LEADING_BLOCKERS: &[&str] = &[
    "aboard",
    "about",
    "above",
    "across",
    "after",
    "against",
    "along",
    "alongside",
    "amid",
    "among",
    "around",
    "as",
    "at",
    "before",
    "behind",
    "below",
    "beneath",
    "beside",
    "between",
    "beyond",
    "by",
    "despite",
    "down",
    "during",
    "for",
    "from",
    "in",
    "inside",
    "into",
    "near",
    "of",
    "off",
    "on",
    "onto",
    "opposite",
    "out",
    "outside",
    "over",
    "past",
    "since",
    "through",
    "throughout",
    "till",
    "to",
    "toward",
    "towards",
    "under",
    "underneath",
    "until",
    "up",
    "upon",
    "via",
    "with",
    "within",
    "without", // locative and temporal adverbs
    "abroad",
    "anywhere",
    "away",
    "downstairs",
    "downtown",
    "elsewhere",
    "everywhere",
    "halfway",
    "here",
    "home",
    "nowhere",
    "onboard",
    "overseas",
    "somewhere",
    "there",
    "upstairs",
    "yesterday",
    "today",
    "tomorrow",
    "tonight",
];

/// True when the answer's first word already carries its own relation.
pub fn starts_blocked(answer: &str) -> bool {
    answer
        .split_whitespace()
        .next()
        .map(|w| {
            let w = w
                .trim_matches(|c: char| !c.is_alphanumeric())
                .to_lowercase();
            LEADING_BLOCKERS.contains(&w.as_str())
        })
        .unwrap_or(false)
}

#[derive(Clone, Debug)]
enum Matcher {
    Answer(Regex),
    Verb(Regex),
}

#[derive(Clone, Debug)]
pub struct PrepositionRule {
    pub qtype: QuestionType,
    /// `None` means "insert nothing".
    pub preposition: Option<String>,
    matcher: Matcher,
}

impl PrepositionRule {
    fn matches(&self, answer: &str, verb_lemma: &str) -> bool {
        match &self.matcher {
            Matcher::Answer(re) => re.is_match(answer),
            Matcher::Verb(re) => re.is_match(verb_lemma),
        }
    }
}

/// Ordered first-match rules per question type.
#[derive(Clone, Debug)]
pub struct PrepositionTable {
    rules: Vec<PrepositionRule>,
}

impl PrepositionTable {
    pub fn from_tsv(text: &str, source: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (line, key, value) in parse_numbered(text, source)? {
            let bad = |message: String| Error::Load {
                path: source.to_owned(),
                line,
                message,
            };
            let (qtype, prep) = key
                .split_once(':')
                .ok_or_else(|| bad(format!("key `{key}` is not <qtype>:<preposition>")))?;
            let qtype: QuestionType = qtype.parse()?;
            let (verb, pattern) = match value.strip_prefix("verb=") {
                Some(p) => (true, p),
                None => (false, value.as_str()),
            };
            let re = Regex::new(pattern).map_err(|e| bad(format!("bad pattern for {key}: {e}")))?;
            rules.push(PrepositionRule {
                qtype,
                preposition: (prep != "none").then(|| prep.to_owned()),
                matcher: if verb {
                    Matcher::Verb(re)
                } else {
                    Matcher::Answer(re)
                },
            });
        }
        Ok(PrepositionTable { rules })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_tsv(&fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn bundled() -> &'static PrepositionTable {
        static TABLE: OnceLock<PrepositionTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            PrepositionTable::from_tsv(BUNDLED, "prepositions.tsv")
                .expect("bundled preposition table is well-formed")
        })
    }

    pub fn rules(&self) -> &[PrepositionRule] {
        &self.rules
    }

    pub fn covers(&self, qtype: QuestionType) -> bool {
        self.rules.iter().any(|r| r.qtype == qtype)
    }

    /// First matching rule's preposition. `None` if the table has no rule
    /// for this question type or the matching rule inserts nothing.
    pub fn choose(&self, qtype: QuestionType, answer: &str, verb_lemma: &str) -> Option<String> {
        self.rules
            .iter()
            .filter(|r| r.qtype == qtype)
            .find(|r| r.matches(answer, verb_lemma))
            .and_then(|r| r.preposition.clone())
    }

    /// Distinct choices for a question type in declaration order.
    pub fn choices(&self, qtype: QuestionType) -> Vec<Option<String>> {
        let mut out: Vec<Option<String>> = Vec::new();
        for r in self.rules.iter().filter(|r| r.qtype == qtype) {
            if !out.contains(&r.preposition) {
                out.push(r.preposition.clone());
            }
        }
        out
    }
}

/// Where the chosen preposition comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PrepSource {
    /// A preposition stranded in the question (token id).
    Dangling(usize),
    /// A preposition fronted with the wh phrase (token id).
    Pied(usize),
    Table,
    Nothing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PrepChoice {
    pub word: Option<String>,
    pub source: PrepSource,
}

pub(crate) fn choose(table: &PrepositionTable, analysis: &WhAnalysis, answer: &str) -> PrepChoice {
    let nothing = PrepChoice {
        word: None,
        source: PrepSource::Nothing,
    };
    if analysis.subject_wh {
        return nothing;
    }
    let syntactic = analysis
        .pied_prep
        .map(|id| (id, PrepSource::Pied(id)))
        .or_else(|| {
            analysis
                .dangling_preps
                .first()
                .map(|&id| (id, PrepSource::Dangling(id)))
        });
    if let Some((id, source)) = syntactic {
        // A blocked answer brings its own preposition; the stranded one is dropped.
        let word = (!starts_blocked(answer)).then(|| analysis.token(id).form.to_lowercase());
        return PrepChoice { word, source };
    }
    if starts_blocked(answer) {
        return nothing;
    }
    if matches!(analysis.qtype, QuestionType::When | QuestionType::Where) {
        let verb = analysis.token(analysis.wh_attachment).lemma_or_form();
        return PrepChoice {
            word: table.choose(analysis.qtype, answer, &verb),
            source: PrepSource::Table,
        };
    }
    nothing
}

/// The preposition to insert before `answer`, if any.
///
/// A stranded or pied-piped preposition from the question wins over the
/// table, and nothing is inserted when the answer starts with a preposition
/// or a locative/temporal adverb.
pub fn select_preposition(
    table: &PrepositionTable,
    analysis: &WhAnalysis,
    answer: &str,
) -> Option<String> {
    choose(table, analysis, answer).word
}

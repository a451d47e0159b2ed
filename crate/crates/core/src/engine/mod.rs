//! Rewriting a wh-question and an answer into a declarative sentence.
//!
//! The pipeline runs in fixed order and logs every step it applies:
//!
//! 1. locate the wh phrase (`locate_wh`)
//! 2. resolve the predicate it attaches to (`resolve_attachment`)
//! 3. move a fronted auxiliary or copula back after the subject, removing
//!    do-support and re-inflecting the main verb (`undo_inversion`, `do_support`)
//! 4. delete the wh phrase (`delete_wh_phrase`)
//! 5. insert the answer at the argument position, with preposition and
//!    article selection (`insert_answer`, `preposition:<p>`, `article`)
//! 6. realize the surface string (`realize`)

mod lexicon;
mod prepositions;
mod realize;

use std::borrow::Cow;
use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use lexicon::{reinflect, DoForm, VerbLexicon};
pub use prepositions::{select_preposition, starts_blocked, PrepositionRule, PrepositionTable};
pub use realize::realize;

use crate::conllu::DepSentence;
use crate::error::{Error, Result};
use crate::question::{analyze, QuestionType, WhAnalysis};
use crate::tsv::parse_pairs;
use prepositions::PrepSource;

const ARTICLE_EXCEPTIONS: &str = include_str!("../../data/article_exceptions.tsv");

/// Dependents after a predicate that begin a new clause; an adjunct answer
/// goes before them.
const CLAUSAL: &[&str] = &[
    "advcl",
    "xcomp",
    "ccomp",
    "conj",
    "cc",
    "parataxis",
    "punct",
    "acl",
    "mark",
    "discourse",
    "vocative",
];

/// Relations for which the answer fills the slot right after the verb.
const OBJECT_LIKE: &[&str] = &["obj", "dobj", "iobj", "attr", "ccomp", "xcomp", "dep"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineConfig {
    /// Keep the noun of a `which`/`how` phrase after the answer.
    pub copy_wh_phrase: bool,
    /// Maximum number of candidates per input, at least 1.
    pub emit_alternatives: usize,
    /// Bare names that take a definite article.
    pub article_exceptions: BTreeSet<String>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            copy_wh_phrase: false,
            emit_alternatives: 1,
            article_exceptions: bundled_article_exceptions().clone(),
        }
    }
}

fn bundled_article_exceptions() -> &'static BTreeSet<String> {
    static LIST: OnceLock<BTreeSet<String>> = OnceLock::new();
    LIST.get_or_init(|| {
        parse_pairs(ARTICLE_EXCEPTIONS, "article_exceptions.tsv")
            .expect("bundled article list is well-formed")
            .into_iter()
            .map(|(k, _)| k)
            .collect()
    })
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.emit_alternatives == 0 {
            return Err(Error::Argument(
                "emit_alternatives must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Replaces the article exceptions with the names in a TSV file.
    pub fn load_article_exceptions(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path)?;
        self.article_exceptions = parse_pairs(&text, &path.display().to_string())?
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        Ok(())
    }

    /// Prepends "the" to a bare single-token name on the exception list.
    pub fn insert_article<'a>(&self, answer: &'a str) -> Cow<'a, str> {
        let trimmed = answer.trim();
        if !trimmed.contains(char::is_whitespace) && self.article_exceptions.contains(trimmed) {
            Cow::Owned(format!("the {trimmed}"))
        } else {
            Cow::Borrowed(answer)
        }
    }
}

/// [`EngineConfig::insert_article`] with the bundled exception list.
pub fn insert_article(answer: &str) -> Cow<'_, str> {
    let list = bundled_article_exceptions();
    let trimmed = answer.trim();
    if !trimmed.contains(char::is_whitespace) && list.contains(trimmed) {
        Cow::Owned(format!("the {trimmed}"))
    } else {
        Cow::Borrowed(answer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclarativeCandidate {
    pub text: String,
    pub tokens: Vec<String>,
    pub applied_rules: Vec<String>,
    /// 1-based.
    pub rank: usize,
}

/// A question token after reordering, possibly with a new surface form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub id: usize,
    pub form: String,
}

/// Result of [`Engine::undo_inversion`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reordered {
    pub items: Vec<Item>,
    pub rules: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Piece {
    Question(Item),
    Inserted(String),
}

impl Piece {
    fn form(&self) -> &str {
        match self {
            Piece::Question(i) => &i.form,
            Piece::Inserted(s) => s,
        }
    }

    fn id(&self) -> Option<usize> {
        match self {
            Piece::Question(i) => Some(i.id),
            Piece::Inserted(_) => None,
        }
    }
}

/// The rule engine with its lexical resources.
#[derive(Clone, Copy, Debug)]
pub struct Engine<'r> {
    pub lexicon: &'r VerbLexicon,
    pub prepositions: &'r PrepositionTable,
}

impl Default for Engine<'static> {
    fn default() -> Self {
        Engine::bundled()
    }
}

impl Engine<'static> {
    /// Engine over the resources compiled into the crate.
    pub fn bundled() -> Self {
        Engine {
            lexicon: VerbLexicon::bundled(),
            prepositions: PrepositionTable::bundled(),
        }
    }
}

/// Strips surrounding whitespace, trailing punctuation and question marks.
fn clean_answer(answer: &str) -> String {
    answer
        .replace('?', "")
        .trim()
        .trim_end_matches(|c: char| matches!(c, '.' | ',' | ';' | ':' | '!') || c.is_whitespace())
        .to_owned()
}

fn possessive(answer: &str) -> String {
    if answer.ends_with("'s") || answer.ends_with('\'') || answer.ends_with("’s") {
        answer.to_owned()
    } else if answer.ends_with('s') {
        format!("{answer}'")
    } else {
        format!("{answer}'s")
    }
}

impl<'r> Engine<'r> {
    /// Moves fronted auxiliaries back after the subject. A fronted `do` is
    /// deleted and its tense moved onto the main verb, unless it carries a
    /// negation.
    pub fn undo_inversion(&self, a: &WhAnalysis) -> Result<Reordered> {
        let mut items: Vec<Item> = a
            .question
            .tokens
            .iter()
            .map(|t| Item {
                id: t.id,
                form: t.form.clone(),
            })
            .collect();
        let mut rules = Vec::new();
        if a.subject_wh {
            return Ok(Reordered { items, rules });
        }
        let Some(subject) = a.subject_span else {
            if a.aux.is_some() || !a.fronted.is_empty() {
                return Err(Error::Transform {
                    id: a.question.sent_id().unwrap_or("?").to_owned(),
                    message: "auxiliary present but no subject found".into(),
                });
            }
            return Ok(Reordered { items, rules });
        };
        if a.fronted.is_empty() {
            return Ok(Reordered { items, rules });
        }

        let mut moving: Vec<usize> = a.fronted.clone();
        moving.extend(a.negation);
        let mut carried: Vec<Item> = Vec::new();
        let mut reinflected: Option<(usize, String)> = None;
        for &id in &moving {
            let tok = a.token(id);
            let do_aux = a.do_support() == Some(id) && a.negation.is_none();
            if do_aux {
                let verb = a.token(tok.head);
                let form = DoForm::from_form(&tok.form).ok_or_else(|| Error::Transform {
                    id: a.question.sent_id().unwrap_or("?").to_owned(),
                    message: format!("unrecognised do-support form `{}`", tok.form),
                })?;
                reinflected = Some((
                    verb.id,
                    self.lexicon.reinflect(&verb.lemma_or_form(), form)?,
                ));
                rules.push("do_support".to_owned());
            } else {
                carried.push(Item {
                    id,
                    form: tok.form.clone(),
                });
            }
        }
        items.retain(|i| !moving.contains(&i.id));
        let at = items
            .iter()
            .position(|i| i.id == subject.end)
            .map_or(items.len(), |p| p + 1);
        items.splice(at..at, carried);
        if let Some((verb, form)) = reinflected {
            if let Some(item) = items.iter_mut().find(|i| i.id == verb) {
                item.form = form;
            }
        }
        rules.insert(0, "undo_inversion".to_owned());
        Ok(Reordered { items, rules })
    }

    /// Produces up to `config.emit_alternatives` ranked declaratives.
    pub fn transform(
        &self,
        a: &WhAnalysis,
        answer: &str,
        config: &EngineConfig,
    ) -> Result<Vec<DeclarativeCandidate>> {
        config.validate()?;
        let id = a.question.sent_id().unwrap_or("?").to_owned();
        let fail = |message: &str| Error::Transform {
            id: id.clone(),
            message: message.to_owned(),
        };
        let answer = clean_answer(answer);
        if answer.is_empty() {
            return Err(fail("empty answer"));
        }
        let mut rules: Vec<String> = vec!["locate_wh".into(), "resolve_attachment".into()];

        let reordered = match self.undo_inversion(a) {
            Ok(r) => r,
            Err(_) => Reordered {
                items: a
                    .question
                    .tokens
                    .iter()
                    .map(|t| Item {
                        id: t.id,
                        form: t.form.clone(),
                    })
                    .collect(),
                rules: vec!["undo_inversion_fallback".into()],
            },
        };
        rules.extend(reordered.rules);

        let article = config.insert_article(&answer);
        let article_applied = matches!(article, Cow::Owned(_));
        let answer_text = article.into_owned();
        let choice = prepositions::choose(self.prepositions, a, &answer_text);

        // Delete the moved unit, the pied-piped preposition and final punctuation.
        let last_content = a
            .question
            .tokens
            .iter()
            .rev()
            .find(|t| t.upos != "PUNCT")
            .map_or(0, |t| t.id);
        let mut dropped_dangling = None;
        let mut pieces: Vec<Piece> = Vec::new();
        let mut anchor: Option<usize> = None;
        for item in reordered.items {
            let tok = a.token(item.id);
            if a.moved_span.contains(item.id)
                || Some(item.id) == a.pied_prep
                || (item.id > last_content && tok.upos == "PUNCT")
                || tok.form == "?"
            {
                if a.moved_span.contains(item.id) && anchor.is_none() {
                    anchor = Some(pieces.len());
                }
                continue;
            }
            if let PrepSource::Dangling(d) = choice.source {
                if d == item.id {
                    dropped_dangling = Some(pieces.len());
                    continue;
                }
            }
            let mut item = item;
            if item.id == 1 && tok.upos != "PROPN" && tok.form != "I" {
                item.form = lowercase_first(&item.form);
            }
            pieces.push(Piece::Question(item));
        }
        rules.push("delete_wh_phrase".into());

        // The inserted unit: preposition, answer, and any retained phrase words.
        let mut unit: Vec<String> = Vec::new();
        if let Some(p) = &choice.word {
            unit.push(p.clone());
            rules.push(format!("preposition:{p}"));
        }
        let answer_tokens: Vec<String> = if a.wh_phrase != a.moved_span {
            // possessive `whose`: the answer replaces the possessor only
            let mut toks: Vec<String> = possessive(&answer_text)
                .split_whitespace()
                .map(str::to_owned)
                .collect();
            toks.extend(
                a.moved_span
                    .ids()
                    .filter(|&i| i != a.wh_token)
                    .map(|i| a.token(i).form.clone()),
            );
            toks
        } else {
            answer_text.split_whitespace().map(str::to_owned).collect()
        };
        unit.extend(answer_tokens.iter().cloned());
        if article_applied {
            rules.push("article".into());
        }
        if config.copy_wh_phrase && matches!(a.qtype, QuestionType::Which | QuestionType::How) {
            let residual = residual_words(a);
            let answer_lower = answer_text.to_lowercase();
            let present = residual.iter().all(|w| {
                answer_lower
                    .split_whitespace()
                    .any(|x| x == w.to_lowercase())
            });
            if !residual.is_empty() && !present {
                unit.extend(residual);
                rules.push("copy_wh_residual".into());
            }
        }

        let copular = a.is_copular_predicate();
        let position = if a.subject_wh {
            anchor.unwrap_or(0)
        } else if let Some(p) = dropped_dangling {
            p
        } else if copular {
            let cop = a.copula.unwrap_or(a.root);
            pieces
                .iter()
                .position(|p| p.id() == Some(cop))
                .or_else(|| {
                    pieces
                        .iter()
                        .rposition(|p| p.id().is_some_and(|i| a.fronted.contains(&i)))
                })
                .map_or(pieces.len(), |p| p + 1)
        } else {
            self.slot_after_predicate(a, &pieces)
        };
        let n_unit = unit.len();
        pieces.splice(position..position, unit.into_iter().map(Piece::Inserted));
        rules.push("insert_answer".into());

        let mut candidates = Vec::new();
        let mut push = |pieces: &[Piece], mut rules: Vec<String>| -> Result<()> {
            let tokens: Vec<String> = pieces.iter().map(|p| p.form().to_owned()).collect();
            let text = realize(&tokens).map_err(|_| fail("empty realization"))?;
            if candidates
                .iter()
                .any(|c: &DeclarativeCandidate| c.text == text)
            {
                return Ok(());
            }
            rules.push("realize".into());
            candidates.push(DeclarativeCandidate {
                text,
                tokens,
                applied_rules: rules,
                rank: candidates.len() + 1,
            });
            Ok(())
        };
        let mut first_rules = rules.clone();
        if copular {
            first_rules.push("copular_x_is_a".into());
        }
        push(&pieces, first_rules)?;

        if config.emit_alternatives > 1 {
            // "A is X" for copular questions with a capitalised answer.
            let capitalised = answer_text.chars().next().is_some_and(char::is_uppercase);
            if copular && capitalised && choice.word.is_none() {
                if let Some(swapped) = swap_subject(a, &pieces, position, n_unit) {
                    let mut r = rules.clone();
                    r.push("copular_a_is_x".into());
                    push(&swapped, r)?;
                }
            }
            // Other prepositions from the table, in table order.
            if choice.source == PrepSource::Table {
                for alt in self.prepositions.choices(a.qtype) {
                    if alt == choice.word {
                        continue;
                    }
                    let mut variant = pieces.clone();
                    let mut r: Vec<String> = rules
                        .iter()
                        .filter(|x| !x.starts_with("preposition:"))
                        .cloned()
                        .collect();
                    if choice.word.is_some() {
                        variant.remove(position);
                    }
                    if let Some(p) = &alt {
                        variant.insert(position, Piece::Inserted(p.clone()));
                        r.push(format!("preposition:{p}"));
                    }
                    r.push("preposition_alternative".into());
                    push(&variant, r)?;
                }
            }
        }
        candidates.truncate(config.emit_alternatives);
        Ok(candidates)
    }

    /// Index in `pieces` right after the predicate the wh phrase belongs to:
    /// after the verb (and particles, indirect objects) for object-like wh
    /// phrases, or after the predicate's non-clausal right dependents for
    /// adjuncts.
    fn slot_after_predicate(&self, a: &WhAnalysis, pieces: &[Piece]) -> usize {
        let q = &a.question;
        let pred = a.wh_attachment;
        let Some(pred_idx) = pieces.iter().position(|p| p.id() == Some(pred)) else {
            return pieces.len();
        };
        let rel = a.token(a.phrase_head).base_deprel().to_owned();
        let right_children: Vec<_> = q
            .tokens
            .iter()
            .filter(|t| t.head == pred && t.id > pred)
            .collect();
        let under = |id: usize, keep: &dyn Fn(&str, &str) -> bool| {
            right_children
                .iter()
                .any(|c| keep(c.base_deprel(), &c.deprel) && q.dominates(c.id, id))
        };
        if OBJECT_LIKE.contains(&rel.as_str()) {
            let mut p = pred_idx + 1;
            while p < pieces.len() {
                match pieces[p].id() {
                    Some(id)
                        if under(id, &|base, full| {
                            base == "iobj" || full == "compound:prt" || full == "prt"
                        }) =>
                    {
                        p += 1
                    }
                    _ => break,
                }
            }
            p
        } else {
            let mut p = pred_idx + 1;
            for (i, piece) in pieces.iter().enumerate().skip(pred_idx + 1) {
                if let Some(id) = piece.id() {
                    if under(id, &|base, _| !CLAUSAL.contains(&base)) {
                        p = i + 1;
                    }
                }
            }
            p
        }
    }
}

/// Nouns of a `which`/`how` phrase that a copying rewrite keeps.
fn residual_words(a: &WhAnalysis) -> Vec<String> {
    let ids: Vec<usize> = a.wh_phrase.ids().filter(|&i| i != a.wh_token).collect();
    let Some(first_noun) = ids
        .iter()
        .position(|&i| matches!(a.token(i).upos.as_str(), "NOUN" | "PROPN"))
    else {
        return Vec::new();
    };
    ids[first_noun..]
        .iter()
        .map(|&i| a.token(i).form.clone())
        .collect()
}

/// Swaps the subject block and the inserted answer ("A is X").
fn swap_subject(a: &WhAnalysis, pieces: &[Piece], pos: usize, n_unit: usize) -> Option<Vec<Piece>> {
    let span = a.subject_span?;
    let subj: Vec<usize> = pieces
        .iter()
        .enumerate()
        .filter(|(_, p)| p.id().is_some_and(|i| span.contains(i)))
        .map(|(i, _)| i)
        .collect();
    let (&s0, &s1) = (subj.first()?, subj.last()?);
    if s1 >= pos || s1 - s0 + 1 != subj.len() {
        return None;
    }
    let mut out = Vec::with_capacity(pieces.len());
    out.extend_from_slice(&pieces[..s0]);
    out.extend_from_slice(&pieces[pos..pos + n_unit]);
    out.extend_from_slice(&pieces[s1 + 1..pos]);
    out.extend_from_slice(&pieces[s0..=s1]);
    out.extend_from_slice(&pieces[pos + n_unit..]);
    Some(out)
}

fn lowercase_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// [`Engine::transform`] with the bundled resources.
pub fn transform(
    analysis: &WhAnalysis,
    answer: &str,
    config: &EngineConfig,
) -> Result<Vec<DeclarativeCandidate>> {
    Engine::bundled().transform(analysis, answer, config)
}

/// Analyzes a parsed question and transforms it, reporting any failure as
/// a transformation error carrying `id`.
pub fn transform_question(
    engine: &Engine<'_>,
    question: &DepSentence,
    answer: &str,
    config: &EngineConfig,
    id: &str,
) -> Result<Vec<DeclarativeCandidate>> {
    let wrap = |e: Error| match e {
        Error::Transform { message, .. } => Error::Transform {
            id: id.to_owned(),
            message,
        },
        other => Error::Transform {
            id: id.to_owned(),
            message: other.to_string(),
        },
    };
    let analysis = analyze(question).map_err(wrap)?;
    engine.transform(&analysis, answer, config).map_err(wrap)
}

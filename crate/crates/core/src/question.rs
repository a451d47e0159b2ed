//! Structural analysis of wh-questions.
//!
//! Given a dependency parse, [`analyze`] locates the wh word and the phrase
//! it heads, the predicate that phrase belongs to, any fronted auxiliary or
//! copula, the subject, and prepositions left stranded by wh-movement.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::conllu::{DepSentence, DepToken};
use crate::error::{Error, Result};

/// Question category, decided by the wh word alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QuestionType {
    Who,
    What,
    When,
    Where,
    Which,
    Whose,
    Why,
    How,
}

impl QuestionType {
    pub const ALL: [QuestionType; 8] = [
        QuestionType::Who,
        QuestionType::What,
        QuestionType::When,
        QuestionType::Where,
        QuestionType::Which,
        QuestionType::Whose,
        QuestionType::Why,
        QuestionType::How,
    ];

    /// Maps a wh word (any case) to its category; `whom` is `Who`.
    pub fn from_wh_word(word: &str) -> Option<Self> {
        Some(match word.to_lowercase().as_str() {
            "who" | "whom" => QuestionType::Who,
            "what" => QuestionType::What,
            "when" => QuestionType::When,
            "where" => QuestionType::Where,
            "which" => QuestionType::Which,
            "whose" => QuestionType::Whose,
            "why" => QuestionType::Why,
            "how" => QuestionType::How,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            QuestionType::Who => "Who",
            QuestionType::What => "What",
            QuestionType::When => "When",
            QuestionType::Where => "Where",
            QuestionType::Which => "Which",
            QuestionType::Whose => "Whose",
            QuestionType::Why => "Why",
            QuestionType::How => "How",
        }
    }

    /// Classifies raw question text by its leftmost wh word.
    pub fn from_text(text: &str) -> Option<Self> {
        text.split(|c: char| !c.is_alphabetic())
            .find_map(QuestionType::from_wh_word)
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuestionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuestionType::ALL
            .into_iter()
            .find(|q| q.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Argument(format!("unknown question type `{s}`")))
    }
}

/// Inclusive range of 1-based token ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn single(id: usize) -> Self {
        Span { start: id, end: id }
    }

    pub fn contains(&self, id: usize) -> bool {
        self.start <= id && id <= self.end
    }

    pub fn ids(&self) -> std::ops::RangeInclusive<usize> {
        self.start..=self.end
    }
}

/// What the rewrite rules need to know about a question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhAnalysis {
    pub question: DepSentence,
    pub wh_token: usize,
    /// Tokens removed from the question: the wh word and the phrase it
    /// determines. For `whose` this is the possessor only.
    pub wh_phrase: Span,
    /// The fronted unit that is relocated as a whole. Equals `wh_phrase`
    /// except for possessive `whose`, where the possessed noun moves too.
    pub moved_span: Span,
    /// Head of the moved unit (`friend` in "which friend").
    pub phrase_head: usize,
    pub qtype: QuestionType,
    pub root: usize,
    pub aux: Option<usize>,
    pub copula: Option<usize>,
    pub subject: Option<usize>,
    pub subject_span: Option<Span>,
    /// Predicate the wh phrase is an argument or adjunct of.
    pub wh_attachment: usize,
    pub dangling_preps: Vec<usize>,
    /// Preposition fronted together with the wh phrase ("in which year").
    pub pied_prep: Option<usize>,
    pub subject_wh: bool,
    /// Auxiliaries or copula that precede the subject, in surface order.
    pub fronted: Vec<usize>,
    /// `not`/`n't` attached to a fronted auxiliary.
    pub negation: Option<usize>,
}

impl WhAnalysis {
    pub fn token(&self, id: usize) -> &DepToken {
        self.question.token(id).expect("analysis ids are in range")
    }

    /// The fronted do-support auxiliary, if any.
    pub fn do_support(&self) -> Option<usize> {
        self.fronted
            .iter()
            .copied()
            .find(|&id| is_do_aux(self.token(id)))
    }

    /// Copular question whose wh phrase is the predicate ("What is X?").
    pub fn is_copular_predicate(&self) -> bool {
        if self.subject_wh {
            return false;
        }
        let head_is_root = self.phrase_head == self.root;
        let be_root = self.copula == Some(self.root);
        (head_is_root && self.copula.is_some()) || (be_root && self.wh_attachment == self.root)
    }
}

const WH_WORDS: [&str; 9] = [
    "who", "whom", "whose", "what", "which", "when", "where", "why", "how",
];

fn is_wh(t: &DepToken) -> bool {
    WH_WORDS.contains(&t.form.to_lowercase().as_str())
}

fn is_do_aux(t: &DepToken) -> bool {
    t.base_deprel() == "aux" && t.lemma_or_form() == "do"
}

fn lower(t: &DepToken) -> String {
    t.form.to_lowercase()
}

/// Picks the interrogative wh word: the leftmost one that is not a
/// subordinator or inside a relative clause, falling back to the leftmost.
fn find_wh_token(sentence: &DepSentence) -> Option<usize> {
    let candidates: Vec<&DepToken> = sentence.tokens.iter().filter(|t| is_wh(t)).collect();
    let in_relative = |t: &DepToken| {
        let mut cur = t.head;
        while cur != 0 {
            let g = sentence.token(cur).unwrap();
            if g.deprel.starts_with("acl") {
                return true;
            }
            cur = g.head;
        }
        false
    };
    candidates
        .iter()
        .find(|t| t.base_deprel() != "mark" && !in_relative(t))
        .or_else(|| candidates.first())
        .map(|t| t.id)
}

/// Category of the question's interrogative wh word.
pub fn classify_question(sentence: &DepSentence) -> Result<QuestionType> {
    let id = find_wh_token(sentence).ok_or_else(|| {
        Error::NotWhQuestion(sentence.text.clone().unwrap_or_else(|| {
            sentence
                .tokens
                .iter()
                .map(|t| t.form.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        }))
    })?;
    Ok(QuestionType::from_wh_word(&sentence.token(id).unwrap().form).expect("wh word"))
}

/// Climbs from the wh word to the head of the phrase it determines.
fn phrase_head(sentence: &DepSentence, wh: usize) -> usize {
    let mut cur = wh;
    loop {
        let t = sentence.token(cur).unwrap();
        let Some(gov) = sentence.token(t.head) else {
            return cur;
        };
        let rel = t.deprel.as_str();
        let climb = if cur == wh {
            match lower(t).as_str() {
                "what" | "which" => matches!(t.base_deprel(), "det" | "amod") && gov.id > cur,
                "whose" => (rel == "nmod:poss" || t.base_deprel() == "det") && gov.id > cur,
                "how" => {
                    t.base_deprel() == "advmod"
                        && gov.id == cur + 1
                        && matches!(gov.upos.as_str(), "ADJ" | "ADV")
                }
                _ => false,
            }
        } else {
            matches!(t.base_deprel(), "amod" | "advmod" | "nummod" | "det")
                && gov.id > cur
                && matches!(gov.upos.as_str(), "NOUN" | "PROPN")
                && (cur + 1..gov.id).all(|i| sentence.dominates(gov.id, i))
        };
        if !climb {
            return cur;
        }
        cur = gov.id;
    }
}

/// Maximal contiguous run around `anchor` of ids accepted by `keep`.
fn contiguous(anchor: usize, n: usize, keep: impl Fn(usize) -> bool) -> Span {
    let mut start = anchor;
    while start > 1 && keep(start - 1) {
        start -= 1;
    }
    let mut end = anchor;
    while end < n && keep(end + 1) {
        end += 1;
    }
    Span { start, end }
}

/// Dependents that belong to the phrase of `head` rather than to the clause
/// it predicates over.
fn in_phrase(child: &DepToken, head: usize) -> bool {
    let clausal = matches!(
        child.base_deprel(),
        "case"
            | "cop"
            | "aux"
            | "nsubj"
            | "csubj"
            | "expl"
            | "advcl"
            | "ccomp"
            | "xcomp"
            | "punct"
            | "mark"
            | "obl"
            | "conj"
            | "cc"
            | "parataxis"
            | "discourse"
            | "vocative"
    );
    !clausal && (child.base_deprel() != "advmod" || child.id < head)
}

fn is_subject(t: &DepToken) -> bool {
    matches!(t.base_deprel(), "nsubj" | "csubj")
}

fn is_particle(t: &DepToken) -> bool {
    t.deprel == "compound:prt" || t.deprel == "prt"
}

fn last_content_id(sentence: &DepSentence) -> usize {
    sentence
        .tokens
        .iter()
        .rev()
        .find(|t| t.upos != "PUNCT")
        .map_or(sentence.len(), |t| t.id)
}

/// Decomposes a wh-question into the pieces the rewrite rules use.
pub fn analyze(sentence: &DepSentence) -> Result<WhAnalysis> {
    let qtype = classify_question(sentence)?;
    let wh_token = find_wh_token(sentence).expect("classified");
    let root = sentence.root().id;
    if sentence.root().upos == "PUNCT" {
        return Err(Error::Analysis("root is punctuation".into()));
    }
    let n = sentence.len();
    let head = phrase_head(sentence, wh_token);
    let head_tok = sentence.token(head).unwrap();

    // The moved unit is the head plus its phrase-internal dependents.
    let case_children: Vec<usize> = sentence
        .tokens
        .iter()
        .filter(|t| t.head == head && t.base_deprel() == "case")
        .map(|t| t.id)
        .collect();
    let mut members = vec![head];
    for c in sentence.children(head)? {
        if in_phrase(c, head) {
            members.extend(sentence.subtree(c.id));
        }
    }
    members.sort_unstable();
    let moved_span = contiguous(wh_token, n, |id| {
        members.binary_search(&id).is_ok() && sentence.token(id).unwrap().upos != "PUNCT"
    });
    let possessive = lower(sentence.token(wh_token).unwrap()) == "whose" && head != wh_token;
    let wh_phrase = if possessive {
        Span::single(wh_token)
    } else {
        moved_span
    };

    let pied_prep = case_children
        .iter()
        .copied()
        .find(|&c| c + 1 == moved_span.start);

    // Governor of the phrase, looking through a preposition node.
    let wh_attachment = if head == root {
        if wh_token == root && sentence.children(root)?.is_empty() {
            return Err(Error::Analysis("wh token has no governor".into()));
        }
        root
    } else {
        let mut gov = head_tok.head;
        let g = sentence.token(gov).unwrap();
        if g.upos == "ADP" && g.head != 0 {
            gov = g.head;
        }
        gov
    };

    let subject = sentence
        .tokens
        .iter()
        .find(|t| t.head == root && is_subject(t))
        .map(|t| t.id);
    let subject_wh = subject == Some(head)
        || (is_subject(head_tok) && head_tok.head == wh_attachment && subject.is_none());
    let subject_span = subject.map(|s| {
        let sub = sentence.subtree(s);
        let ids: Vec<usize> = sub
            .into_iter()
            .filter(|&i| sentence.token(i).unwrap().upos != "PUNCT")
            .collect();
        Span {
            start: ids[0],
            end: *ids.last().unwrap(),
        }
    });

    let root_tok = sentence.root();
    let be_root = root_tok.lemma_or_form() == "be"
        && matches!(root_tok.upos.as_str(), "AUX" | "VERB")
        && !sentence
            .tokens
            .iter()
            .any(|t| t.head == root && matches!(t.base_deprel(), "xcomp" | "ccomp"));

    let mut fronted = Vec::new();
    if !subject_wh {
        if let Some(span) = subject_span {
            fronted = sentence
                .tokens
                .iter()
                .filter(|t| {
                    t.id < span.start
                        && !wh_phrase.contains(t.id)
                        && ((t.head == root && matches!(t.base_deprel(), "aux" | "cop"))
                            || (t.id == root && be_root))
                })
                .map(|t| t.id)
                .collect();
        }
    }

    let first_of = |rel: &str| {
        sentence
            .tokens
            .iter()
            .find(|t| t.head == root && t.base_deprel() == rel)
            .map(|t| t.id)
    };
    let aux = fronted
        .iter()
        .copied()
        .find(|&id| sentence.token(id).unwrap().base_deprel() == "aux")
        .or_else(|| first_of("aux"));
    let copula = first_of("cop").or(be_root.then_some(root));

    let negation = fronted.last().and_then(|&f| {
        let next = sentence.token(f + 1)?;
        (matches!(next.lemma_or_form().as_str(), "not" | "n't")
            && matches!(next.base_deprel(), "advmod" | "neg"))
        .then_some(next.id)
    });

    let last = last_content_id(sentence);
    let mut dangling_preps: Vec<usize> = case_children
        .iter()
        .copied()
        .filter(|&c| Some(c) != pied_prep && !moved_span.contains(c))
        .collect();
    for pred in [root, wh_attachment] {
        for t in sentence.children(pred)? {
            let stranded = (t.upos == "ADP" || matches!(t.base_deprel(), "case" | "prep"))
                && !is_particle(t)
                && sentence.children(t.id)?.is_empty();
            let final_particle = is_particle(t) && t.id == last;
            if (stranded || final_particle)
                && !dangling_preps.contains(&t.id)
                && !wh_phrase.contains(t.id)
            {
                dangling_preps.push(t.id);
            }
        }
    }
    dangling_preps.sort_unstable();

    Ok(WhAnalysis {
        question: sentence.clone(),
        wh_token,
        wh_phrase,
        moved_span,
        phrase_head: head,
        qtype,
        root,
        aux,
        copula,
        subject,
        subject_span,
        wh_attachment,
        dangling_preps,
        pied_prep,
        subject_wh,
        fronted,
        negation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conllu::parse_conllu;

    fn parse(doc: &str) -> DepSentence {
        parse_conllu(doc).unwrap().remove(0)
    }

    fn forms(a: &WhAnalysis, ids: impl IntoIterator<Item = usize>) -> Vec<String> {
        ids.into_iter().map(|i| a.token(i).form.clone()).collect()
    }

    const WHO_CALLED: &str = "\
1\tWho\twho\tPRON\tWP\t_\t2\tnsubj\t_\t_
2\tcalled\tcall\tVERB\tVBD\t_\t0\troot\t_\t_
3\tTaylor\tTaylor\tPROPN\tNNP\t_\t2\tobj\t_\t_
4\t?\t?\tPUNCT\t.\t_\t2\tpunct\t_\t_
";

    const WHERE_GO: &str = "\
1\tWhere\twhere\tADV\tWRB\t_\t4\tadvmod\t_\t_
2\tdid\tdo\tAUX\tVBD\t_\t4\taux\t_\t_
3\tSam\tSam\tPROPN\tNNP\t_\t4\tnsubj\t_\t_
4\tgo\tgo\tVERB\tVB\t_\t0\troot\t_\t_
5\tto\tto\tPART\tTO\t_\t6\tmark\t_\t_
6\tbuy\tbuy\tVERB\tVB\t_\t4\txcomp\t_\t_
7\tmilk\tmilk\tNOUN\tNN\t_\t6\tobj\t_\t_
8\t?\t?\tPUNCT\t.\t_\t4\tpunct\t_\t_
";

    const WHICH_FRIEND: &str = "\
1\tWhich\twhich\tDET\tWDT\t_\t2\tdet\t_\t_
2\tfriend\tfriend\tNOUN\tNN\t_\t5\tobl\t_\t_
3\tdid\tdo\tAUX\tVBD\t_\t5\taux\t_\t_
4\tOlga\tOlga\tPROPN\tNNP\t_\t5\tnsubj\t_\t_
5\tsend\tsend\tVERB\tVB\t_\t0\troot\t_\t_
6\ta\ta\tDET\tDT\t_\t7\tdet\t_\t_
7\tletter\tletter\tNOUN\tNN\t_\t5\tobj\t_\t_
8\tto\tto\tADP\tIN\t_\t5\tcase\t_\t_
9\tlast\tlast\tADJ\tJJ\t_\t10\tamod\t_\t_
10\tweek\tweek\tNOUN\tNN\t_\t5\tobl:tmod\t_\t_
11\t?\t?\tPUNCT\t.\t_\t5\tpunct\t_\t_
";

    const WHAT_IS: &str = "\
1\tWhat\twhat\tPRON\tWP\t_\t0\troot\t_\t_
2\tis\tbe\tAUX\tVBZ\t_\t1\tcop\t_\t_
3\ther\ther\tPRON\tPRP$\t_\t4\tnmod:poss\t_\t_
4\tdog\tdog\tNOUN\tNN\t_\t6\tnmod:poss\t_\t_
5\t's\t's\tPART\tPOS\t_\t4\tcase\t_\t_
6\tname\tname\tNOUN\tNN\t_\t1\tnsubj\t_\t_
7\t?\t?\tPUNCT\t.\t_\t1\tpunct\t_\t_
";

    #[test]
    fn how_many_is_how() {
        let doc = "\
1\tHow\thow\tADV\tWRB\t_\t2\tadvmod\t_\t_
2\tmany\tmany\tADJ\tJJ\t_\t3\tamod\t_\t_
3\tpeople\tpeople\tNOUN\tNNS\t_\t4\tnsubj\t_\t_
4\tattended\tattend\tVERB\tVBD\t_\t0\troot\t_\t_
5\t?\t?\tPUNCT\t.\t_\t4\tpunct\t_\t_
";
        let s = parse(doc);
        assert_eq!(classify_question(&s).unwrap(), QuestionType::How);
        let a = analyze(&s).unwrap();
        assert_eq!(a.phrase_head, 3);
        assert_eq!(a.wh_phrase, Span { start: 1, end: 3 });
        assert!(a.subject_wh);
    }

    #[test]
    fn who_subject_question() {
        let s = parse(WHO_CALLED);
        assert_eq!(classify_question(&s).unwrap(), QuestionType::Who);
        let a = analyze(&s).unwrap();
        assert!(a.subject_wh);
        assert_eq!(a.root, 2);
        assert_eq!(a.aux, None);
        assert!(a.fronted.is_empty());
    }

    #[test]
    fn polar_question_is_rejected() {
        let doc = "\
1\tIs\tbe\tAUX\tVBZ\t_\t4\tcop\t_\t_
2\tthe\tthe\tDET\tDT\t_\t3\tdet\t_\t_
3\tsky\tsky\tNOUN\tNN\t_\t4\tnsubj\t_\t_
4\tblue\tblue\tADJ\tJJ\t_\t0\troot\t_\t_
5\t?\t?\tPUNCT\t.\t_\t4\tpunct\t_\t_
";
        assert!(matches!(
            classify_question(&parse(doc)),
            Err(Error::NotWhQuestion(_))
        ));
        assert!(analyze(&parse(doc)).is_err());
    }

    #[test]
    fn whom_maps_to_who() {
        assert_eq!(QuestionType::from_wh_word("Whom"), Some(QuestionType::Who));
        assert_eq!(
            QuestionType::from_text("To whom was it sent?"),
            Some(QuestionType::Who)
        );
        assert_eq!(QuestionType::from_text("Is it?"), None);
    }

    #[test]
    fn where_attaches_to_go_not_buy() {
        let a = analyze(&parse(WHERE_GO)).unwrap();
        assert_eq!(a.wh_attachment, 4);
        assert_eq!(a.token(a.wh_attachment).form, "go");
        assert_eq!(a.fronted, [2]);
        assert_eq!(a.do_support(), Some(2));
        assert_eq!(a.subject, Some(3));
    }

    #[test]
    fn stranded_preposition_is_dangling() {
        let a = analyze(&parse(WHICH_FRIEND)).unwrap();
        assert_eq!(a.qtype, QuestionType::Which);
        assert_eq!(forms(&a, a.wh_phrase.ids()), ["Which", "friend"]);
        assert_eq!(forms(&a, a.dangling_preps.iter().copied()), ["to"]);
        assert_eq!(a.token(a.dangling_preps[0]).head, 5);
        assert_eq!(a.wh_attachment, 5);
    }

    #[test]
    fn copular_identity_question() {
        let a = analyze(&parse(WHAT_IS)).unwrap();
        assert_eq!(a.copula, Some(2));
        assert_eq!(a.fronted, [2]);
        assert_eq!(a.aux, None);
        assert_eq!(a.subject_span, Some(Span { start: 3, end: 6 }));
        assert_eq!(a.wh_phrase, Span::single(1));
        assert!(a.is_copular_predicate());
    }

    #[test]
    fn analysis_is_repeatable_and_pure() {
        let s = parse(WHICH_FRIEND);
        let before = s.clone();
        assert_eq!(analyze(&s).unwrap(), analyze(&s).unwrap());
        assert_eq!(s, before);
    }

    #[test]
    fn possessive_whose_moves_the_noun() {
        let doc = "\
1\tWhose\twhose\tPRON\tWP$\t_\t2\tnmod:poss\t_\t_
2\tcar\tcar\tNOUN\tNN\t_\t5\tobj\t_\t_
3\tdid\tdo\tAUX\tVBD\t_\t5\taux\t_\t_
4\tSam\tSam\tPROPN\tNNP\t_\t5\tnsubj\t_\t_
5\tborrow\tborrow\tVERB\tVB\t_\t0\troot\t_\t_
6\t?\t?\tPUNCT\t.\t_\t5\tpunct\t_\t_
";
        let a = analyze(&parse(doc)).unwrap();
        assert_eq!(a.wh_phrase, Span::single(1));
        assert_eq!(a.moved_span, Span { start: 1, end: 2 });
        assert_eq!(a.phrase_head, 2);
    }

    #[test]
    fn pied_piped_preposition() {
        let doc = "\
1\tIn\tin\tADP\tIN\t_\t3\tcase\t_\t_
2\twhich\twhich\tDET\tWDT\t_\t3\tdet\t_\t_
3\tyear\tyear\tNOUN\tNN\t_\t7\tobl\t_\t_
4\tdid\tdo\tAUX\tVBD\t_\t7\taux\t_\t_
5\tthe\tthe\tDET\tDT\t_\t6\tdet\t_\t_
6\twar\twar\tNOUN\tNN\t_\t7\tnsubj\t_\t_
7\tend\tend\tVERB\tVB\t_\t0\troot\t_\t_
8\t?\t?\tPUNCT\t.\t_\t7\tpunct\t_\t_
";
        let a = analyze(&parse(doc)).unwrap();
        assert_eq!(a.pied_prep, Some(1));
        assert_eq!(a.wh_phrase, Span { start: 2, end: 3 });
        assert!(a.dangling_preps.is_empty());
    }

    #[test]
    fn negated_do_support() {
        let doc = "\
1\tWhy\twhy\tADV\tWRB\t_\t5\tadvmod\t_\t_
2\tdid\tdo\tAUX\tVBD\t_\t5\taux\t_\t_
3\tn't\tnot\tPART\tRB\t_\t5\tadvmod\t_\t_
4\tSam\tSam\tPROPN\tNNP\t_\t5\tnsubj\t_\t_
5\tleave\tleave\tVERB\tVB\t_\t0\troot\t_\t_
6\t?\t?\tPUNCT\t.\t_\t5\tpunct\t_\t_
";
        let a = analyze(&parse(doc)).unwrap();
        assert_eq!(a.fronted, [2]);
        assert_eq!(a.negation, Some(3));
    }

    #[test]
    fn bare_wh_word_has_no_governor() {
        let doc = "1\tWhat\twhat\tPRON\tWP\t_\t0\troot\t_\t_\n";
        assert!(matches!(analyze(&parse(doc)), Err(Error::Analysis(_))));
    }
}

//! Reading and writing CoNLL-U dependency parses.
//!
//! Only the ten-column layout is accepted. Multiword-token ranges (`3-4`) and
//! empty nodes (`3.1`) are skipped, since they carry no basic head links.
//! Every accepted sentence is a rooted tree over tokens `1..=n`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const COLUMNS: usize = 10;

/// A single token of a dependency parse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepToken {
    /// 1-based position in the sentence.
    pub id: usize,
    pub form: String,
    pub lemma: Option<String>,
    pub upos: String,
    pub xpos: Option<String>,
    pub feats: Option<String>,
    /// Governor id, `0` for the root.
    pub head: usize,
    pub deprel: String,
    pub misc: Option<String>,
}

impl DepToken {
    /// Lemma if present, otherwise the lowercased form.
    pub fn lemma_or_form(&self) -> String {
        match &self.lemma {
            Some(l) => l.to_lowercase(),
            None => self.form.to_lowercase(),
        }
    }

    /// The relation label without its subtype (`nsubj:pass` -> `nsubj`).
    pub fn base_deprel(&self) -> &str {
        self.deprel.split(':').next().unwrap_or("")
    }
}

/// A validated dependency tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepSentence {
    pub tokens: Vec<DepToken>,
    pub text: Option<String>,
    /// Comment lines without the leading `#` and following space.
    pub comments: Vec<String>,
}

impl DepSentence {
    /// Builds a sentence and checks the tree invariants.
    pub fn new(tokens: Vec<DepToken>, comments: Vec<String>) -> Result<Self> {
        let text = comment_value(&comments, "text").map(str::to_owned);
        let sentence = DepSentence {
            tokens,
            text,
            comments,
        };
        sentence.validate()?;
        Ok(sentence)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Value of a `# key = value` comment.
    pub fn meta(&self, key: &str) -> Option<&str> {
        comment_value(&self.comments, key)
    }

    /// All values of a repeated `# key = value` comment, in order.
    pub fn meta_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.comments
            .iter()
            .filter_map(move |c| split_comment(c).filter(|(k, _)| *k == key).map(|(_, v)| v))
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.meta("sent_id")
    }

    /// Token with the given 1-based id.
    pub fn token(&self, id: usize) -> Option<&DepToken> {
        id.checked_sub(1).and_then(|i| self.tokens.get(i))
    }

    pub fn root(&self) -> &DepToken {
        self.tokens
            .iter()
            .find(|t| t.head == 0)
            .expect("validated sentence has a root")
    }

    /// Direct dependents of `id`, in surface order.
    pub fn children(&self, id: usize) -> Result<Vec<&DepToken>> {
        if id == 0 || id > self.len() {
            return Err(Error::Argument(format!(
                "token id {id} outside 1..={}",
                self.len()
            )));
        }
        Ok(self.tokens.iter().filter(|t| t.head == id).collect())
    }

    /// Ids of `id` and all its descendants, sorted.
    pub fn subtree(&self, id: usize) -> Vec<usize> {
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            out.extend(self.tokens.iter().filter(|t| t.head == cur).map(|t| t.id));
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// True if `ancestor` dominates `id` (reflexive).
    pub fn dominates(&self, ancestor: usize, mut id: usize) -> bool {
        while id != 0 {
            if id == ancestor {
                return true;
            }
            id = self.token(id).map_or(0, |t| t.head);
        }
        false
    }

    fn name(&self, index: usize) -> String {
        self.sent_id()
            .map(str::to_owned)
            .unwrap_or_else(|| format!("#{index}"))
    }

    fn validate(&self) -> Result<()> {
        self.validate_named(&self.name(1))
    }

    fn validate_named(&self, name: &str) -> Result<()> {
        let err = |message: String| Error::Structure {
            sentence: name.to_owned(),
            message,
        };
        if self.tokens.is_empty() {
            return Err(err("no tokens".into()));
        }
        let n = self.len();
        for (i, t) in self.tokens.iter().enumerate() {
            if t.id != i + 1 {
                return Err(err(format!(
                    "token ids must be 1..{n} without gaps, found {} at position {}",
                    t.id,
                    i + 1
                )));
            }
            if t.form.is_empty() {
                return Err(err(format!("token {} has an empty form", t.id)));
            }
            if t.head == t.id {
                return Err(err(format!("token {} is its own head", t.id)));
            }
            if t.head > n {
                return Err(err(format!(
                    "token {} has head {} beyond {n}",
                    t.id, t.head
                )));
            }
        }
        let roots: Vec<usize> = self
            .tokens
            .iter()
            .filter(|t| t.head == 0)
            .map(|t| t.id)
            .collect();
        match roots.len() {
            0 => return Err(err("no root token".into())),
            1 => {}
            _ => return Err(err(format!("multiple roots: {roots:?}"))),
        }
        // Each token must reach the root within n steps.
        for t in &self.tokens {
            let mut cur = t.head;
            let mut steps = 0;
            while cur != 0 {
                steps += 1;
                if steps > n {
                    return Err(err(format!("head cycle through token {}", t.id)));
                }
                cur = self.tokens[cur - 1].head;
            }
        }
        Ok(())
    }

    /// Serializes to a CoNLL-U block (terminated by a blank line).
    pub fn to_conllu(&self) -> String {
        let mut out = String::new();
        let has_text = self.meta("text").is_some();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        if let (false, Some(text)) = (has_text, &self.text) {
            let _ = writeln!(out, "# text = {text}");
        }
        for t in &self.tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t_\t{}",
                t.id,
                t.form,
                t.lemma.as_deref().unwrap_or("_"),
                t.upos,
                t.xpos.as_deref().unwrap_or("_"),
                t.feats.as_deref().unwrap_or("_"),
                t.head,
                t.deprel,
                t.misc.as_deref().unwrap_or("_"),
            );
        }
        out.push('\n');
        out
    }
}

fn split_comment(comment: &str) -> Option<(&str, &str)> {
    let (k, v) = comment.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn comment_value<'a>(comments: &'a [String], key: &str) -> Option<&'a str> {
    comments
        .iter()
        .filter_map(|c| split_comment(c))
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v)
}

fn optional(field: &str) -> Option<String> {
    (field != "_").then(|| field.to_owned())
}

fn parse_token(line: &str, lineno: usize) -> Result<Option<DepToken>> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != COLUMNS {
        return Err(Error::Format {
            line: lineno,
            message: format!(
                "expected {COLUMNS} tab-separated columns, found {}",
                fields.len()
            ),
        });
    }
    if fields[0].contains('-') || fields[0].contains('.') {
        return Ok(None);
    }
    let number = |s: &str, what: &str| {
        s.parse::<usize>().map_err(|_| Error::Format {
            line: lineno,
            message: format!("invalid {what} `{s}`"),
        })
    };
    let id = number(fields[0], "token id")?;
    if id == 0 {
        return Err(Error::Format {
            line: lineno,
            message: "token id must be at least 1".into(),
        });
    }
    Ok(Some(DepToken {
        id,
        form: fields[1].to_owned(),
        lemma: optional(fields[2]),
        upos: fields[3].to_owned(),
        xpos: optional(fields[4]),
        feats: optional(fields[5]),
        head: number(fields[6], "head")?,
        deprel: fields[7].to_owned(),
        misc: optional(fields[9]),
    }))
}

/// Parses a CoNLL-U document into validated sentences, in document order.
pub fn parse_conllu(text: &str) -> Result<Vec<DepSentence>> {
    let mut sentences = Vec::new();
    let mut tokens = Vec::new();
    let mut comments = Vec::new();
    let mut block_has_lines = false;

    let mut finish = |tokens: &mut Vec<DepToken>, comments: &mut Vec<String>| -> Result<()> {
        if tokens.is_empty() {
            comments.clear();
            return Ok(());
        }
        let index = sentences.len() + 1;
        let sentence = DepSentence {
            text: comment_value(comments, "text").map(str::to_owned),
            tokens: std::mem::take(tokens),
            comments: std::mem::take(comments),
        };
        sentence.validate_named(&sentence.name(index))?;
        sentences.push(sentence);
        Ok(())
    };

    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if block_has_lines {
                finish(&mut tokens, &mut comments)?;
            }
            block_has_lines = false;
            continue;
        }
        block_has_lines = true;
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim_start().to_owned());
        } else if let Some(tok) = parse_token(line, i + 1)? {
            tokens.push(tok);
        }
    }
    finish(&mut tokens, &mut comments)?;
    Ok(sentences)
}

/// Serializes sentences as a CoNLL-U document.
pub fn write_conllu(sentences: &[DepSentence]) -> String {
    sentences.iter().map(DepSentence::to_conllu).collect()
}

/// Free-function form of [`DepSentence::children`].
pub fn children(sentence: &DepSentence, id: usize) -> Result<Vec<&DepToken>> {
    sentence.children(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIZ: &str = "1\tLiz\tLiz\tPROPN\t_\t_\t2\tnsubj\t_\t_\n\
                       2\tcalled\tcall\tVERB\t_\t_\t0\troot\t_\t_\n";

    const LIZ_TAYLOR: &str = "# sent_id = liz\n\
        # text = Liz called Taylor\n\
        1\tLiz\tLiz\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n\
        2\tcalled\tcall\tVERB\tVBD\tTense=Past\t0\troot\t_\t_\n\
        3\tTaylor\tTaylor\tPROPN\tNNP\t_\t2\tobj\t_\tSpaceAfter=No\n";

    #[test]
    fn minimal_tree() {
        let s = parse_conllu(LIZ).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].root().id, 2);
        assert_eq!(s[0].tokens[0].lemma.as_deref(), Some("Liz"));
        assert_eq!(s[0].tokens[0].xpos, None);
    }

    #[test]
    fn metadata_comments() {
        let s = &parse_conllu(LIZ_TAYLOR).unwrap()[0];
        assert_eq!(s.sent_id(), Some("liz"));
        assert_eq!(s.text.as_deref(), Some("Liz called Taylor"));
    }

    #[test]
    fn cycle_is_rejected() {
        let doc = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n\
                   2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n\
                   3\tc\tc\tX\t_\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(doc).unwrap_err();
        assert!(matches!(err, Error::Structure { .. }), "{err}");
        assert!(err.to_string().contains("cycle"));
    }

    #[test]
    fn multiple_roots_rejected() {
        let doc = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\
                   2\tb\tb\tX\t_\t_\t0\troot\t_\t_\n";
        let err = parse_conllu(doc).unwrap_err();
        assert!(err.to_string().contains("multiple roots"), "{err}");
    }

    #[test]
    fn zero_roots_rejected() {
        let doc = "1\ta\ta\tX\t_\t_\t2\tdep\t_\t_\n\
                   2\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n";
        assert!(matches!(parse_conllu(doc), Err(Error::Structure { .. })));
    }

    #[test]
    fn id_gap_names_the_sentence() {
        let doc = "# sent_id = q7\n\
                   1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\
                   3\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n";
        let err = parse_conllu(doc).unwrap_err();
        assert!(err.to_string().starts_with("sentence q7"), "{err}");
    }

    #[test]
    fn duplicate_id_rejected() {
        let doc = "1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\
                   1\tb\tb\tX\t_\t_\t1\tdep\t_\t_\n";
        assert!(matches!(parse_conllu(doc), Err(Error::Structure { .. })));
    }

    #[test]
    fn wrong_column_count_reports_line() {
        let doc = "# c\n1\ta\ta\tX\t_\t_\t0\troot\t_\n";
        match parse_conllu(doc) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ranges_and_empty_nodes_skipped() {
        let doc = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n\
                   1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n\
                   2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n\
                   2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n\
                   3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n";
        let s = parse_conllu(doc).unwrap();
        assert_eq!(s[0].len(), 3);
    }

    #[test]
    fn several_blocks_in_order() {
        let doc = format!("{LIZ}\n\n{LIZ_TAYLOR}\n");
        let s = parse_conllu(&doc).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[1].sent_id(), Some("liz"));
    }

    #[test]
    fn children_of_root_and_leaf() {
        let s = &parse_conllu(LIZ_TAYLOR).unwrap()[0];
        let forms: Vec<_> = s
            .children(2)
            .unwrap()
            .iter()
            .map(|t| t.form.as_str())
            .collect();
        assert_eq!(forms, ["Liz", "Taylor"]);
        assert!(children(s, 3).unwrap().is_empty());
        assert!(matches!(s.children(0), Err(Error::Argument(_))));
        assert!(matches!(s.children(4), Err(Error::Argument(_))));
    }

    #[test]
    fn round_trip() {
        let s = parse_conllu(LIZ_TAYLOR).unwrap();
        let again = parse_conllu(&write_conllu(&s)).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn subtree_and_dominance() {
        let s = &parse_conllu(LIZ_TAYLOR).unwrap()[0];
        assert_eq!(s.subtree(2), [1, 2, 3]);
        assert_eq!(s.subtree(3), [3]);
        assert!(s.dominates(2, 3));
        assert!(!s.dominates(3, 2));
    }
}

//! English verb inflection for undoing do-support.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::tsv::parse_pairs;

const IRREGULAR_PAST: &str = include_str!("../../data/irregular_past.tsv");
const IRREGULAR_3SG: &str = include_str!("../../data/irregular_3sg.tsv");
const DOUBLING: &str = include_str!("../../data/doubling.tsv");

/// The do-support auxiliary a question used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoForm {
    Did,
    Does,
    Do,
}

impl DoForm {
    pub fn from_form(form: &str) -> Option<Self> {
        match form.to_lowercase().as_str() {
            "did" => Some(DoForm::Did),
            "does" => Some(DoForm::Does),
            "do" => Some(DoForm::Do),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerbLexicon {
    irregular_past: HashMap<String, String>,
    irregular_3sg: HashMap<String, String>,
    doubling: HashSet<String>,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ends_consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    matches!((rev.next(), rev.next()), (Some('y'), Some(c)) if !is_vowel(c))
}

impl VerbLexicon {
    pub fn from_tsv(past: &str, third: &str, doubling: &str) -> Result<Self> {
        Ok(VerbLexicon {
            irregular_past: parse_pairs(past, "irregular_past.tsv")?
                .into_iter()
                .collect(),
            irregular_3sg: parse_pairs(third, "irregular_3sg.tsv")?
                .into_iter()
                .collect(),
            doubling: parse_pairs(doubling, "doubling.tsv")?
                .into_iter()
                .map(|(k, _)| k)
                .collect(),
        })
    }

    /// Loads `irregular_past.tsv`, `irregular_3sg.tsv` and `doubling.tsv`
    /// from a directory.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| fs::read_to_string(dir.join(name));
        Self::from_tsv(
            &read("irregular_past.tsv")?,
            &read("irregular_3sg.tsv")?,
            &read("doubling.tsv")?,
        )
    }

    /// The lexicon compiled into the crate, built on first use.
    pub fn bundled() -> &'static VerbLexicon {
        static LEXICON: OnceLock<VerbLexicon> = OnceLock::new();
        LEXICON.get_or_init(|| {
            VerbLexicon::from_tsv(IRREGULAR_PAST, IRREGULAR_3SG, DOUBLING)
                .expect("bundled lexicon is well-formed")
        })
    }

    pub fn len(&self) -> usize {
        self.irregular_past.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irregular_past.is_empty()
    }

    pub fn past(&self, lemma: &str) -> String {
        if let Some(p) = self.irregular_past.get(lemma) {
            return p.clone();
        }
        if lemma.ends_with('e') {
            format!("{lemma}d")
        } else if ends_consonant_y(lemma) {
            format!("{}ied", &lemma[..lemma.len() - 1])
        } else if self.doubling.contains(lemma) {
            let last = lemma.chars().last().unwrap();
            format!("{lemma}{last}ed")
        } else {
            format!("{lemma}ed")
        }
    }

    pub fn third_singular(&self, lemma: &str) -> String {
        if let Some(p) = self.irregular_3sg.get(lemma) {
            return p.clone();
        }
        if ["s", "x", "z", "ch", "sh", "o"]
            .iter()
            .any(|suffix| lemma.ends_with(suffix))
        {
            format!("{lemma}es")
        } else if ends_consonant_y(lemma) {
            format!("{}ies", &lemma[..lemma.len() - 1])
        } else {
            format!("{lemma}s")
        }
    }

    /// Restores the tense the do-support auxiliary carried.
    pub fn reinflect(&self, lemma: &str, aux: DoForm) -> Result<String> {
        let lemma = lemma.trim().to_lowercase();
        if lemma.is_empty() {
            return Err(Error::Argument("empty verb lemma".into()));
        }
        Ok(match aux {
            DoForm::Did => self.past(&lemma),
            DoForm::Does => self.third_singular(&lemma),
            DoForm::Do => lemma,
        })
    }
}

/// [`VerbLexicon::reinflect`] against the bundled lexicon.
pub fn reinflect(lemma: &str, aux: DoForm) -> Result<String> {
    VerbLexicon::bundled().reinflect(lemma, aux)
}

//! Generates template-based multiple-choice corpora with their question
//! parses. Every question template yields both the correct and the
//! incorrect hypotheses, so template words (including the negations in
//! "Who never visited ...?" or "Who has no car?") are spread evenly over the
//! two labels.
//!
//! ```text
//! cargo run --example synthetic_corpus -- [OUT_DIR]
//! ```
//! writes `synthetic_mc.{jsonl,conllu}` (20 examples) and
//! `templates_mc.{jsonl,conllu}` (300 examples), by default into
//! `crates/core/tests/fixtures`.

use std::fmt::Write as _;
use std::path::PathBuf;

use qa2nli::{DepSentence, DepToken};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const PEOPLE: &[&str] = &[
    "Liz", "Taylor", "Olga", "Bob", "Maria", "Kenji", "Amara", "Omar", "Priya", "Lucas",
];
const PLACES: &[&str] = &[
    "Paris", "Berlin", "Lagos", "Lima", "Oslo", "Seoul", "Cairo", "Quito",
];
const THINGS: &[&str] = &[
    "a refund",
    "an apology",
    "a reply",
    "a discount",
    "a promotion",
    "a warning",
];
const DAYS: &[&str] = &[
    "Monday",
    "Tuesday",
    "Wednesday",
    "Friday",
    "Saturday",
    "Sunday",
];
const NAMES: &[&str] = &["Sam", "Ines", "Noah", "Chen", "Zara", "Ravi"];

/// `form lemma upos head deprel`; `X` is the name slot.
struct Template {
    tokens: &'static str,
    passage: &'static str,
    answers: &'static [&'static str],
}

const TEMPLATES: &[Template] = &[
    Template {
        tokens: "Where where ADV 4 advmod|does do AUX 4 aux|X X PROPN 4 nsubj|work work VERB 0 root",
        passage: "{X} has worked in {A} for years.",
        answers: PLACES,
    },
    Template {
        tokens: "Who who PRON 3 nsubj|never never ADV 3 advmod|visited visit VERB 0 root|X X PROPN 3 obj",
        passage: "{A} never visited {X}, although friends did.",
        answers: PEOPLE,
    },
    Template {
        tokens: "What what PRON 4 obj|did do AUX 4 aux|nobody nobody PRON 4 nsubj|expect expect VERB 0 root|from from ADP 6 case|X X PROPN 4 obl",
        passage: "Nobody expected {A} from {X}.",
        answers: THINGS,
    },
    Template {
        tokens: "When when ADV 4 advmod|did do AUX 4 aux|X X PROPN 4 nsubj|leave leave VERB 0 root|the the DET 6 det|company company NOUN 4 obj",
        passage: "{X} left the company on {A}.",
        answers: DAYS,
    },
    Template {
        tokens: "Who who PRON 2 nsubj|has have VERB 0 root|no no DET 4 det|car car NOUN 2 obj",
        passage: "{A} has no car and walks everywhere.",
        answers: PEOPLE,
    },
    Template {
        tokens: "Who who PRON 2 nsubj|said say VERB 0 root|nothing nothing PRON 2 obj|about about ADP 5 case|X X PROPN 2 obl",
        passage: "{A} said nothing about {X}.",
        answers: PEOPLE,
    },
    Template {
        tokens: "Who who PRON 2 nsubj|answered answer VERB 0 root|none none PRON 2 obj|of of ADP 6 case|the the DET 6 det|questions question NOUN 3 nmod",
        passage: "{A} answered none of the questions.",
        answers: PEOPLE,
    },
];

pub struct Corpus {
    pub jsonl: String,
    pub conllu: String,
}

fn question(t: &Template, name: &str, id: &str) -> DepSentence {
    let mut tokens: Vec<DepToken> = t
        .tokens
        .split('|')
        .enumerate()
        .map(|(i, spec)| {
            let f: Vec<&str> = spec.split(' ').collect();
            let sub = |s: &str| {
                if s == "X" {
                    name.to_owned()
                } else {
                    s.to_owned()
                }
            };
            DepToken {
                id: i + 1,
                form: sub(f[0]),
                lemma: Some(sub(f[1])),
                upos: f[2].to_owned(),
                xpos: None,
                feats: None,
                head: f[3].parse().unwrap(),
                deprel: f[4].to_owned(),
                misc: None,
            }
        })
        .collect();
    let root = tokens.iter().find(|t| t.head == 0).unwrap().id;
    tokens.push(DepToken {
        id: tokens.len() + 1,
        form: "?".into(),
        lemma: Some("?".into()),
        upos: "PUNCT".into(),
        xpos: None,
        feats: None,
        head: root,
        deprel: "punct".into(),
        misc: None,
    });
    let words: Vec<&str> = tokens[..tokens.len() - 1]
        .iter()
        .map(|t| t.form.as_str())
        .collect();
    let text = format!("{}?", words.join(" "));
    DepSentence::new(
        tokens,
        vec![format!("sent_id = {id}"), format!("text = {text}")],
    )
    .expect("template parses are trees")
}

/// `n` four-option examples drawn with a seeded generator.
pub fn generate(n: usize, seed: u64, prefix: &str) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jsonl = String::new();
    let mut conllu = String::new();
    for i in 0..n {
        let t = TEMPLATES.choose(&mut rng).unwrap();
        let name = *NAMES.choose(&mut rng).unwrap();
        let mut options: Vec<&str> = t.answers.to_vec();
        options.shuffle(&mut rng);
        options.truncate(4);
        let correct = rng.random_range(0..4);
        let id = format!("{prefix}{i:04}");
        let q = question(t, name, &id);
        let passage = t
            .passage
            .replace("{X}", name)
            .replace("{A}", options[correct]);
        let line = json!({
            "id": id,
            "passage": passage,
            "question": q.text.clone().unwrap(),
            "options": options,
            "correct": correct,
            "source": "synthetic",
        });
        let _ = writeln!(jsonl, "{line}");
        conllu.push_str(&q.to_conllu());
    }
    Corpus { jsonl, conllu }
}

#[allow(dead_code)]
fn main() -> std::io::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"));
    std::fs::create_dir_all(&out)?;
    for (stem, n, seed, prefix) in [
        ("synthetic_mc", 20, 20, "mc"),
        ("templates_mc", 300, 300, "tpl"),
    ] {
        let c = generate(n, seed, prefix);
        std::fs::write(out.join(format!("{stem}.jsonl")), &c.jsonl)?;
        std::fs::write(out.join(format!("{stem}.conllu")), &c.conllu)?;
        println!("{stem}: {n} examples -> {}", out.display());
    }
    Ok(())
}

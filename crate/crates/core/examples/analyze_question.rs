//! Structural analysis of parsed wh-questions.
//!
//! ```text
//! cargo run --example analyze_question -- [PARSES.conllu]
//! ```

use std::path::PathBuf;

use qa2nli::{analyze, parse_conllu};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/qa2d_fixtures.conllu")
        });
    let sentences = parse_conllu(&std::fs::read_to_string(&path)?)?;
    for s in sentences.iter().take(12) {
        let a = analyze(s)?;
        let form = |id: usize| a.token(id).form.clone();
        let phrase: Vec<String> = a.wh_phrase.ids().map(form).collect();
        println!("{}", s.text.as_deref().unwrap_or("?"));
        println!(
            "  type={} wh_phrase=[{}] root={} attach={} subject_wh={}",
            a.qtype,
            phrase.join(" "),
            form(a.root),
            form(a.wh_attachment),
            a.subject_wh
        );
        println!(
            "  aux={:?} copula={:?} subject={:?} dangling={:?}",
            a.aux.map(form),
            a.copula.map(form),
            a.subject.map(form),
            a.dangling_preps
                .iter()
                .map(|&i| form(i))
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}

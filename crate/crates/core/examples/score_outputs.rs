//! Scores the engine on the fixture corpus: corpus BLEU, exact match, the
//! best of the top 5 candidates, and breakdowns by question type and length.
//!
//! ```text
//! cargo run --example score_outputs
//! ```

use qa2nli::eval::{evaluate, EvalRecord};
use qa2nli::{analyze, bleu_corpus, parse_conllu, transform, EngineConfig};

const FIXTURES: &str = include_str!("../tests/fixtures/qa2d_fixtures.conllu");

fn main() -> Result<(), qa2nli::Error> {
    let config = EngineConfig {
        emit_alternatives: 5,
        ..EngineConfig::default()
    };
    let mut records = Vec::new();
    for s in parse_conllu(FIXTURES)? {
        let question = s.text.clone().unwrap_or_default();
        let answer = s.meta("answer").unwrap_or_default();
        let golds: Vec<String> = s.meta_all("gold").map(str::to_owned).collect();
        let candidates = transform(&analyze(&s)?, answer, &config)?
            .into_iter()
            .map(|c| c.text)
            .collect();
        records.push(EvalRecord::new(
            s.sent_id().unwrap_or_default(),
            &question,
            answer,
            candidates,
            golds,
        )?);
    }
    print!("{}", evaluate(&records, Some(5))?.to_text());

    let h = ["the the the the"];
    let r = vec![vec!["the cat"]];
    println!("\nBLEU of a degenerate output: {:.4}", bleu_corpus(&h, &r)?);
    Ok(())
}

//! Rewrites question/answer pairs as declarative sentences, with ranked
//! alternatives and the rules each one used.
//!
//! ```text
//! cargo run --example qa_to_declarative
//! ```

use qa2nli::{analyze, parse_conllu, transform, EngineConfig};

const FIXTURES: &str = include_str!("../tests/fixtures/qa2d_fixtures.conllu");

fn main() -> Result<(), qa2nli::Error> {
    let config = EngineConfig {
        emit_alternatives: 3,
        ..EngineConfig::default()
    };
    for s in parse_conllu(FIXTURES)? {
        if s.meta("core").is_none() {
            continue;
        }
        let answer = s.meta("answer").unwrap_or_default();
        let analysis = analyze(&s)?;
        println!("Q: {}  A: {answer}", s.text.as_deref().unwrap_or_default());
        for c in transform(&analysis, answer, &config)? {
            println!("  {}. {}", c.rank, c.text);
            println!("     {}", c.applied_rules.join(" > "));
        }
    }

    // Copying the wh phrase noun changes "How many people attended?" / "300".
    let how = parse_conllu(FIXTURES)?
        .into_iter()
        .find(|s| s.sent_id() == Some("f51"))
        .expect("fixture f51");
    let a = analyze(&how)?;
    for copy in [false, true] {
        let config = EngineConfig {
            copy_wh_phrase: copy,
            ..EngineConfig::default()
        };
        println!(
            "copy_wh_phrase={copy}: {}",
            transform(&a, "300", &config)?[0].text
        );
    }
    Ok(())
}

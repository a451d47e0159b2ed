//! Artifact audit of a generated NLI corpus: the words most associated with
//! each label, hypothesis lengths per label, and lexical overlap.
//!
//! ```text
//! cargo run --example audit_corpus -- [SMOOTHING]
//! ```

use std::path::Path;

use qa2nli::analysis::analyze_corpus;
use qa2nli::nli::{attach_parses, load_qa_jsonl, Schema};
use qa2nli::{build_pairs, parse_conllu, word_overlap, EngineConfig, Negatives};

fn main() -> Result<(), qa2nli::Error> {
    let k: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(qa2nli::analysis::DEFAULT_SMOOTHING);
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut examples = load_qa_jsonl(&fixtures.join("templates_mc.jsonl"), Schema::Multichoice)?;
    let parses = parse_conllu(&std::fs::read_to_string(
        fixtures.join("templates_mc.conllu"),
    )?)?;
    attach_parses(&mut examples, parses);
    let pairs = build_pairs(&examples, &EngineConfig::default(), Negatives::OneRandom, 7)?.pairs;

    print!("{}", analyze_corpus(&pairs, k, 5)?.to_text());

    let ex = &examples[0];
    println!(
        "\nquestion/passage overlap for {}: {:.1}%",
        ex.id,
        word_overlap(&ex.question, &ex.passage)?
    );
    Ok(())
}

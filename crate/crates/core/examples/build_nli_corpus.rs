//! Converts a multiple-choice QA file into NLI pairs under both negative
//! sampling policies.
//!
//! ```text
//! cargo run --example build_nli_corpus -- [OUT.jsonl]
//! ```

use std::path::{Path, PathBuf};

use qa2nli::nli::{attach_parses, load_qa_jsonl, Schema};
use qa2nli::{build_pairs, parse_conllu, write_nli_jsonl, EngineConfig, Negatives};

fn main() -> Result<(), qa2nli::Error> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut examples = load_qa_jsonl(&fixtures.join("synthetic_mc.jsonl"), Schema::Multichoice)?;
    let parses = parse_conllu(&std::fs::read_to_string(
        fixtures.join("synthetic_mc.conllu"),
    )?)?;
    let alignment = attach_parses(&mut examples, parses);
    println!(
        "{} examples, {} without parse",
        examples.len(),
        alignment.missing.len()
    );

    let config = EngineConfig::default();
    for policy in [Negatives::All, Negatives::OneRandom] {
        let report = build_pairs(&examples, &config, policy, 7)?;
        println!(
            "{policy:?}: {} pairs {:?}",
            report.pairs.len(),
            report.counts()
        );
    }

    let report = build_pairs(&examples, &config, Negatives::OneRandom, 7)?;
    for p in report.pairs.iter().take(4) {
        println!("[{}] {} => {}", p.label, p.premise, p.hypothesis);
    }
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qa2nli_pairs.jsonl"));
    let n = write_nli_jsonl(&report.pairs, &out)?;
    println!("wrote {n} pairs to {}", out.display());
    Ok(())
}

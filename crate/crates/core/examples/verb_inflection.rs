//! The lexical resources behind the rewrite: verb re-inflection, the
//! preposition table and definite-article exceptions.
//!
//! ```text
//! cargo run --example verb_inflection
//! ```

use qa2nli::{insert_article, reinflect, DoForm, PrepositionTable, QuestionType};

fn main() -> Result<(), qa2nli::Error> {
    for (lemma, aux) in [
        ("end", DoForm::Did),
        ("go", DoForm::Did),
        ("stop", DoForm::Did),
        ("study", DoForm::Does),
        ("watch", DoForm::Does),
        ("eat", DoForm::Do),
    ] {
        println!("{aux:?} {lemma} -> {}", reinflect(lemma, aux)?);
    }

    let table = PrepositionTable::bundled();
    for answer in [
        "August 16, 1958",
        "1945",
        "9 pm",
        "the 1800s",
        "halfway through the race",
    ] {
        let p = table.choose(QuestionType::When, answer, "");
        println!(
            "when / {answer:<26} -> {}",
            p.as_deref().unwrap_or("(none)")
        );
    }
    for (answer, verb) in [
        ("American society", "overlook"),
        ("Harvard University", "study"),
        ("the store", "go"),
    ] {
        let p = table.choose(QuestionType::Where, answer, verb);
        println!(
            "where/{verb} / {answer:<20} -> {}",
            p.as_deref().unwrap_or("(none)")
        );
    }

    for name in ["UN", "WHO", "the UN"] {
        println!("article: {name} -> {}", insert_article(name));
    }
    Ok(())
}

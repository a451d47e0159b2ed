//! Rule-based rewriting of wh-question/answer pairs into declarative
//! sentences, and conversion of QA datasets into two-way NLI corpora.
//!
//! ```
//! use qa2nli::{analyze, parse_conllu, transform, EngineConfig};
//!
//! let parse = "1\tWho\twho\tPRON\t_\t_\t2\tnsubj\t_\t_\n\
//!              2\tcalled\tcall\tVERB\t_\t_\t0\troot\t_\t_\n\
//!              3\tTaylor\tTaylor\tPROPN\t_\t_\t2\tobj\t_\t_\n\
//!              4\t?\t?\tPUNCT\t_\t_\t2\tpunct\t_\t_\n";
//! let question = &parse_conllu(parse).unwrap()[0];
//! let analysis = analyze(question).unwrap();
//! let out = transform(&analysis, "Liz", &EngineConfig::default()).unwrap();
//! assert_eq!(out[0].text, "Liz called Taylor.");
//! ```

pub mod analysis;
pub mod cli;
pub mod conllu;
pub mod engine;
pub mod error;
pub mod eval;
pub mod nli;
pub mod question;
mod tsv;

pub use analysis::{length_histogram, pmi, word_overlap, LengthHistogram, PmiTable};
pub use conllu::{parse_conllu, write_conllu, DepSentence, DepToken};
pub use engine::{
    insert_article, realize, reinflect, select_preposition, transform, transform_question,
    DeclarativeCandidate, DoForm, Engine, EngineConfig, PrepositionTable, VerbLexicon,
};
pub use error::{Error, Result};
pub use eval::{bleu_corpus, exact_match, normalize, topk_match, EvalReport};
pub use nli::{
    build_pairs, load_qa_jsonl, write_nli_jsonl, Label, NLIPair, Negatives, Provenance, QAExample,
};
pub use question::{analyze, classify_question, QuestionType, Span, WhAnalysis};

use std::fs;
use std::path::Path;

use proptest::prelude::*;
use qa2nli::analysis::{pmi_from_counts, Counts};
use qa2nli::eval::sentence_bleu;
use qa2nli::nli::{attach_parses, parse_qa_jsonl, Schema};
use qa2nli::{
    bleu_corpus, build_pairs, exact_match, length_histogram, parse_conllu, word_overlap,
    write_conllu, DepSentence, DepToken, EngineConfig, Label, NLIPair, Negatives, Provenance,
};

const WORDS: &[&str] = &[
    "the", "cat", "sat", "on", "mat", "a", "dog", "ran", "1945", "UN",
];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 1..9).prop_map(|w| w.join(" "))
}

/// Random trees: token `i` attaches to an earlier token or the root.
fn tree() -> impl Strategy<Value = DepSentence> {
    prop::collection::vec((0usize..1000, prop::sample::select(WORDS)), 1..12).prop_map(|spec| {
        let tokens: Vec<DepToken> = spec
            .iter()
            .enumerate()
            .map(|(i, (h, w))| DepToken {
                id: i + 1,
                form: (*w).to_owned(),
                lemma: Some(w.to_lowercase()),
                upos: "X".into(),
                xpos: None,
                feats: None,
                head: if i == 0 { 0 } else { 1 + h % i },
                deprel: if i == 0 { "root".into() } else { "dep".into() },
                misc: None,
            })
            .collect();
        let text = spec.iter().map(|(_, w)| *w).collect::<Vec<_>>().join(" ");
        DepSentence::new(tokens, vec![format!("text = {text}")]).unwrap()
    })
}

fn pairs() -> impl Strategy<Value = Vec<NLIPair>> {
    prop::collection::vec((sentence(), any::<bool>()), 2..30).prop_map(|v| {
        let mut pairs: Vec<NLIPair> = v
            .into_iter()
            .map(|(h, e)| NLIPair {
                premise: String::new(),
                hypothesis: h,
                label: if e {
                    Label::Entailed
                } else {
                    Label::NotEntailed
                },
                source_id: String::new(),
                provenance: if e {
                    Provenance::CorrectAnswer
                } else {
                    Provenance::IncorrectOption
                },
            })
            .collect();
        pairs[0].label = Label::Entailed;
        pairs[1].label = Label::NotEntailed;
        pairs
    })
}

proptest! {
    #[test]
    fn conllu_round_trip(trees in prop::collection::vec(tree(), 1..4)) {
        let back = parse_conllu(&write_conllu(&trees)).unwrap();
        prop_assert_eq!(back, trees);
    }

    #[test]
    fn children_cover_every_non_root(t in tree()) {
        let total: usize = (1..=t.len()).map(|id| t.children(id).unwrap().len()).sum();
        prop_assert_eq!(total, t.len() - 1);
    }

    #[test]
    fn bleu_ignores_reference_order(h in sentence(), mut refs in prop::collection::vec(sentence(), 1..4)) {
        let a = sentence_bleu(&h, &refs).unwrap();
        refs.reverse();
        prop_assert_eq!(a, sentence_bleu(&h, &refs).unwrap());
    }

    #[test]
    fn bleu_ignores_corpus_order(rows in prop::collection::vec((sentence(), sentence()), 1..6)) {
        let hyps: Vec<&String> = rows.iter().map(|r| &r.0).collect();
        let refs: Vec<Vec<&String>> = rows.iter().map(|r| vec![&r.1]).collect();
        let a = bleu_corpus(&hyps, &refs).unwrap();
        let rh: Vec<&String> = hyps.iter().rev().copied().collect();
        let rr: Vec<Vec<&String>> = refs.iter().rev().cloned().collect();
        prop_assert!((a - bleu_corpus(&rh, &rr).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn adding_the_hypothesis_as_reference_never_lowers_bleu(h in sentence(), refs in prop::collection::vec(sentence(), 1..4)) {
        let before = sentence_bleu(&h, &refs).unwrap();
        let mut more = refs.clone();
        more.push(h.clone());
        prop_assert!(sentence_bleu(&h, &more).unwrap() >= before - 1e-9);
    }

    #[test]
    fn exact_match_scores_full_bleu(h in sentence(), refs in prop::collection::vec(sentence(), 0..3)) {
        let mut refs = refs;
        refs.push(h.to_uppercase() + "!");
        prop_assert!(exact_match(&h, &refs).unwrap());
        prop_assert!((sentence_bleu(&h, &refs).unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn pmi_is_scale_free(p in pairs(), factor in 2u64..50, k in 0.0f64..200.0) {
        let c = Counts::from_pairs(&p);
        let a = pmi_from_counts(&c, k, usize::MAX).unwrap();
        let b = pmi_from_counts(&c.scaled(factor), k * factor as f64, usize::MAX).unwrap();
        for (label, rows) in &a.classes {
            let other = &b.classes[label];
            prop_assert_eq!(rows.len(), other.len());
            for x in rows {
                let y = other.iter().find(|y| y.word == x.word).unwrap();
                prop_assert!((x.pmi - y.pmi).abs() < 1e-9);
                prop_assert!((x.percent - y.percent).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn histogram_counts_every_pair(p in pairs()) {
        let h = length_histogram(&p);
        let total: usize = h.per_label.values().map(|l| l.n).sum();
        prop_assert_eq!(total, p.len());
        for l in h.per_label.values() {
            prop_assert_eq!(l.counts.values().sum::<usize>(), l.n);
        }
    }

    #[test]
    fn overlap_is_a_percentage(q in sentence(), p in sentence()) {
        let v = word_overlap(&q, &p).unwrap();
        prop_assert!((0.0..=100.0).contains(&v));
        let contained = format!("{p} and {q}");
        prop_assert_eq!(word_overlap(&q, &contained).unwrap(), 100.0);
    }

    #[test]
    fn pair_counts_follow_the_negative_policy(sizes in prop::collection::vec(1usize..5, 1..8), seed in any::<u64>()) {
        let (examples, parses) = corpus(&sizes);
        let mut ex = parse_qa_jsonl(&examples, Schema::Multichoice, "t").unwrap();
        attach_parses(&mut ex, parse_conllu(&parses).unwrap());
        let config = EngineConfig::default();
        let all = build_pairs(&ex, &config, Negatives::All, seed).unwrap();
        let one = build_pairs(&ex, &config, Negatives::OneRandom, seed).unwrap();
        prop_assert_eq!(all.pairs.len(), sizes.iter().sum::<usize>());
        prop_assert_eq!(one.pairs.len(), sizes.iter().map(|&n| n.min(2)).sum::<usize>());
        for p in all.pairs.iter().chain(&one.pairs) {
            prop_assert_eq!(p.label == Label::Entailed, p.provenance == Provenance::CorrectAnswer);
        }
    }
}

/// Multichoice records over one fixture question, `sizes[i]` options each.
fn corpus(sizes: &[usize]) -> (String, String) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let all = parse_conllu(&fs::read_to_string(dir.join("qa2d_fixtures.conllu")).unwrap()).unwrap();
    let base = all.iter().find(|s| s.sent_id() == Some("f21")).unwrap();
    let answers = ["the UN", "Paris", "a bank", "home", "the mill"];
    let mut jsonl = String::new();
    let mut parses = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let id = format!("q{i}");
        let line = serde_json::json!({
            "id": id,
            "passage": "Sam works at the UN.",
            "question": base.text,
            "options": &answers[..n],
            "correct": i % n,
        });
        jsonl.push_str(&format!("{line}\n"));
        let mut s = base.clone();
        s.comments = vec![
            format!("sent_id = {id}"),
            format!("text = {}", base.text.as_ref().unwrap()),
        ];
        parses.push(s);
    }
    (jsonl, write_conllu(&parses))
}

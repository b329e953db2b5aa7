mod common;

use std::fs;

use kspell::config::EngineConfig;
use kspell::formats;
use kspell_core::CharLm;
use proptest::prelude::*;

#[test]
fn lexicon_file_round_trips_through_engine() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lex.tsv");
    fs::write(&lex, "# comment\nតម្លៃ\t10\nសាលា\r\nតម្លៃ\t3\n").unwrap();
    let cfg = EngineConfig {
        lexicon: Some(lex),
        ..Default::default()
    };
    let engine = cfg.load_engine().unwrap();
    assert_eq!(engine.lexicon.len(), 2);
    assert_eq!(engine.lexicon.get("តម្លៃ").unwrap().frequency, 10);
    assert_eq!(engine.lexicon.get("សាលា").unwrap().frequency, 1);
}

#[test]
fn dataset_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.tsv");
    fs::write(&p, "ខ្ញុំទៅសលា\tសលា\tសាលា\nខ្ញុំ\txyz\tសាលា\n").unwrap();
    let err = format!("{:#}", formats::read_dataset_a(&p).unwrap_err());
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("a.tsv"), "{err}");
}

#[test]
fn desk_model_file_is_stable() {
    let desk = common::desk(1, 80, 200, 5);
    let lm = CharLm::train(&desk.corpus, 5).unwrap();
    let mut a = Vec::new();
    formats::write_lm(&lm, &mut a).unwrap();
    let back = formats::parse_lm(std::str::from_utf8(&a).unwrap()).unwrap();
    for line in desk.corpus.iter().take(20) {
        assert_eq!(back.log_prob(line), lm.log_prob(line));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn any_trained_model_round_trips(lines in proptest::collection::vec("[ក-អ ាិីa-c]{1,12}", 1..8), order in 2usize..6) {
        let lm = CharLm::train(&lines, order).unwrap();
        let mut buf = Vec::new();
        formats::write_lm(&lm, &mut buf).unwrap();
        let back = formats::parse_lm(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, lm);
    }

    #[test]
    fn lexicon_rows_keep_surfaces(words in proptest::collection::vec("[ក-អ]{1,4}", 1..20)) {
        let text: String = words.iter().enumerate().map(|(i, w)| format!("{w}\t{i}\n")).collect();
        let recs = formats::parse_lexicon(&text).unwrap();
        prop_assert_eq!(recs.len(), words.len());
        for (r, w) in recs.iter().zip(&words) {
            prop_assert_eq!(&r.surface, w);
        }
    }
}

//! Synthetic Khmer data for integration and acceptance tests.
//!
//! Words are strings of consonant+vowel clusters drawn from a seeded
//! ChaCha stream, so every run sees the same data.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kspell_core::evalbench::DatasetARecord;
use kspell_core::lm::CharLm;
use kspell_core::segmenter::augment_random;
use kspell_core::{AffixList, Engine, G2p, Gazetteer, Lexicon, LexiconRecord};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn consonants() -> Vec<char> {
    ('\u{1780}'..='\u{17A2}').collect()
}

pub fn vowels() -> Vec<char> {
    ('\u{17B6}'..='\u{17C5}').collect()
}

/// Clusters made of one consonant from `cons` and an optional vowel.
pub fn syllables_from(cons: &[char]) -> Vec<String> {
    let mut out = Vec::new();
    for &c in cons {
        out.push(c.to_string());
        for v in vowels() {
            out.push(format!("{c}{v}"));
        }
    }
    out
}

pub fn syllables() -> Vec<String> {
    syllables_from(&consonants())
}

pub fn random_word(rng: &mut Rng8, alphabet: &[String], min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    (0..n).map(|_| alphabet.choose(rng).unwrap().as_str()).collect()
}

/// `n` distinct words of `min..=max` clusters.
pub fn distinct_words(rng: &mut Rng8, alphabet: &[String], n: usize, min: usize, max: usize) -> Vec<String> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let w = random_word(rng, alphabet, min, max);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Zipf-like frequencies by position.
pub fn with_zipf(words: &[String]) -> Vec<(String, u64)> {
    words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), 10_000 / (i as u64 + 1) + 1))
        .collect()
}

/// A sentence of `min..=max` words drawn by frequency, with a space after
/// every few words.
pub fn sentence_words(rng: &mut Rng8, lexicon: &[(String, u64)], min: usize, max: usize) -> Vec<String> {
    let n = rng.random_range(min..=max);
    (0..n)
        .map(|_| lexicon.choose_weighted(rng, |(_, f)| *f).unwrap().0.clone())
        .collect()
}

pub fn join_words(words: &[String]) -> String {
    let mut s = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 && i % 3 == 0 {
            s.push(' ');
        }
        s.push_str(w);
    }
    s
}

pub fn build_lexicon(words: &[(String, u64)]) -> Lexicon {
    Lexicon::build(
        words.iter().map(|(w, f)| LexiconRecord::with_frequency(w.clone(), *f)),
        &G2p::default(),
    )
    .unwrap()
}

pub fn build_engine(words: &[(String, u64)], corpus: &[String], names: &[String], honorifics: &[String]) -> Engine {
    Engine {
        lexicon: build_lexicon(words),
        g2p: G2p::default(),
        gazetteer: Gazetteer::new(names.iter().cloned(), honorifics.iter().cloned()),
        affixes: AffixList::builtin(),
        lm: CharLm::train(corpus, 5).unwrap(),
    }
}

/// Lexicon, training corpus and planted-error records for an end-to-end
/// run.
pub struct Desk {
    pub lexicon: Vec<(String, u64)>,
    pub corpus: Vec<String>,
    pub records: Vec<DatasetARecord>,
}

pub fn desk(seed: u64, words: usize, sentences: usize, errors: usize) -> Desk {
    let mut rng = rng(seed);
    let alphabet = syllables();
    let lexicon = with_zipf(&distinct_words(&mut rng, &alphabet, words, 2, 4));
    let known: BTreeSet<&str> = lexicon.iter().map(|(w, _)| w.as_str()).collect();
    let corpus: Vec<String> = (0..sentences)
        .map(|_| join_words(&sentence_words(&mut rng, &lexicon, 4, 8)))
        .collect();
    let refs: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    let mut records = Vec::new();
    while records.len() < errors {
        let mut ws = sentence_words(&mut rng, &lexicon, 4, 8);
        let i = rng.random_range(0..ws.len());
        let correct = ws[i].clone();
        let Ok((wrong, _)) = augment_random(&correct, &refs, rng.random()) else {
            continue;
        };
        if known.contains(wrong.as_str()) {
            continue;
        }
        ws[i] = wrong.clone();
        let sentence = join_words(&ws);
        let before = join_words(&ws[..i]);
        let offset = kspell_core::script::cluster(&before).len() + usize::from(i > 0 && i % 3 == 0);
        match DatasetARecord::new(&sentence, &wrong, &correct, Vec::new()) {
            Ok(r) if r.span.0 == offset => records.push(r),
            _ => continue,
        }
    }
    Desk { lexicon, corpus, records }
}

/// Stacked lexicon forms with their unstacked spellings.
pub const VARIANT_PAIRS: [(&str, &str); 12] = [
    ("តម្លៃ", "តំលៃ"),
    ("ចម្រៀង", "ចំរៀង"),
    ("សម្រាប់", "សំរាប់"),
    ("សម្រេច", "សំរេច"),
    ("កម្រិត", "កំរិត"),
    ("ចម្រើន", "ចំរើន"),
    ("សម្រាក", "សំរាក"),
    ("កម្លាំង", "កំលាំង"),
    ("ទម្លាប់", "ទំលាប់"),
    ("ចម្លែក", "ចំលែក"),
    ("ចម្ងាយ", "ចំងាយ"),
    ("សម្ភារៈ", "សំភារៈ"),
];

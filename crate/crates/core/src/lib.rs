//! Khmer spellchecking engine core.
//!
//! The pipeline segments a sentence into words, masks named entities,
//! generates correction candidates for unknown words by edit distance over
//! grapheme clusters and over phoneme sequences, and ranks the resulting
//! sentence hypotheses with a character-level language model.
//!
//! This crate is `no_std` and only needs `alloc`. Reading files, the
//! on-disk formats and the command line live in the `kspell` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bktree;
pub mod checker;
pub mod distance;
pub mod error;
pub mod evalbench;
pub mod g2p;
pub mod lexicon;
pub mod lm;
pub mod ner;
pub mod resources;
pub mod script;
pub mod segmenter;

pub use checker::{
    Candidate, CandidateOrigin, CheckOptions, CheckReport, CheckerConfig, Engine, Hypothesis,
    TokenOutcome,
};
pub use error::{Error, Result};
pub use g2p::{G2p, PhonemeSeq, PronLexicon, RuleTable};
pub use lexicon::{Lexicon, LexiconEntry, LexiconRecord, Neighbor};
pub use lm::{CharLm, LmSymbol, LmTrainer};
pub use ner::{EntitySpan, Gazetteer};
pub use script::{CharClass, ClusterClass, GraphemeCluster};
pub use segmenter::{AffixList, BoundaryLabel, Joiner, Segmenter, Token, TokenKind};

//! Khmer character classes, normalization and grapheme clusters.
//!
//! A Khmer cluster is a base (consonant or independent vowel), any number
//! of subscripts written as COENG + base, an optional register shifter, an
//! optional dependent vowel sign and trailing signs:
//!
//! ```text
//! base (COENG base)* shifter? vowel? sign*
//! ```
//!
//! Clusters are the unit of grapheme edit distance throughout the engine.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub const COENG: char = '\u{17D2}';
const RO: char = '\u{179A}';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharClass {
    Consonant,
    IndependentVowel,
    DependentVowelSign,
    Coeng,
    RegisterShifter,
    OtherSign,
    Digit,
    Symbol,
    NonKhmer,
}

impl CharClass {
    pub const ALL: [CharClass; 9] = [
        CharClass::Consonant,
        CharClass::IndependentVowel,
        CharClass::DependentVowelSign,
        CharClass::Coeng,
        CharClass::RegisterShifter,
        CharClass::OtherSign,
        CharClass::Digit,
        CharClass::Symbol,
        CharClass::NonKhmer,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CharClass::Consonant => "consonant",
            CharClass::IndependentVowel => "independent-vowel",
            CharClass::DependentVowelSign => "dependent-vowel-sign",
            CharClass::Coeng => "coeng",
            CharClass::RegisterShifter => "register-shifter",
            CharClass::OtherSign => "other-sign",
            CharClass::Digit => "digit",
            CharClass::Symbol => "symbol",
            CharClass::NonKhmer => "non-khmer",
        }
    }

    /// Consonants and independent vowels can carry a cluster.
    pub fn is_base(self) -> bool {
        matches!(self, CharClass::Consonant | CharClass::IndependentVowel)
    }

    /// Combining marks that only make sense after a base.
    pub fn is_mark(self) -> bool {
        matches!(
            self,
            CharClass::DependentVowelSign
                | CharClass::Coeng
                | CharClass::RegisterShifter
                | CharClass::OtherSign
        )
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CharClass {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        CharClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or(())
    }
}

/// Classifies a code point. Total over all of Unicode.
pub fn classify(c: char) -> CharClass {
    match c as u32 {
        0x1780..=0x17A2 => CharClass::Consonant,
        0x17A3..=0x17B3 => CharClass::IndependentVowel,
        0x17B4..=0x17C5 => CharClass::DependentVowelSign,
        0x17C6..=0x17C8 => CharClass::OtherSign,
        0x17C9..=0x17CA => CharClass::RegisterShifter,
        0x17CB..=0x17D1 => CharClass::OtherSign,
        0x17D2 => CharClass::Coeng,
        0x17D3 => CharClass::OtherSign,
        0x17D4..=0x17DC => CharClass::Symbol,
        0x17DD => CharClass::OtherSign,
        0x17E0..=0x17E9 => CharClass::Digit,
        0x17DE..=0x17DF | 0x17EA..=0x17FF => CharClass::Symbol,
        _ => CharClass::NonKhmer,
    }
}

fn is_zero_width(c: char) -> bool {
    matches!(c, '\u{200B}' | '\u{200C}' | '\u{200D}' | '\u{2060}' | '\u{FEFF}')
}

fn is_digit(c: char) -> bool {
    c.is_ascii_digit() || classify(c) == CharClass::Digit
}

#[derive(Clone, Copy)]
enum Part {
    Subscript(char, char),
    StrayCoeng,
    Mark(char, CharClass),
}

impl Part {
    fn rank(&self) -> u8 {
        match self {
            Part::Subscript(_, sub) if *sub == RO => 1,
            Part::Subscript(..) | Part::StrayCoeng => 0,
            Part::Mark(_, CharClass::RegisterShifter) => 2,
            Part::Mark(_, CharClass::DependentVowelSign) => 3,
            Part::Mark(..) => 4,
        }
    }

    fn push_to(&self, out: &mut String) {
        match *self {
            Part::Subscript(coeng, sub) => {
                out.push(coeng);
                out.push(sub);
            }
            Part::StrayCoeng => out.push(COENG),
            Part::Mark(c, _) => out.push(c),
        }
    }
}

fn flush_group(out: &mut String, base: &mut Option<char>, parts: &mut Vec<Part>) {
    let Some(b) = base.take() else {
        return;
    };
    out.push(b);
    // A dangling coeng could pair with a different base after reordering,
    // so groups holding one are emitted as typed.
    if !parts.iter().any(|p| matches!(p, Part::StrayCoeng)) {
        parts.sort_by_key(Part::rank);
    }
    for p in parts.iter() {
        p.push_to(out);
    }
    parts.clear();
}

/// Removes zero-width characters and puts the marks of every cluster in
/// canonical order: subscripts (COENG RO last), register shifter, vowel
/// sign, other signs. Idempotent.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut base: Option<char> = None;
    let mut parts: Vec<Part> = Vec::new();
    let mut chars = text.chars().filter(|c| !is_zero_width(*c)).peekable();
    while let Some(c) = chars.next() {
        let class = classify(c);
        if class.is_base() {
            flush_group(&mut out, &mut base, &mut parts);
            base = Some(c);
        } else if class.is_mark() && base.is_some() {
            if class == CharClass::Coeng {
                match chars.peek() {
                    Some(&next) if classify(next).is_base() => {
                        chars.next();
                        parts.push(Part::Subscript(c, next));
                    }
                    _ => parts.push(Part::StrayCoeng),
                }
            } else {
                parts.push(Part::Mark(c, class));
            }
        } else {
            flush_group(&mut out, &mut base, &mut parts);
            out.push(c);
        }
    }
    flush_group(&mut out, &mut base, &mut parts);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClusterClass {
    KhmerCluster,
    Space,
    DigitRun,
    Other,
}

impl ClusterClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ClusterClass::KhmerCluster => "khmer-cluster",
            ClusterClass::Space => "space",
            ClusterClass::DigitRun => "digit-run",
            ClusterClass::Other => "other",
        }
    }
}

/// Byte range of one cluster inside the text it was cut from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterSpan {
    pub start: usize,
    pub end: usize,
    pub class: ClusterClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphemeCluster {
    pub text: String,
    pub class: ClusterClass,
}

impl GraphemeCluster {
    /// A combining mark that had no base to attach to.
    pub fn is_orphan_mark(&self) -> bool {
        let mut chars = self.text.chars();
        matches!((chars.next(), chars.next()), (Some(c), None) if classify(c).is_mark())
    }

    /// Text that can be part of a word: Khmer clusters, letters of other
    /// scripts and orphan marks (usually typos). Digits, whitespace and
    /// punctuation are not.
    pub fn is_word_material(&self) -> bool {
        match self.class {
            ClusterClass::KhmerCluster => true,
            ClusterClass::Space | ClusterClass::DigitRun => false,
            ClusterClass::Other => {
                self.is_orphan_mark() || self.text.chars().all(char::is_alphabetic)
            }
        }
    }
}

impl fmt::Display for GraphemeCluster {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Length in bytes of the Khmer cluster starting at the head of `s`, which
/// must start with a base.
fn khmer_cluster_len(s: &str) -> usize {
    let mut it = s.char_indices().skip(1).peekable();
    loop {
        let mut ahead = it.clone();
        match (ahead.next(), ahead.next()) {
            (Some((_, COENG)), Some((_, sub))) if classify(sub).is_base() => {
                it.next();
                it.next();
            }
            _ => break,
        }
    }
    if it.peek().map(|&(_, c)| classify(c)) == Some(CharClass::RegisterShifter) {
        it.next();
    }
    if it.peek().map(|&(_, c)| classify(c)) == Some(CharClass::DependentVowelSign) {
        it.next();
    }
    while it.peek().map(|&(_, c)| classify(c)) == Some(CharClass::OtherSign) {
        it.next();
    }
    it.peek().map_or(s.len(), |(off, _)| *off)
}

/// Cuts text into clusters without copying. Concatenating the spans gives
/// back the input.
pub fn cluster_spans(text: &str) -> Vec<ClusterSpan> {
    let mut spans = Vec::new();
    let mut pos = 0;
    while let Some(c) = text[pos..].chars().next() {
        let (len, class) = if classify(c).is_base() {
            (khmer_cluster_len(&text[pos..]), ClusterClass::KhmerCluster)
        } else if is_digit(c) {
            let len = text[pos..]
                .char_indices()
                .find(|(_, d)| !is_digit(*d))
                .map_or(text.len() - pos, |(off, _)| off);
            (len, ClusterClass::DigitRun)
        } else if c.is_whitespace() {
            (c.len_utf8(), ClusterClass::Space)
        } else {
            (c.len_utf8(), ClusterClass::Other)
        };
        spans.push(ClusterSpan {
            start: pos,
            end: pos + len,
            class,
        });
        pos += len;
    }
    spans
}

/// Splits normalized text into grapheme clusters (maximal munch).
pub fn cluster(text: &str) -> Vec<GraphemeCluster> {
    cluster_spans(text)
        .into_iter()
        .map(|s| GraphemeCluster {
            text: String::from(&text[s.start..s.end]),
            class: s.class,
        })
        .collect()
}

pub fn join(clusters: &[GraphemeCluster]) -> String {
    clusters.iter().map(|c| c.text.as_str()).collect()
}

/// Checks `text` against the cluster grammar as a whole.
pub fn is_well_formed_cluster(text: &str) -> bool {
    #[derive(PartialEq, PartialOrd)]
    enum State {
        Start,
        Base,
        Coeng,
        Shifter,
        Vowel,
        Signs,
    }
    let mut state = State::Start;
    for c in text.chars() {
        let class = classify(c);
        state = match (state, class) {
            (State::Start, k) if k.is_base() => State::Base,
            (State::Base, CharClass::Coeng) => State::Coeng,
            (State::Coeng, k) if k.is_base() => State::Base,
            (State::Base, CharClass::RegisterShifter) => State::Shifter,
            (State::Base | State::Shifter, CharClass::DependentVowelSign) => State::Vowel,
            (State::Base | State::Shifter | State::Vowel | State::Signs, CharClass::OtherSign) => {
                State::Signs
            }
            _ => return false,
        };
    }
    matches!(
        state,
        State::Base | State::Shifter | State::Vowel | State::Signs
    )
}

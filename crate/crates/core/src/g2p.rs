//! Grapheme-to-phoneme conversion.
//!
//! Words found in a pronunciation lexicon get their stored phonemes.
//! Anything else, misspellings included, is read cluster by cluster from a
//! rule table: the base consonant gives an onset and a series, subscripts
//! add onsets, and the vowel sign (or the series' inherent vowel) gives the
//! nucleus. Spelling variants that sound alike, such as a subscript
//! consonant written out with NIKAHIT, therefore land on the same phonemes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::distance::levenshtein;
use crate::error::{Error, Result};
use crate::resources;
use crate::script::{self, classify, CharClass, ClusterClass, COENG};

pub type PhonemeSeq = Vec<String>;

/// Emitted for any piece of a cluster that has no rule.
pub const UNK_PHONEME: &str = "<unk>";

/// Stored pronunciations keyed by normalized surface.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PronLexicon {
    entries: BTreeMap<String, PhonemeSeq>,
    inventory: BTreeSet<String>,
    pub source: String,
}

impl PronLexicon {
    pub fn new(source: impl Into<String>) -> Self {
        PronLexicon {
            source: source.into(),
            ..Default::default()
        }
    }

    /// Adds a pronunciation. The first one stored for a surface wins.
    /// Returns false for duplicates and empty input.
    pub fn insert(&mut self, surface: &str, phonemes: PhonemeSeq) -> bool {
        let surface = script::normalize(surface);
        if surface.is_empty() || phonemes.is_empty() || self.entries.contains_key(&surface) {
            return false;
        }
        self.inventory.extend(phonemes.iter().cloned());
        self.entries.insert(surface, phonemes);
        true
    }

    pub fn get(&self, surface: &str) -> Option<&PhonemeSeq> {
        self.entries.get(surface)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PhonemeSeq)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn inventory(&self) -> &BTreeSet<String> {
        &self.inventory
    }
}

/// Per-cluster reading rules. See `resources/g2p_rules.tsv` for the syntax.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTable {
    onsets: BTreeMap<char, (u8, PhonemeSeq)>,
    nuclei: BTreeMap<(u8, String), PhonemeSeq>,
    codas: BTreeMap<char, PhonemeSeq>,
    version: String,
}

const FINAL_MARK: &str = "$";

fn tokens(s: &str) -> PhonemeSeq {
    s.split_whitespace().map(ToString::to_string).collect()
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

impl RuleTable {
    pub fn builtin() -> Self {
        // The shipped table is covered by tests.
        Self::parse(resources::G2P_RULES).expect("shipped g2p rule table parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = RuleTable {
            onsets: BTreeMap::new(),
            nuclei: BTreeMap::new(),
            codas: BTreeMap::new(),
            version: resources::table_version(text).unwrap_or("unversioned").to_string(),
        };
        let mut line_no = 0;
        for raw in text.lines() {
            line_no += 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (pattern, toks) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(line_no, "expected pattern<TAB>phonemes"))?;
            let toks = tokens(toks);
            if let Some(sign) = pattern.strip_prefix("*:") {
                let c = single_char(sign)
                    .ok_or_else(|| Error::parse(line_no, "coda rule needs one sign"))?;
                table.codas.insert(c, toks);
            } else if let Some((series, signs)) = pattern
                .split_once(':')
                .filter(|(s, _)| matches!(*s, "0" | "1" | "2"))
            {
                let series = series.as_bytes()[0] - b'0';
                table.nuclei.insert((series, signs.to_string()), toks);
            } else if let Some((ch, series)) = pattern.split_once('=') {
                let c = single_char(ch)
                    .ok_or_else(|| Error::parse(line_no, "onset rule needs one character"))?;
                let series: u8 = match series {
                    "0" => 0,
                    "1" => 1,
                    "2" => 2,
                    _ => return Err(Error::parse(line_no, "series must be 0, 1 or 2")),
                };
                table.onsets.insert(c, (series, toks));
            } else {
                return Err(Error::parse(line_no, "unrecognized rule pattern"));
            }
        }
        Ok(table)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    /// Every phoneme the rules can produce, plus the UNK token.
    pub fn inventory(&self) -> BTreeSet<String> {
        let mut inv: BTreeSet<String> = self
            .onsets
            .values()
            .flat_map(|(_, t)| t.iter())
            .chain(self.nuclei.values().flatten())
            .chain(self.codas.values().flatten())
            .cloned()
            .collect();
        inv.insert(UNK_PHONEME.to_string());
        inv
    }

    fn push_unk(out: &mut PhonemeSeq) {
        out.push(UNK_PHONEME.to_string());
    }

    /// Reads one Khmer cluster. `closing` marks the last cluster of a
    /// polysyllabic word, whose bare consonant is read as a coda.
    fn read_cluster(&self, cluster: &str, closing: bool, out: &mut PhonemeSeq) {
        let mut chars = cluster.chars().peekable();
        let Some(base) = chars.next() else {
            return;
        };
        let mut series = match self.onsets.get(&base) {
            Some((s, t)) => {
                out.extend(t.iter().cloned());
                *s
            }
            None => {
                Self::push_unk(out);
                1
            }
        };
        while chars.peek() == Some(&COENG) {
            chars.next();
            match chars.next().and_then(|sub| self.onsets.get(&sub)) {
                Some((_, t)) => out.extend(t.iter().cloned()),
                None => Self::push_unk(out),
            }
        }
        if let Some(&c) = chars.peek() {
            if classify(c) == CharClass::RegisterShifter {
                chars.next();
                match self.onsets.get(&c) {
                    Some((s, _)) if series != 0 => series = *s,
                    Some(_) => {}
                    None => Self::push_unk(out),
                }
            }
        }
        let rest: String = chars.collect();
        if !rest.is_empty() {
            if let Some(t) = self.nuclei.get(&(series, rest.clone())) {
                out.extend(t.iter().cloned());
                return;
            }
        }
        let mut rest_chars = rest.chars().peekable();
        let vowel = match rest_chars.peek() {
            Some(&c) if classify(c) == CharClass::DependentVowelSign => {
                rest_chars.next();
                Some(c)
            }
            _ => None,
        };
        let key = match vowel {
            Some(v) => {
                let mut k = String::new();
                k.push(v);
                k
            }
            None if closing => FINAL_MARK.to_string(),
            None => String::new(),
        };
        match self.nuclei.get(&(series, key)) {
            Some(t) => out.extend(t.iter().cloned()),
            None => Self::push_unk(out),
        }
        for sign in rest_chars {
            match self.codas.get(&sign) {
                Some(t) => out.extend(t.iter().cloned()),
                None => Self::push_unk(out),
            }
        }
    }

    /// Rule-based reading of a whole word. Non-Khmer clusters are skipped.
    pub fn read(&self, word: &str) -> PhonemeSeq {
        let spans: Vec<_> = script::cluster_spans(word)
            .into_iter()
            .filter(|s| s.class == ClusterClass::KhmerCluster)
            .collect();
        let mut out = Vec::new();
        let n = spans.len();
        for (i, span) in spans.iter().enumerate() {
            let closing = n > 1 && i + 1 == n;
            self.read_cluster(&word[span.start..span.end], closing, &mut out);
        }
        out
    }
}

/// Lexicon lookup with rule fallback.
#[derive(Debug, Clone)]
pub struct G2p {
    pron: PronLexicon,
    rules: RuleTable,
}

impl Default for G2p {
    fn default() -> Self {
        G2p::new(PronLexicon::default(), RuleTable::builtin())
    }
}

impl G2p {
    pub fn new(pron: PronLexicon, rules: RuleTable) -> Self {
        G2p { pron, rules }
    }

    pub fn pron(&self) -> &PronLexicon {
        &self.pron
    }

    pub fn rules(&self) -> &RuleTable {
        &self.rules
    }

    /// Closed phoneme set: everything in the pronunciation lexicon plus
    /// everything the rules can emit.
    pub fn inventory(&self) -> BTreeSet<String> {
        let mut inv = self.rules.inventory();
        inv.extend(self.pron.inventory().iter().cloned());
        inv
    }

    /// Phonemes of a normalized word.
    pub fn to_phonemes(&self, word: &str) -> PhonemeSeq {
        match self.pron.get(word) {
            Some(p) => p.clone(),
            None => self.rules.read(word),
        }
    }
}

/// Phoneme error rate: token Levenshtein distance over reference length.
pub fn cer<S: AsRef<str>>(hyp: &[S], reference: &[S]) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let h: Vec<&str> = hyp.iter().map(AsRef::as_ref).collect();
    let r: Vec<&str> = reference.iter().map(AsRef::as_ref).collect();
    Ok(levenshtein(&h, &r) as f64 / r.len() as f64)
}

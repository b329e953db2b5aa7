//! Named-entity masking.
//!
//! Names are found by leftmost-longest matching of a gazetteer over grapheme
//! clusters. An unknown word right after an honorific is also taken to be a
//! name. The checker never flags a token that overlaps an entity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::resources;
use crate::script::{self, ClusterClass};
use crate::segmenter::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntitySource {
    Gazetteer,
    Honorific,
}

impl EntitySource {
    pub fn as_str(self) -> &'static str {
        match self {
            EntitySource::Gazetteer => "gazetteer",
            EntitySource::Honorific => "honorific",
        }
    }
}

/// Entity at cluster offsets `start..end`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub source: EntitySource,
}

#[derive(Debug, Clone, Default)]
struct ClusterTrie {
    keys: BTreeMap<Vec<String>, String>,
    max_len: usize,
}

impl ClusterTrie {
    fn insert(&mut self, surface: String) {
        let key: Vec<String> = script::cluster(&surface).into_iter().map(|c| c.text).collect();
        self.max_len = self.max_len.max(key.len());
        self.keys.insert(key, surface);
    }

    /// Length of the longest key starting at `clusters[at..]`.
    fn longest_at(&self, clusters: &[String], at: usize) -> Option<usize> {
        (1..=self.max_len.min(clusters.len() - at))
            .rev()
            .find(|&l| self.keys.contains_key(&clusters[at..at + l]))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    names: BTreeSet<String>,
    honorifics: BTreeSet<String>,
    name_index: ClusterTrie,
    honorific_index: ClusterTrie,
}

impl Gazetteer {
    /// Builds a gazetteer. Surfaces are normalized and blanks dropped.
    pub fn new<N, H>(names: N, honorifics: H) -> Self
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
        H: IntoIterator,
        H::Item: AsRef<str>,
    {
        let mut g = Gazetteer::default();
        for n in names {
            g.add_name(n.as_ref());
        }
        for h in honorifics {
            let h = script::normalize(h.as_ref().trim());
            if !h.is_empty() && g.honorifics.insert(h.clone()) {
                g.honorific_index.insert(h);
            }
        }
        g
    }

    /// Gazetteer with the shipped honorific list.
    pub fn with_builtin_honorifics<N>(names: N) -> Self
    where
        N: IntoIterator,
        N::Item: AsRef<str>,
    {
        Self::new(names, builtin_honorifics())
    }

    pub fn add_name(&mut self, name: &str) {
        let n = script::normalize(name.trim());
        if !n.is_empty() && self.names.insert(n.clone()) {
            self.name_index.insert(n);
        }
    }

    pub fn names(&self) -> &BTreeSet<String> {
        &self.names
    }

    pub fn honorifics(&self) -> &BTreeSet<String> {
        &self.honorifics
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }
}

/// Honorifics from the shipped table.
pub fn builtin_honorifics() -> Vec<String> {
    resources::parse_two_columns(resources::HONORIFICS)
        .expect("shipped honorific table parses")
        .into_iter()
        .map(|(h, _)| h)
        .collect()
}

/// Gazetteer matches, leftmost-longest, starting only at cluster
/// boundaries of word material.
pub fn gazetteer_matches(sentence: &str, gaz: &Gazetteer) -> Vec<EntitySpan> {
    let clusters = script::cluster(sentence);
    let texts: Vec<String> = clusters.iter().map(|c| c.text.clone()).collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < texts.len() {
        let hit = (clusters[i].class != ClusterClass::Space)
            .then(|| gaz.name_index.longest_at(&texts, i))
            .flatten();
        match hit {
            Some(l) => {
                spans.push(EntitySpan {
                    start: i,
                    end: i + l,
                    surface: texts[i..i + l].concat(),
                    source: EntitySource::Gazetteer,
                });
                i += l;
            }
            None => i += 1,
        }
    }
    spans
}

/// Gazetteer matches plus the honorific heuristic over `tokens`, which must
/// tile `sentence`. Spans come back sorted and disjoint.
pub fn find_entities(sentence: &str, gaz: &Gazetteer, tokens: &[Token]) -> Vec<EntitySpan> {
    let mut spans = gazetteer_matches(sentence, gaz);
    let free = |spans: &[EntitySpan], s: usize, e: usize| {
        spans.iter().all(|x| x.end <= s || e <= x.start)
    };
    let texts: Vec<String> = script::cluster(sentence).into_iter().map(|c| c.text).collect();
    let mut extra = Vec::new();
    for (ti, t) in tokens.iter().enumerate() {
        if !t.is_word() {
            continue;
        }
        let Some(h) = gaz.honorific_index.longest_at(&texts[..t.end], t.start) else {
            continue;
        };
        let (s, e) = if t.start + h < t.end {
            // the honorific and the name were read as one unknown word
            if t.known {
                continue;
            }
            (t.start + h, t.end)
        } else {
            let next = tokens[ti + 1..]
                .iter()
                .find(|n| !(n.kind == TokenKind::Separator && n.text.chars().all(char::is_whitespace)));
            match next {
                Some(n) if n.is_word() && !n.known => (n.start, n.end),
                _ => continue,
            }
        };
        if free(&spans, s, e) && free(&extra, s, e) {
            extra.push(EntitySpan {
                start: s,
                end: e,
                surface: texts[s..e].concat(),
                source: EntitySource::Honorific,
            });
        }
    }
    spans.extend(extra);
    spans.sort_by_key(|s| s.start);
    spans
}

/// Per-cluster labels: 1 inside an entity, 0 elsewhere.
pub fn char_labels(sentence: &str, spans: &[EntitySpan]) -> Result<Vec<u8>> {
    let len = script::cluster(sentence).len();
    let mut labels = alloc::vec![0u8; len];
    for s in spans {
        if s.start >= s.end || s.end > len {
            return Err(Error::SpanOutOfRange {
                start: s.start,
                end: s.end,
                len,
            });
        }
        labels[s.start..s.end].fill(1);
    }
    Ok(labels)
}

/// True if `token` overlaps any span.
pub fn is_masked(token: &Token, spans: &[EntitySpan]) -> bool {
    spans.iter().any(|s| token.overlaps(s.start, s.end))
}

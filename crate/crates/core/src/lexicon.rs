//! Reference lexicon with bounded edit-distance search.
//!
//! Entries are indexed twice, once by grapheme clusters and once by
//! phonemes. Both keys are interned to integer symbols so distance
//! computations compare integers instead of strings.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::bktree::BkTree;
use crate::distance::levenshtein;
use crate::error::{Error, Result};
use crate::g2p::{G2p, PhonemeSeq};
use crate::script::{self, ClusterClass, GraphemeCluster};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconEntry {
    pub surface: String,
    pub clusters: Vec<GraphemeCluster>,
    pub phonemes: PhonemeSeq,
    pub frequency: u64,
}

/// One input row before normalization and merging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconRecord {
    pub surface: String,
    pub phonemes: Option<PhonemeSeq>,
    pub frequency: Option<u64>,
}

impl LexiconRecord {
    pub fn word(surface: impl Into<String>) -> Self {
        LexiconRecord {
            surface: surface.into(),
            phonemes: None,
            frequency: None,
        }
    }

    pub fn with_frequency(surface: impl Into<String>, frequency: u64) -> Self {
        LexiconRecord {
            frequency: Some(frequency),
            ..Self::word(surface)
        }
    }
}

/// A search hit: entry index and its distance to the query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub entry: usize,
    pub distance: usize,
}

#[derive(Debug, Clone, Default)]
struct Interner {
    ids: BTreeMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.ids.len() as u32;
        self.ids.insert(String::from(s), id);
        id
    }

    /// Maps symbols to ids. Symbols never interned get ids from the top of
    /// the range, distinct per distinct symbol, so they only match each
    /// other.
    fn encode<'a>(&self, symbols: impl Iterator<Item = &'a str>) -> Vec<u32> {
        let mut unseen: Vec<&str> = Vec::new();
        symbols
            .map(|s| match self.ids.get(s) {
                Some(&id) => id,
                None => {
                    let pos = unseen.iter().position(|u| *u == s).unwrap_or_else(|| {
                        unseen.push(s);
                        unseen.len() - 1
                    });
                    u32::MAX - pos as u32
                }
            })
            .collect()
    }
}

/// Levenshtein distance where each symbol is a whole grapheme cluster.
pub fn cluster_edit_distance(a: &[GraphemeCluster], b: &[GraphemeCluster]) -> usize {
    let a: Vec<&str> = a.iter().map(|c| c.text.as_str()).collect();
    let b: Vec<&str> = b.iter().map(|c| c.text.as_str()).collect();
    levenshtein(&a, &b)
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    by_surface: BTreeMap<String, usize>,
    by_clusters: BTreeMap<Vec<u32>, usize>,
    clusters: Interner,
    phonemes: Interner,
    grapheme_index: BkTree<u32>,
    phoneme_index: BkTree<u32>,
    max_clusters: usize,
}

impl Lexicon {
    /// Builds a lexicon from raw records. Surfaces are normalized, rows with
    /// the same surface merge (highest frequency, first explicit phonemes),
    /// missing phonemes come from `g2p` and missing frequencies default
    /// to 1.
    pub fn build(records: impl IntoIterator<Item = LexiconRecord>, g2p: &G2p) -> Result<Self> {
        let mut merged: BTreeMap<String, (Option<PhonemeSeq>, u64)> = BTreeMap::new();
        for rec in records {
            let surface = script::normalize(rec.surface.trim());
            if surface.is_empty() {
                continue;
            }
            let freq = rec.frequency.unwrap_or(1);
            let phonemes = rec.phonemes.filter(|p| !p.is_empty());
            merged
                .entry(surface)
                .and_modify(|(p, f)| {
                    *f = (*f).max(freq);
                    if p.is_none() {
                        p.clone_from(&phonemes);
                    }
                })
                .or_insert((phonemes, freq));
        }
        if merged.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let entries = merged
            .into_iter()
            .map(|(surface, (phonemes, frequency))| LexiconEntry {
                clusters: script::cluster(&surface),
                phonemes: phonemes.unwrap_or_else(|| g2p.to_phonemes(&surface)),
                surface,
                frequency,
            })
            .collect();
        Ok(Self::index(entries))
    }

    fn index(entries: Vec<LexiconEntry>) -> Self {
        let mut lex = Lexicon {
            entries: Vec::new(),
            by_surface: BTreeMap::new(),
            by_clusters: BTreeMap::new(),
            clusters: Interner::default(),
            phonemes: Interner::default(),
            grapheme_index: BkTree::new(),
            phoneme_index: BkTree::new(),
            max_clusters: 0,
        };
        for (i, e) in entries.iter().enumerate() {
            let ckey: Vec<u32> = e.clusters.iter().map(|c| lex.clusters.intern(&c.text)).collect();
            let pkey: Vec<u32> = e.phonemes.iter().map(|p| lex.phonemes.intern(p)).collect();
            lex.max_clusters = lex.max_clusters.max(ckey.len());
            lex.by_surface.insert(e.surface.clone(), i);
            lex.by_clusters.insert(ckey.clone(), i);
            lex.grapheme_index.insert(ckey, i);
            if !pkey.is_empty() {
                lex.phoneme_index.insert(pkey, i);
            }
        }
        lex.entries = entries;
        lex
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &LexiconEntry {
        &self.entries[idx]
    }

    pub fn get(&self, surface: &str) -> Option<&LexiconEntry> {
        self.by_surface.get(surface).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, surface: &str) -> bool {
        self.by_surface.contains_key(surface)
    }

    /// Longest entry, in clusters.
    pub fn max_clusters(&self) -> usize {
        self.max_clusters
    }

    /// Encodes clusters with this lexicon's symbol table.
    pub fn encode_clusters(&self, clusters: &[GraphemeCluster]) -> Vec<u32> {
        self.clusters.encode(clusters.iter().map(|c| c.text.as_str()))
    }

    pub fn encode_cluster_texts<'a>(&self, texts: impl Iterator<Item = &'a str>) -> Vec<u32> {
        self.clusters.encode(texts)
    }

    /// Exact lookup by encoded cluster sequence.
    pub fn lookup_encoded(&self, key: &[u32]) -> Option<usize> {
        self.by_clusters.get(key).copied()
    }

    fn order(&self, a: &Neighbor, b: &Neighbor) -> Ordering {
        let (ea, eb) = (&self.entries[a.entry], &self.entries[b.entry]);
        a.distance
            .cmp(&b.distance)
            .then(eb.frequency.cmp(&ea.frequency))
            .then_with(|| ea.surface.cmp(&eb.surface))
    }

    /// Sorts hits by distance, then frequency (descending), then surface.
    pub fn sort_neighbors(&self, hits: &mut [Neighbor]) {
        hits.sort_by(|a, b| self.order(a, b));
    }

    fn collect(&self, raw: Vec<(usize, usize)>) -> Vec<Neighbor> {
        let mut hits: Vec<Neighbor> = raw
            .into_iter()
            .map(|(entry, distance)| Neighbor { entry, distance })
            .collect();
        self.sort_neighbors(&mut hits);
        hits
    }

    /// Every entry within `eps` clusters of `query`, in result order.
    pub fn grapheme_within(&self, query: &[GraphemeCluster], eps: usize) -> Vec<Neighbor> {
        let key = self.encode_clusters(query);
        self.collect(self.grapheme_index.find(&key, eps))
    }

    /// True if any entry lies within `eps` clusters of `query`.
    pub fn has_grapheme_within(&self, query: &[GraphemeCluster], eps: usize) -> bool {
        self.grapheme_index.any_within(&self.encode_clusters(query), eps)
    }

    /// The `k` best entries within `eps` clusters of `query`.
    pub fn grapheme_neighbors(
        &self,
        query: &[GraphemeCluster],
        eps: usize,
        k: usize,
    ) -> Vec<Neighbor> {
        let mut hits = self.grapheme_within(query, eps);
        hits.truncate(k);
        hits
    }

    /// Every entry whose phonemes lie within `eps_p` tokens of `query`.
    /// An empty query matches nothing.
    pub fn phoneme_within<S: AsRef<str>>(&self, query: &[S], eps_p: usize) -> Vec<Neighbor> {
        if query.is_empty() {
            return Vec::new();
        }
        let key = self.phonemes.encode(query.iter().map(AsRef::as_ref));
        self.collect(self.phoneme_index.find(&key, eps_p))
    }

    pub fn phoneme_neighbors<S: AsRef<str>>(
        &self,
        query: &[S],
        eps_p: usize,
        k: usize,
    ) -> Vec<Neighbor> {
        let mut hits = self.phoneme_within(query, eps_p);
        hits.truncate(k);
        hits
    }

    /// Phoneme distance between a query and an entry.
    pub fn phoneme_distance<S: AsRef<str>>(&self, query: &[S], entry: usize) -> usize {
        let q: Vec<&str> = query.iter().map(AsRef::as_ref).collect();
        let e: Vec<&str> = self.entries[entry].phonemes.iter().map(String::as_str).collect();
        levenshtein(&q, &e)
    }

    /// Grapheme distance between a query and an entry.
    pub fn grapheme_distance(&self, query: &[GraphemeCluster], entry: usize) -> usize {
        cluster_edit_distance(query, &self.entries[entry].clusters)
    }
}

/// True if the text has at least one Khmer cluster.
pub fn has_khmer(clusters: &[GraphemeCluster]) -> bool {
    clusters.iter().any(|c| c.class == ClusterClass::KhmerCluster)
}

//! The spellchecking pipeline.
//!
//! A sentence is segmented and scanned for names. Unknown words outside
//! names are flagged. Each flagged word gets candidates from grapheme and
//! phoneme search, plus recombinations of per-subword candidates when the
//! word splits into parts. Hypotheses combine one choice per flagged word
//! and are ranked by language model log likelihood.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::error::{Error, Result};
use crate::g2p::G2p;
use crate::lexicon::{Lexicon, Neighbor};
use crate::lm::CharLm;
use crate::ner::{self, EntitySpan, Gazetteer};
use crate::script::{self, GraphemeCluster};
use crate::segmenter::{self, part_eps, AffixList, Subword, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckerConfig {
    /// Candidates kept per flagged word.
    pub k: usize,
    /// Largest grapheme distance admitted.
    pub eps: usize,
    /// Largest phoneme distance admitted.
    pub eps_p: usize,
    /// Most hypotheses enumerated per sentence.
    pub beam: usize,
    /// Hypotheses returned.
    pub top_n: usize,
}

impl Default for CheckerConfig {
    fn default() -> Self {
        CheckerConfig {
            k: 3,
            eps: 3,
            eps_p: 1,
            beam: 64,
            top_n: 3,
        }
    }
}

impl CheckerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.eps == 0 || self.eps_p == 0 || self.beam == 0 || self.top_n == 0 {
            return Err(Error::InvalidConfig("k, eps, eps_p, beam and top_n must be positive"));
        }
        if self.top_n > self.beam {
            return Err(Error::InvalidConfig("top_n must not exceed beam"));
        }
        Ok(())
    }

    /// True if a candidate at these distances may be suggested.
    pub fn admits(&self, grapheme_dist: usize, phoneme_dist: usize) -> bool {
        grapheme_dist <= self.eps || phoneme_dist <= self.eps_p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CandidateOrigin {
    GraphemeSearch,
    PhonemeSearch,
    SubwordRecombination,
}

impl CandidateOrigin {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateOrigin::GraphemeSearch => "grapheme-search",
            CandidateOrigin::PhonemeSearch => "phoneme-search",
            CandidateOrigin::SubwordRecombination => "subword-recombination",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub surface: String,
    pub grapheme_dist: usize,
    pub phoneme_dist: usize,
    pub frequency: u64,
    pub origin: CandidateOrigin,
}

/// Candidate order: phoneme distance, grapheme distance, frequency
/// (descending), surface.
pub fn candidate_order(a: &Candidate, b: &Candidate) -> Ordering {
    a.phoneme_dist
        .cmp(&b.phoneme_dist)
        .then(a.grapheme_dist.cmp(&b.grapheme_dist))
        .then(b.frequency.cmp(&a.frequency))
        .then_with(|| a.surface.cmp(&b.surface))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replacement {
    pub token: usize,
    pub candidate: Candidate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    pub sentence: String,
    pub replacements: Vec<Replacement>,
    pub score: f64,
}

impl Hypothesis {
    pub fn total_distance(&self) -> usize {
        self.replacements
            .iter()
            .map(|r| r.candidate.grapheme_dist)
            .sum()
    }

    /// Replacement text chosen for `token`, if any.
    pub fn replacement_for(&self, token: usize) -> Option<&str> {
        self.replacements
            .iter()
            .find(|r| r.token == token)
            .map(|r| r.candidate.surface.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenOutcome {
    NotFlagged,
    Corrected,
    NoCandidates,
}

impl TokenOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenOutcome::NotFlagged => "not-flagged",
            TokenOutcome::Corrected => "corrected",
            TokenOutcome::NoCandidates => "no-candidates",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub sentence: String,
    pub tokens: Vec<Token>,
    pub entities: Vec<EntitySpan>,
    pub flagged: Vec<usize>,
    /// Per flagged token, suggestions in order of first appearance across
    /// the ranked hypotheses.
    pub suggestions: BTreeMap<usize, Vec<Candidate>>,
    pub hypotheses: Vec<Hypothesis>,
    pub outcomes: Vec<TokenOutcome>,
}

impl CheckReport {
    pub fn best(&self) -> &Hypothesis {
        &self.hypotheses[0]
    }

    /// Index of the token covering exactly `start..end`, if any.
    pub fn token_at(&self, start: usize, end: usize) -> Option<usize> {
        self.tokens
            .iter()
            .position(|t| t.start == start && t.end == end)
    }
}

/// Restricts checking to one cluster range, which is kept as one token.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub focus: Option<(usize, usize)>,
}

/// Scores a whole sentence. Higher is more likely.
pub trait SentenceScorer {
    fn score(&self, sentence: &str) -> f64;
}

impl SentenceScorer for CharLm {
    fn score(&self, sentence: &str) -> f64 {
        self.log_prob(sentence)
    }
}

impl<F: Fn(&str) -> f64> SentenceScorer for F {
    fn score(&self, sentence: &str) -> f64 {
        self(sentence)
    }
}

/// Everything the checker reads. Immutable once built.
#[derive(Debug, Clone)]
pub struct Engine {
    pub lexicon: Lexicon,
    pub g2p: G2p,
    pub gazetteer: Gazetteer,
    pub affixes: AffixList,
    pub lm: CharLm,
}

impl Engine {
    pub fn segment(&self, sentence: &str, cfg: &CheckerConfig) -> Vec<Token> {
        segmenter::segment(sentence, &self.lexicon, &self.affixes, cfg.eps)
    }

    fn segment_focused(&self, sentence: &str, cfg: &CheckerConfig, focus: (usize, usize)) -> Result<Vec<Token>> {
        let clusters = script::cluster(sentence);
        let (fs, fe) = focus;
        if fs >= fe || fe > clusters.len() {
            return Err(Error::SpanOutOfRange {
                start: fs,
                end: fe,
                len: clusters.len(),
            });
        }
        let shift = |mut tokens: Vec<Token>, by: usize| {
            for t in &mut tokens {
                t.start += by;
                t.end += by;
                for s in t.subwords.iter_mut().flatten() {
                    s.start += by;
                    s.end += by;
                }
            }
            tokens
        };
        let mut tokens = self.segment(&script::join(&clusters[..fs]), cfg);
        let text = script::join(&clusters[fs..fe]);
        let known = self.lexicon.contains(&text);
        let subwords = if known {
            None
        } else {
            segmenter::split_compound(&clusters[fs..fe], &self.lexicon, &self.affixes, cfg.eps)
        };
        tokens.extend(shift(
            alloc::vec![Token {
                text,
                start: 0,
                end: fe - fs,
                kind: TokenKind::Word,
                known,
                subwords,
            }],
            fs,
        ));
        tokens.extend(shift(self.segment(&script::join(&clusters[fe..]), cfg), fe));
        Ok(tokens)
    }

    /// Flagged token indices: unknown words that overlap no entity.
    pub fn detect(&self, tokens: &[Token], entities: &[EntitySpan]) -> Vec<usize> {
        tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_word() && !t.known && !ner::is_masked(t, entities))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whole-word candidates from both searches, keyed by entry.
    fn direct_candidates(
        &self,
        clusters: &[GraphemeCluster],
        eps: usize,
        eps_p: usize,
    ) -> BTreeMap<usize, Candidate> {
        let word = script::join(clusters);
        let phonemes = self.g2p.to_phonemes(&word);
        let mut found: BTreeMap<usize, Candidate> = BTreeMap::new();
        let make = |n: &Neighbor, origin| {
            let e = self.lexicon.entry(n.entry);
            Candidate {
                surface: e.surface.clone(),
                grapheme_dist: self.lexicon.grapheme_distance(clusters, n.entry),
                phoneme_dist: self.lexicon.phoneme_distance(&phonemes, n.entry),
                frequency: e.frequency,
                origin,
            }
        };
        for n in self.lexicon.grapheme_within(clusters, eps) {
            found.insert(n.entry, make(&n, CandidateOrigin::GraphemeSearch));
        }
        for n in self.lexicon.phoneme_within(&phonemes, eps_p) {
            found
                .entry(n.entry)
                .or_insert_with(|| make(&n, CandidateOrigin::PhonemeSearch));
        }
        found
    }

    /// Ranked candidates for one word, at most `cfg.k`.
    pub fn candidates(&self, word: &str, cfg: &CheckerConfig) -> Vec<Candidate> {
        let clusters = script::cluster(&script::normalize(word));
        if clusters.is_empty() {
            return Vec::new();
        }
        let parts = segmenter::split_compound(&clusters, &self.lexicon, &self.affixes, cfg.eps);
        self.merge_candidates(&clusters, parts.as_deref(), cfg)
    }

    /// Candidates for a segmented token, reusing its decomposition.
    fn token_candidates(&self, token: &Token, cfg: &CheckerConfig) -> Vec<Candidate> {
        let clusters = script::cluster(&token.text);
        let parts: Option<Vec<Subword>> = token.subwords.as_ref().map(|subs| {
            subs.iter()
                .map(|s| Subword {
                    start: s.start - token.start,
                    end: s.end - token.start,
                    ..s.clone()
                })
                .collect()
        });
        self.merge_candidates(&clusters, parts.as_deref(), cfg)
    }

    fn merge_candidates(
        &self,
        clusters: &[GraphemeCluster],
        parts: Option<&[Subword]>,
        cfg: &CheckerConfig,
    ) -> Vec<Candidate> {
        let mut by_surface: BTreeMap<String, Candidate> = self
            .direct_candidates(clusters, cfg.eps, cfg.eps_p)
            .into_values()
            .map(|c| (c.surface.clone(), c))
            .collect();
        for c in parts.map(|p| self.recombine(clusters, p, cfg)).unwrap_or_default() {
            match by_surface.get(&c.surface) {
                Some(old) if candidate_order(old, &c) != Ordering::Greater => {}
                _ => {
                    by_surface.insert(c.surface.clone(), c);
                }
            }
        }
        let mut out: Vec<Candidate> = by_surface.into_values().collect();
        out.sort_by(candidate_order);
        out.truncate(cfg.k);
        out
    }

    /// Candidates built from per-part candidates of a compound split.
    fn recombine(&self, clusters: &[GraphemeCluster], parts: &[Subword], cfg: &CheckerConfig) -> Vec<Candidate> {
        let mut lists: Vec<Vec<Candidate>> = Vec::new();
        for p in parts {
            let pe = part_eps(p.end - p.start, cfg.eps);
            let mut list: Vec<Candidate> = self
                .direct_candidates(&clusters[p.start..p.end], pe, cfg.eps_p.min(pe))
                .into_values()
                .collect();
            if list.is_empty() {
                return Vec::new();
            }
            list.sort_by(candidate_order);
            list.truncate(cfg.k);
            lists.push(list);
        }
        let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
        best_first(&lens, cfg.k * cfg.k)
            .into_iter()
            .map(|choice| {
                let picked: Vec<&Candidate> =
                    choice.iter().zip(&lists).map(|(&i, l)| &l[i]).collect();
                let surface: String = picked.iter().map(|c| c.surface.as_str()).collect();
                let frequency = self.lexicon.get(&surface).map_or_else(
                    || picked.iter().map(|c| c.frequency).min().unwrap_or(0),
                    |e| e.frequency,
                );
                Candidate {
                    surface,
                    grapheme_dist: picked.iter().map(|c| c.grapheme_dist).sum(),
                    phoneme_dist: picked.iter().map(|c| c.phoneme_dist).sum(),
                    frequency,
                    origin: CandidateOrigin::SubwordRecombination,
                }
            })
            .filter(|c| cfg.admits(c.grapheme_dist, c.phoneme_dist))
            .collect()
    }

    pub fn check(&self, sentence: &str, cfg: &CheckerConfig) -> CheckReport {
        self.check_with(sentence, cfg, &CheckOptions::default())
            .expect("no focus, nothing to go out of range")
    }

    /// Runs the full pipeline. Fails only if the focus range is invalid.
    pub fn check_with(
        &self,
        sentence: &str,
        cfg: &CheckerConfig,
        opts: &CheckOptions,
    ) -> Result<CheckReport> {
        let sentence = script::normalize(sentence);
        let tokens = match opts.focus {
            Some(f) => self.segment_focused(&sentence, cfg, f)?,
            None => self.segment(&sentence, cfg),
        };
        let entities = ner::find_entities(&sentence, &self.gazetteer, &tokens);
        let mut flagged = self.detect(&tokens, &entities);
        if let Some((fs, fe)) = opts.focus {
            flagged.retain(|&i| tokens[i].overlaps(fs, fe));
        }
        let lists: Vec<Vec<Candidate>> = flagged
            .iter()
            .map(|&i| self.token_candidates(&tokens[i], cfg))
            .collect();
        let hyps = enumerate_hypotheses(&tokens, &flagged, &lists, cfg.beam);
        let mut ranked = rank(hyps, &self.lm)?;

        let mut suggestions: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
        for (slot, &ti) in flagged.iter().enumerate() {
            let mut seen = BTreeSet::new();
            let mut list = Vec::new();
            let appearing = ranked.iter().filter_map(|h| {
                h.replacements
                    .iter()
                    .find(|r| r.token == ti)
                    .map(|r| &r.candidate)
            });
            for c in appearing.chain(lists[slot].iter()) {
                if seen.insert(c.surface.clone()) {
                    list.push(c.clone());
                }
            }
            suggestions.insert(ti, list);
        }
        let mut outcomes = alloc::vec![TokenOutcome::NotFlagged; tokens.len()];
        for (slot, &ti) in flagged.iter().enumerate() {
            outcomes[ti] = if lists[slot].is_empty() {
                TokenOutcome::NoCandidates
            } else {
                TokenOutcome::Corrected
            };
        }
        ranked.truncate(cfg.top_n);
        Ok(CheckReport {
            sentence,
            tokens,
            entities,
            flagged,
            suggestions,
            hypotheses: ranked,
            outcomes,
        })
    }
}

/// Rank vectors over lists of the given lengths, best first by rank sum.
/// An empty list counts as a single fixed choice. Stops after `cap`
/// vectors.
pub fn best_first(lens: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if cap == 0 {
        return out;
    }
    let start = alloc::vec![0usize; lens.len()];
    if lens.contains(&0) {
        // a list with no choices would block every vector
        let live: Vec<usize> = lens.iter().map(|&l| l.max(1)).collect();
        return best_first(&live, cap);
    }
    let mut heap = BinaryHeap::new();
    let mut seen = BTreeSet::new();
    heap.push(Reverse((0usize, start.clone())));
    seen.insert(start);
    while let Some(Reverse((sum, v))) = heap.pop() {
        for i in 0..v.len() {
            if v[i] + 1 < lens[i] {
                let mut next = v.clone();
                next[i] += 1;
                if seen.insert(next.clone()) {
                    heap.push(Reverse((sum + 1, next)));
                }
            }
        }
        out.push(v);
        if out.len() == cap {
            break;
        }
    }
    out
}

/// Hypotheses for the flagged tokens, one candidate choice each. Tokens
/// without candidates stay unchanged. At most `beam` hypotheses, taken in
/// order of total candidate rank, so the all-first choice is always there.
pub fn enumerate_hypotheses(
    tokens: &[Token],
    flagged: &[usize],
    lists: &[Vec<Candidate>],
    beam: usize,
) -> Vec<Hypothesis> {
    let lens: Vec<usize> = lists.iter().map(Vec::len).collect();
    best_first(&lens, beam)
        .into_iter()
        .map(|choice| {
            let replacements: Vec<Replacement> = choice
                .iter()
                .enumerate()
                .filter(|&(slot, _)| !lists[slot].is_empty())
                .map(|(slot, &r)| Replacement {
                    token: flagged[slot],
                    candidate: lists[slot][r].clone(),
                })
                .collect();
            let sentence = apply(tokens, &replacements);
            Hypothesis {
                sentence,
                replacements,
                score: 0.0,
            }
        })
        .collect()
}

/// The sentence with the replacements applied.
pub fn apply(tokens: &[Token], replacements: &[Replacement]) -> String {
    let mut out = String::new();
    for (i, t) in tokens.iter().enumerate() {
        match replacements.iter().find(|r| r.token == i) {
            Some(r) => out.push_str(&r.candidate.surface),
            None => out.push_str(&t.text),
        }
    }
    out
}

/// Order of ranked hypotheses: score (descending), total edit distance,
/// sentence.
pub fn hypothesis_order(a: &Hypothesis, b: &Hypothesis) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.total_distance().cmp(&b.total_distance()))
        .then_with(|| a.sentence.cmp(&b.sentence))
}

/// Scores every hypothesis and sorts best first.
pub fn rank<S: SentenceScorer + ?Sized>(mut hyps: Vec<Hypothesis>, scorer: &S) -> Result<Vec<Hypothesis>> {
    if hyps.is_empty() {
        return Err(Error::NoHypotheses);
    }
    for h in &mut hyps {
        h.score = scorer.score(&h.sentence);
    }
    hyps.sort_by(hypothesis_order);
    Ok(hyps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LexiconRecord;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn engine(words: &[&str], corpus: &[&str], names: &[&str]) -> Engine {
        let g2p = G2p::default();
        Engine {
            lexicon: Lexicon::build(words.iter().map(|w| LexiconRecord::word(*w)), &g2p).unwrap(),
            g2p,
            gazetteer: Gazetteer::with_builtin_honorifics(names),
            affixes: AffixList::builtin(),
            lm: CharLm::train(corpus, 5).unwrap(),
        }
    }

    fn cand(s: &str, g: usize, p: usize) -> Candidate {
        Candidate {
            surface: s.to_string(),
            grapheme_dist: g,
            phoneme_dist: p,
            frequency: 1,
            origin: CandidateOrigin::GraphemeSearch,
        }
    }

    const WORDS: &[&str] = &["ខ្ញុំ", "ទៅ", "សាលា", "រៀន", "ញ៉ាំ", "បាយ", "តម្លៃ", "ថ្លៃ", "ទន់ភ្លន់", "គាត់", "ជា", "មនុស្ស", "ដែល"];

    #[test]
    fn config_defaults_and_validation() {
        let c = CheckerConfig::default();
        assert_eq!((c.k, c.eps, c.eps_p, c.beam, c.top_n), (3, 3, 1, 64, 3));
        assert!(c.validate().is_ok());
        assert!(CheckerConfig { top_n: 65, ..c }.validate().is_err());
        assert!(CheckerConfig { k: 0, ..c }.validate().is_err());
    }

    #[test]
    fn correct_sentence_is_fixpoint() {
        let e = engine(WORDS, &["ខ្ញុំទៅសាលារៀន"], &[]);
        let r = e.check("ខ្ញុំទៅសាលារៀន", &CheckerConfig::default());
        assert!(r.flagged.is_empty());
        assert_eq!(r.hypotheses.len(), 1);
        assert_eq!(r.best().sentence, "ខ្ញុំទៅសាលារៀន");
        assert!(r.outcomes.iter().all(|o| *o == TokenOutcome::NotFlagged));
    }

    #[test]
    fn word_in_lexicon_is_its_own_candidate() {
        let e = engine(WORDS, &["ខ្ញុំ"], &[]);
        let c = e.candidates("សាលា", &CheckerConfig::default());
        assert_eq!(c[0].surface, "សាលា");
        assert_eq!((c[0].grapheme_dist, c[0].phoneme_dist), (0, 0));
    }

    #[test]
    fn unstacked_variant_ranks_lexicon_form_first() {
        let e = engine(WORDS, &["ខ្ញុំ"], &[]);
        let c = e.candidates("តំលៃ", &CheckerConfig::default());
        assert_eq!(c[0].surface, "តម្លៃ");
        assert_eq!(c[0].phoneme_dist, 0);
        assert!(c.len() <= 3);
    }

    #[test]
    fn stacked_variant_is_corrected() {
        let corpus = ["គាត់ជាមនុស្សទន់ភ្លន់", "ទន់ភ្លន់", "មនុស្សទន់ភ្លន់ដែលខ្ញុំ"];
        let e = engine(WORDS, &corpus, &[]);
        let r = e.check("គាត់ជាមនុស្សទន់ភ្លុន", &CheckerConfig::default());
        assert_eq!(r.flagged.len(), 1);
        assert_eq!(r.best().sentence, "គាត់ជាមនុស្សទន់ភ្លន់");
        assert_eq!(r.outcomes[r.flagged[0]], TokenOutcome::Corrected);
    }

    #[test]
    fn honorific_name_is_left_alone() {
        let words = ["ខ្ញុំ", "បាន", "ជួប", "លោកស្រី", "នៅ", "ផ្សារ", "កន្ទី"];
        let s = "ខ្ញុំបានជួប លោកស្រី កន្ទីថា នៅផ្សារ។";
        let e = engine(&words, &[s], &["កន្ទីថា"]);
        let r = e.check(s, &CheckerConfig::default());
        assert!(r.flagged.is_empty());
        assert_eq!(r.best().sentence, s);
    }

    #[test]
    fn corrupted_word_is_the_only_flag() {
        let e = engine(WORDS, &["ខ្ញុំ"], &[]);
        let bad = segmenter::augment("សាលា", &segmenter::Edit::Substitute { position: 1, cluster: "ក".into() }).unwrap();
        let s = ["ខ្ញុំទៅ", &bad, "រៀន"].concat();
        let r = e.check(&s, &CheckerConfig::default());
        assert_eq!(r.flagged.len(), 1);
        assert_eq!(r.tokens[r.flagged[0]].text, bad);
    }

    #[test]
    fn word_without_neighbors_has_no_candidates() {
        let e = engine(&["ខ្ញុំ"], &["ខ្ញុំ"], &[]);
        let s = "ខ្ញុំ abcdefgh";
        let r = e.check(s, &CheckerConfig::default());
        assert_eq!(r.flagged.len(), 1);
        assert_eq!(r.outcomes[r.flagged[0]], TokenOutcome::NoCandidates);
        assert_eq!(r.best().sentence, s);
    }

    #[test]
    fn compound_parts_are_recombined() {
        let e = engine(&["សាលា", "រៀន", "ខ្ញុំ"], &["ខ្ញុំ"], &[]);
        let c = e.candidates("សាលរៀម", &CheckerConfig::default());
        let hit = c.iter().find(|c| c.surface == "សាលារៀន").unwrap();
        assert_eq!(hit.origin, CandidateOrigin::SubwordRecombination);
        assert_eq!(hit.grapheme_dist, 2);
    }

    #[test]
    fn focus_keeps_span_whole() {
        let e = engine(WORDS, &["ខ្ញុំ"], &[]);
        // clusters 2..4 read សាល
        let s = "ខ្ញុំទៅសាលរៀន";
        let r = e
            .check_with(s, &CheckerConfig::default(), &CheckOptions { focus: Some((2, 4)) })
            .unwrap();
        let t = r.token_at(2, 4).unwrap();
        assert_eq!(r.tokens[t].text, "សាល");
        assert_eq!(r.flagged, [t]);
        assert!(e
            .check_with(s, &CheckerConfig::default(), &CheckOptions { focus: Some((2, 99)) })
            .is_err());
    }

    #[test]
    fn hypothesis_counts() {
        let toks = |n: usize| -> Vec<Token> {
            (0..n)
                .map(|i| Token { text: "x".into(), start: i, end: i + 1, kind: TokenKind::Word, known: false, subwords: None })
                .collect()
        };
        let three = || vec![cand("a", 1, 1), cand("b", 1, 1), cand("c", 1, 1)];
        assert_eq!(enumerate_hypotheses(&toks(2), &[], &[], 64).len(), 1);
        assert_eq!(enumerate_hypotheses(&toks(2), &[0, 1], &[three(), three()], 64).len(), 9);
        assert_eq!(enumerate_hypotheses(&toks(3), &[0, 1, 2], &[three(), three(), three()], 64).len(), 27);
        let capped = enumerate_hypotheses(&toks(3), &[0, 1, 2], &[three(), three(), three()], 5);
        assert_eq!(capped.len(), 5);
        assert_eq!(capped[0].sentence, "aaa");
        let with_empty = enumerate_hypotheses(&toks(2), &[0, 1], &[three(), vec![]], 64);
        assert_eq!(with_empty.len(), 3);
        assert_eq!(with_empty[0].sentence, "ax");
    }

    #[test]
    fn rank_examples() {
        let h = |s: &str| Hypothesis { sentence: s.to_string(), replacements: vec![], score: 0.0 };
        assert_eq!(rank(vec![], &|_: &str| 0.0).unwrap_err(), Error::NoHypotheses);
        let one = rank(vec![h("a")], &|_: &str| -1.0).unwrap();
        assert_eq!(one[0].sentence, "a");
        let scores = |s: &str| if s == "x" { -7.2 } else { -5.0 };
        let two = rank(vec![h("x"), h("y")], &scores).unwrap();
        assert_eq!(two[0].sentence, "y");
    }

    fn oracle_rank(tokens: &[Token], lists: &[Vec<Candidate>], score: &dyn Fn(&str) -> f64) -> Vec<(String, f64)> {
        // every full choice, then sort
        let mut all: Vec<Vec<usize>> = vec![vec![]];
        for l in lists {
            let n = l.len().max(1);
            all = all.into_iter().flat_map(|v| (0..n).map(move |i| { let mut v = v.clone(); v.push(i); v })).collect();
        }
        let mut out: Vec<(String, usize, f64)> = all
            .into_iter()
            .map(|v| {
                let mut s = String::new();
                let mut d = 0;
                for (i, t) in tokens.iter().enumerate() {
                    if lists[i].is_empty() {
                        s.push_str(&t.text);
                    } else {
                        s.push_str(&lists[i][v[i]].surface);
                        d += lists[i][v[i]].grapheme_dist;
                    }
                }
                let sc = score(&s);
                (s, d, sc)
            })
            .collect();
        out.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.1.cmp(&b.1)).then(a.0.cmp(&b.0)));
        out.into_iter().map(|(s, _, sc)| (s, sc)).collect()
    }

    proptest! {
        #[test]
        fn rank_matches_brute_force(
            lists in proptest::collection::vec(
                proptest::collection::vec(("[a-e]{1,2}", 1usize..4), 0..4), 1..4),
            // quarter steps keep every sum exact, so ties survive the shift below
            weights in proptest::collection::vec(-12i32..12, 5),
        ) {
            let lists: Vec<Vec<Candidate>> = lists.into_iter().map(|l| l.into_iter().map(|(s, d)| cand(&s, d, 0)).collect()).collect();
            let tokens: Vec<Token> = (0..lists.len())
                .map(|i| Token { text: "z".into(), start: i, end: i + 1, kind: TokenKind::Word, known: false, subwords: None })
                .collect();
            let flagged: Vec<usize> = (0..lists.len()).collect();
            let score = |s: &str| -> f64 {
                s.chars().map(|c| f64::from(weights[(c as usize - 'a' as usize).min(4)]) / 4.0).sum::<f64>() - s.len() as f64
            };
            let got = rank(enumerate_hypotheses(&tokens, &flagged, &lists, 64), &score).unwrap();
            let want = oracle_rank(&tokens, &lists, &score);
            prop_assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                prop_assert_eq!(&g.sentence, &w.0);
                prop_assert_eq!(g.score, w.1);
            }
            // a constant shift in log domain changes nothing
            let shifted = rank(enumerate_hypotheses(&tokens, &flagged, &lists, 64), &|s: &str| score(s) + 12.5).unwrap();
            let a: Vec<_> = got.iter().map(|h| &h.sentence).collect();
            let b: Vec<_> = shifted.iter().map(|h| &h.sentence).collect();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn best_first_is_sorted_and_complete(lens in proptest::collection::vec(1usize..4, 1..4), cap in 1usize..30) {
            let got = best_first(&lens, cap);
            let total: usize = lens.iter().product();
            prop_assert_eq!(got.len(), total.min(cap));
            prop_assert!(got[0].iter().all(|&x| x == 0));
            for w in got.windows(2) {
                let s0: usize = w[0].iter().sum();
                let s1: usize = w[1].iter().sum();
                prop_assert!(s0 <= s1);
            }
        }
    }

    #[test]
    fn admission_holds_for_reported_candidates() {
        let e = engine(WORDS, &["ខ្ញុំ"], &[]);
        let cfg = CheckerConfig::default();
        for w in ["សាល", "តំលៃ", "ខ្ញុ", "សាលរៀម", "ទន់ភ្លុន"] {
            for c in e.candidates(w, &cfg) {
                assert!(cfg.admits(c.grapheme_dist, c.phoneme_dist));
            }
        }
    }
}

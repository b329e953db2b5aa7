//! Character n-gram language model with Witten-Bell interpolation.
//!
//! Each line is padded on the left with `order - 1` start symbols. Every
//! event is counted under all its context suffixes, so lower orders are
//! exact marginals of the top order. The interpolation bottoms out in the
//! uniform distribution over the vocabulary, which includes one UNK symbol
//! for characters never seen in training.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};

const START: u32 = 0;
const UNK: u32 = 1;

/// A model symbol. `Start` only ever appears in contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LmSymbol {
    Start,
    Unk,
    Char(char),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct ContextStats {
    total: u64,
    followers: BTreeMap<u32, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharLm {
    order: usize,
    chars: BTreeMap<char, u32>,
    symbols: Vec<char>,
    contexts: BTreeMap<Vec<u32>, ContextStats>,
}

/// Accumulates counts line by line.
#[derive(Debug, Clone)]
pub struct LmTrainer {
    order: usize,
    lines: BTreeMap<Vec<char>, u64>,
}

impl LmTrainer {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        Ok(LmTrainer {
            order,
            lines: BTreeMap::new(),
        })
    }

    pub fn add_line(&mut self, line: &str) {
        self.add_line_weighted(line, 1);
    }

    /// Counts `line` as if it had been seen `weight` times.
    pub fn add_line_weighted(&mut self, line: &str, weight: u64) {
        let chars: Vec<char> = line.chars().collect();
        if !chars.is_empty() && weight > 0 {
            *self.lines.entry(chars).or_insert(0) += weight;
        }
    }

    pub fn finish(self) -> Result<CharLm> {
        if self.lines.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut lm = CharLm::empty(self.order);
        lm.chars = self
            .lines
            .keys()
            .flatten()
            .map(|&c| (c, 0))
            .collect();
        lm.reindex();
        let n = self.order;
        for (line, weight) in &self.lines {
            let mut padded = alloc::vec![START; n - 1];
            padded.extend(line.iter().map(|c| lm.chars[c]));
            for i in n - 1..padded.len() {
                lm.count(&padded[i + 1 - n..i], padded[i], *weight);
            }
        }
        Ok(lm)
    }
}

impl CharLm {
    fn empty(order: usize) -> Self {
        CharLm {
            order,
            chars: BTreeMap::new(),
            symbols: Vec::new(),
            contexts: BTreeMap::new(),
        }
    }

    fn reindex(&mut self) {
        self.symbols = self.chars.keys().copied().collect();
        for (i, id) in self.chars.values_mut().enumerate() {
            *id = i as u32 + 2;
        }
    }

    /// Adds one event under every suffix of `history`.
    fn count(&mut self, history: &[u32], next: u32, weight: u64) {
        for k in 0..=history.len() {
            let stats = self
                .contexts
                .entry(history[history.len() - k..].to_vec())
                .or_default();
            stats.total += weight;
            *stats.followers.entry(next).or_insert(0) += weight;
        }
    }

    /// Trains on `lines` in one go.
    pub fn train<I, S>(lines: I, order: usize) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut t = LmTrainer::new(order)?;
        for l in lines {
            t.add_line(l.as_ref());
        }
        t.finish()
    }

    /// Rebuilds a model from its top-order n-gram counts, as produced by
    /// [`CharLm::ngram_counts`].
    pub fn from_ngram_counts(
        order: usize,
        grams: impl IntoIterator<Item = (Vec<LmSymbol>, u64)>,
    ) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        let grams: Vec<(Vec<LmSymbol>, u64)> = grams.into_iter().collect();
        let mut lm = CharLm::empty(order);
        for (g, _) in &grams {
            if g.len() != order {
                return Err(Error::InvalidConfig("n-gram length differs from order"));
            }
            let (last, ctx) = g.split_last().expect("order >= 2");
            if !matches!(last, LmSymbol::Char(_)) {
                return Err(Error::InvalidConfig("n-gram must predict a character"));
            }
            let mut seen_char = false;
            for s in ctx {
                match s {
                    LmSymbol::Char(c) => {
                        lm.chars.insert(*c, 0);
                        seen_char = true;
                    }
                    LmSymbol::Start if seen_char => {
                        return Err(Error::InvalidConfig("start symbol after a character"))
                    }
                    LmSymbol::Start => {}
                    LmSymbol::Unk => return Err(Error::InvalidConfig("unk in n-gram")),
                }
            }
            if let LmSymbol::Char(c) = last {
                lm.chars.insert(*c, 0);
            }
        }
        if grams.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        lm.reindex();
        for (g, count) in grams {
            let ids: Vec<u32> = g.iter().map(|s| lm.id(*s)).collect();
            let (last, ctx) = ids.split_last().expect("order >= 2");
            lm.count(ctx, *last, count);
        }
        Ok(lm)
    }

    /// Top-order n-gram counts in a stable order.
    pub fn ngram_counts(&self) -> Vec<(Vec<LmSymbol>, u64)> {
        let mut out = Vec::new();
        for (ctx, stats) in &self.contexts {
            if ctx.len() != self.order - 1 {
                continue;
            }
            for (&next, &c) in &stats.followers {
                let mut g: Vec<LmSymbol> = ctx.iter().map(|&s| self.symbol(s)).collect();
                g.push(self.symbol(next));
                out.push((g, c));
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of predictable symbols: training characters plus UNK.
    pub fn vocab_size(&self) -> usize {
        self.symbols.len() + 1
    }

    /// Predictable symbols in id order.
    pub fn vocabulary(&self) -> Vec<LmSymbol> {
        core::iter::once(LmSymbol::Unk)
            .chain(self.symbols.iter().map(|&c| LmSymbol::Char(c)))
            .collect()
    }

    fn id(&self, s: LmSymbol) -> u32 {
        match s {
            LmSymbol::Start => START,
            LmSymbol::Unk => UNK,
            LmSymbol::Char(c) => self.char_id(c),
        }
    }

    fn char_id(&self, c: char) -> u32 {
        self.chars.get(&c).copied().unwrap_or(UNK)
    }

    fn symbol(&self, id: u32) -> LmSymbol {
        match id {
            START => LmSymbol::Start,
            UNK => LmSymbol::Unk,
            n => LmSymbol::Char(self.symbols[n as usize - 2]),
        }
    }

    /// Witten-Bell probability of `next` after `history`.
    fn prob(&self, history: &[u32], next: u32) -> f64 {
        let mut p = 1.0 / self.vocab_size() as f64;
        for k in 0..=history.len() {
            let ctx = &history[history.len() - k..];
            let Some(stats) = self.contexts.get(ctx) else {
                break;
            };
            let c = stats.followers.get(&next).copied().unwrap_or(0) as f64;
            let t = stats.followers.len() as f64;
            p = (c + t * p) / (stats.total as f64 + t);
        }
        p
    }

    /// Ids of the `order - 1` symbols before the next character, with start
    /// padding.
    fn history(&self, context: &str) -> Vec<u32> {
        let mut h = alloc::vec![START; self.order - 1];
        h.extend(context.chars().map(|c| self.char_id(c)));
        h.split_off(h.len() - (self.order - 1))
    }

    /// Distribution of the next symbol after the sentence prefix `context`.
    pub fn next_char_dist(&self, context: &str) -> Vec<(LmSymbol, f64)> {
        let h = self.history(context);
        self.vocabulary()
            .into_iter()
            .map(|s| (s, self.prob(&h, self.id(s))))
            .collect()
    }

    /// Probability of `next` after the sentence prefix `context`.
    pub fn next_prob(&self, context: &str, next: char) -> f64 {
        self.prob(&self.history(context), self.char_id(next))
    }

    /// Natural-log likelihood of a whole line.
    pub fn log_prob(&self, sentence: &str) -> f64 {
        let mut h = alloc::vec![START; self.order - 1];
        let mut total = 0.0;
        for c in sentence.chars() {
            let id = self.char_id(c);
            total += libm::log(self.prob(&h, id));
            h.remove(0);
            h.push(id);
        }
        total
    }

    /// Log likelihood under the uniform distribution over the vocabulary.
    pub fn uniform_log_prob(&self, sentence: &str) -> f64 {
        -(sentence.chars().count() as f64) * libm::log(self.vocab_size() as f64)
    }
}

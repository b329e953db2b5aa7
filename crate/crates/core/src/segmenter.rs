//! Word segmentation, compound splitting and spelling noise.
//!
//! The segmenter runs forward and backward longest-match passes over
//! grapheme clusters and keeps the pass with fewer tokens. Clusters that
//! start no lexicon match are gathered into unknown tokens, so a misspelled
//! word comes out as one unknown token instead of fragments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lexicon::{cluster_edit_distance, Lexicon};
use crate::resources;
use crate::script::{self, ClusterClass, GraphemeCluster};

/// Label of the boundary that follows a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryLabel {
    NoSpace,
    Space,
    Compound,
    Prefix,
    Suffix,
}

impl BoundaryLabel {
    pub const ALL: [BoundaryLabel; 5] = [
        BoundaryLabel::NoSpace,
        BoundaryLabel::Space,
        BoundaryLabel::Compound,
        BoundaryLabel::Prefix,
        BoundaryLabel::Suffix,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryLabel::NoSpace => "no_space",
            BoundaryLabel::Space => "space",
            BoundaryLabel::Compound => "_",
            BoundaryLabel::Prefix => "~",
            BoundaryLabel::Suffix => "^",
        }
    }
}

/// How a subword attaches to the one after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Joiner {
    Compound,
    Prefix,
    Suffix,
}

impl Joiner {
    pub fn symbol(self) -> char {
        match self {
            Joiner::Compound => '_',
            Joiner::Prefix => '~',
            Joiner::Suffix => '^',
        }
    }

    pub fn label(self) -> BoundaryLabel {
        match self {
            Joiner::Compound => BoundaryLabel::Compound,
            Joiner::Prefix => BoundaryLabel::Prefix,
            Joiner::Suffix => BoundaryLabel::Suffix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Number,
    Separator,
}

/// One part of a decomposed token. `joiner` links it to the next part and
/// is `None` on the last one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subword {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub joiner: Option<Joiner>,
}

/// A token with cluster offsets `start..end` into the sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub kind: TokenKind,
    pub known: bool,
    pub subwords: Option<Vec<Subword>>,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }

    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        self.start < end && start < self.end
    }
}

/// Prefix and suffix morphemes used to label compound joints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AffixList {
    pub prefixes: BTreeSet<String>,
    pub suffixes: BTreeSet<String>,
}

impl AffixList {
    pub fn builtin() -> Self {
        Self::parse(resources::AFFIXES).expect("shipped affix table parses")
    }

    /// Parses `affix<TAB>prefix|suffix` rows.
    pub fn parse(text: &str) -> Result<Self> {
        let mut list = AffixList::default();
        for (line, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (affix, kind) = raw
                .split_once('\t')
                .ok_or_else(|| Error::parse(line + 1, "expected affix<TAB>kind"))?;
            let affix = script::normalize(affix.trim());
            if affix.is_empty() {
                return Err(Error::parse(line + 1, "empty affix"));
            }
            match kind.trim() {
                "prefix" => list.prefixes.insert(affix),
                "suffix" => list.suffixes.insert(affix),
                _ => return Err(Error::parse(line + 1, "kind must be prefix or suffix")),
            };
        }
        Ok(list)
    }

    /// Joiner for the boundary between `left` and `right`.
    pub fn joiner(&self, left: &str, right: &str) -> Joiner {
        if self.prefixes.contains(left) {
            Joiner::Prefix
        } else if self.suffixes.contains(right) {
            Joiner::Suffix
        } else {
            Joiner::Compound
        }
    }
}

/// Pluggable word segmenter. Implementations must tile the sentence.
pub trait Segmenter {
    fn segment(&self, sentence: &str) -> Vec<Token>;
}

/// Dictionary segmenter by bidirectional maximal matching.
#[derive(Debug, Clone, Copy)]
pub struct BmmSegmenter<'a> {
    pub lexicon: &'a Lexicon,
    pub affixes: &'a AffixList,
    /// Edit budget for calling a compound part known, see [`part_eps`].
    pub eps: usize,
}

impl Segmenter for BmmSegmenter<'_> {
    fn segment(&self, sentence: &str) -> Vec<Token> {
        segment(sentence, self.lexicon, self.affixes, self.eps)
    }
}

/// Edit budget for a part of `len` clusters: at most half its length and
/// never above `eps`, so short parts must match almost exactly.
pub fn part_eps(len: usize, eps: usize) -> usize {
    eps.min(len / 2)
}

type Piece = (usize, usize, bool);

fn forward(ids: &[u32], lex: &Lexicon) -> Vec<Piece> {
    let max = lex.max_clusters();
    let mut out: Vec<Piece> = Vec::new();
    let mut i = 0;
    while i < ids.len() {
        let hit = (1..=max.min(ids.len() - i))
            .rev()
            .find(|&l| lex.lookup_encoded(&ids[i..i + l]).is_some());
        match hit {
            Some(l) => {
                out.push((i, i + l, true));
                i += l;
            }
            None => {
                match out.last_mut() {
                    Some(last) if !last.2 => last.1 = i + 1,
                    _ => out.push((i, i + 1, false)),
                }
                i += 1;
            }
        }
    }
    out
}

fn backward(ids: &[u32], lex: &Lexicon) -> Vec<Piece> {
    let max = lex.max_clusters();
    let mut out: Vec<Piece> = Vec::new();
    let mut j = ids.len();
    while j > 0 {
        let hit = (1..=max.min(j))
            .rev()
            .find(|&l| lex.lookup_encoded(&ids[j - l..j]).is_some());
        match hit {
            Some(l) => {
                out.push((j - l, j, true));
                j -= l;
            }
            None => {
                match out.last_mut() {
                    Some(last) if !last.2 => last.0 = j - 1,
                    _ => out.push((j - 1, j, false)),
                }
                j -= 1;
            }
        }
    }
    out.reverse();
    out
}

fn bmm(ids: &[u32], lex: &Lexicon) -> Vec<Piece> {
    let f = forward(ids, lex);
    let b = backward(ids, lex);
    if b.len() < f.len() {
        b
    } else {
        f
    }
}

/// Segments a normalized sentence into tokens that tile it. Unknown word
/// tokens carry their best compound decomposition when one exists.
pub fn segment(sentence: &str, lex: &Lexicon, affixes: &AffixList, eps: usize) -> Vec<Token> {
    let clusters = script::cluster(sentence);
    let ids = lex.encode_clusters(&clusters);
    let text = |a: usize, b: usize| script::join(&clusters[a..b]);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < clusters.len() {
        if !clusters[i].is_word_material() {
            let kind = if clusters[i].class == ClusterClass::DigitRun {
                TokenKind::Number
            } else {
                TokenKind::Separator
            };
            tokens.push(Token {
                text: clusters[i].text.clone(),
                start: i,
                end: i + 1,
                kind,
                known: true,
                subwords: None,
            });
            i += 1;
            continue;
        }
        let run_end = (i..clusters.len())
            .find(|&j| !clusters[j].is_word_material())
            .unwrap_or(clusters.len());
        for (a, b, known) in bmm(&ids[i..run_end], lex) {
            let (start, end) = (i + a, i + b);
            let subwords = if known {
                None
            } else {
                split_compound(&clusters[start..end], lex, affixes, eps).map(|parts| {
                    parts
                        .into_iter()
                        .map(|mut s| {
                            s.start += start;
                            s.end += start;
                            s
                        })
                        .collect()
                })
            };
            tokens.push(Token {
                text: text(start, end),
                start,
                end,
                kind: TokenKind::Word,
                known,
                subwords,
            });
        }
        i = run_end;
    }
    tokens
}

/// Best split of an unknown word into two or more parts. A part counts as
/// known when some lexicon entry lies within [`part_eps`] of it. Splits are
/// ranked by known parts (more first), then part count (fewer first), then
/// first part length (longer first). Offsets are relative to `clusters`.
pub fn split_compound(
    clusters: &[GraphemeCluster],
    lex: &Lexicon,
    affixes: &AffixList,
    eps: usize,
) -> Option<Vec<Subword>> {
    let n = clusters.len();
    if n < 2 {
        return None;
    }
    let mut memo: BTreeMap<(usize, usize), bool> = BTreeMap::new();
    let mut known = |a: usize, b: usize| -> bool {
        *memo.entry((a, b)).or_insert_with(|| {
            let pe = part_eps(b - a, eps);
            lex.has_grapheme_within(&clusters[a..b], pe)
        })
    };
    // best[i]: (known parts, part count, first cut) for the suffix from i.
    let mut best: Vec<(usize, usize, usize)> = alloc::vec![(0, 0, n); n + 1];
    let better = |cand: (usize, usize, usize), cur: (usize, usize, usize), fresh: bool| {
        fresh
            || cand.0 > cur.0
            || (cand.0 == cur.0 && cand.1 < cur.1)
            || (cand.0 == cur.0 && cand.1 == cur.1 && cand.2 > cur.2)
    };
    for i in (0..n).rev() {
        let mut cur = (0, 0, n);
        let mut fresh = true;
        for j in i + 1..=n {
            let (k, p, _) = best[j];
            let cand = (k + known(i, j) as usize, p + 1, j);
            if better(cand, cur, fresh) {
                cur = cand;
                fresh = false;
            }
        }
        best[i] = cur;
    }
    // The whole word is not a split: choose the first cut among j < n.
    let mut top: Option<(usize, usize, usize)> = None;
    for j in 1..n {
        let (k, p, _) = best[j];
        let cand = (k + known(0, j) as usize, p + 1, j);
        if top.is_none_or(|t| better(cand, t, false)) {
            top = Some(cand);
        }
    }
    let (k, _, first) = top?;
    if k == 0 {
        return None;
    }
    let mut cuts = alloc::vec![0, first];
    let mut at = first;
    while at < n {
        at = best[at].2;
        cuts.push(at);
    }
    let texts: Vec<String> = cuts.windows(2).map(|w| script::join(&clusters[w[0]..w[1]])).collect();
    Some(
        cuts.windows(2)
            .enumerate()
            .map(|(idx, w)| Subword {
                text: texts[idx].clone(),
                start: w[0],
                end: w[1],
                joiner: texts.get(idx + 1).map(|next| affixes.joiner(&texts[idx], next)),
            })
            .collect(),
    )
}

/// One boundary label per cluster of the sentence the tokens tile.
pub fn boundary_labels(tokens: &[Token]) -> Vec<BoundaryLabel> {
    let mut labels = Vec::new();
    for t in tokens {
        let mut token_labels = alloc::vec![BoundaryLabel::NoSpace; t.end - t.start];
        if let Some(last) = token_labels.last_mut() {
            *last = BoundaryLabel::Space;
        }
        for s in t.subwords.iter().flatten() {
            if let Some(j) = s.joiner {
                token_labels[s.end - t.start - 1] = j.label();
            }
        }
        labels.extend(token_labels);
    }
    labels
}

/// Token spans (cluster offsets) implied by a label sequence. A trailing
/// run without a closing `Space` still forms a span.
pub fn spans_from_labels(labels: &[BoundaryLabel]) -> Vec<(usize, usize)> {
    let mut spans = Vec::new();
    let mut start = 0;
    for (i, l) in labels.iter().enumerate() {
        if *l == BoundaryLabel::Space {
            spans.push((start, i + 1));
            start = i + 1;
        }
    }
    if start < labels.len() {
        spans.push((start, labels.len()));
    }
    spans
}

/// Renders tokens with `|` between words and `_ ~ ^` inside compounds.
/// Whitespace is printed as is.
pub fn render(tokens: &[Token]) -> String {
    let mut out = String::new();
    let mut prev_visible = false;
    for t in tokens {
        let space = t.kind == TokenKind::Separator && t.text.chars().all(char::is_whitespace);
        if !space && prev_visible {
            out.push('|');
        }
        match &t.subwords {
            Some(parts) => {
                for p in parts {
                    out.push_str(&p.text);
                    if let Some(j) = p.joiner {
                        out.push(j.symbol());
                    }
                }
            }
            None => out.push_str(&t.text),
        }
        prev_visible = !space;
    }
    out
}

/// A single cluster-level edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edit {
    Delete { position: usize },
    Substitute { position: usize, cluster: String },
    Insert { position: usize, cluster: String },
}

fn check_replacement(cluster: &str) -> Result<()> {
    let parts = script::cluster(cluster);
    if parts.len() != 1 {
        return Err(Error::InvalidEdit("replacement must be one cluster"));
    }
    Ok(())
}

/// Applies one edit to `word` and checks the result is exactly one cluster
/// edit away.
pub fn augment(word: &str, edit: &Edit) -> Result<String> {
    let mut clusters: Vec<String> = script::cluster(word).into_iter().map(|c| c.text).collect();
    let len = clusters.len();
    let out_of_range = |position| Error::PositionOutOfRange { position, len };
    match edit {
        Edit::Delete { position } => {
            if *position >= len {
                return Err(out_of_range(*position));
            }
            clusters.remove(*position);
        }
        Edit::Substitute { position, cluster } => {
            if *position >= len {
                return Err(out_of_range(*position));
            }
            check_replacement(cluster)?;
            clusters[*position].clone_from(cluster);
        }
        Edit::Insert { position, cluster } => {
            if *position > len {
                return Err(out_of_range(*position));
            }
            check_replacement(cluster)?;
            clusters.insert(*position, cluster.clone());
        }
    }
    let result: String = clusters.concat();
    if cluster_edit_distance(&script::cluster(word), &script::cluster(&result)) != 1 {
        return Err(Error::InvalidEdit("edit does not change exactly one cluster"));
    }
    Ok(result)
}

/// Applies one random edit drawn from `seed`. Replacements come from
/// `alphabet`. Fails if no valid edit turns up within a few draws.
pub fn augment_random(word: &str, alphabet: &[&str], seed: u64) -> Result<(String, Edit)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = script::cluster(word).len();
    for _ in 0..32 {
        let pick = |rng: &mut ChaCha8Rng| -> Option<String> {
            (!alphabet.is_empty()).then(|| String::from(alphabet[rng.random_range(0..alphabet.len())]))
        };
        let edit = match rng.random_range(0..3u8) {
            0 if len > 1 => Edit::Delete {
                position: rng.random_range(0..len),
            },
            1 if len > 0 => match pick(&mut rng) {
                Some(cluster) => Edit::Substitute {
                    position: rng.random_range(0..len),
                    cluster,
                },
                None => continue,
            },
            _ => match pick(&mut rng) {
                Some(cluster) => Edit::Insert {
                    position: rng.random_range(0..=len),
                    cluster,
                },
                None => continue,
            },
        };
        if let Ok(out) = augment(word, &edit) {
            return Ok((out, edit));
        }
    }
    Err(Error::InvalidEdit("no valid edit found"))
}

//! Text and JSON renderings of checker and benchmark output.

use std::collections::BTreeMap;
use std::fmt::Write;

use kspell_core::evalbench::{AccuracyTable, FlagTable};
use kspell_core::ner::EntitySpan;
use kspell_core::segmenter::{self, Token};
use kspell_core::{Candidate, CheckReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct TokenJson<'a> {
    pub text: &'a str,
    pub start: usize,
    pub end: usize,
    pub kind: &'static str,
    pub known: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subwords: Option<Vec<SubwordJson<'a>>>,
}

#[derive(Debug, Serialize)]
pub struct SubwordJson<'a> {
    pub text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joiner: Option<char>,
}

#[derive(Debug, Serialize)]
pub struct SuggestionJson<'a> {
    pub surface: &'a str,
    pub grapheme_dist: usize,
    pub phoneme_dist: usize,
    pub origin: &'static str,
}

#[derive(Debug, Serialize)]
pub struct HypothesisJson<'a> {
    pub sentence: &'a str,
    pub log_prob: f64,
}

#[derive(Debug, Serialize)]
pub struct EntityJson<'a> {
    pub start: usize,
    pub end: usize,
    pub surface: &'a str,
    pub source: &'static str,
}

#[derive(Debug, Serialize)]
pub struct CheckJson<'a> {
    pub sentence: &'a str,
    pub tokens: Vec<TokenJson<'a>>,
    pub entities: Vec<EntityJson<'a>>,
    pub flags: &'a [usize],
    pub suggestions: BTreeMap<usize, Vec<SuggestionJson<'a>>>,
    pub hypotheses: Vec<HypothesisJson<'a>>,
    pub outcomes: Vec<&'static str>,
}

pub fn token_json(t: &Token) -> TokenJson<'_> {
    TokenJson {
        text: &t.text,
        start: t.start,
        end: t.end,
        kind: match t.kind {
            segmenter::TokenKind::Word => "word",
            segmenter::TokenKind::Number => "number",
            segmenter::TokenKind::Separator => "separator",
        },
        known: t.known,
        subwords: t.subwords.as_ref().map(|s| {
            s.iter()
                .map(|s| SubwordJson {
                    text: &s.text,
                    joiner: s.joiner.map(|j| j.symbol()),
                })
                .collect()
        }),
    }
}

pub fn entity_json(e: &EntitySpan) -> EntityJson<'_> {
    EntityJson {
        start: e.start,
        end: e.end,
        surface: &e.surface,
        source: e.source.as_str(),
    }
}

fn suggestion_json(c: &Candidate) -> SuggestionJson<'_> {
    SuggestionJson {
        surface: &c.surface,
        grapheme_dist: c.grapheme_dist,
        phoneme_dist: c.phoneme_dist,
        origin: c.origin.as_str(),
    }
}

pub fn check_json(r: &CheckReport) -> CheckJson<'_> {
    CheckJson {
        sentence: &r.sentence,
        tokens: r.tokens.iter().map(token_json).collect(),
        entities: r.entities.iter().map(entity_json).collect(),
        flags: &r.flagged,
        suggestions: r
            .suggestions
            .iter()
            .map(|(&t, s)| (t, s.iter().map(suggestion_json).collect()))
            .collect(),
        hypotheses: r
            .hypotheses
            .iter()
            .map(|h| HypothesisJson {
                sentence: &h.sentence,
                log_prob: h.score,
            })
            .collect(),
        outcomes: r.outcomes.iter().map(|o| o.as_str()).collect(),
    }
}

/// Best hypothesis, then one line per flagged token:
/// `<TAB>token<TAB>outcome<TAB>suggestion (g/p) …`.
pub fn check_text(r: &CheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.best().sentence);
    for &t in &r.flagged {
        let sugg: Vec<String> = r.suggestions[&t]
            .iter()
            .map(|c| format!("{} ({}/{})", c.surface, c.grapheme_dist, c.phoneme_dist))
            .collect();
        let _ = writeln!(
            out,
            "\t{}\t{}\t{}",
            r.tokens[t].text,
            r.outcomes[t].as_str(),
            sugg.join(" ")
        );
    }
    out
}

#[derive(Debug, Serialize)]
pub struct StratumJson {
    pub edit_distance: Option<usize>,
    pub total: usize,
    pub correct: Vec<usize>,
    pub accuracy: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct BenchAJson {
    pub top_n: usize,
    pub strata: Vec<StratumJson>,
    pub histogram: BTreeMap<usize, usize>,
    pub categories: BTreeMap<&'static str, usize>,
}

/// Accuracy rounded to one decimal, as in the text tables.
fn round1(x: f64) -> f64 {
    format!("{x:.1}").parse().unwrap_or(x)
}

pub fn bench_a_json(t: &AccuracyTable) -> BenchAJson {
    let stratum = |d: Option<usize>, c: &kspell_core::evalbench::Counts| StratumJson {
        edit_distance: d,
        total: c.total,
        correct: c.correct.clone(),
        accuracy: (1..=t.top_n).map(|n| round1(c.accuracy(n))).collect(),
    };
    let mut strata: Vec<StratumJson> = t.strata.iter().map(|(&d, c)| stratum(Some(d), c)).collect();
    strata.push(stratum(None, &t.total));
    BenchAJson {
        top_n: t.top_n,
        strata,
        histogram: t.histogram(),
        categories: t.categories.iter().map(|(c, &n)| (c.as_str(), n)).collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct BenchBJson {
    pub flagged: usize,
    pub not_flagged: usize,
    pub total: usize,
    pub accuracy: f64,
}

pub fn bench_b_json(t: &FlagTable) -> BenchBJson {
    BenchBJson {
        flagged: t.flagged,
        not_flagged: t.not_flagged,
        total: t.total(),
        accuracy: round1(t.accuracy()),
    }
}

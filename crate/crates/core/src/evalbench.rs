//! Benchmark scoring over seeded-error and seeded-name datasets.
//!
//! Dataset A rows are `sentence<TAB>misspelled<TAB>correct`, with an
//! optional fourth column of `|`-separated alternates that also count as
//! right. Dataset B rows are `name<TAB>sentence`. Only the seeded span is
//! checked in Dataset A.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::checker::{CheckOptions, CheckReport, CheckerConfig, Engine, TokenOutcome};
use crate::error::{Error, Result};
use crate::lexicon::cluster_edit_distance;
use crate::script::{self, GraphemeCluster};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetARecord {
    pub sentence: String,
    pub misspelled: String,
    pub correct: String,
    pub alternates: Vec<String>,
    /// Cluster edit distance between the misspelled and correct words.
    pub edit_dist: usize,
    /// Cluster offsets of the first occurrence of the misspelled word.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetBRecord {
    pub name: String,
    pub sentence: String,
    pub span: (usize, usize),
}

/// First occurrence of `needle` in `hay`, on cluster boundaries.
pub fn find_clusters(hay: &[GraphemeCluster], needle: &[GraphemeCluster]) -> Option<(usize, usize)> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len())
        .find(|&i| hay[i..i + needle.len()] == *needle)
        .map(|i| (i, i + needle.len()))
}

impl DatasetARecord {
    pub fn new(
        sentence: &str,
        misspelled: &str,
        correct: &str,
        alternates: Vec<String>,
    ) -> core::result::Result<Self, &'static str> {
        let sentence = script::normalize(sentence.trim());
        let misspelled = script::normalize(misspelled.trim());
        let correct = script::normalize(correct.trim());
        if misspelled.is_empty() || correct.is_empty() {
            return Err("empty word");
        }
        let sc = script::cluster(&sentence);
        let mc = script::cluster(&misspelled);
        let span = find_clusters(&sc, &mc).ok_or("misspelled word not in sentence")?;
        let edit_dist = cluster_edit_distance(&mc, &script::cluster(&correct));
        if edit_dist == 0 {
            return Err("misspelled and correct words are equal");
        }
        Ok(DatasetARecord {
            sentence,
            misspelled,
            correct,
            alternates: alternates
                .iter()
                .map(|a| script::normalize(a.trim()))
                .filter(|a| !a.is_empty())
                .collect(),
            edit_dist,
            span,
        })
    }

    /// True if `word` is the gold word or an accepted alternate.
    pub fn accepts(&self, word: &str) -> bool {
        word == self.correct || self.alternates.iter().any(|a| a == word)
    }
}

impl DatasetBRecord {
    pub fn new(name: &str, sentence: &str) -> core::result::Result<Self, &'static str> {
        let name = script::normalize(name.trim());
        let sentence = script::normalize(sentence.trim());
        if name.is_empty() {
            return Err("empty name");
        }
        let span = find_clusters(&script::cluster(&sentence), &script::cluster(&name))
            .ok_or("name not in sentence")?;
        Ok(DatasetBRecord { name, sentence, span })
    }
}

fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim_end_matches('\r');
        (!l.trim().is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split('\t').collect()))
    })
}

pub fn parse_dataset_a(text: &str) -> Result<Vec<DatasetARecord>> {
    rows(text)
        .map(|(line, cols)| {
            if !(3..=4).contains(&cols.len()) {
                return Err(Error::parse(line, "expected sentence, misspelled, correct[, alternates]"));
            }
            let alternates = cols
                .get(3)
                .map(|a| a.split('|').map(String::from).collect())
                .unwrap_or_default();
            DatasetARecord::new(cols[0], cols[1], cols[2], alternates).map_err(|m| Error::parse(line, m))
        })
        .collect()
}

pub fn parse_dataset_b(text: &str) -> Result<Vec<DatasetBRecord>> {
    rows(text)
        .map(|(line, cols)| {
            if cols.len() != 2 {
                return Err(Error::parse(line, "expected name, sentence"));
            }
            DatasetBRecord::new(cols[0], cols[1]).map_err(|m| Error::parse(line, m))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeCategory {
    Nd,
    Nc,
    Wc,
    Rc,
}

impl OutcomeCategory {
    pub const ALL: [OutcomeCategory; 4] = [
        OutcomeCategory::Nd,
        OutcomeCategory::Nc,
        OutcomeCategory::Wc,
        OutcomeCategory::Rc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeCategory::Nd => "ND",
            OutcomeCategory::Nc => "NC",
            OutcomeCategory::Wc => "WC",
            OutcomeCategory::Rc => "RC",
        }
    }
}

/// Category of a Dataset A record given the report for its sentence.
pub fn categorize(record: &DatasetARecord, report: &CheckReport) -> OutcomeCategory {
    let Some(t) = seeded_token(record, report) else {
        return OutcomeCategory::Nd;
    };
    if !report.flagged.contains(&t) {
        return OutcomeCategory::Nd;
    }
    if report.outcomes[t] == TokenOutcome::NoCandidates {
        return OutcomeCategory::Nc;
    }
    match report.best().replacement_for(t) {
        Some(w) if record.accepts(w) => OutcomeCategory::Rc,
        _ => OutcomeCategory::Wc,
    }
}

fn seeded_token(record: &DatasetARecord, report: &CheckReport) -> Option<usize> {
    report.token_at(record.span.0, record.span.1)
}

/// Per-record result of Dataset A scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecordResultA {
    pub edit_dist: usize,
    /// Smallest n whose top-n hypotheses hold an accepted correction.
    pub hit_rank: Option<usize>,
    pub category: OutcomeCategory,
}

/// Scores one record from its report.
pub fn score_report_a(record: &DatasetARecord, report: &CheckReport) -> RecordResultA {
    let hit_rank = seeded_token(record, report).and_then(|t| {
        report
            .hypotheses
            .iter()
            .position(|h| h.replacement_for(t).is_some_and(|w| record.accepts(w)))
            .map(|i| i + 1)
    });
    RecordResultA {
        edit_dist: record.edit_dist,
        hit_rank,
        category: categorize(record, report),
    }
}

pub fn score_a(record: &DatasetARecord, engine: &Engine, cfg: &CheckerConfig) -> Result<RecordResultA> {
    let opts = CheckOptions {
        focus: Some(record.span),
    };
    let report = engine.check_with(&record.sentence, cfg, &opts)?;
    Ok(score_report_a(record, &report))
}

/// True if any flagged token overlaps the seeded name.
pub fn score_b(record: &DatasetBRecord, engine: &Engine, cfg: &CheckerConfig) -> bool {
    let report = engine.check(&record.sentence, cfg);
    report
        .flagged
        .iter()
        .any(|&t| report.tokens[t].overlaps(record.span.0, record.span.1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub total: usize,
    /// `correct[n - 1]` is the number right within the top n.
    pub correct: Vec<usize>,
}

impl Counts {
    fn new(top_n: usize) -> Self {
        Counts {
            total: 0,
            correct: alloc::vec![0; top_n],
        }
    }

    fn add(&mut self, hit_rank: Option<usize>) {
        self.total += 1;
        if let Some(r) = hit_rank {
            for c in self.correct.iter_mut().skip(r - 1) {
                *c += 1;
            }
        }
    }

    /// Accuracy within the top `n`, in percent.
    pub fn accuracy(&self, n: usize) -> f64 {
        percent(self.correct[n - 1], self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyTable {
    pub top_n: usize,
    pub strata: BTreeMap<usize, Counts>,
    pub total: Counts,
    pub categories: BTreeMap<OutcomeCategory, usize>,
}

impl AccuracyTable {
    /// Histogram of edit distances.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        self.strata.iter().map(|(&d, c)| (d, c.total)).collect()
    }
}

pub fn percent(part: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * part as f64 / total as f64
    }
}

/// Percentage with one decimal.
pub fn pct(part: usize, total: usize) -> String {
    format!("{:.1}", percent(part, total))
}

/// Builds the accuracy table from per-record results, in any order.
pub fn aggregate_a(results: &[RecordResultA], top_n: usize) -> Result<AccuracyTable> {
    if results.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut table = AccuracyTable {
        top_n,
        strata: BTreeMap::new(),
        total: Counts::new(top_n),
        categories: OutcomeCategory::ALL.iter().map(|&c| (c, 0)).collect(),
    };
    for r in results {
        let hit = r.hit_rank.filter(|&n| n <= top_n);
        table
            .strata
            .entry(r.edit_dist)
            .or_insert_with(|| Counts::new(top_n))
            .add(hit);
        table.total.add(hit);
        *table.categories.entry(r.category).or_insert(0) += 1;
    }
    Ok(table)
}

pub fn evaluate_a(records: &[DatasetARecord], engine: &Engine, cfg: &CheckerConfig) -> Result<AccuracyTable> {
    let results = records
        .iter()
        .map(|r| score_a(r, engine, cfg))
        .collect::<Result<Vec<_>>>()?;
    aggregate_a(&results, cfg.top_n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlagTable {
    pub flagged: usize,
    pub not_flagged: usize,
}

impl FlagTable {
    pub fn total(&self) -> usize {
        self.flagged + self.not_flagged
    }

    /// Names left alone, in percent.
    pub fn accuracy(&self) -> f64 {
        percent(self.not_flagged, self.total())
    }
}

pub fn aggregate_b(flags: &[bool]) -> Result<FlagTable> {
    if flags.is_empty() {
        return Err(Error::NoRecords);
    }
    let flagged = flags.iter().filter(|f| **f).count();
    Ok(FlagTable {
        flagged,
        not_flagged: flags.len() - flagged,
    })
}

pub fn evaluate_b(records: &[DatasetBRecord], engine: &Engine, cfg: &CheckerConfig) -> Result<FlagTable> {
    let flags: Vec<bool> = records.iter().map(|r| score_b(r, engine, cfg)).collect();
    aggregate_b(&flags)
}

/// Accuracy by edit distance: one column per distance plus a total, rows
/// for record counts and for correct counts and accuracy at each top n.
pub fn accuracy_tsv(t: &AccuracyTable) -> String {
    let mut out = String::from("Case");
    for d in t.strata.keys() {
        let _ = write!(out, "\t{d}");
    }
    out.push_str("\tTotal\n");
    let cols: Vec<&Counts> = t.strata.values().chain(core::iter::once(&t.total)).collect();
    out.push_str("Total");
    for c in &cols {
        let _ = write!(out, "\t{}", c.total);
    }
    out.push('\n');
    for n in 1..=t.top_n {
        let _ = write!(out, "Corr.@T{n}");
        for c in &cols {
            let _ = write!(out, "\t{}", c.correct[n - 1]);
        }
        out.push('\n');
        let _ = write!(out, "Acc.@T{n}");
        for c in &cols {
            let _ = write!(out, "\t{}", pct(c.correct[n - 1], c.total));
        }
        out.push('\n');
    }
    out
}

pub fn histogram_tsv(t: &AccuracyTable) -> String {
    let mut out = String::from("distance\tcount\n");
    for (d, c) in t.histogram() {
        let _ = writeln!(out, "{d}\t{c}");
    }
    out
}

/// Category shares in percent.
pub fn category_tsv(t: &AccuracyTable) -> String {
    let mut out = String::from("Case\tCount\t%\n");
    for (cat, n) in &t.categories {
        let _ = writeln!(out, "{}\t{}\t{}", cat.as_str(), n, pct(*n, t.total.total));
    }
    out
}

pub fn flag_summary_tsv(t: &FlagTable) -> String {
    format!(
        "Case\tTotal\nCorrect\t{}\nTotal\t{}\nAccuracy\t{}\n",
        t.not_flagged,
        t.total(),
        pct(t.not_flagged, t.total())
    )
}

/// Flagged and not-flagged shares for one method row.
pub fn flag_rate_tsv(method: &str, t: &FlagTable) -> String {
    format!(
        "Method\tMisspelled\tNot Misspelled\n{}\t{}\t{}\n",
        method,
        pct(t.flagged, t.total()),
        pct(t.not_flagged, t.total())
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2p::G2p;
    use crate::lexicon::{Lexicon, LexiconRecord};
    use crate::lm::CharLm;
    use crate::ner::Gazetteer;
    use crate::segmenter::AffixList;
    use alloc::vec;
    use proptest::prelude::*;

    fn result(d: usize, hit: Option<usize>, cat: OutcomeCategory) -> RecordResultA {
        RecordResultA { edit_dist: d, hit_rank: hit, category: cat }
    }

    /// Results with `t1`, `t2`, `t3` cumulative correct counts out of `n`.
    fn synthetic(d: usize, n: usize, t1: usize, t2: usize, t3: usize) -> Vec<RecordResultA> {
        (0..n)
            .map(|i| {
                let hit = if i < t1 {
                    Some(1)
                } else if i < t2 {
                    Some(2)
                } else if i < t3 {
                    Some(3)
                } else {
                    None
                };
                result(d, hit, OutcomeCategory::Rc)
            })
            .collect()
    }

    #[test]
    fn accuracy_table_layout() {
        let mut rs = synthetic(1, 177, 143, 156, 167);
        rs.extend(synthetic(2, 119, 96, 106, 109));
        rs.extend(synthetic(3, 24, 18, 18, 18));
        rs.extend(synthetic(4, 1, 1, 1, 1));
        let t = aggregate_a(&rs, 3).unwrap();
        let tsv = accuracy_tsv(&t);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "Case\t1\t2\t3\t4\tTotal");
        assert_eq!(lines[1], "Total\t177\t119\t24\t1\t321");
        assert_eq!(lines[2], "Corr.@T1\t143\t96\t18\t1\t258");
        assert_eq!(lines[3], "Acc.@T1\t80.8\t80.7\t75.0\t100.0\t80.4");
        assert_eq!(lines[5], "Acc.@T2\t88.1\t89.1\t75.0\t100.0\t87.5");
        assert_eq!(lines[7], "Acc.@T3\t94.4\t91.6\t75.0\t100.0\t91.9");
        assert_eq!(histogram_tsv(&t), "distance\tcount\n1\t177\n2\t119\n3\t24\n4\t1\n");
    }

    #[test]
    fn flag_tables() {
        let mut flags = vec![false; 107];
        flags.push(true);
        let t = aggregate_b(&flags).unwrap();
        assert_eq!(flag_summary_tsv(&t), "Case\tTotal\nCorrect\t107\nTotal\t108\nAccuracy\t99.1\n");
        assert_eq!(flag_rate_tsv("Ours", &t), "Method\tMisspelled\tNot Misspelled\nOurs\t0.9\t99.1\n");
        assert_eq!(aggregate_b(&[]).unwrap_err(), Error::NoRecords);
    }

    #[test]
    fn categories_table() {
        let rs = [
            result(1, None, OutcomeCategory::Nd),
            result(1, None, OutcomeCategory::Nc),
            result(1, Some(2), OutcomeCategory::Wc),
            result(1, Some(1), OutcomeCategory::Rc),
        ];
        let t = aggregate_a(&rs, 3).unwrap();
        assert_eq!(category_tsv(&t), "Case\tCount\t%\nND\t1\t25.0\nNC\t1\t25.0\nWC\t1\t25.0\nRC\t1\t25.0\n");
    }

    #[test]
    fn all_right_is_hundred_everywhere() {
        let t = aggregate_a(&synthetic(1, 5, 5, 5, 5), 3).unwrap();
        for n in 1..=3 {
            assert_eq!(pct(t.total.correct[n - 1], t.total.total), "100.0");
        }
        assert_eq!(aggregate_a(&[], 3).unwrap_err(), Error::NoRecords);
    }

    #[test]
    fn dataset_parsing() {
        assert!(parse_dataset_a("").unwrap().is_empty());
        let a = parse_dataset_a("គាត់ជាមនុស្សទន់ភ្លុន\tទន់ភ្លុន\tទន់ភ្លន់\n").unwrap();
        assert_eq!(a.len(), 1);
        // ទ ន់ ភ្លុ ន against ទ ន់ ភ្ល ន់: two substitutions
        assert_eq!(a[0].edit_dist, 2);
        let err = parse_dataset_a("# header\nabc\tabd\tabx\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, message: "misspelled word not in sentence".into() });
        let alt = parse_dataset_a("ab cd\tcd\tce\tcf|cg\n").unwrap();
        assert!(alt[0].accepts("cg") && alt[0].accepts("ce") && !alt[0].accepts("cd"));
        let b = parse_dataset_b("កន្ទីថា\tខ្ញុំជួប កន្ទីថា\n").unwrap();
        assert_eq!(b[0].span, (4, 7));
        assert!(parse_dataset_b("x\tyyy\n").is_err());
        assert!(parse_dataset_b("only-one-column\n").is_err());
    }

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

    #[test]
    fn categorize_cases() {
        let e = engine(&["ខ្ញុំ", "ទៅ", "សាលា", "រៀន"], &["ខ្ញុំទៅសាលារៀន"], &[]);
        let cfg = CheckerConfig::default();
        let run = |s: &str, m: &str, c: &str| {
            let r = DatasetARecord::new(s, m, c, vec![]).unwrap();
            score_a(&r, &e, &cfg).unwrap()
        };
        // seeded word that is in the lexicon is never flagged
        assert_eq!(run("ខ្ញុំទៅសាលារៀន", "ទៅ", "ទ").category, OutcomeCategory::Nd);
        let rc = run("ខ្ញុំទៅសាលរៀន", "សាល", "សាលា");
        assert_eq!(rc.category, OutcomeCategory::Rc);
        assert_eq!(rc.hit_rank, Some(1));
        assert_eq!(run("ខ្ញុំទៅxyzwvu", "xyzwvu", "សាលា").category, OutcomeCategory::Nc);
        assert_eq!(run("ខ្ញុំទៅសាលរៀន", "សាល", "សាល្យ").category, OutcomeCategory::Wc);
    }

    #[test]
    fn names_in_gazetteer_are_never_flagged() {
        let e = engine(&["ខ្ញុំ", "ជួប"], &["ខ្ញុំជួប"], &["សុខា", "ដារា"]);
        let cfg = CheckerConfig::default();
        let recs = parse_dataset_b("សុខា\tខ្ញុំជួបសុខា\nដារា\tដារាជួបខ្ញុំ\n").unwrap();
        let t = evaluate_b(&recs, &e, &cfg).unwrap();
        assert_eq!((t.flagged, t.accuracy()), (0, 100.0));
        let bare = engine(&["ខ្ញុំ", "ជួប"], &["ខ្ញុំជួប"], &[]);
        assert_eq!(evaluate_b(&recs, &bare, &cfg).unwrap().flagged, 2);
    }

    proptest! {
        #[test]
        fn accuracy_is_monotone_and_categories_partition(
            rs in proptest::collection::vec((1usize..5, proptest::option::of(1usize..5), 0usize..4), 1..80)
        ) {
            let rs: Vec<RecordResultA> = rs
                .into_iter()
                .map(|(d, h, c)| result(d, h, OutcomeCategory::ALL[c]))
                .collect();
            let t = aggregate_a(&rs, 3).unwrap();
            for c in t.strata.values().chain(core::iter::once(&t.total)) {
                prop_assert!(c.accuracy(1) <= c.accuracy(2));
                prop_assert!(c.accuracy(2) <= c.accuracy(3));
            }
            let sum: f64 = t.categories.values().map(|&n| percent(n, t.total.total)).sum();
            prop_assert!((sum - 100.0).abs() < 1e-9);
            let hist: usize = t.histogram().values().sum();
            prop_assert_eq!(hist, rs.len());
        }
    }
}

//! On-disk formats. All files are UTF-8; `#` starts a comment line.
//!
//! | file | row |
//! |------|-----|
//! | lexicon | `surface[<TAB>frequency[<TAB>phonemes]]` |
//! | pronunciations | `surface<TAB>phonemes` |
//! | gazetteer | one name per line |
//! | affixes | `affix<TAB>prefix\|suffix` |
//! | honorifics | `title[<TAB>gloss]` |
//! | g2p eval | `word<TAB>phonemes` |
//! | language model | see [`write_lm`] |
//!
//! Phonemes are space-separated tokens.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use kspell_core::evalbench::{self, DatasetARecord, DatasetBRecord};
use kspell_core::lm::{CharLm, LmSymbol};
use kspell_core::{AffixList, LexiconRecord, PhonemeSeq, PronLexicon, RuleTable};

pub const LM_MAGIC: &str = "# kspell-lm";
pub const LM_VERSION: u32 = 1;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

pub fn split_phonemes(s: &str) -> PhonemeSeq {
    s.split_whitespace().map(String::from).collect()
}

pub fn parse_lexicon(text: &str) -> Result<Vec<LexiconRecord>> {
    rows(text)
        .map(|(line, row)| {
            let mut cols = row.split('\t');
            let surface = cols.next().unwrap_or_default().trim();
            if surface.is_empty() {
                bail!("line {line}: empty surface");
            }
            let frequency = match cols.next().map(str::trim) {
                None | Some("") => None,
                Some(f) => Some(
                    f.parse::<u64>()
                        .with_context(|| format!("line {line}: bad frequency {f:?}"))?,
                ),
            };
            let phonemes = cols.next().map(split_phonemes).filter(|p| !p.is_empty());
            Ok(LexiconRecord {
                surface: surface.to_string(),
                phonemes,
                frequency,
            })
        })
        .collect()
}

pub fn read_lexicon(path: &Path) -> Result<Vec<LexiconRecord>> {
    parse_lexicon(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn parse_pron(text: &str, source: &str) -> Result<PronLexicon> {
    let mut pron = PronLexicon::new(source);
    for (line, row) in rows(text) {
        let Some((surface, phonemes)) = row.split_once('\t') else {
            bail!("line {line}: expected surface<TAB>phonemes");
        };
        let phonemes = split_phonemes(phonemes);
        if surface.trim().is_empty() || phonemes.is_empty() {
            bail!("line {line}: empty surface or phonemes");
        }
        pron.insert(surface.trim(), phonemes);
    }
    Ok(pron)
}

pub fn read_pron(path: &Path) -> Result<PronLexicon> {
    parse_pron(&read_text(path)?, &path.display().to_string())
        .with_context(|| format!("in {}", path.display()))
}

pub fn read_rules(path: &Path) -> Result<RuleTable> {
    RuleTable::parse(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn parse_names(text: &str) -> Vec<String> {
    rows(text).map(|(_, l)| l.trim().to_string()).collect()
}

pub fn read_names(path: &Path) -> Result<Vec<String>> {
    Ok(parse_names(&read_text(path)?))
}

pub fn read_affixes(path: &Path) -> Result<AffixList> {
    AffixList::parse(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn parse_honorifics(text: &str) -> Vec<String> {
    rows(text)
        .map(|(_, l)| l.split('\t').next().unwrap_or_default().trim().to_string())
        .filter(|h| !h.is_empty())
        .collect()
}

pub fn read_honorifics(path: &Path) -> Result<Vec<String>> {
    Ok(parse_honorifics(&read_text(path)?))
}

pub fn read_dataset_a(path: &Path) -> Result<Vec<DatasetARecord>> {
    evalbench::parse_dataset_a(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_dataset_b(path: &Path) -> Result<Vec<DatasetBRecord>> {
    evalbench::parse_dataset_b(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

/// Reference pronunciations for G2P evaluation.
pub fn parse_g2p_eval(text: &str) -> Result<Vec<(String, PhonemeSeq)>> {
    rows(text)
        .map(|(line, row)| {
            let Some((word, phonemes)) = row.split_once('\t') else {
                bail!("line {line}: expected word<TAB>phonemes");
            };
            Ok((word.trim().to_string(), split_phonemes(phonemes)))
        })
        .collect()
}

fn symbol_text(s: LmSymbol) -> String {
    match s {
        LmSymbol::Start => "<s>".to_string(),
        LmSymbol::Unk => "<unk>".to_string(),
        LmSymbol::Char(c) => format!("{:04X}", c as u32),
    }
}

fn parse_symbol(s: &str) -> Result<LmSymbol> {
    match s {
        "<s>" => Ok(LmSymbol::Start),
        "<unk>" => Ok(LmSymbol::Unk),
        hex => {
            let cp = u32::from_str_radix(hex, 16).with_context(|| format!("bad code point {hex:?}"))?;
            char::from_u32(cp)
                .map(LmSymbol::Char)
                .with_context(|| format!("not a character: {hex}"))
        }
    }
}

/// Writes a model as text. The first line is
/// `# kspell-lm<TAB>version=1<TAB>order=N`; each further line is
/// `count<TAB>s1 s2 … sN` with symbols as hex code points and `<s>` for
/// the sentence start. Rows follow the model's own stable order, so the
/// same model always gives the same bytes.
pub fn write_lm(lm: &CharLm, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{LM_MAGIC}\tversion={LM_VERSION}\torder={}", lm.order())?;
    for (gram, count) in lm.ngram_counts() {
        let syms: Vec<String> = gram.into_iter().map(symbol_text).collect();
        writeln!(out, "{count}\t{}", syms.join(" "))?;
    }
    Ok(())
}

pub fn parse_lm(text: &str) -> Result<CharLm> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, l)| l).unwrap_or_default();
    let mut fields = header.split('\t');
    if fields.next() != Some(LM_MAGIC) {
        bail!("line 1: not a kspell language model");
    }
    let mut version = None;
    let mut order = None;
    for f in fields {
        match f.split_once('=') {
            Some(("version", v)) => version = v.parse::<u32>().ok(),
            Some(("order", v)) => order = v.parse::<usize>().ok(),
            _ => bail!("line 1: unknown header field {f:?}"),
        }
    }
    if version != Some(LM_VERSION) {
        bail!("line 1: unsupported model version");
    }
    let order = order.context("line 1: missing order")?;
    let mut grams = Vec::new();
    for (i, row) in lines {
        if row.trim().is_empty() {
            continue;
        }
        let line = i + 1;
        let (count, syms) = row
            .split_once('\t')
            .with_context(|| format!("line {line}: expected count<TAB>symbols"))?;
        let count: u64 = count
            .parse()
            .with_context(|| format!("line {line}: bad count"))?;
        let syms = syms
            .split(' ')
            .map(parse_symbol)
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("line {line}"))?;
        grams.push((syms, count));
    }
    Ok(CharLm::from_ngram_counts(order, grams)?)
}

pub fn read_lm(path: &Path) -> Result<CharLm> {
    parse_lm(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn save_lm(lm: &CharLm, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_lm(lm, &mut buf)?;
    fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicon_rows() {
        let recs = parse_lexicon("# words\nតម្លៃ\t42\tt a m l ai\nសាលា\n\nរៀន\t7\n").unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].frequency, Some(42));
        assert_eq!(recs[0].phonemes.as_ref().unwrap().len(), 5);
        assert_eq!(recs[1].frequency, None);
        assert_eq!(recs[2].phonemes, None);
        let err = parse_lexicon("a\tx\n").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn pron_rows() {
        let p = parse_pron("តម្លៃ\tt a m l ai\n", "test").unwrap();
        assert_eq!(p.get("តម្លៃ").unwrap().len(), 5);
        assert!(parse_pron("តម្លៃ\n", "test").is_err());
    }

    #[test]
    fn names_and_honorifics() {
        assert_eq!(parse_names("# names\nសុខា\n\nដារា\n"), ["សុខា", "ដារា"]);
        assert_eq!(parse_honorifics("លោក\tMr.\nលោកស្រី\n"), ["លោក", "លោកស្រី"]);
    }

    #[test]
    fn lm_round_trip_is_byte_stable() {
        let lm = CharLm::train(["ខ្ញុំទៅសាលា", "ab c"], 4).unwrap();
        let mut a = Vec::new();
        write_lm(&lm, &mut a).unwrap();
        let back = parse_lm(std::str::from_utf8(&a).unwrap()).unwrap();
        assert_eq!(back, lm);
        let mut b = Vec::new();
        write_lm(&back, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("# kspell-lm\tversion=1\torder=4\n"));
    }

    #[test]
    fn lm_header_is_checked() {
        assert!(parse_lm("").is_err());
        assert!(parse_lm("# kspell-lm\tversion=9\torder=3\n").is_err());
        assert!(parse_lm("# kspell-lm\tversion=1\torder=2\n1\tzz 61\n").is_err());
    }
}

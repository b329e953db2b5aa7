//! Engine configuration: resource paths plus checker settings.
//!
//! A config file is TOML. Relative paths are taken from the file's own
//! directory. Command line flags override file values.
//!
//! ```toml
//! lexicon = "lexicon.tsv"
//! pron = "pron.tsv"
//! rules = "g2p_rules.tsv"
//! gazetteer = "names.txt"
//! affixes = "affixes.tsv"
//! honorifics = "honorifics.tsv"
//! lm = "model.lm"
//!
//! [checker]
//! k = 3
//! eps = 3
//! eps_p = 1
//! beam = 64
//! top_n = 3
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use kspell_core::lm::LmTrainer;
use kspell_core::ner::builtin_honorifics;
use kspell_core::{AffixList, CheckerConfig, Engine, G2p, Gazetteer, Lexicon, PronLexicon, RuleTable};
use serde::Deserialize;

use crate::formats;

/// Order of the fallback model trained on lexicon words.
pub const FALLBACK_LM_ORDER: usize = 5;

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckerSection {
    pub k: Option<usize>,
    pub eps: Option<usize>,
    pub eps_p: Option<usize>,
    pub beam: Option<usize>,
    pub top_n: Option<usize>,
}

impl CheckerSection {
    /// Fills unset values from `base`.
    pub fn apply(&self, base: CheckerConfig) -> CheckerConfig {
        CheckerConfig {
            k: self.k.unwrap_or(base.k),
            eps: self.eps.unwrap_or(base.eps),
            eps_p: self.eps_p.unwrap_or(base.eps_p),
            beam: self.beam.unwrap_or(base.beam),
            top_n: self.top_n.unwrap_or(base.top_n),
        }
    }

    /// Values set in `over` win.
    pub fn merge(&self, over: &CheckerSection) -> CheckerSection {
        CheckerSection {
            k: over.k.or(self.k),
            eps: over.eps.or(self.eps),
            eps_p: over.eps_p.or(self.eps_p),
            beam: over.beam.or(self.beam),
            top_n: over.top_n.or(self.top_n),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub lexicon: Option<PathBuf>,
    pub pron: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub affixes: Option<PathBuf>,
    pub honorifics: Option<PathBuf>,
    pub lm: Option<PathBuf>,
    #[serde(default)]
    pub checker: CheckerSection,
}

impl EngineConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: EngineConfig = toml::from_str(text)?;
        for p in [
            &mut cfg.lexicon,
            &mut cfg.pron,
            &mut cfg.rules,
            &mut cfg.gazetteer,
            &mut cfg.affixes,
            &mut cfg.honorifics,
            &mut cfg.lm,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = formats::read_text(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).with_context(|| format!("in {}", path.display()))
    }

    /// Values set in `over` win.
    pub fn merge(self, over: EngineConfig) -> EngineConfig {
        EngineConfig {
            lexicon: over.lexicon.or(self.lexicon),
            pron: over.pron.or(self.pron),
            rules: over.rules.or(self.rules),
            gazetteer: over.gazetteer.or(self.gazetteer),
            affixes: over.affixes.or(self.affixes),
            honorifics: over.honorifics.or(self.honorifics),
            lm: over.lm.or(self.lm),
            checker: self.checker.merge(&over.checker),
        }
    }

    pub fn checker_config(&self) -> Result<CheckerConfig> {
        let cfg = self.checker.apply(CheckerConfig::default());
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load_g2p(&self) -> Result<G2p> {
        let pron = match &self.pron {
            Some(p) => formats::read_pron(p)?,
            None => PronLexicon::new("none"),
        };
        let rules = match &self.rules {
            Some(p) => formats::read_rules(p)?,
            None => RuleTable::builtin(),
        };
        Ok(G2p::new(pron, rules))
    }

    pub fn load_gazetteer(&self) -> Result<Gazetteer> {
        let names = match &self.gazetteer {
            Some(p) => formats::read_names(p)?,
            None => Vec::new(),
        };
        let honorifics = match &self.honorifics {
            Some(p) => formats::read_honorifics(p)?,
            None => builtin_honorifics(),
        };
        Ok(Gazetteer::new(names, honorifics))
    }

    pub fn load_lexicon(&self, g2p: &G2p) -> Result<Lexicon> {
        let path = self.lexicon.as_ref().context("no lexicon given (--lexicon or config)")?;
        let records = formats::read_lexicon(path)?;
        Lexicon::build(records, g2p).with_context(|| format!("in {}", path.display()))
    }

    /// Loads every resource. Without a model file, a model is trained on
    /// the lexicon words, each repeated by its frequency.
    pub fn load_engine(&self) -> Result<Engine> {
        let g2p = self.load_g2p()?;
        let lexicon = self.load_lexicon(&g2p)?;
        let gazetteer = self.load_gazetteer()?;
        let affixes = match &self.affixes {
            Some(p) => formats::read_affixes(p)?,
            None => AffixList::builtin(),
        };
        let lm = match &self.lm {
            Some(p) => formats::read_lm(p)?,
            None => {
                let mut t = LmTrainer::new(FALLBACK_LM_ORDER)?;
                for e in lexicon.entries() {
                    t.add_line_weighted(&e.surface, e.frequency);
                }
                t.finish()?
            }
        };
        Ok(Engine {
            lexicon,
            g2p,
            gazetteer,
            affixes,
            lm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_resolves_relative_paths() {
        let cfg = EngineConfig::parse(
            "lexicon = \"lex.tsv\"\nlm = \"/abs/model.lm\"\n[checker]\nk = 5\n",
            Path::new("/data"),
        )
        .unwrap();
        assert_eq!(cfg.lexicon.as_deref(), Some(Path::new("/data/lex.tsv")));
        assert_eq!(cfg.lm.as_deref(), Some(Path::new("/abs/model.lm")));
        let c = cfg.checker_config().unwrap();
        assert_eq!((c.k, c.eps, c.top_n), (5, 3, 3));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(EngineConfig::parse("lexicn = \"x\"\n", Path::new(".")).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = EngineConfig {
            lexicon: Some("a".into()),
            checker: CheckerSection { k: Some(4), eps: Some(2), ..Default::default() },
            ..Default::default()
        };
        let flags = EngineConfig {
            lexicon: Some("b".into()),
            checker: CheckerSection { k: Some(7), ..Default::default() },
            ..Default::default()
        };
        let m = file.merge(flags);
        assert_eq!(m.lexicon.as_deref(), Some(Path::new("b")));
        assert_eq!((m.checker.k, m.checker.eps), (Some(7), Some(2)));
    }

    #[test]
    fn invalid_checker_values_fail() {
        let cfg = EngineConfig {
            checker: CheckerSection { top_n: Some(100), ..Default::default() },
            ..Default::default()
        };
        assert!(cfg.checker_config().is_err());
    }
}

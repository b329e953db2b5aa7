use std::io::{self, BufRead, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kspell_core::evalbench;
use kspell_core::lm::LmTrainer;
use kspell_core::script;
use kspell_core::segmenter::{self, boundary_labels};
use kspell_core::{ner, AffixList};
use kspell::config::{CheckerSection, EngineConfig};
use kspell::{bench, formats, report};

#[derive(Parser)]
#[command(name = "kspell", about = "Khmer spellchecker", disable_version_flag = true)]
struct Cli {
    /// Print engine and data table versions
    #[arg(long)]
    version: bool,
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Default)]
struct EngineArgs {
    /// TOML config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Pronunciation lexicon
    #[arg(long)]
    pron: Option<PathBuf>,
    /// G2P rule table (default: built in)
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    /// Affix list (default: built in)
    #[arg(long)]
    affixes: Option<PathBuf>,
    /// Honorific list (default: built in)
    #[arg(long)]
    honorifics: Option<PathBuf>,
    /// Language model (default: trained on the lexicon)
    #[arg(long)]
    lm: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<usize>,
    #[arg(long)]
    eps_p: Option<usize>,
    #[arg(long)]
    beam: Option<usize>,
    #[arg(long)]
    top_n: Option<usize>,
}

impl EngineArgs {
    fn resolve(&self) -> Result<EngineConfig> {
        let file = match &self.config {
            Some(p) => EngineConfig::load(p)?,
            None => EngineConfig::default(),
        };
        Ok(file.merge(EngineConfig {
            lexicon: self.lexicon.clone(),
            pron: self.pron.clone(),
            rules: self.rules.clone(),
            gazetteer: self.gazetteer.clone(),
            affixes: self.affixes.clone(),
            honorifics: self.honorifics.clone(),
            lm: self.lm.clone(),
            checker: CheckerSection {
                k: self.k,
                eps: self.eps,
                eps_p: self.eps_p,
                beam: self.beam,
                top_n: self.top_n,
            },
        }))
    }
}

#[derive(Args)]
struct Input {
    /// Read lines from this file instead of stdin
    #[arg(long)]
    input: Option<PathBuf>,
    /// Text to process; stdin or --input is read when absent
    text: Vec<String>,
}

impl Input {
    /// Non-empty input lines, normalized.
    fn lines(&self) -> Result<Vec<String>> {
        let raw: Vec<String> = if !self.text.is_empty() {
            self.text.clone()
        } else if let Some(p) = &self.input {
            formats::read_text(p)?.lines().map(String::from).collect()
        } else {
            io::stdin().lock().lines().collect::<io::Result<_>>()?
        };
        Ok(raw
            .iter()
            .map(|l| script::normalize(l.trim_end_matches('\r')))
            .filter(|l| !l.is_empty())
            .collect())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Dataset {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Flag and correct misspellings, one sentence per line
    Check {
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        input: Input,
    },
    /// Segment sentences into words with compound markers
    Segment {
        #[command(flatten)]
        engine: EngineArgs,
        /// Print one boundary label per cluster instead
        #[arg(long)]
        labels: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Convert words to phonemes
    G2p {
        #[command(flatten)]
        engine: EngineArgs,
        /// Score against `word<TAB>phonemes` references and print CER
        #[arg(long)]
        eval: Option<PathBuf>,
        #[command(flatten)]
        input: Input,
    },
    /// Find named entities
    Ner {
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        input: Input,
    },
    /// Train a character language model, one sentence per line
    LmTrain {
        #[arg(long, default_value_t = 5)]
        order: usize,
        corpus: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Natural-log likelihood of each sentence
    LmScore {
        model: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Run a benchmark dataset
    Bench {
        #[arg(value_enum)]
        dataset_kind: Dataset,
        #[arg(long)]
        dataset: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write the main table here as TSV
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the edit distance histogram here as TSV (dataset a)
        #[arg(long)]
        histogram: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn load_affixes(cfg: &EngineConfig) -> Result<AffixList> {
    match &cfg.affixes {
        Some(p) => formats::read_affixes(p),
        None => Ok(AffixList::builtin()),
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn json_line(out: &mut impl Write, value: &impl serde::Serialize) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    if cli.version {
        writeln!(out, "{}", kspell::version_string())?;
        return Ok(());
    }
    let Some(command) = cli.command else {
        bail!("no subcommand given; see --help");
    };
    match command {
        Command::Check { engine, input } => {
            let cfg = engine.resolve()?;
            let checker = cfg.checker_config()?;
            let engine = cfg.load_engine()?;
            for line in input.lines()? {
                let r = engine.check(&line, &checker);
                if cli.json {
                    json_line(out, &report::check_json(&r))?;
                } else {
                    write!(out, "{}", report::check_text(&r))?;
                }
            }
        }
        Command::Segment { engine, labels, input } => {
            let cfg = engine.resolve()?;
            let checker = cfg.checker_config()?;
            let g2p = cfg.load_g2p()?;
            let lexicon = cfg.load_lexicon(&g2p)?;
            let affixes = load_affixes(&cfg)?;
            for line in input.lines()? {
                let tokens = segmenter::segment(&line, &lexicon, &affixes, checker.eps);
                if cli.json {
                    let toks: Vec<_> = tokens.iter().map(report::token_json).collect();
                    json_line(out, &toks)?;
                } else if labels {
                    let l: Vec<&str> = boundary_labels(&tokens).iter().map(|l| l.as_str()).collect();
                    writeln!(out, "{}", l.join(" "))?;
                } else {
                    writeln!(out, "{}", segmenter::render(&tokens))?;
                }
            }
        }
        Command::G2p { engine, eval, input } => {
            let g2p = engine.resolve()?.load_g2p()?;
            if let Some(path) = eval {
                let refs = formats::parse_g2p_eval(&formats::read_text(&path)?)?;
                let (mut errors, mut len) = (0usize, 0usize);
                for (word, reference) in &refs {
                    let hyp = g2p.to_phonemes(word);
                    errors += kspell_core::distance::levenshtein(&hyp, reference);
                    len += reference.len();
                }
                let rate = if len == 0 { 0.0 } else { errors as f64 / len as f64 };
                if cli.json {
                    json_line(out, &serde_json::json!({"words": refs.len(), "errors": errors, "reference_len": len, "cer": rate}))?;
                } else {
                    writeln!(out, "words\t{}\nerrors\t{errors}\nreference_len\t{len}\ncer\t{:.4}", refs.len(), rate)?;
                }
                return Ok(());
            }
            for word in input.lines()? {
                let ph = g2p.to_phonemes(&word);
                if cli.json {
                    json_line(out, &serde_json::json!({"word": word, "phonemes": ph}))?;
                } else {
                    writeln!(out, "{word}\t{}", ph.join(" "))?;
                }
            }
        }
        Command::Ner { engine, input } => {
            let cfg = engine.resolve()?;
            let checker = cfg.checker_config()?;
            let g2p = cfg.load_g2p()?;
            let lexicon = cfg.load_lexicon(&g2p)?;
            let gazetteer = cfg.load_gazetteer()?;
            let affixes = load_affixes(&cfg)?;
            for line in input.lines()? {
                let tokens = segmenter::segment(&line, &lexicon, &affixes, checker.eps);
                let spans = ner::find_entities(&line, &gazetteer, &tokens);
                if cli.json {
                    let s: Vec<_> = spans.iter().map(report::entity_json).collect();
                    json_line(out, &s)?;
                } else {
                    let s: Vec<String> = spans
                        .iter()
                        .map(|s| format!("{}:{}:{}", s.start, s.end, s.surface))
                        .collect();
                    writeln!(out, "{}", s.join("\t"))?;
                }
            }
        }
        Command::LmTrain { order, corpus, output } => {
            let mut t = LmTrainer::new(order)?;
            for line in formats::read_text(&corpus)?.lines() {
                t.add_line(&script::normalize(line.trim_end_matches('\r')));
            }
            let lm = t.finish().with_context(|| format!("in {}", corpus.display()))?;
            formats::save_lm(&lm, &output)?;
        }
        Command::LmScore { model, input } => {
            let lm = formats::read_lm(&model)?;
            for line in input.lines()? {
                let lp = lm.log_prob(&line);
                if cli.json {
                    json_line(out, &serde_json::json!({"sentence": line, "log_prob": lp}))?;
                } else {
                    writeln!(out, "{lp:.6}\t{line}")?;
                }
            }
        }
        Command::Bench {
            dataset_kind,
            dataset,
            engine,
            report: report_path,
            histogram,
            threads,
        } => {
            let cfg = engine.resolve()?;
            let checker = cfg.checker_config()?;
            let threads = threads.unwrap_or_else(bench::default_threads);
            match dataset_kind {
                Dataset::A => {
                    let records = formats::read_dataset_a(&dataset)?;
                    let engine = cfg.load_engine()?;
                    let table = bench::run_a(&records, &engine, &checker, threads)?;
                    let main = evalbench::accuracy_tsv(&table);
                    if let Some(p) = &report_path {
                        write_file(p, &main)?;
                    }
                    if let Some(p) = &histogram {
                        write_file(p, &evalbench::histogram_tsv(&table))?;
                    }
                    if cli.json {
                        json_line(out, &report::bench_a_json(&table))?;
                    } else {
                        write!(out, "{main}\n{}", evalbench::category_tsv(&table))?;
                    }
                }
                Dataset::B => {
                    let records = formats::read_dataset_b(&dataset)?;
                    let engine = cfg.load_engine()?;
                    let table = bench::run_b(&records, &engine, &checker, threads)?;
                    let main = evalbench::flag_summary_tsv(&table);
                    if let Some(p) = &report_path {
                        write_file(p, &main)?;
                    }
                    if cli.json {
                        json_line(out, &report::bench_b_json(&table))?;
                    } else {
                        write!(out, "{main}\n{}", evalbench::flag_rate_tsv("kspell", &table))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

//! Batch command-line front end. Every operation of the library is exposed
//! as a subcommand; runs that produce an output file also write a
//! `<output>.manifest.json` recording everything needed to reproduce the
//! output bit-exactly.
//!
//! Exit codes: 0 success, 1 usage, 2 data error (including missing models),
//! 3 internal. Failures print one machine-parsable line:
//! `error: CATEGORY: message`.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::corpus::{self, synth, treebank};
use crate::eval::{self, Models};
use crate::frames::{self, Lemmas};
use crate::grammar::{parse_grammar, Grammar};
use crate::lenmodel::LenModel;
use crate::lexmodel::LexModel;
use crate::parser::{self, Token};
use crate::pcfg::PcfgModel;
use crate::ranker::{LexCascade, RankerConfig, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Usage,
    Data,
    ModelMissing,
    Internal,
}

impl Category {
    fn name(self) -> &'static str {
        match self {
            Category::Usage => "USAGE",
            Category::Data => "DATA",
            Category::ModelMissing => "MODEL_MISSING",
            Category::Internal => "INTERNAL",
        }
    }

    fn exit_code(self) -> u8 {
        match self {
            Category::Usage => 1,
            Category::Data | Category::ModelMissing => 2,
            Category::Internal => 3,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    fn new(category: Category, message: impl Into<String>) -> Self {
        CliError { category, message: message.into() }
    }

    fn data(message: impl std::fmt::Display) -> Self {
        CliError::new(Category::Data, message.to_string())
    }
}

macro_rules! impl_data_error {
    ($($ty:ty),*) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::data(e)
            }
        })*
    };
}

impl_data_error!(
    crate::grammar::GrammarError,
    treebank::TreebankError,
    parser::ParseError,
    corpus::ModelIoError,
    synth::SynthError,
    eval::EvalError,
    frames::TripleIoError
);

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(Category::Internal, e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "disambig", version, about = "Parse, rank, and evaluate syntactic interpretations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GrammarArg {
    /// Grammar file.
    #[arg(long, env = "DISAMBIG_GRAMMAR")]
    grammar: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct RankArgs {
    /// Lexical model file.
    #[arg(long)]
    lex: Option<PathBuf>,
    /// Length-probability model file.
    #[arg(long)]
    len: Option<PathBuf>,
    /// PCFG model file (needed by backoff-pcfg).
    #[arg(long)]
    pcfg: Option<PathBuf>,
    /// Lemma table (`surface lemma` per line).
    #[arg(long, env = "DISAMBIG_LEMMAS")]
    lemmas: Option<PathBuf>,
    /// Threshold on lexical-likelihood differences.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Threshold on syntactic-likelihood differences.
    #[arg(long, default_value_t = 0.0)]
    tau: f64,
    /// Seed for tie resolution.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Collapse the two lexical stages into one (three-word only).
    #[arg(long)]
    two_stage_lex: bool,
    /// Interpretation cap per sentence.
    #[arg(long, default_value_t = 10_000)]
    cap: u64,
    /// Worker threads for per-sentence scoring.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl RankArgs {
    fn ranker_config(&self) -> RankerConfig {
        RankerConfig {
            eta: self.eta,
            tau: self.tau,
            seed: self.seed,
            lex_cascade: if self.two_stage_lex { LexCascade::TwoStage } else { LexCascade::ThreeStage },
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the three-word/two-word lexical model from a treebank or a
    /// triples TSV.
    TrainLex {
        #[command(flatten)]
        grammar: GrammarArg,
        /// Treebank to extract case frames from.
        #[arg(long, conflicts_with = "triples")]
        treebank: Option<PathBuf>,
        /// Pre-extracted triples TSV (head, kind, slot, dependent, count).
        #[arg(long)]
        triples: Option<PathBuf>,
        #[arg(long, env = "DISAMBIG_LEMMAS")]
        lemmas: Option<PathBuf>,
        /// Also write the extracted triples as TSV.
        #[arg(long)]
        emit_triples: Option<PathBuf>,
        /// Model output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate per-rule length probabilities from a treebank.
    TrainLen {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        treebank: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate PCFG rule probabilities from a treebank.
    TrainPcfg {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long)]
        treebank: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic treebank with controllable biases.
    Gen {
        #[command(flatten)]
        grammar: GrammarArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        sentences: usize,
        #[arg(long, default_value_t = 0.8)]
        low_attach_bias: f64,
        #[arg(long, default_value_t = 0.8)]
        parallel_bias: f64,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        /// Vocabulary sizes, e.g. `N=30,V=12,P=6`.
        #[arg(long)]
        vocab: Option<String>,
        /// Family weights, e.g. `simple=0.2,pp=0.5,coord=0.3`.
        #[arg(long)]
        family_weights: Option<String>,
        /// Lexical preference TSV: head, slot, dependent, weight.
        #[arg(long)]
        prefs: Option<PathBuf>,
        /// Probability that a PP consults the preference table.
        #[arg(long, default_value_t = 0.9)]
        pref_strength: f64,
        /// Probability that a sampled noun phrase takes a determiner.
        #[arg(long, default_value_t = 0.4)]
        det_prob: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse tagged sentences and dump every interpretation.
    Parse {
        #[command(flatten)]
        grammar: GrammarArg,
        /// Sentence file: one sentence per line, tokens as surface/TAG.
        sentences: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank the interpretations of tagged sentences.
    Rank {
        #[command(flatten)]
        grammar: GrammarArg,
        #[command(flatten)]
        rank: RankArgs,
        /// Ranking strategy.
        #[arg(long, default_value = "backoff-syn")]
        strategy: String,
        sentences: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate ranking strategies against a gold treebank.
    Eval {
        #[command(flatten)]
        grammar: GrammarArg,
        #[command(flatten)]
        rank: RankArgs,
        /// Comma-separated strategy list.
        #[arg(long, default_value = "backoff-syn,backoff-pcfg,product,syn-only,det-rap")]
        strategies: String,
        /// Gold treebank.
        #[arg(long)]
        test: PathBuf,
        /// Report accuracies for n = 1..=max_n.
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        /// JSON report output.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export plot-ready TSV data.
    #[command(subcommand)]
    PlotData(PlotData),
}

#[derive(Subcommand, Debug)]
enum PlotData {
    /// Length-probability-versus-length marginals for one rule.
    Len {
        #[command(flatten)]
        grammar: GrammarArg,
        /// Length model file.
        #[arg(long)]
        model: PathBuf,
        /// Rule, e.g. `NP -> NP PP`.
        #[arg(long)]
        rule: String,
        /// Which child's length varies (0-based); the others are summed out.
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy-versus-n curves from an eval report.
    Eval {
        /// JSON report written by `eval`.
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Everything needed to reproduce one run bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub argv: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

fn write_manifest(out: &Path, argv: &[String], inputs: &[&Path], outputs: &[&Path]) -> Result<(), CliError> {
    let manifest = RunManifest {
        tool: "disambig".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        argv: argv.to_vec(),
        inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    };
    let path = manifest_path(out);
    let json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::new(Category::Internal, e.to_string()))?;
    std::fs::write(path, json)?;
    Ok(())
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

pub fn run() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    run_from(argv)
}

/// Entry point used by the binary and by integration tests.
pub fn run_from(argv: Vec<String>) -> ExitCode {
    let mut full = vec!["disambig".to_string()];
    full.extend(argv.iter().cloned());
    let cli = match Cli::try_parse_from(&full) {
        Ok(cli) => cli,
        Err(e) if e.kind() == clap::error::ErrorKind::DisplayHelp
            || e.kind() == clap::error::ErrorKind::DisplayVersion =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error: USAGE: {e}");
            return ExitCode::from(Category::Usage.exit_code());
        }
    };
    match execute(cli.command, &argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {}", e.category.name(), e.message);
            ExitCode::from(e.category.exit_code())
        }
    }
}

fn load_grammar(path: &Path) -> Result<Grammar, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read grammar {}: {e}", path.display())))?;
    Ok(parse_grammar(&text)?)
}

fn load_treebank(path: &Path, g: &Grammar) -> Result<treebank::Treebank, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot read treebank {}: {e}", path.display())))?;
    Ok(treebank::read_treebank(BufReader::new(file), g)?)
}

fn load_lemmas(path: &Option<PathBuf>) -> Result<Lemmas, CliError> {
    match path {
        None => Ok(Lemmas::identity()),
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::data(format!("cannot read lemmas {}: {e}", path.display())))?;
            Ok(Lemmas::read(BufReader::new(file))?)
        }
    }
}

fn require_model(path: &Option<PathBuf>, what: &str) -> Result<PathBuf, CliError> {
    let path = path.clone().ok_or_else(|| {
        CliError::new(Category::ModelMissing, format!("no {what} model given (--{what})"))
    })?;
    if !path.exists() {
        return Err(CliError::new(
            Category::ModelMissing,
            format!("{what} model not found at {}", path.display()),
        ));
    }
    Ok(path)
}

fn read_sentences(path: &Path) -> Result<Vec<Vec<Token>>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot read sentences {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens = parser::parse_tagged_line(trimmed)
            .map_err(|e| CliError::data(format!("line {}: {e}", idx + 1)))?;
        out.push(tokens);
    }
    Ok(out)
}

/// Sink that writes either to a file or to stdout.
fn open_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match out {
        Some(path) => Ok(Box::new(File::create(path)?)),
        None => Ok(Box::new(std::io::stdout())),
    }
}

fn parse_kv_list(spec: &str) -> Result<Vec<(String, f64)>, CliError> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::new(Category::Usage, format!("expected key=value, got {item}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|e| CliError::new(Category::Usage, format!("bad value in {item}: {e}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn read_prefs(path: &Path) -> Result<Vec<synth::LexPref>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::data(format!("cannot read preferences {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() != 4 {
            return Err(CliError::data(format!(
                "line {}: expected 4 tab-separated fields (head, slot, dependent, weight)",
                idx + 1
            )));
        }
        let weight: f64 = fields[3]
            .parse()
            .map_err(|e| CliError::data(format!("line {}: bad weight: {e}", idx + 1)))?;
        out.push(synth::LexPref {
            head: fields[0].to_string(),
            slot: fields[1].to_string(),
            dependent: fields[2].to_string(),
            weight,
        });
    }
    Ok(out)
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if jobs <= 1 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::new(Category::Internal, e.to_string()))?;
    Ok(pool.install(f))
}

fn execute(command: Command, argv: &[String]) -> Result<(), CliError> {
    match command {
        Command::TrainLex { grammar, treebank: tb, triples, lemmas, emit_triples, out } => {
            let g = load_grammar(&grammar.grammar)?;
            let lemmas = load_lemmas(&lemmas)?;
            let mut inputs: Vec<&Path> = vec![grammar.grammar.as_path()];
            let counted: Vec<(frames::DependencyTriple, u64)> = match (&tb, &triples) {
                (Some(tb_path), None) => {
                    inputs.push(tb_path.as_path());
                    let tb = load_treebank(tb_path, &g)?;
                    tb.trees()
                        .flat_map(|tree| frames::extract_triples(tree, &g, &lemmas))
                        .map(|t| (t, 1))
                        .collect()
                }
                (None, Some(triples_path)) => {
                    inputs.push(triples_path.as_path());
                    let file = File::open(triples_path).map_err(|e| {
                        CliError::data(format!("cannot read triples {}: {e}", triples_path.display()))
                    })?;
                    frames::read_triples(BufReader::new(file))?
                }
                _ => {
                    return Err(CliError::new(
                        Category::Usage,
                        "exactly one of --treebank and --triples is required",
                    ))
                }
            };
            if let Some(path) = &emit_triples {
                let mut file = File::create(path)?;
                frames::write_triples(
                    &mut file,
                    counted.iter().flat_map(|(t, n)| std::iter::repeat(t.clone()).take(*n as usize)),
                )?;
            }
            let model = LexModel::fit(counted);
            corpus::save_lex(&out, &model)?;
            write_manifest(&out, argv, &inputs, &[out.as_path()])?;
            Ok(())
        }
        Command::TrainLen { grammar, treebank: tb_path, out } => {
            let g = load_grammar(&grammar.grammar)?;
            let tb = load_treebank(&tb_path, &g)?;
            let model = LenModel::fit(tb.trees(), &g).map_err(CliError::data)?;
            corpus::save_len(&out, &model, &g)?;
            write_manifest(&out, argv, &[grammar.grammar.as_path(), tb_path.as_path()], &[out.as_path()])?;
            Ok(())
        }
        Command::TrainPcfg { grammar, treebank: tb_path, out } => {
            let g = load_grammar(&grammar.grammar)?;
            let tb = load_treebank(&tb_path, &g)?;
            let model = PcfgModel::fit(tb.trees(), &g);
            corpus::save_pcfg(&out, &model, &g)?;
            write_manifest(&out, argv, &[grammar.grammar.as_path(), tb_path.as_path()], &[out.as_path()])?;
            Ok(())
        }
        Command::Gen {
            grammar,
            seed,
            sentences,
            low_attach_bias,
            parallel_bias,
            max_len,
            vocab,
            family_weights,
            prefs,
            pref_strength,
            det_prob,
            out,
        } => {
            let g = load_grammar(&grammar.grammar)?;
            let mut cfg = synth::SynthConfig {
                seed,
                sentences,
                low_attach_bias,
                parallel_bias,
                max_len,
                pref_strength,
                det_prob,
                ..Default::default()
            };
            if let Some(spec) = &vocab {
                for (tag, size) in parse_kv_list(spec)? {
                    cfg.vocab.insert(tag, size as usize);
                }
            }
            if let Some(spec) = &family_weights {
                let mut fw = cfg.family_weights;
                for (name, value) in parse_kv_list(spec)? {
                    match name.as_str() {
                        "simple" => fw.simple = value,
                        "pp" => fw.pp = value,
                        "coord" => fw.coord = value,
                        other => {
                            return Err(CliError::new(
                                Category::Usage,
                                format!("unknown family {other}; expected simple, pp, coord"),
                            ))
                        }
                    }
                }
                cfg.family_weights = fw;
            }
            let mut inputs: Vec<&Path> = vec![grammar.grammar.as_path()];
            if let Some(path) = &prefs {
                cfg.lexical_prefs = read_prefs(path)?;
                inputs.push(path.as_path());
            }
            let (tb, stats) = synth::generate_with_stats(&cfg, &g)?;
            let mut file = File::create(&out)?;
            treebank::write_treebank(&mut file, &tb, &g)?;
            write_manifest(&out, argv, &inputs, &[out.as_path()])?;
            eprintln!(
                "generated {} sentences, {} tokens; low attachments {}/{}, parallel coordinations {}/{}",
                stats.sentences,
                stats.tokens,
                stats.pp_low,
                stats.pp_choices,
                stats.parallel_coordinations,
                stats.coordinations
            );
            Ok(())
        }
        Command::Parse { grammar, sentences, cap, out } => {
            let g = load_grammar(&grammar.grammar)?;
            let sents = read_sentences(&sentences)?;
            let mut sink = open_sink(&out)?;
            for tokens in &sents {
                let line: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
                writeln!(sink, "# {}", line.join(" "))?;
                let forest = parser::parse(&g, tokens)?;
                let interps = forest.enumerate(Some(cap))?;
                writeln!(sink, "{} interpretations", interps.len())?;
                for interp in &interps {
                    writeln!(sink, "{}", interp.tree.bracketed(&g))?;
                }
            }
            if let Some(out) = &out {
                write_manifest(out, argv, &[grammar.grammar.as_path(), sentences.as_path()], &[out.as_path()])?;
            }
            Ok(())
        }
        Command::Rank { grammar, rank, strategy, sentences, out } => {
            let strategy: Strategy = strategy
                .parse()
                .map_err(|e: String| CliError::new(Category::Usage, e))?;
            let g = load_grammar(&grammar.grammar)?;
            let lex_path = require_model(&rank.lex, "lex")?;
            let len_path = require_model(&rank.len, "len")?;
            let lex = corpus::load_lex(&lex_path)?;
            let len = corpus::load_len(&len_path, &g)?;
            let pcfg = match (&rank.pcfg, strategy) {
                (_, Strategy::BackoffPcfg) => {
                    let path = require_model(&rank.pcfg, "pcfg")?;
                    Some(corpus::load_pcfg(&path, &g)?)
                }
                (Some(path), _) => Some(corpus::load_pcfg(path, &g)?),
                (None, _) => None,
            };
            let lemmas = load_lemmas(&rank.lemmas)?;
            let models = Models { lex: &lex, len: &len, pcfg: pcfg.as_ref(), lemmas: &lemmas };
            let cfg = rank.ranker_config();
            let sents = read_sentences(&sentences)?;

            let analyzed: Vec<Result<_, CliError>> = with_jobs(rank.jobs, || {
                use rayon::prelude::*;
                sents
                    .par_iter()
                    .enumerate()
                    .map(|(idx, tokens)| {
                        let scored = eval::analyze_sentence(&g, tokens, &models, Some(rank.cap))
                            .map_err(CliError::from)?;
                        let sent_cfg =
                            RankerConfig { seed: eval::sentence_seed(cfg.seed, idx), ..cfg };
                        let outcome = eval::rank_sentence(&scored, strategy, &g, &sent_cfg);
                        Ok((scored, outcome))
                    })
                    .collect()
            })?;

            let mut sink = open_sink(&out)?;
            for (tokens, analyzed) in sents.iter().zip(analyzed) {
                let (scored, outcome) = analyzed?;
                let line: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
                writeln!(sink, "# {}", line.join(" "))?;
                for (pos, &idx) in outcome.order.iter().enumerate() {
                    let s = &scored[idx];
                    let decider = outcome
                        .deciders
                        .get(pos)
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "-".into());
                    writeln!(
                        sink,
                        "{}\tlex3={:.6}\tlex2={:.6}\tsyn={:.6}\tnext={}\t{}",
                        pos + 1,
                        s.lex3,
                        s.lex2,
                        if strategy == Strategy::BackoffPcfg { s.pcfg } else { s.syn },
                        decider,
                        s.interp.tree.bracketed(&g)
                    )?;
                }
            }
            if let Some(out) = &out {
                let mut inputs: Vec<&Path> =
                    vec![grammar.grammar.as_path(), sentences.as_path(), lex_path.as_path(), len_path.as_path()];
                if let Some(p) = &rank.pcfg {
                    inputs.push(p.as_path());
                }
                write_manifest(out, argv, &inputs, &[out.as_path()])?;
            }
            Ok(())
        }
        Command::Eval { grammar, rank, strategies, test, max_n, out } => {
            let strategies: Vec<Strategy> = strategies
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse().map_err(|e: String| CliError::new(Category::Usage, e)))
                .collect::<Result<_, _>>()?;
            if strategies.is_empty() {
                return Err(CliError::new(Category::Usage, "no strategies given"));
            }
            let g = load_grammar(&grammar.grammar)?;
            let lex_path = require_model(&rank.lex, "lex")?;
            let len_path = require_model(&rank.len, "len")?;
            let lex = corpus::load_lex(&lex_path)?;
            let len = corpus::load_len(&len_path, &g)?;
            let pcfg = if strategies.contains(&Strategy::BackoffPcfg) {
                let path = require_model(&rank.pcfg, "pcfg")?;
                Some(corpus::load_pcfg(&path, &g)?)
            } else if let Some(path) = &rank.pcfg {
                Some(corpus::load_pcfg(path, &g)?)
            } else {
                None
            };
            let lemmas = load_lemmas(&rank.lemmas)?;
            let models = Models { lex: &lex, len: &len, pcfg: pcfg.as_ref(), lemmas: &lemmas };
            let tb = load_treebank(&test, &g)?;
            let cfg = rank.ranker_config();
            let report = with_jobs(rank.jobs, || {
                eval::compare_methods(&tb, &strategies, &models, &g, &cfg, Some(rank.cap), max_n)
            })??;
            print!("{}", report.render());
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::new(Category::Internal, e.to_string()))?;
            std::fs::write(&out, json)?;
            let mut inputs: Vec<&Path> =
                vec![grammar.grammar.as_path(), test.as_path(), lex_path.as_path(), len_path.as_path()];
            if let Some(p) = &rank.pcfg {
                inputs.push(p.as_path());
            }
            write_manifest(&out, argv, &inputs, &[out.as_path()])?;
            Ok(())
        }
        Command::PlotData(plot) => match plot {
            PlotData::Len { grammar, model, rule, component, out } => {
                let g = load_grammar(&grammar.grammar)?;
                let len = corpus::load_len(&model, &g)?;
                let rule_id = g
                    .parse_rule_key(&rule)
                    .ok_or_else(|| CliError::data(format!("rule `{rule}` is not in the grammar")))?;
                let arity = g.rule(rule_id).arity();
                if component >= arity {
                    return Err(CliError::new(
                        Category::Usage,
                        format!("component {component} out of range for arity {arity}"),
                    ));
                }
                let marginal = len.marginal(rule_id, component);
                let mut text = String::from("length\tprobability\n");
                for (length, prob) in marginal {
                    text.push_str(&format!("{length}\t{prob:.6}\n"));
                }
                std::fs::write(&out, text)?;
                write_manifest(&out, argv, &[grammar.grammar.as_path(), model.as_path()], &[out.as_path()])?;
                Ok(())
            }
            PlotData::Eval { report, out } => {
                let json = std::fs::read_to_string(&report)
                    .map_err(|e| CliError::data(format!("cannot read report {}: {e}", report.display())))?;
                let report_data: eval::EvalReport = serde_json::from_str(&json)
                    .map_err(|e| CliError::data(format!("bad report: {e}")))?;
                std::fs::write(&out, report_data.accuracy_tsv())?;
                write_manifest(&out, argv, &[report.as_path()], &[out.as_path()])?;
                Ok(())
            }
        },
    }
}

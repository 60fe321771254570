//! `britton`: word problems over grammar-compressed words from the command
//! line.
//!
//! Exit codes: 0 when the answer is positive (`identity: true`, an exponent
//! was found, every file validated, a bench run completed with all
//! cross-checks in agreement), 1 when the answer is negative, 2 on any
//! input or usage error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use britton_core::instances::random_hnn_instance;
use britton_core::{
    ascending_word_problem, compressed_word_problem, compressed_power,
    fundamental_word_problem_traced, parse_cycle, reference, scan_names,
    semi_compressed_word_problem_traced, AscendingFile, AscendingPresentation, BrittonSequence,
    CycleTypeWord, CycleWordFile, FileError, FingerprintParams, GeneratorAlphabet, GrammarFile,
    GraphFile, HnnFile, HnnPresentation, PinCase, PinOrder, PowerAnswer, Replacement,
    SolverConfig, WordParser,
};

/// Longest explicit expansion the CLI will perform for a base word given as
/// text (the `power` subcommand's `--word`).
const EXPLICIT_WORD_LIMIT: u64 = 1 << 20;

#[derive(Parser)]
#[command(
    name = "britton",
    version,
    about = "Word problems for free groups, HNN-extensions of free groups, and \
             graphs of free groups, over grammar-compressed words"
)]
struct Cli {
    /// Seed for fingerprints and instance generation. The BRITTON_SEED
    /// environment variable overrides this flag; with neither, a fresh
    /// random seed is drawn. The effective seed is echoed to stderr.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an explicit word is the free-group identity.
    Wp {
        /// Word text, e.g. "a b b^-1 a^-1" or "(a b)^(2^30) (b^-1 a^-1)^(2^30)".
        #[arg(long)]
        word: String,
    },
    /// Decide whether the word derived by a grammar file is the identity.
    Cwp {
        /// Grammar file (JSON).
        #[arg(long)]
        grammar: PathBuf,
    },
    /// Find the exponent z such that w^z equals the grammar's word.
    Power {
        /// The base word w, given explicitly.
        #[arg(long)]
        word: String,
        /// Grammar file (JSON) deriving the target word.
        #[arg(long)]
        grammar: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Word problem in an HNN-extension of a free group with cyclic
    /// associated subgroups.
    Hnn {
        #[command(flatten)]
        source: GroupSource,
        /// The word to decide, e.g. "t^-1 a t (a^-1)^2".
        #[arg(long)]
        word: String,
        /// Print one line per rewrite step.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Word problem in an ascending HNN-extension given by an injective
    /// endomorphism.
    Ascending {
        #[command(flatten)]
        source: GroupSource,
        /// The word to decide.
        #[arg(long)]
        word: String,
    },
    /// Word problem in the fundamental group of a graph of free groups
    /// with cyclic edge groups.
    Gog {
        /// Graph file (JSON).
        #[arg(long)]
        graph: PathBuf,
        /// Cycle word file (JSON).
        #[arg(long, required_unless_present = "cycle", conflicts_with = "cycle")]
        word: Option<PathBuf>,
        /// Inline cycle word over edge names and vertex generators;
        /// requires --base.
        #[arg(long, requires = "base")]
        cycle: Option<String>,
        /// Start vertex for --cycle.
        #[arg(long)]
        base: Option<String>,
        /// Print one line per rewrite step.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Time the solver and cross-check every verdict against the explicit
    /// backend. Writes CSV to stdout.
    Bench {
        /// Number of random instances.
        #[arg(long, default_value_t = 100, conflicts_with = "family")]
        count: usize,
        /// Stable-letter budget per random instance.
        #[arg(long, default_value_t = 8)]
        max_stables: usize,
        /// Run the doubling family t^-n a t^n (a^(2^n))^-1 for n = 1..=N
        /// instead of random instances.
        #[arg(long, value_name = "N")]
        family: Option<usize>,
        /// Skip the explicit cross-check when a segment would expand past
        /// this many letters.
        #[arg(long, default_value_t = 10_000)]
        check_limit: u64,
        #[command(flatten)]
        solver: SolverFlags,
    },
    /// Check input files and report problems without solving anything.
    Validate {
        /// Grammar files.
        #[arg(long = "grammar")]
        grammars: Vec<PathBuf>,
        /// HNN presentation files.
        #[arg(long = "group")]
        groups: Vec<PathBuf>,
        /// Ascending presentation files.
        #[arg(long = "ascending")]
        ascendings: Vec<PathBuf>,
        /// Graph-of-groups files.
        #[arg(long = "graph")]
        graphs: Vec<PathBuf>,
        /// Cycle word files, validated against the first --graph.
        #[arg(long = "word", requires = "graphs")]
        words: Vec<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Presentation file (JSON).
    #[arg(long)]
    group: Option<PathBuf>,
    /// Built-in presentation.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Preset {
    /// <a, t | t^-1 a t = a^2>.
    Bs12,
}

impl GroupSource {
    fn hnn(&self, params: FingerprintParams) -> Result<HnnPresentation> {
        match (&self.group, self.preset) {
            (Some(path), None) => {
                let file = HnnFile::from_json(&read(path)?)
                    .with_context(|| format!("loading presentation {}", path.display()))?;
                file.to_presentation(params)
                    .with_context(|| format!("loading presentation {}", path.display()))
            }
            (None, Some(Preset::Bs12)) => Ok(HnnPresentation::bs12(params)),
            _ => unreachable!("clap enforces exactly one source"),
        }
    }

    fn ascending(&self, params: FingerprintParams) -> Result<AscendingPresentation> {
        match (&self.group, self.preset) {
            (Some(path), None) => {
                let file = AscendingFile::from_json(&read(path)?)
                    .with_context(|| format!("loading presentation {}", path.display()))?;
                file.to_presentation(params)
                    .with_context(|| format!("loading presentation {}", path.display()))
            }
            (None, Some(Preset::Bs12)) => Ok(AscendingPresentation::bs12(params)),
            _ => unreachable!("clap enforces exactly one source"),
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// Compare words letter by letter up to this many letters; longer
    /// comparisons rely on fingerprints alone.
    #[arg(long, default_value_t = 1_000_000)]
    exact_check_bound: u64,
    /// How rewrite steps materialize the replacement power.
    #[arg(long, value_enum, default_value_t = ReplacementFlag::Pow)]
    replacement: ReplacementFlag,
    /// Which reducible position is rewritten first.
    #[arg(long, value_enum, default_value_t = PinOrderFlag::Leftmost)]
    pin_order: PinOrderFlag,
}

#[derive(Copy, Clone, ValueEnum)]
enum ReplacementFlag {
    /// Binary powering of the image word.
    Pow,
    /// Letter-for-image substitution on the pinned segment.
    Eta,
}

#[derive(Copy, Clone, ValueEnum)]
enum PinOrderFlag {
    Leftmost,
    Rightmost,
}

impl SolverFlags {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            exact_check_bound: self.exact_check_bound,
            replacement: match self.replacement {
                ReplacementFlag::Pow => Replacement::Pow,
                ReplacementFlag::Eta => Replacement::Eta,
            },
            pin_order: match self.pin_order {
                PinOrderFlag::Leftmost => PinOrder::Leftmost,
                PinOrderFlag::Rightmost => PinOrder::Rightmost,
            },
        }
    }
}

enum Verdict {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    match std::env::var("BRITTON_SEED") {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .with_context(|| format!("BRITTON_SEED must be a decimal unsigned integer, got {text:?}")),
        Err(std::env::VarError::NotUnicode(_)) => bail!("BRITTON_SEED is not valid unicode"),
        Err(std::env::VarError::NotPresent) => Ok(flag.unwrap_or_else(rand::random)),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn identity_line(identity: bool) -> Verdict {
    println!("identity: {identity}");
    if identity {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

fn pin_case_name(case: PinCase) -> &'static str {
    match case {
        PinCase::DomainPin => "i",
        PinCase::RangePin => "ii",
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    let seed = resolve_seed(cli.seed)?;
    eprintln!("seed: {seed}");
    let params = FingerprintParams::from_seed(seed);

    match cli.command {
        Command::Wp { word } => {
            let names = scan_names(&word).with_context(|| format!("in word {word:?}"))?;
            let alphabet = GeneratorAlphabet::new(names, params)?;
            let sys = WordParser::new(&alphabet)
                .parse_segment(&word)
                .with_context(|| format!("in word {word:?}"))?;
            Ok(identity_line(compressed_word_problem(&sys)))
        }

        Command::Cwp { grammar } => {
            let sys = load_grammar(&grammar, params)?;
            Ok(identity_line(compressed_word_problem(&sys)))
        }

        Command::Power {
            word,
            grammar,
            solver,
        } => {
            let target = load_grammar(&grammar, params)?;
            let base = WordParser::new(target.alphabet())
                .parse_segment(&word)
                .with_context(|| format!("in word {word:?}"))?
                .expand(EXPLICIT_WORD_LIMIT)
                .map_err(|_| {
                    anyhow!("the base word must expand to at most {EXPLICIT_WORD_LIMIT} letters")
                })?;
            match compressed_power(&base, &target, &solver.config())? {
                PowerAnswer::Found { exponent, .. } => {
                    println!("z={exponent}");
                    Ok(Verdict::Positive)
                }
                PowerAnswer::NoSolution => {
                    println!("none");
                    Ok(Verdict::Negative)
                }
            }
        }

        Command::Hnn {
            source,
            word,
            trace,
            solver,
        } => {
            let pres = source.hnn(params)?;
            let items = WordParser::with_special(pres.alphabet(), pres.stable())
                .parse_mixed(&word)
                .with_context(|| format!("in word {word:?}"))?;
            let seq = BrittonSequence::from_items(pres.alphabet(), &items);
            let (identity, steps) =
                semi_compressed_word_problem_traced(&pres, &seq, &solver.config());
            if trace {
                for s in &steps {
                    println!(
                        "at={} case={} l={} size={}->{}",
                        s.at,
                        pin_case_name(s.case),
                        s.exponent,
                        s.size_before,
                        s.size_after
                    );
                }
            }
            Ok(identity_line(identity))
        }

        Command::Ascending { source, word } => {
            let pres = source.ascending(params)?;
            let items = WordParser::with_special(pres.alphabet(), pres.stable())
                .parse_mixed(&word)
                .with_context(|| format!("in word {word:?}"))?;
            Ok(identity_line(ascending_word_problem(&pres, &items)))
        }

        Command::Gog {
            graph,
            word,
            cycle,
            base,
            trace,
            solver,
        } => {
            let g = load_graph(&graph, params)?;
            let w = match word {
                Some(path) => {
                    let file = CycleWordFile::from_json(&read(&path)?)
                        .with_context(|| format!("loading cycle word {}", path.display()))?;
                    file.to_word(&g)
                        .with_context(|| format!("loading cycle word {}", path.display()))?
                }
                None => {
                    let base = base.expect("clap enforces --base with --cycle");
                    let text = cycle.expect("clap enforces --cycle without --word");
                    let items = parse_cycle(&g, &base, &text)
                        .with_context(|| format!("in cycle word {text:?}"))?;
                    CycleTypeWord::validate(&g, &base, &items).map_err(FileError::Cycle)?
                }
            };
            let (identity, steps) = fundamental_word_problem_traced(&g, &w, &solver.config());
            if trace {
                for s in &steps {
                    println!(
                        "at={} l={} size={}->{}",
                        s.at, s.exponent, s.size_before, s.size_after
                    );
                }
            }
            Ok(identity_line(identity))
        }

        Command::Bench {
            count,
            max_stables,
            family,
            check_limit,
            solver,
        } => {
            let cfg = solver.config();
            println!("time_ms,s_initial,s_final,steps");
            if let Some(n_max) = family {
                let pres = HnnPresentation::bs12(params);
                let parser = WordParser::with_special(pres.alphabet(), pres.stable());
                for n in 1..=n_max {
                    let text = format!("t^-{n} a t^{n} ((a)^(2^{n}))^-1");
                    let items = parser
                        .parse_mixed(&text)
                        .expect("family words are well formed");
                    let seq = BrittonSequence::from_items(pres.alphabet(), &items);
                    bench_row(&pres, &seq, &cfg, check_limit, &format!("family n={n}"))?;
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let alphabet = GeneratorAlphabet::new(["a", "b"], params)?;
                for i in 0..count {
                    let inst = random_hnn_instance(&mut rng, &alphabet, max_stables);
                    let seq = BrittonSequence::from_items(&alphabet, &inst.items);
                    bench_row(&inst.pres, &seq, &cfg, check_limit, &format!("instance #{i}"))?;
                }
            }
            Ok(Verdict::Positive)
        }

        Command::Validate {
            grammars,
            groups,
            ascendings,
            graphs,
            words,
        } => {
            let mut failures = 0usize;
            let mut report = |path: &Path, outcome: Result<String>| match outcome {
                Ok(what) => println!("ok: {} ({what})", path.display()),
                Err(e) => {
                    println!("bad: {} ({e:#})", path.display());
                    failures += 1;
                }
            };
            if grammars.is_empty()
                && groups.is_empty()
                && ascendings.is_empty()
                && graphs.is_empty()
            {
                bail!("nothing to validate; pass --grammar/--group/--ascending/--graph files");
            }
            for p in &grammars {
                let outcome = load_grammar(p, params)
                    .map(|sys| format!("grammar, size {}, length {}", sys.size(), sys.length()));
                report(p, outcome);
            }
            for p in &groups {
                let source = GroupSource {
                    group: Some(p.clone()),
                    preset: None,
                };
                let outcome = source
                    .hnn(params)
                    .map(|pres| format!("hnn presentation, base rank {}", pres.alphabet().rank()));
                report(p, outcome);
            }
            for p in &ascendings {
                let source = GroupSource {
                    group: Some(p.clone()),
                    preset: None,
                };
                let outcome = source.ascending(params).map(|pres| {
                    format!("ascending presentation, base rank {}", pres.alphabet().rank())
                });
                report(p, outcome);
            }
            let mut first_graph: Option<Arc<GraphHolder>> = None;
            for p in &graphs {
                let outcome = load_graph(p, params).map(|g| {
                    let what = format!("graph, {} edge orbits", g.edge_count());
                    if first_graph.is_none() {
                        first_graph = Some(Arc::new(GraphHolder(g)));
                    }
                    what
                });
                report(p, outcome);
            }
            for p in &words {
                let outcome = match &first_graph {
                    Some(holder) => read(p)
                        .and_then(|text| {
                            CycleWordFile::from_json(&text).map_err(anyhow::Error::from)
                        })
                        .and_then(|file| file.to_word(&holder.0).map_err(anyhow::Error::from))
                        .map(|w| format!("cycle word, {} edges", w.edge_count())),
                    None => Err(anyhow!("the --graph it depends on failed to load")),
                };
                report(p, outcome);
            }
            if failures == 0 {
                Ok(Verdict::Positive)
            } else {
                bail!("{failures} file(s) failed validation");
            }
        }
    }
}

struct GraphHolder(britton_core::GraphOfGroups);

fn load_grammar(
    path: &Path,
    params: FingerprintParams,
) -> Result<britton_core::CompositionSystem> {
    let file = GrammarFile::from_json(&read(path)?)
        .with_context(|| format!("loading grammar {}", path.display()))?;
    file.to_system(params)
        .with_context(|| format!("loading grammar {}", path.display()))
}

fn load_graph(path: &Path, params: FingerprintParams) -> Result<britton_core::GraphOfGroups> {
    let file = GraphFile::from_json(&read(path)?)
        .with_context(|| format!("loading graph {}", path.display()))?;
    file.to_graph(params)
        .with_context(|| format!("loading graph {}", path.display()))
}

fn bench_row(
    pres: &HnnPresentation,
    seq: &BrittonSequence,
    cfg: &SolverConfig,
    check_limit: u64,
    label: &str,
) -> Result<()> {
    let s_initial = seq.size_measure();
    let start = Instant::now();
    let (identity, steps) = semi_compressed_word_problem_traced(pres, seq, cfg);
    let ms = start.elapsed().as_secs_f64() * 1e3;
    if let Ok(explicit) = reference::britton_identity_for(pres, seq, check_limit) {
        if explicit != identity {
            bail!(
                "explicit backend disagrees with the compressed solver on {label}: \
                 explicit {explicit}, compressed {identity}"
            );
        }
    }
    let s_final = steps.last().map_or(s_initial, |s| s.size_after);
    println!("{ms:.3},{s_initial},{s_final},{}", steps.len());
    Ok(())
}

//! `ludecon`: concept reports, playouts and recommendations for ludeme
//! game descriptions.
//!
//! Exit codes: 0 success, 1 other failure (for example playing a game outside
//! the playable subset), 2 missing input file or bad command line, 3 parse
//! error, 4 unknown game id or missing `--like`.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ludecon::compiler::{board_from_shape, compile, static_scan, CompileError, GameSpec};
use ludecon::concepts::{lookup, registry};
use ludecon::ludeme::{parse_source, LudemeNode};
use ludecon::playout::{run_trial, trial_seed, Policy, PlayoutConfig};
use ludecon::recommend::{
    build_corpus, corpus_files, nearest, read_corpus, recommend, write_corpus, DistanceConfig, RecommendError,
};

use report::{ConceptReport, Format};

#[derive(Parser)]
#[command(name = "ludecon", version, about = "Game concepts from ludeme descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Random,
    First,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Policy {
        match p {
            PolicyArg::Random => Policy::UniformRandom,
            PolicyArg::First => Policy::FirstLegal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compilation concepts of a description.
    Scan { path: PathBuf },
    /// Compilation and playout concepts of a description.
    Concepts {
        path: PathBuf,
        /// Number of playouts; 0 skips playouts.
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random")]
        policy: PolicyArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Plays one trial and prints its moves.
    Playout {
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "random")]
        policy: PolicyArg,
        /// Also print each move's atomic actions and the number of choices.
        #[arg(long)]
        verbose: bool,
    },
    /// Builds a concept matrix over every `.lud` file of a directory.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Games closest to a given one.
    Nearest {
        #[arg(long)]
        corpus: PathBuf,
        game: String,
        #[arg(short, default_value_t = 5)]
        k: usize,
    },
    /// Games ranked by similarity to liked games and dissimilarity to disliked ones.
    Recommend {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "like")]
        likes: Vec<String>,
        #[arg(long = "dislike")]
        dislikes: Vec<String>,
        #[arg(short, default_value_t = 5)]
        k: usize,
    },
    /// Summary of the board a description uses.
    Board { path: PathBuf },
    /// The concept catalog.
    Registry,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn parse(path: &Path) -> Result<(String, LudemeNode), Failure> {
    let source = read(path)?;
    let tree = parse_source(&source).map_err(|e| Failure::new(3, format!("{}: parse error: {e}", path.display())))?;
    Ok((source, tree))
}

fn compile_failure(path: &Path, e: CompileError) -> Failure {
    Failure::new(1, format!("{}: {e}", path.display()))
}

fn configure_threads() {
    if let Some(n) = std::env::var("LUDECON_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            // only fails if a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let result = match cli.command {
        Command::Scan { path } => cmd_scan(&path),
        Command::Concepts { path, trials, seed, policy, format } => {
            let config = PlayoutConfig { trials, master_seed: seed, policy: policy.into(), move_cap: None };
            cmd_concepts(&path, &config, format)
        }
        Command::Playout { path, seed, policy, verbose } => cmd_playout(&path, seed, policy.into(), verbose),
        Command::Corpus { dir, out, trials, seed } => {
            let config = PlayoutConfig { trials, master_seed: seed, ..PlayoutConfig::default() };
            cmd_corpus(&dir, &out, &config)
        }
        Command::Nearest { corpus, game, k } => cmd_nearest(&corpus, &game, k),
        Command::Recommend { corpus, likes, dislikes, k } => cmd_recommend(&corpus, &likes, &dislikes, k),
        Command::Board { path } => cmd_board(&path),
        Command::Registry => cmd_registry(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ludecon: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn cmd_scan(path: &Path) -> CmdResult {
    let (source, tree) = parse(path)?;
    let scan = static_scan(&tree).map_err(|e| compile_failure(path, e))?;
    let report = ConceptReport::new(path, &tree, &source, &scan, None, None);
    print!("{}", report.render(Format::Json));
    Ok(())
}

fn cmd_concepts(path: &Path, config: &PlayoutConfig, format: Format) -> CmdResult {
    let (source, tree) = parse(path)?;
    let scan = static_scan(&tree).map_err(|e| compile_failure(path, e))?;
    let report = match compile(&tree) {
        Ok(spec) if config.trials > 0 => {
            let playout = ludecon::playout::analyze(&spec, config);
            ConceptReport::new(path, &tree, &source, &scan, Some((config, &playout)), None)
        }
        Ok(_) => ConceptReport::new(path, &tree, &source, &scan, None, None),
        Err(e) => {
            eprintln!("ludecon: warning: {}: not playable, reporting compilation concepts only", path.display());
            ConceptReport::new(path, &tree, &source, &scan, None, Some(e))
        }
    };
    print!("{}", report.render(format));
    Ok(())
}

fn compile_file(path: &Path) -> Result<GameSpec, Failure> {
    let (_, tree) = parse(path)?;
    compile(&tree).map_err(|e| compile_failure(path, e))
}

fn compact(name: &str) -> String {
    name.replace([' ', ':'], "")
}

fn cmd_playout(path: &Path, seed: u64, policy: Policy, verbose: bool) -> CmdResult {
    let spec = compile_file(path)?;
    let trial = run_trial(&spec, policy, trial_seed(seed, 0), None);
    let label = |s: Option<ludecon::board::SiteId>| s.map(|s| spec.board.label(s).to_string()).unwrap_or_else(|| "-".into());
    let mut out = String::new();
    for (i, r) in trial.records.iter().enumerate() {
        let tags: Vec<String> = r.chosen.tags.iter().filter_map(lookup).map(|d| compact(d.name)).collect();
        out += &format!("{} P{} {}->{}", i + 1, r.mover, label(r.chosen.from), label(r.chosen.to));
        if verbose {
            let actions: Vec<String> = r.chosen.actions.iter().map(ToString::to_string).collect();
            out += &format!(" [{}] k={}", actions.join(" "), r.branching);
        }
        out += &format!(" {}\n", tags.join(" "));
    }
    match trial.outcome {
        Some(o) => {
            let tags: Vec<String> = o.end_tags.iter().filter_map(lookup).map(|d| compact(d.name)).collect();
            let kind = match o.kind {
                ludecon::engine::OutcomeKind::Win(p) => format!("Win(P{p})"),
                ludecon::engine::OutcomeKind::Draw => "Draw".to_string(),
            };
            out += &format!("outcome {kind} {}\n", tags.join(" "));
        }
        None => out += "outcome Truncated\n",
    }
    print!("{out}");
    Ok(())
}

fn cmd_corpus(dir: &Path, out: &Path, config: &PlayoutConfig) -> CmdResult {
    let files = corpus_files(dir).map_err(|e| Failure::new(2, format!("{}: {e}", dir.display())))?;
    let (entries, failures) = build_corpus(&files, config);
    for (path, e) in &failures {
        eprintln!("ludecon: skipped {}: {e}", path.display());
    }
    write_corpus(out, &entries).map_err(|e| Failure::new(1, e.to_string()))?;
    println!("{} entries ({} playable) written to {}", entries.len(), entries.iter().filter(|e| !e.scan_only).count(), out.display());
    Ok(())
}

fn load_corpus(path: &Path) -> Result<Vec<ludecon::recommend::CorpusEntry>, Failure> {
    if !path.exists() {
        return Err(Failure::new(2, format!("{}: no such corpus file", path.display())));
    }
    read_corpus(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn recommend_failure(e: RecommendError) -> Failure {
    match e {
        RecommendError::UnknownGame(_) | RecommendError::EmptyLikes => Failure::new(4, e.to_string()),
        other => Failure::new(1, other.to_string()),
    }
}

fn print_ranked(ranked: &[(String, f64)]) {
    for (id, score) in ranked {
        println!("{id} {score:.6}");
    }
}

fn cmd_nearest(corpus: &Path, game: &str, k: usize) -> CmdResult {
    let entries = load_corpus(corpus)?;
    let cfg = DistanceConfig::for_corpus(&entries);
    print_ranked(&nearest(&entries, game, k, &cfg).map_err(recommend_failure)?);
    Ok(())
}

fn cmd_recommend(corpus: &Path, likes: &[String], dislikes: &[String], k: usize) -> CmdResult {
    if likes.is_empty() {
        return Err(Failure::new(
            4,
            "at least one --like is required\n\nUsage: ludecon recommend --corpus <CORPUS> --like <GAME>... [--dislike <GAME>...] [-k <K>]",
        ));
    }
    let entries = load_corpus(corpus)?;
    let cfg = DistanceConfig::for_corpus(&entries);
    print_ranked(&recommend(&entries, likes, dislikes, k, &cfg).map_err(recommend_failure)?);
    Ok(())
}

fn cmd_board(path: &Path) -> CmdResult {
    let (_, tree) = parse(path)?;
    let shape = tree
        .find_child("equipment")
        .into_iter()
        .flat_map(|e| e.descendants())
        .find(|n| n.is("board"))
        .and_then(|b| b.children().first())
        .ok_or_else(|| Failure::new(1, format!("{}: no board", path.display())))?;
    let board = board_from_shape(shape)
        .map_err(|e| Failure::new(1, e.to_string()))?
        .ok_or_else(|| Failure::new(1, format!("{}: board shape not supported", path.display())))?;
    println!("shape: {:?}", board.shape());
    println!("tiling: {:?}", board.tiling());
    println!("sites: {}", board.num_sites());
    println!("mean degree: {:.4}", board.mean_degree());
    let histogram: Vec<String> = board.degree_histogram().iter().map(|(d, n)| format!("{d}:{n}")).collect();
    println!("degrees: {}", histogram.join(" "));
    for (name, sites) in board.sides() {
        println!("side {name}: {} sites", sites.len());
    }
    let corners: Vec<&str> = board.corners().iter().map(|&c| board.label(c)).collect();
    println!("corners: {}", corners.join(" "));
    Ok(())
}

fn cmd_registry() -> CmdResult {
    for d in registry() {
        println!("{}\t{}\t{:?}\t{:?}\t{:?}", d.id, d.name, d.category, d.data_type, d.computation);
    }
    Ok(())
}

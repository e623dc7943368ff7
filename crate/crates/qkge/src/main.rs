//! `qkge` — train, evaluate, and inspect quantum-circuit knowledge-graph
//! embedding models.
//!
//! Exit codes: `0` success, `1` usage or configuration error, `2` data or
//! checkpoint integrity error, `3` numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qkge::checkpoint::Checkpoint;
use qkge::data::{KnowledgeGraph, RawTriple, Split};
use qkge::eval::{evaluate, EvalMode};
use qkge::training::{train_with_progress, TrainingConfig};
use qkge::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qkge",
    version,
    about = "Knowledge-graph embeddings from parameterized quantum circuits on a statevector simulator",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for batch gradients and ranking (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model on a dataset directory and write a checkpoint.
    Train(TrainArgs),
    /// Evaluate a checkpoint with filtered link-prediction metrics.
    Eval(EvalArgs),
    /// Summarize a checkpoint; optionally score one triple.
    Inspect(InspectArgs),
}

#[derive(Args)]
struct TrainArgs {
    /// Dataset directory containing train.txt, valid.txt, and test.txt.
    #[arg(long, value_name = "DIR")]
    data_dir: PathBuf,

    /// Checkpoint output path.
    #[arg(long, value_name = "FILE")]
    out: PathBuf,

    /// Per-epoch loss log (CSV). Defaults to the checkpoint path with a
    /// `.loss.csv` extension.
    #[arg(long, value_name = "FILE")]
    loss_log: Option<PathBuf>,

    /// Optional `key = value` configuration file. Command-line flags
    /// override file entries; file entries override defaults.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Qubits in the embedding register [default: 2].
    #[arg(long, value_name = "N")]
    qubits: Option<usize>,

    /// Layers in every entity circuit [default: 2].
    #[arg(long, value_name = "N")]
    entity_layers: Option<usize>,

    /// Layers in every relation circuit [default: 2].
    #[arg(long, value_name = "N")]
    relation_layers: Option<usize>,

    /// Distinct corrupted tails per positive [default: 1].
    #[arg(long, value_name = "K")]
    negatives: Option<usize>,

    /// Score each corrupted tail as its own example instead of one k-tail
    /// mixture.
    #[arg(long)]
    separate_negatives: bool,

    /// Training epochs [default: 10].
    #[arg(long, value_name = "N")]
    epochs: Option<usize>,

    /// Adam learning rate [default: 0.01].
    #[arg(long, value_name = "RATE")]
    lr: Option<f64>,

    /// Positives per mini-batch [default: 128].
    #[arg(long, value_name = "N")]
    batch_size: Option<usize>,

    /// Seed for initialization, shuffling, and negative sampling
    /// [default: 42].
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Compute filtered tail MRR on the valid split after every epoch.
    #[arg(long)]
    val_mrr: bool,
}

#[derive(Args)]
struct EvalArgs {
    /// Checkpoint to evaluate.
    #[arg(long, value_name = "FILE")]
    model: PathBuf,

    /// Dataset directory the model was trained on.
    #[arg(long, value_name = "DIR")]
    data_dir: PathBuf,

    /// Split to evaluate.
    #[arg(long, value_enum, default_value_t = SplitArg::Test)]
    split: SplitArg,

    /// Ranking directions.
    #[arg(long, value_enum, default_value_t = ModeArg::Tail)]
    mode: ModeArg,

    /// Also write the metrics as JSON to this path.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    /// Checkpoint to inspect.
    #[arg(long, value_name = "FILE")]
    model: PathBuf,

    /// Score one triple, given as three surface forms.
    #[arg(long, num_args = 3, value_names = ["HEAD", "RELATION", "TAIL"])]
    triple: Option<Vec<String>>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SplitArg {
    Valid,
    Test,
}

impl From<SplitArg> for Split {
    fn from(arg: SplitArg) -> Split {
        match arg {
            SplitArg::Valid => Split::Valid,
            SplitArg::Test => Split::Test,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Corrupt tails only.
    Tail,
    /// Corrupt tails and heads, averaging both directions.
    Both,
}

impl From<ModeArg> for EvalMode {
    fn from(arg: ModeArg) -> EvalMode {
        match arg {
            ModeArg::Tail => EvalMode::TailOnly,
            ModeArg::Both => EvalMode::BothDirections,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                std::process::exit(0);
            }
            eprint!("{err}");
            std::process::exit(1);
        }
    };
    let code = match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::InvalidConfig("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("cannot configure thread pool: {e}")))?;
    }
    match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Inspect(args) => cmd_inspect(args),
    }
}

/// Values read from a `key = value` configuration file.
#[derive(Default)]
struct FileConfig {
    qubits: Option<usize>,
    entity_layers: Option<usize>,
    relation_layers: Option<usize>,
    negatives: Option<usize>,
    separate_negatives: Option<bool>,
    epochs: Option<usize>,
    lr: Option<f64>,
    batch_size: Option<usize>,
    seed: Option<u64>,
    val_mrr: Option<bool>,
}

/// Parses a configuration file of `key = value` lines. Keys match the
/// command-line flag names (without the leading dashes); `#` starts a
/// comment; blank lines are ignored; unknown keys are errors.
fn parse_config_file(path: &Path) -> Result<FileConfig> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut config = FileConfig::default();
    for (idx, raw_line) in content.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}:{}: expected `key = value`, got {raw_line:?}",
                path.display(),
                idx + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad_value = |what: &str| {
            Error::InvalidConfig(format!(
                "{}:{}: invalid value {value:?} for `{key}` (expected {what})",
                path.display(),
                idx + 1
            ))
        };
        match key {
            "qubits" => config.qubits = Some(value.parse().map_err(|_| bad_value("an integer"))?),
            "entity-layers" => {
                config.entity_layers = Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "relation-layers" => {
                config.relation_layers = Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "negatives" => {
                config.negatives = Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "separate-negatives" => {
                config.separate_negatives =
                    Some(value.parse().map_err(|_| bad_value("true or false"))?)
            }
            "epochs" => config.epochs = Some(value.parse().map_err(|_| bad_value("an integer"))?),
            "lr" => config.lr = Some(value.parse().map_err(|_| bad_value("a number"))?),
            "batch-size" => {
                config.batch_size = Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "seed" => config.seed = Some(value.parse().map_err(|_| bad_value("an integer"))?),
            "val-mrr" => {
                config.val_mrr = Some(value.parse().map_err(|_| bad_value("true or false"))?)
            }
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "{}:{}: unknown configuration key `{key}`",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(config)
}

/// Merges defaults, config-file entries, and command-line flags (highest
/// precedence last).
fn build_training_config(args: &TrainArgs) -> Result<TrainingConfig> {
    let file = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => FileConfig::default(),
    };
    let defaults = TrainingConfig::default();
    let seed = args.seed.or(file.seed).unwrap_or(defaults.seed);
    let mut config = TrainingConfig {
        n_qubits: args.qubits.or(file.qubits).unwrap_or(defaults.n_qubits),
        entity_layers: args
            .entity_layers
            .or(file.entity_layers)
            .unwrap_or(defaults.entity_layers),
        relation_layers: args
            .relation_layers
            .or(file.relation_layers)
            .unwrap_or(defaults.relation_layers),
        learning_rate: args.lr.or(file.lr).unwrap_or(defaults.learning_rate),
        epochs: args.epochs.or(file.epochs).unwrap_or(defaults.epochs),
        batch_size: args
            .batch_size
            .or(file.batch_size)
            .unwrap_or(defaults.batch_size),
        seed,
        separate_negatives: args.separate_negatives
            || file.separate_negatives.unwrap_or(false),
        validation_mrr: args.val_mrr || file.val_mrr.unwrap_or(false),
        ..defaults
    };
    config.negative.k = args
        .negatives
        .or(file.negatives)
        .unwrap_or(config.negative.k);
    // One user-facing seed drives initialization, shuffling, and sampling.
    config.negative.seed = seed;
    Ok(config)
}

fn require_dir(path: &Path) -> Result<()> {
    if !path.is_dir() {
        return Err(Error::InvalidConfig(format!(
            "data directory {} does not exist or is not a directory",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    require_dir(&args.data_dir)?;
    let kg = KnowledgeGraph::load_dir(&args.data_dir)?;
    println!(
        "dataset: {} entities, {} relations, {}/{}/{} train/valid/test triples",
        kg.n_entities(),
        kg.n_relations(),
        kg.train().len(),
        kg.valid().len(),
        kg.test().len()
    );
    let config = build_training_config(&args)?;
    println!(
        "model: {} qubits, {}/{} entity/relation layers, k={} negatives{}, lr={}, batch={}, seed={}",
        config.n_qubits,
        config.entity_layers,
        config.relation_layers,
        config.negative.k,
        if config.separate_negatives {
            " (separate)"
        } else {
            " (mixture)"
        },
        config.learning_rate,
        config.batch_size,
        config.seed
    );

    let total_epochs = config.epochs;
    let start = Instant::now();
    let mut last_epoch_end = start;
    let model = train_with_progress(&kg, &config, |stats| {
        let now = Instant::now();
        let mut line = format!(
            "epoch {:>3}/{} loss {:.6}",
            stats.epoch + 1,
            total_epochs,
            stats.loss
        );
        if let Some(mrr) = stats.validation_mrr {
            let _ = write!(line, " val_mrr {mrr:.4}");
        }
        let _ = write!(line, " ({:.1}s)", (now - last_epoch_end).as_secs_f64());
        last_epoch_end = now;
        println!("{line}");
    })?;
    println!("training finished in {:.1}s", start.elapsed().as_secs_f64());

    let checkpoint = Checkpoint::from_model(kg.vocab(), &model.store, &config, &model.history)?;
    checkpoint.save(&args.out)?;
    println!("checkpoint written to {}", args.out.display());

    let loss_log = args
        .loss_log
        .clone()
        .unwrap_or_else(|| args.out.with_extension("loss.csv"));
    write_loss_log(&loss_log, &model.history)?;
    println!("loss log written to {}", loss_log.display());
    Ok(())
}

/// Writes the per-epoch loss history as CSV with full-precision values.
fn write_loss_log(path: &Path, history: &[qkge::training::EpochStats]) -> Result<()> {
    let mut out = String::from("epoch,loss,validation_mrr\n");
    for stats in history {
        let mrr = stats
            .validation_mrr
            .map(|m| format!("{m:.16e}"))
            .unwrap_or_default();
        let _ = writeln!(out, "{},{:.16e},{}", stats.epoch, stats.loss, mrr);
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let checkpoint = Checkpoint::load(&args.model)?;
    require_dir(&args.data_dir)?;
    let kg = KnowledgeGraph::load_dir(&args.data_dir)?;
    checkpoint.check_matches(kg.vocab())?;
    let store = checkpoint.to_store()?;
    let report = evaluate(&store, &kg, args.split.into(), args.mode.into())?;
    println!("split      {}", report.split);
    println!("mode       {}", report.mode);
    println!("triples    {}", report.n_triples);
    println!("ranks      {}", report.n_ranks);
    println!("MRR        {:.4}  ({:.2}%)", report.mrr, 100.0 * report.mrr);
    println!("Hits@1     {:.4}  ({:.2}%)", report.hits1, 100.0 * report.hits1);
    println!("Hits@10    {:.4}  ({:.2}%)", report.hits10, 100.0 * report.hits10);
    if let Some(json_path) = &args.json {
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| Error::json(json_path, e))?;
        std::fs::write(json_path, json + "\n").map_err(|e| Error::io(json_path, e))?;
        println!("metrics written to {}", json_path.display());
    }
    Ok(())
}

fn cmd_inspect(args: InspectArgs) -> Result<()> {
    let checkpoint = Checkpoint::load(&args.model)?;
    let store = checkpoint.to_store()?;
    let vocab = checkpoint.vocabulary()?;
    println!("checkpoint {}", args.model.display());
    println!("format     v{}", checkpoint.format_version);
    println!(
        "register   {} qubit(s), dimension {}",
        store.n_qubits(),
        1usize << store.n_qubits()
    );
    println!(
        "entities   {} × {} angles ({} layers)",
        store.n_entities(),
        store.entity_shape().param_count(),
        store.entity_shape().n_layers()
    );
    println!(
        "relations  {} × {} angles ({} layers)",
        store.n_relations(),
        store.relation_shape().param_count(),
        store.relation_shape().n_layers()
    );
    println!(
        "trained    {} epoch(s), lr {}, batch {}, k={} negatives, seed {}",
        checkpoint.config.epochs,
        checkpoint.config.learning_rate,
        checkpoint.config.batch_size,
        checkpoint.config.negative.k,
        checkpoint.config.seed
    );
    if let Some(last) = checkpoint.history.last() {
        println!("final loss {:.6} (epoch {})", last.loss, last.epoch + 1);
    }
    if let Some(parts) = &args.triple {
        let raw = RawTriple {
            head: parts[0].clone(),
            relation: parts[1].clone(),
            tail: parts[2].clone(),
        };
        let triple = vocab.resolve(&raw)?;
        let score = store
            .score_triple(triple.head, triple.relation, triple.tail)?
            .value();
        println!(
            "score      δ({}, {}, {}) = {:.6}",
            raw.head, raw.relation, raw.tail, score
        );
    }
    Ok(())
}

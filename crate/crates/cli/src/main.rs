//! `stylo`: stylometric features from CoNLL-U, and classifiers over them.

mod config;
mod input;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use stylo_core::matrix::encode_doc_id;
use stylo_core::{compute_matrix, FeatureMatrix, Group, Lexicons, MetricRegistry};
use stylo_ml::{
    explain_classes, read_labels, train_and_evaluate, ExplainConfig, Hyperparams, LabeledDataset, SplitSpec,
};

use config::Config;

#[derive(Parser)]
#[command(name = "stylo", version, about = "Stylometric feature extraction for annotated Ukrainian text")]
struct Cli {
    /// `key = value` file with defaults for the options below.
    #[arg(long, global = true, env = "STYLO_CONFIG")]
    config: Option<PathBuf>,
    /// Directory of lexicon TSV files replacing the bundled ones.
    #[arg(long, global = true, env = "STYLO_DATA_DIR")]
    data_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the document × metric matrix.
    Extract(ExtractArgs),
    /// List metric ids, groups, scopes and descriptions.
    Catalog(CatalogArgs),
    /// Show the tokens a metric matched.
    Trace(TraceArgs),
    /// Train the voting ensemble and score it on held-out documents.
    Classify(ClassifyArgs),
    /// Per-class Shapley attributions of the trained ensemble.
    Explain(ExplainArgs),
    /// Write the bundled lexicons to a directory, for editing and `--data-dir`.
    Lexicons {
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct ExtractArgs {
    /// CoNLL-U files or directories.
    #[arg(long, short, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, short, default_value = "features.csv")]
    output: PathBuf,
    /// Comma-separated metric groups (lexical, grammar, syntax, pos).
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<String>>,
    /// Also write `trace_<METRIC>.tsv` for this metric; repeatable.
    #[arg(long)]
    trace: Vec<String>,
    /// Directory for trace files (default: next to the output).
    #[arg(long)]
    trace_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, value_delimiter = ',')]
    groups: Option<Vec<String>>,
    /// Default: standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, short, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long, short)]
    metric: String,
    /// Only this document.
    #[arg(long)]
    doc: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Feature matrix written by `extract`.
    #[arg(long, default_value = "features.csv")]
    features: PathBuf,
    /// `doc_id,label` CSV with a header row.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Largest forest size considered.
    #[arg(long)]
    trees: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    train: TrainArgs,
    /// Summary TSV (default: standard output).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Test-set predictions as `doc_id,gold,predicted`.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    train: TrainArgs,
    /// Attribution TSV (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    permutations: Option<usize>,
    /// Test documents explained per class.
    #[arg(long)]
    rows_per_class: Option<usize>,
    /// Keep the `top` features per class by absolute attribution.
    #[arg(long)]
    top: Option<usize>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stylo: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(n) = cfg.pick(cli.jobs, "jobs")? {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    let data_dir: Option<PathBuf> = cfg.pick(cli.data_dir.clone(), "data_dir")?;
    let registry = || -> Result<MetricRegistry> {
        let lex = match &data_dir {
            Some(d) => Lexicons::load(d)?,
            None => Lexicons::bundled(),
        };
        Ok(MetricRegistry::builtin(Arc::new(lex)))
    };
    match cli.command {
        Command::Extract(a) => extract(&registry()?, &cfg, a),
        Command::Catalog(a) => {
            let reg = select(registry()?, &cfg, a.groups)?;
            write_to(a.output.as_deref(), |w| Ok(w.write_all(reg.catalog_tsv().as_bytes())?))
        }
        Command::Trace(a) => trace(&registry()?, a),
        Command::Classify(a) => classify(&cfg, a),
        Command::Explain(a) => explain(&registry()?, &cfg, a),
        Command::Lexicons { output } => {
            std::fs::create_dir_all(&output)?;
            Lexicons::export_bundled(&output).with_context(|| format!("writing {}", output.display()))
        }
    }
}

fn select(reg: MetricRegistry, cfg: &Config, groups: Option<Vec<String>>) -> Result<MetricRegistry> {
    let groups: Option<String> = cfg.pick(groups.map(|g| g.join(",")), "groups")?;
    let Some(groups) = groups else { return Ok(reg) };
    let parsed = groups.split(',').map(|g| g.trim().parse::<Group>()).collect::<Result<Vec<_>, _>>()?;
    Ok(reg.select_groups(&parsed)?)
}

/// Buffered writer to `path`, or to standard output when `None`.
fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().with_context(|| format!("writing {}", p.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w)?;
            Ok(w.flush()?)
        }
    }
}

fn write_trace(
    reg: &MetricRegistry,
    docs: &[stylo_core::Document],
    metric: &str,
    doc_filter: Option<&str>,
    w: &mut dyn Write,
) -> Result<()> {
    writeln!(w, "doc_id\tsent_id\ttoken_index\tform")?;
    for d in docs.iter().filter(|d| doc_filter.is_none_or(|f| d.doc_id == f)) {
        for m in reg.explain_matches(d, metric)?.matched {
            writeln!(w, "{}\t{}\t{}\t{}", encode_doc_id(&d.doc_id), m.sent_id, m.index, m.form)?;
        }
    }
    Ok(())
}

fn extract(reg: &MetricRegistry, cfg: &Config, a: ExtractArgs) -> Result<()> {
    let reg = select(reg.clone(), cfg, a.groups)?;
    for id in &a.trace {
        if reg.get(id).is_none() {
            bail!("unknown metric `{id}` for --trace");
        }
    }
    let docs = input::load_corpus(&a.input)?;
    let matrix = compute_matrix(&docs, &reg)?;
    write_to(Some(&a.output), |w| Ok(matrix.write_csv(w)?))?;
    let dir = a.trace_dir.unwrap_or_else(|| a.output.parent().map(Path::to_path_buf).unwrap_or_default());
    for id in &a.trace {
        let path = dir.join(format!("trace_{id}.tsv"));
        write_to(Some(&path), |w| write_trace(&reg, &docs, id, None, w))?;
    }
    Ok(())
}

fn trace(reg: &MetricRegistry, a: TraceArgs) -> Result<()> {
    if reg.get(&a.metric).is_none() {
        bail!("unknown metric `{}`", a.metric);
    }
    let docs = input::load_corpus(&a.input)?;
    if let Some(d) = &a.doc {
        if !docs.iter().any(|x| &x.doc_id == d) {
            bail!("no document `{d}` in input");
        }
    }
    write_to(a.output.as_deref(), |w| write_trace(reg, &docs, &a.metric, a.doc.as_deref(), w))
}

fn dataset(a: &TrainArgs) -> Result<LabeledDataset> {
    let f = File::open(&a.features).with_context(|| format!("opening {}", a.features.display()))?;
    let matrix = FeatureMatrix::read_csv(f).map_err(|e| anyhow::anyhow!("{}: {e}", a.features.display()))?;
    let l = File::open(&a.labels).with_context(|| format!("opening {}", a.labels.display()))?;
    let labels = read_labels(l).map_err(|e| anyhow::anyhow!("{}: {e}", a.labels.display()))?;
    Ok(LabeledDataset::from_matrix(&matrix, &labels)?)
}

fn hyper(cfg: &Config, a: &TrainArgs) -> Result<(SplitSpec, Hyperparams)> {
    let seed = cfg.pick(a.seed, "seed")?.unwrap_or(0);
    let mut hp = Hyperparams { seed, ..Default::default() };
    if let Some(t) = cfg.pick(a.trees, "trees")? {
        if t == 0 {
            bail!("--trees must be positive");
        }
        hp.n_trees = t;
    }
    Ok((SplitSpec { seed, ..Default::default() }, hp))
}

fn classify(cfg: &Config, a: ClassifyArgs) -> Result<()> {
    let ds = dataset(&a.train)?;
    let (split, hp) = hyper(cfg, &a.train)?;
    let ev = train_and_evaluate(&ds, &split, &hp)?;
    if let Some(p) = &a.predictions {
        write_to(Some(p), |w| Ok(ev.write_predictions(&ds, w)?))?;
    }
    write_to(a.report.as_deref(), |w| Ok(ev.write_summary(&ds, w)?))
}

fn explain(reg: &MetricRegistry, cfg: &Config, a: ExplainArgs) -> Result<()> {
    let ds = dataset(&a.train)?;
    let (split, hp) = hyper(cfg, &a.train)?;
    let ev = train_and_evaluate(&ds, &split, &hp)?;
    let defaults = ExplainConfig::default();
    let ecfg = ExplainConfig {
        rows_per_class: cfg.pick(a.rows_per_class, "rows_per_class")?.unwrap_or(defaults.rows_per_class),
        n_permutations: cfg.pick(a.permutations, "permutations")?.unwrap_or(defaults.n_permutations),
        seed: hp.seed,
        top: cfg.pick(a.top, "top")?,
    };
    let describe = |id: &str| reg.get(id).map(|s| s.description.clone()).unwrap_or_default();
    let report = explain_classes(&ev.model, &ds, &ev.split.test, &ev.split.train, &describe, &ecfg)?;
    write_to(a.output.as_deref(), |w| Ok(report.write_tsv(w)?))
}

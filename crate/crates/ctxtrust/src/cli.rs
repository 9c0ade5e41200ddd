//! The `ctxtrust` command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ctxtrust_core::dataset::{build_profiles, filter_profiles, Review, TrustProfile};
use ctxtrust_core::evaluation::run_comparison;
use ctxtrust_core::ontology::OntologyTree;
use ctxtrust_core::semantic::{ngd, nss_or_floor, Epsilon};
use ctxtrust_core::similarity::{
    keyword_similarity, task_similarity, ContextDescriptors, KeywordContext, Measure, PathMode,
    TaskContext,
};
use ctxtrust_core::trust::{predict_for_pair, predict_trust};

use crate::contexts::parse_descriptors;
use crate::fsutil::write_atomic;
use crate::pairs::parse_pairs;
use crate::provider::{open_provider, CachedProvider, HitCountProvider, PairCache, ProviderConfig};
use crate::report::{fixed, report_csv, summary_table};
use crate::reviews::{load_review_dir, load_review_file};
use crate::tree_file::{read_tree, write_tree};

/// Decimals used for every number the command prints or writes.
pub const DECIMALS: usize = 6;

#[derive(Debug, Parser)]
#[command(
    name = "ctxtrust",
    version,
    about = "Weighted ontology trees and cross-context trust prediction"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weight every tree edge by the NSS of its endpoint labels.
    Weigh(WeighArgs),
    /// Similarity of two contexts under one measure.
    Sim(SimArgs),
    /// Predict a seller's rate in an unknown context from a known one.
    Predict(PredictArgs),
    /// Compare measures over a list of seller/context pairs.
    Eval(EvalArgs),
    /// Show hit counts, NGD and NSS for a term pair.
    Counts(CountsArgs),
}

#[derive(Debug, Args)]
pub struct WeighArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// Provider config (TOML).
    #[arg(long)]
    pub provider: PathBuf,
    /// Pair cache file; created if missing.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// weighted, eq1, shared, keyword or task.
    #[arg(long, default_value = "weighted")]
    pub measure: String,
    /// How weights combine for the weighted measure.
    #[arg(long, default_value = "product")]
    pub mode: String,
    /// Keyword/task descriptions of contexts.
    #[arg(long)]
    pub contexts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Match node labels ignoring case.
    #[arg(long)]
    pub ignore_case: bool,
    /// First context: a node label, or with keyword/task measures and no
    /// --contexts file, an inline comma-separated description.
    pub a: String,
    pub b: String,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Review files or directories, optionally as SELLER=PATH.
    #[arg(long)]
    pub reviews: Vec<String>,
    #[arg(long)]
    pub seller: Option<String>,
    /// Known rate, instead of reading reviews.
    #[arg(long)]
    pub rate: Option<f64>,
    #[arg(long)]
    pub known: String,
    #[arg(long)]
    pub unknown: String,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub tree: PathBuf,
    /// Review files or directories, optionally as SELLER=PATH.
    #[arg(long, required = true)]
    pub reviews: Vec<String>,
    /// CSV with header seller,known,unknown.
    #[arg(long)]
    pub pairs: PathBuf,
    /// Measures to compare, comma-separated or repeated.
    #[arg(long = "measure", value_delimiter = ',', default_values_t = ["weighted".to_string(), "eq1".to_string()])]
    pub measures: Vec<String>,
    #[arg(long, default_value = "product")]
    pub mode: String,
    #[arg(long)]
    pub contexts: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub min_contexts: usize,
    #[arg(long, default_value_t = 30)]
    pub min_ratings: usize,
    /// Report CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    #[arg(long)]
    pub provider: PathBuf,
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    pub x: String,
    pub y: String,
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Weigh(args) => weigh(args, out, err),
        Command::Sim(args) => sim(args, out),
        Command::Predict(args) => predict(args, out),
        Command::Eval(args) => eval(args, out, err),
        Command::Counts(args) => counts(args, out, err),
    }
}

fn epsilon(value: f64) -> Result<Epsilon> {
    Epsilon::new(value).map_err(|e| anyhow!("--epsilon: {e}"))
}

fn open_cached(
    provider: &Path,
    cache: Option<&Path>,
) -> Result<CachedProvider<Box<dyn HitCountProvider + Send + Sync>>> {
    let config = ProviderConfig::load(provider)?;
    let inner = open_provider(&config)?;
    let cache = match cache {
        Some(path) => PairCache::load(path)?,
        None => PairCache::default(),
    };
    Ok(CachedProvider::new(inner, cache))
}

fn weigh(args: WeighArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let eps = epsilon(args.epsilon)?;
    let tree = read_tree(&args.tree)?;
    let mut provider = open_cached(&args.provider, args.cache.as_deref())?;
    let weighing = tree.weigh(&mut provider, eps)?;

    write_tree(&args.out, &weighing.tree, DECIMALS)?;
    if let Some(cache) = &args.cache {
        provider.cache().save(cache)?;
    }
    let t = &weighing.tree;
    for e in t.edges() {
        let w = t.weight(e.child).expect("weighed tree has every weight");
        writeln!(
            out,
            "{}\t{}\t{}",
            t.label(e.parent),
            t.label(e.child),
            fixed(w)
        )?;
    }
    for a in &weighing.annotations {
        writeln!(err, "degenerate edge: {a}")?;
    }
    writeln!(err, "upstream lookups: {}", provider.upstream_lookups())?;
    Ok(())
}

fn load_descriptors(path: Option<&Path>) -> Result<Option<ContextDescriptors>> {
    path.map(|p| {
        let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
        Ok(parse_descriptors(&text, &p.display().to_string())?)
    })
    .transpose()
}

fn measure(args: &MeasureArgs) -> Result<Measure> {
    let mode: PathMode = args.mode.parse()?;
    Ok(Measure::parse(&args.measure, mode)?)
}

fn require_tree(path: Option<&Path>, measure: Measure) -> Result<OntologyTree> {
    match path {
        Some(p) => Ok(read_tree(p)?),
        None if measure.uses_tree() => bail!("--tree is required for the {} measure", measure),
        None => Ok(OntologyTree::single("(none)")),
    }
}

/// Resolves a user-given label to the tree's spelling.
fn resolve(tree: &OntologyTree, label: &str, ignore_case: bool) -> Result<String> {
    let id = tree.find(label, ignore_case)?;
    Ok(tree.label(id).to_string())
}

fn similarity_between(
    tree: &OntologyTree,
    descriptors: Option<&ContextDescriptors>,
    measure: Measure,
    a: &str,
    b: &str,
    ignore_case: bool,
) -> Result<f64> {
    if !measure.uses_tree() && descriptors.is_none() {
        // Inline descriptions.
        return Ok(match measure {
            Measure::Keyword => {
                keyword_similarity(&a.parse::<KeywordContext>()?, &b.parse::<KeywordContext>()?)
            }
            _ => task_similarity(&a.parse::<TaskContext>()?, &b.parse::<TaskContext>()?)?,
        });
    }
    let (a, b) = if measure.uses_tree() {
        (
            resolve(tree, a, ignore_case)?,
            resolve(tree, b, ignore_case)?,
        )
    } else {
        (a.to_string(), b.to_string())
    };
    let empty = ContextDescriptors::default();
    Ok(measure.similarity(tree, descriptors.unwrap_or(&empty), &a, &b)?)
}

fn sim(args: SimArgs, out: &mut dyn Write) -> Result<()> {
    let measure = measure(&args.measure)?;
    let tree = require_tree(args.tree.as_deref(), measure)?;
    let descriptors = load_descriptors(args.measure.contexts.as_deref())?;
    let s = similarity_between(
        &tree,
        descriptors.as_ref(),
        measure,
        &args.a,
        &args.b,
        args.ignore_case,
    )?;
    writeln!(out, "{}", fixed(s))?;
    Ok(())
}

/// Parses `SELLER=PATH`, `PATH` (file stem is the seller) or a directory.
fn load_reviews(specs: &[String]) -> Result<Vec<(String, Vec<Review>)>> {
    let mut all = Vec::new();
    for spec in specs {
        let (seller, path) = match spec.split_once('=') {
            Some((s, p)) if !s.is_empty() && !Path::new(spec).exists() => (Some(s), Path::new(p)),
            _ => (None, Path::new(spec.as_str())),
        };
        if path.is_dir() {
            if seller.is_some() {
                bail!("{spec}: a seller name cannot be given for a directory");
            }
            all.extend(load_review_dir(path)?);
        } else {
            all.push(load_review_file(path, seller)?);
        }
    }
    Ok(all)
}

fn find_profile<'a>(
    profiles: &'a [TrustProfile],
    seller: Option<&str>,
) -> Result<&'a TrustProfile> {
    match seller {
        Some(s) => profiles
            .iter()
            .find(|p| p.seller == s)
            .ok_or_else(|| anyhow!("no reviews for seller '{s}'")),
        None => match profiles {
            [only] => Ok(only),
            [] => bail!("no reviews loaded"),
            _ => bail!("several sellers loaded; choose one with --seller"),
        },
    }
}

fn predict(args: PredictArgs, out: &mut dyn Write) -> Result<()> {
    let measure = measure(&args.measure)?;
    let tree = require_tree(args.tree.as_deref(), measure)?;
    let descriptors = load_descriptors(args.measure.contexts.as_deref())?;
    let ignore_case = false;

    let (seller, known_rate, similarity, predicted) = if let Some(rate) = args.rate {
        let s = similarity_between(
            &tree,
            descriptors.as_ref(),
            measure,
            &args.known,
            &args.unknown,
            ignore_case,
        )?;
        (None, rate, s, predict_trust(rate, s)?)
    } else {
        if args.reviews.is_empty() {
            bail!("give --reviews or --rate");
        }
        let profiles = build_profiles(load_reviews(&args.reviews)?);
        let profile = find_profile(&profiles, args.seller.as_deref())?;
        let d = descriptors.unwrap_or_default();
        let p = predict_for_pair(profile, &tree, &d, measure, &args.known, &args.unknown)?;
        (Some(p.seller), p.known_rate, p.similarity, p.predicted_rate)
    };
    if let Some(seller) = seller {
        writeln!(out, "seller\t{seller}")?;
    }
    writeln!(out, "measure\t{measure}")?;
    writeln!(out, "similarity\t{}", fixed(similarity))?;
    writeln!(out, "known_rate\t{}", fixed(known_rate))?;
    writeln!(out, "predicted_rate\t{}", fixed(predicted))?;
    Ok(())
}

fn eval(args: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mode: PathMode = args.mode.parse()?;
    let measures = args
        .measures
        .iter()
        .map(|m| Measure::parse(m, mode))
        .collect::<Result<Vec<_>, _>>()?;
    if args.min_contexts == 0 || args.min_ratings == 0 {
        bail!("--min-contexts and --min-ratings must be at least 1");
    }
    let tree = read_tree(&args.tree)?;
    let descriptors = load_descriptors(args.contexts.as_deref())?.unwrap_or_default();
    let pairs_text = fs::read_to_string(&args.pairs)
        .with_context(|| format!("cannot read {}", args.pairs.display()))?;
    let pairs = parse_pairs(&pairs_text, &args.pairs.display().to_string())?;

    let profiles = build_profiles(load_reviews(&args.reviews)?);
    let eligible = filter_profiles(&profiles, args.min_contexts, args.min_ratings);
    if eligible.is_empty() {
        bail!(
            "no eligible sellers: none has {} contexts with at least {} ratings each",
            args.min_contexts,
            args.min_ratings
        );
    }
    let report = run_comparison(&eligible, &tree, &descriptors, &measures, &pairs)?;
    let csv = report_csv(&report);
    let summary = summary_table(&report);
    match &args.out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())
                .with_context(|| format!("cannot write {}", path.display()))?;
            out.write_all(summary.as_bytes())?;
        }
        None => {
            out.write_all(csv.as_bytes())?;
            err.write_all(summary.as_bytes())?;
        }
    }
    Ok(())
}

fn counts(args: CountsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let eps = epsilon(args.epsilon)?;
    let provider = open_cached(&args.provider, args.cache.as_deref())?;
    let c = provider.counts(&args.x, &args.y)?;
    if let Some(cache) = &args.cache {
        provider.cache().save(cache)?;
    }
    let distance = match ngd(&c) {
        Ok(d) => d.to_string(),
        Err(e) => format!("undefined ({e})"),
    };
    let (score, degenerate) = nss_or_floor(&c, eps);
    writeln!(out, "x\ty\tfx\tfy\tfxy\tm\tngd\tnss")?;
    writeln!(
        out,
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        args.x,
        args.y,
        c.fx(),
        c.fy(),
        c.fxy(),
        c.m(),
        distance,
        fixed(score)
    )?;
    if let Some(reason) = degenerate {
        writeln!(err, "nss floored to epsilon: {reason}")?;
    }
    writeln!(err, "upstream lookups: {}", provider.upstream_lookups())?;
    Ok(())
}

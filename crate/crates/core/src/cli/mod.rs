//! The `generate`, `fit` and `eval` commands.
//!
//! Each command writes its files into `--out` and finishes with a
//! `manifest.json` listing the configuration, the dataset fingerprint and
//! every emitted file. A run that fails after creating the directory still
//! writes the manifest, with `status = "failed"`.

mod output;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use log::info;
use rayon::prelude::*;
use serde::Serialize;

pub use output::{read_synthetic_dir, write_corpus_csv, write_edges_csv, RunManifest, SyntheticDir};
use output::{create_dir, write_histogram_csv, write_json, write_trace_csv};

use crate::data::{generate_synthetic, kfold_split, load_citation_dataset};
use crate::error::{NrtError, Result};
use crate::eval::{
    doc_topic_proportions, fitted_topics, link_prediction_score, word_prediction_score,
    word_topic_distribution, EvalReport,
};
use crate::model::{active_topics, Corpus, DocumentNetwork, Hyperparameters, SamplerMode};
use crate::samplers::{run_chain, SamplerConfig};

#[derive(Debug, Parser)]
#[command(name = "nrt", version, about = "Nonparametric relational topic models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a synthetic linked corpus.
    Generate(GenerateArgs),
    /// Fit one chain and write its trace and posterior summary.
    Fit(FitArgs),
    /// Cross-validated link and word prediction.
    Eval(EvalArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GenerateArgs {
    /// Number of topics.
    #[arg(long = "K")]
    pub k: usize,
    /// Number of documents.
    #[arg(long = "D")]
    pub d: usize,
    /// Vocabulary size.
    #[arg(long = "W")]
    pub w: usize,
    /// Maximum document length.
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct DataArgs {
    /// LINQS `.content` file.
    #[arg(long, requires = "cites", conflicts_with = "synthetic_dir")]
    pub data: Option<PathBuf>,
    /// LINQS `.cites` file.
    #[arg(long, requires = "data")]
    pub cites: Option<PathBuf>,
    /// Directory written by `nrt generate`.
    #[arg(long)]
    pub synthetic_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ChainArgs {
    #[arg(long, value_enum, default_value_t = SamplerMode::Slice)]
    pub sampler: SamplerMode,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, default_value_t = 100)]
    pub burnin: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Truncation level; the slice chain starts with this many atoms.
    /// Defaults to ten per document, at most 2000.
    #[arg(long = "trunc-K")]
    pub trunc_k: Option<usize>,
    /// Post-burn-in snapshot period.
    #[arg(long, default_value_t = 10)]
    pub snapshot_every: usize,
    /// Check the state invariants after every sweep.
    #[arg(long)]
    pub check_invariants: bool,
}

impl ChainArgs {
    pub fn hyperparameters(&self, num_docs: usize) -> Hyperparameters {
        Hyperparameters {
            a0: self.a0,
            c0: self.c0,
            b0: self.b0,
            alpha: self.alpha,
            alpha0: self.alpha0,
            gamma_mass: self.gamma,
            truncation_k: self
                .trunc_k
                .unwrap_or_else(|| Hyperparameters::default_truncation(num_docs)),
            ..Hyperparameters::default()
        }
    }

    pub fn sampler_config(&self, seed: u64) -> SamplerConfig {
        SamplerConfig {
            snapshot_every: self.snapshot_every,
            check_invariants: self.check_invariants,
            ..SamplerConfig::new(self.sampler, self.iters, self.burnin, seed)
        }
    }
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first) and runs the chosen command.
pub fn run<I, T>(args: I) -> Result<RunManifest>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| NrtError::InvalidConfig(e.to_string()))?;
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Result<RunManifest> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Eval(a) => cmd_eval(a),
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<RunManifest> {
    let (corpus, network, truth) = generate_synthetic(args.k, args.d, args.w, args.n, args.seed)?;
    create_dir(&args.out)?;
    let mut manifest = RunManifest::start("generate", serde_json::to_value(args)?);
    manifest.dataset_fingerprint = Some(corpus.fingerprint());
    let outcome = (|| {
        write_corpus_csv(&args.out.join("corpus.csv"), &corpus)?;
        manifest.outputs.push("corpus.csv".into());
        write_edges_csv(&args.out.join("edges.csv"), &network)?;
        manifest.outputs.push("edges.csv".into());
        write_json(&args.out.join("ground_truth.json"), &truth)?;
        manifest.outputs.push("ground_truth.json".into());
        Ok(())
    })();
    finish(manifest, &args.out, outcome)
}

/// Posterior summary of a fitted chain.
///
/// Topic labels are not aligned across snapshots, so only the per-snapshot
/// topic counts are reported from the snapshots; `final_state` holds the
/// topics of the last sweep.
#[derive(Debug, Serialize)]
pub struct FitSummary {
    pub sampler: SamplerMode,
    pub iterations: usize,
    pub burnin: usize,
    pub mean_active_topics: Option<f64>,
    pub mean_log_likelihood: Option<f64>,
    pub snapshots: Vec<SnapshotSummary>,
    pub final_state: FinalState,
}

#[derive(Debug, Serialize)]
pub struct SnapshotSummary {
    pub iteration: usize,
    pub k_active: usize,
    pub log_likelihood: f64,
}

#[derive(Debug, Serialize)]
pub struct FinalState {
    /// Indices of the active topics in the chain state.
    pub topics: Vec<usize>,
    pub pi: Vec<f64>,
    /// One word distribution per active topic.
    pub theta: Vec<Vec<f64>>,
    /// Per-document proportions over the active topics.
    pub doc_topic_proportions: Vec<Vec<f64>>,
}

pub fn cmd_fit(args: &FitArgs) -> Result<RunManifest> {
    let (corpus, network) = load_data(&args.data)?;
    let hyper = args.chain.hyperparameters(corpus.num_docs());
    let config = args.chain.sampler_config(args.chain.seed);
    create_dir(&args.out)?;
    let mut manifest = RunManifest::start("fit", fit_config(args, &hyper)?);
    manifest.dataset_fingerprint = Some(corpus.fingerprint());
    info!(
        "fitting {} chain on {} documents, {} words, {} edges",
        config.mode,
        corpus.num_docs(),
        corpus.vocab_size(),
        network.num_edges()
    );
    let outcome = (|| {
        let (state, trace) = run_chain(&corpus, &network, &hyper, &config)?;
        write_trace_csv(&args.out.join("trace.csv"), &trace)?;
        manifest.outputs.push("trace.csv".into());
        write_histogram_csv(&args.out.join("k_histogram.csv"), &trace.active_topic_histogram(config.burnin))?;
        manifest.outputs.push("k_histogram.csv".into());
        let topics = active_topics(&state);
        let summary = FitSummary {
            sampler: config.mode,
            iterations: config.max_iter,
            burnin: config.burnin,
            mean_active_topics: trace.mean_active_topics(config.burnin),
            mean_log_likelihood: trace.mean_log_likelihood(config.burnin),
            snapshots: trace
                .snapshots
                .iter()
                .map(|s| SnapshotSummary {
                    iteration: s.iteration,
                    k_active: s.topics.len(),
                    log_likelihood: s.log_likelihood,
                })
                .collect(),
            final_state: FinalState {
                pi: topics.iter().map(|&k| state.pi(k)).collect(),
                theta: topics.iter().map(|&k| state.theta(k).to_vec()).collect(),
                doc_topic_proportions: (0..state.num_docs())
                    .map(|d| doc_topic_proportions(&state, d, &topics))
                    .collect(),
                topics,
            },
        };
        write_json(&args.out.join("summary.json"), &summary)?;
        manifest.outputs.push("summary.json".into());
        Ok(())
    })();
    finish(manifest, &args.out, outcome)
}

pub fn cmd_eval(args: &EvalArgs) -> Result<RunManifest> {
    let (corpus, network) = load_data(&args.data)?;
    let split = kfold_split(corpus.num_docs(), args.folds, args.chain.seed)?;
    create_dir(&args.out)?;
    let hyper_echo = args.chain.hyperparameters(corpus.num_docs());
    let mut config_echo = serde_json::to_value(args)?;
    config_echo["hyperparameters"] = serde_json::to_value(&hyper_echo)?;
    let mut manifest = RunManifest::start("eval", config_echo);
    manifest.dataset_fingerprint = Some(corpus.fingerprint());

    // independent seeds per fold so chains can run in any order
    let reports: Vec<Result<EvalReport>> = (0..args.folds)
        .into_par_iter()
        .map(|fold| {
            let report = evaluate_fold(args, &corpus, &network, &split.test_docs(fold), &split.train_docs(fold), fold)?;
            write_json(&args.out.join(fold_file(fold)), &report)?;
            info!("fold {fold}: Lp {:.3}, Wp {:.3}", report.lp_score, report.wp_score);
            Ok(report)
        })
        .collect();

    let outcome = (|| {
        let mut done = Vec::new();
        let mut first_error = None;
        for (fold, r) in reports.into_iter().enumerate() {
            match r {
                Ok(report) => {
                    manifest.outputs.push(fold_file(fold));
                    done.push(report);
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
        if let Some(e) = first_error {
            return Err(e);
        }
        let path = args.out.join("aggregate.csv");
        let file = std::fs::File::create(&path).map_err(|e| NrtError::io(format!("writing {}", path.display()), e))?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(["fold", "lp", "wp", "mean_k_active"])?;
        for r in &done {
            w.serialize((r.fold_id, r.lp_score, r.wp_score, r.mean_active_topics))?;
        }
        w.flush().map_err(|e| NrtError::io(format!("writing {}", path.display()), e))?;
        manifest.outputs.push("aggregate.csv".into());
        Ok(())
    })();
    finish(manifest, &args.out, outcome)
}

/// Trains on `train_docs` and scores `test_docs` against them.
pub fn evaluate_fold(
    args: &EvalArgs,
    corpus: &Corpus,
    network: &DocumentNetwork,
    test_docs: &[usize],
    train_docs: &[usize],
    fold: usize,
) -> Result<EvalReport> {
    let train_corpus = corpus.subset(train_docs);
    let train_network = network.subnetwork(train_docs);
    let hyper = args.chain.hyperparameters(train_corpus.num_docs());
    let seed = args.chain.seed.wrapping_add(fold as u64 + 1);
    let config = args.chain.sampler_config(seed);
    let (state, trace) = run_chain(&train_corpus, &train_network, &hyper, &config)?;
    let (doc_topics, theta) = fitted_topics(&state);
    let word_topics = word_topic_distribution(&theta)?;
    let link = link_prediction_score(test_docs, train_docs, network, &doc_topics, &word_topics, corpus)?;
    let word = word_prediction_score(test_docs, train_docs, network, &doc_topics, &theta, corpus)?;
    Ok(EvalReport::new(fold, link, word, &trace, config.burnin))
}

pub fn fold_file(fold: usize) -> String {
    format!("fold_{fold}.json")
}

fn load_data(data: &DataArgs) -> Result<(Corpus, DocumentNetwork)> {
    match (&data.data, &data.cites, &data.synthetic_dir) {
        (Some(content), Some(cites), None) => {
            let ds = load_citation_dataset(content, cites)?;
            Ok((ds.corpus, ds.network))
        }
        (None, None, Some(dir)) => {
            let ds = read_synthetic_dir(dir)?;
            Ok((ds.corpus, ds.network))
        }
        _ => Err(NrtError::InvalidConfig(
            "give either --data and --cites, or --synthetic-dir".into(),
        )),
    }
}

fn fit_config(args: &FitArgs, hyper: &Hyperparameters) -> Result<serde_json::Value> {
    let mut v = serde_json::to_value(args)?;
    v["hyperparameters"] = serde_json::to_value(hyper)?;
    Ok(v)
}

fn finish(mut manifest: RunManifest, dir: &Path, outcome: Result<()>) -> Result<RunManifest> {
    manifest.finish(dir, &outcome)?;
    outcome.map(|()| manifest)
}

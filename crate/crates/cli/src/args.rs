use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use senti_core::evaluation::ModelSpec;
use senti_core::featurizer::TfidfConfig;
use senti_core::learners::{ClassWeighting, LinearSvmConfig, LogRegConfig, MlpConfig, ModelConfig, ModelKind};

#[derive(Debug, Parser)]
#[command(name = "senti", version, about = "Three-class sentiment pipeline for short social-media posts")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean, remap and deduplicate a raw CSV, writing the cleaned corpus.
    Preprocess {
        /// Output CSV (default: <out-dir>/clean.csv).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split, fit features, train one model and save a bundle.
    Train,
    /// Score a bundle on the held-out split of --data (or every row with --all).
    Evaluate {
        #[arg(long)]
        all: bool,
    },
    /// Classify one or more raw texts with a saved bundle.
    Predict {
        #[arg(required = true)]
        texts: Vec<String>,
        #[arg(long, default_value_t = 0)]
        retweets: u64,
        #[arg(long, default_value_t = 0)]
        likes: u64,
    },
    /// Train every model on one shared split and write the benchmark table.
    Benchmark {
        /// Comma-separated subset of logreg,mlp,svm.
        #[arg(long, value_delimiter = ',', default_value = "logreg,mlp,svm")]
        models: Vec<ModelKind>,
    },
    /// Write the benchmark, per-class, hyperparameter and label-mapping tables.
    Export,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    #[arg(long, global = true, default_value_t = 0.2)]
    pub test_fraction: f64,

    /// Raw input CSV.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,

    /// Model bundle path.
    #[arg(long, global = true)]
    pub bundle: Option<PathBuf>,

    #[arg(long, global = true, default_value = "outputs")]
    pub out_dir: PathBuf,

    #[arg(long, global = true, default_value = "logreg")]
    pub model: ModelKind,

    /// Label map asset replacing the bundled one.
    #[arg(long, global = true)]
    pub label_map: Option<PathBuf>,

    /// Slang dictionary asset replacing the bundled one.
    #[arg(long, global = true)]
    pub slang: Option<PathBuf>,

    /// Leetspeak table asset replacing the bundled one.
    #[arg(long, global = true)]
    pub leet: Option<PathBuf>,

    /// Drop rows whose label is not in the map instead of failing.
    #[arg(long, global = true)]
    pub drop_unmapped: bool,

    /// Read unparseable retweet/like cells as 0.
    #[arg(long, global = true)]
    pub lenient: bool,

    #[command(flatten)]
    pub hyper: Hyper,
}

/// Overrides named after the hyperparameter table. Each applies to every
/// selected model that has a parameter of that name.
#[derive(Debug, Args, Default)]
pub struct Hyper {
    #[arg(long = "C", global = true)]
    pub c: Option<f64>,
    #[arg(long = "max_iter", global = true)]
    pub max_iter: Option<usize>,
    /// balanced or none.
    #[arg(long = "class_weight", global = true, value_parser = parse_weighting)]
    pub class_weight: Option<ClassWeighting>,
    /// e.g. "256,64" or "(256, 64)".
    #[arg(long = "hidden_layer_sizes", global = true, value_parser = parse_sizes)]
    pub hidden_layer_sizes: Option<Sizes>,
    #[arg(long = "alpha", global = true)]
    pub alpha: Option<f64>,
    #[arg(long = "learning_rate_init", global = true)]
    pub learning_rate_init: Option<f64>,
    #[arg(long = "early_stopping", global = true, value_parser = parse_bool)]
    pub early_stopping: Option<bool>,
    /// Linear SVM passes over the data.
    #[arg(long = "epochs", global = true)]
    pub epochs: Option<usize>,
    /// An integer or None.
    #[arg(long = "max_features", global = true, value_parser = parse_max_features)]
    pub max_features: Option<MaxFeatures>,
    #[arg(long = "min_df", global = true)]
    pub min_df: Option<usize>,
    #[arg(long = "max_df", global = true)]
    pub max_df: Option<f64>,
    /// e.g. "1,2" or "(1, 2)".
    #[arg(long = "ngram_range", global = true, value_parser = parse_sizes)]
    pub ngram_range: Option<Sizes>,
    #[arg(long = "sublinear_tf", global = true, value_parser = parse_bool)]
    pub sublinear_tf: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Sizes(pub Vec<usize>);

#[derive(Debug, Clone, Copy)]
pub struct MaxFeatures(pub Option<usize>);

fn parse_weighting(s: &str) -> Result<ClassWeighting, String> {
    match s.to_ascii_lowercase().as_str() {
        "balanced" => Ok(ClassWeighting::Balanced),
        "none" | "uniform" => Ok(ClassWeighting::Uniform),
        _ => Err(format!("expected balanced or none, got {s:?}")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("expected True or False, got {s:?}")),
    }
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let sizes = inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().map_err(|_| format!("not a positive integer: {p:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(format!("expected a list of positive integers, got {s:?}"));
    }
    Ok(Sizes(sizes))
}

fn parse_max_features(s: &str) -> Result<MaxFeatures, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(MaxFeatures(None));
    }
    s.parse::<usize>()
        .map(|n| MaxFeatures(Some(n)))
        .map_err(|_| format!("expected an integer or None, got {s:?}"))
}

impl Hyper {
    pub fn tfidf(&self) -> Result<TfidfConfig, String> {
        let mut t = TfidfConfig::default();
        if let Some(m) = self.max_features {
            t.max_features = m.0;
        }
        if let Some(m) = self.min_df {
            t.min_df = m;
        }
        if let Some(m) = self.max_df {
            t.max_df = m;
        }
        if let Some(Sizes(r)) = &self.ngram_range {
            match r.as_slice() {
                &[lo, hi] if lo <= hi => t.ngram_range = (lo, hi),
                _ => return Err("ngram_range needs two values lo <= hi".to_string()),
            }
        }
        if let Some(s) = self.sublinear_tf {
            t.sublinear_tf = s;
        }
        Ok(t)
    }

    pub fn logreg(&self, seed: u64) -> LogRegConfig {
        let mut c = LogRegConfig {
            seed,
            ..Default::default()
        };
        if let Some(v) = self.c {
            c.c = v;
        }
        if let Some(v) = self.max_iter {
            c.max_iter = v;
        }
        if let Some(v) = &self.class_weight {
            c.class_weight = *v;
        }
        c
    }

    pub fn mlp(&self, seed: u64) -> MlpConfig {
        let mut c = MlpConfig {
            seed,
            ..Default::default()
        };
        if let Some(Sizes(h)) = &self.hidden_layer_sizes {
            c.hidden = h.clone();
        }
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if let Some(v) = self.learning_rate_init {
            c.learning_rate = v;
        }
        if let Some(v) = self.max_iter {
            c.max_epochs = v;
        }
        if let Some(v) = self.early_stopping {
            c.early_stopping = v;
        }
        c
    }

    pub fn svm(&self, seed: u64) -> LinearSvmConfig {
        let mut c = LinearSvmConfig {
            seed,
            ..Default::default()
        };
        if let Some(v) = self.c {
            c.c = v;
        }
        if let Some(v) = self.epochs {
            c.epochs = v;
        }
        if let Some(v) = &self.class_weight {
            c.class_weight = *v;
        }
        c
    }

    pub fn model(&self, kind: ModelKind, seed: u64) -> ModelConfig {
        match kind {
            ModelKind::LogReg => ModelConfig::LogReg(self.logreg(seed)),
            ModelKind::Mlp => ModelConfig::Mlp(self.mlp(seed)),
            ModelKind::LinearSvm => ModelConfig::LinearSvm(self.svm(seed)),
        }
    }

    pub fn specs(&self, kinds: &[ModelKind], seed: u64) -> Vec<ModelSpec> {
        kinds.iter().map(|&k| ModelSpec::new(self.model(k, seed))).collect()
    }
}

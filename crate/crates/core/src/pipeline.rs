//! End-to-end training: split, fit features on the training side, train,
//! evaluate on the held-out side, and package the result as a bundle.

use crate::artifacts::{label_map_digest, ModelBundle};
use crate::corpus::{CleanRecord, LabelMap, SentimentClass};
use crate::error::{Error, Result};
use crate::evaluation::{evaluate, BenchmarkData, EvalReport, SplitIndex};
use crate::featurizer::TfidfConfig;
use crate::learners::{ModelConfig, ModelKind};
use crate::textnorm::Normalizer;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions {
    pub tfidf: TfidfConfig,
    pub model: ModelConfig,
    pub test_fraction: f64,
    pub seed: u64,
}

impl TrainOptions {
    pub fn new(kind: ModelKind) -> Self {
        Self {
            tfidf: TfidfConfig::default(),
            model: ModelConfig::default_for(kind),
            test_fraction: 0.2,
            seed: 42,
        }
    }
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self::new(ModelKind::LogReg)
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub bundle: ModelBundle,
    pub split: SplitIndex,
    pub report: EvalReport,
    /// Model decisions on the training rows, in `split.train_indices` order.
    pub train_predictions: Vec<SentimentClass>,
}

pub fn train_pipeline(
    records: &[CleanRecord],
    label_map: &LabelMap,
    normalizer: &Normalizer,
    opts: &TrainOptions,
) -> Result<TrainOutcome> {
    if records.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (data, features, split) = BenchmarkData::prepare(records, &opts.tfidf, opts.test_fraction, opts.seed)?;
    let model = opts.model.train(&data.x_train, &data.y_train)?;
    let report = evaluate(&data.y_test, &model.predict(&data.x_test)?)?;
    let train_predictions = model.predict(&data.x_train)?;
    let bundle = ModelBundle {
        seed: opts.seed,
        label_map_digest: label_map_digest(label_map),
        normalizer: normalizer.clone(),
        features,
        model,
        metrics: Some(report.clone()),
    };
    Ok(TrainOutcome {
        bundle,
        split,
        report,
        train_predictions,
    })
}

/// Evaluates a bundle on records it has not necessarily seen.
pub fn evaluate_bundle(bundle: &ModelBundle, records: &[CleanRecord]) -> Result<EvalReport> {
    let x = bundle.features.transform(records);
    let pred = bundle.model.predict(&x)?;
    let truth: Vec<SentimentClass> = records.iter().map(|r| r.label).collect();
    evaluate(&truth, &pred)
}

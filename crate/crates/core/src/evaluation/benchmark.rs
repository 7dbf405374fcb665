use std::cmp::Ordering;

use crate::corpus::{CleanRecord, SentimentClass};
use crate::error::Result;
use crate::evaluation::{evaluate, stratified_split, EvalReport, SplitIndex};
use crate::featurizer::{FeaturePipeline, HybridMatrix, TfidfConfig};
use crate::learners::{Model, ModelConfig};

/// Shared train/test matrices for a benchmark run.
#[derive(Debug, Clone)]
pub struct BenchmarkData {
    pub x_train: HybridMatrix,
    pub y_train: Vec<SentimentClass>,
    pub x_test: HybridMatrix,
    pub y_test: Vec<SentimentClass>,
}

impl BenchmarkData {
    /// Splits `records`, fits the feature pipeline on the training side only,
    /// and transforms both sides.
    pub fn prepare(
        records: &[CleanRecord],
        tfidf: &TfidfConfig,
        test_fraction: f64,
        seed: u64,
    ) -> Result<(Self, FeaturePipeline, SplitIndex)> {
        let labels: Vec<SentimentClass> = records.iter().map(|r| r.label).collect();
        let split = stratified_split(&labels, test_fraction, seed)?;
        let pick = |idx: &[usize]| idx.iter().map(|&i| records[i].clone()).collect::<Vec<_>>();
        let (train, test) = (pick(&split.train_indices), pick(&split.test_indices));
        let pipeline = FeaturePipeline::fit(&train, tfidf)?;
        let data = Self {
            x_train: pipeline.transform(&train),
            y_train: train.iter().map(|r| r.label).collect(),
            x_test: pipeline.transform(&test),
            y_test: test.iter().map(|r| r.label).collect(),
        };
        Ok((data, pipeline, split))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub family: String,
    pub config: ModelConfig,
}

impl ModelSpec {
    pub fn new(config: ModelConfig) -> Self {
        let kind = config.kind();
        Self {
            name: kind.display_name().to_string(),
            family: kind.family().to_string(),
            config,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkScores {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub weighted_f1: f64,
}

impl From<&EvalReport> for BenchmarkScores {
    fn from(r: &EvalReport) -> Self {
        Self {
            accuracy: r.accuracy,
            macro_f1: r.macro_f1,
            weighted_f1: r.weighted_f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub model: String,
    pub family: String,
    /// `Err` carries the failure message of a model that could not be trained.
    pub outcome: std::result::Result<BenchmarkScores, String>,
}

impl BenchmarkRow {
    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkTable {
    pub rows: Vec<BenchmarkRow>,
    pub test_size: usize,
}

impl BenchmarkTable {
    /// Adds a row measured elsewhere and restores the ordering.
    pub fn push_external(&mut self, row: BenchmarkRow) {
        self.rows.push(row);
        self.sort();
    }

    /// Accuracy descending; failed rows last; stable otherwise.
    fn sort(&mut self) {
        self.rows.sort_by(|a, b| match (&a.outcome, &b.outcome) {
            (Ok(x), Ok(y)) => y.accuracy.partial_cmp(&x.accuracy).unwrap_or(Ordering::Equal),
            (Ok(_), Err(_)) => Ordering::Less,
            (Err(_), Ok(_)) => Ordering::Greater,
            (Err(_), Err(_)) => Ordering::Equal,
        });
    }
}

/// Result of one model inside a benchmark, kept for callers that need more
/// than the summary row.
#[derive(Debug, Clone)]
pub struct BenchmarkEntry {
    pub spec: ModelSpec,
    pub model: Option<Model>,
    pub report: Option<EvalReport>,
}

pub fn run_benchmark(data: &BenchmarkData, specs: &[ModelSpec]) -> BenchmarkTable {
    run_benchmark_detailed(data, specs).0
}

pub fn run_benchmark_detailed(data: &BenchmarkData, specs: &[ModelSpec]) -> (BenchmarkTable, Vec<BenchmarkEntry>) {
    let mut table = BenchmarkTable {
        rows: Vec::with_capacity(specs.len()),
        test_size: data.y_test.len(),
    };
    let mut entries = Vec::with_capacity(specs.len());
    for spec in specs {
        let result = spec.config.train(&data.x_train, &data.y_train).and_then(|model| {
            let pred = model.predict(&data.x_test)?;
            let report = evaluate(&data.y_test, &pred)?;
            Ok((model, report))
        });
        let (outcome, model, report) = match result {
            Ok((model, report)) => (Ok(BenchmarkScores::from(&report)), Some(model), Some(report)),
            Err(e) => (Err(e.to_string()), None, None),
        };
        table.rows.push(BenchmarkRow {
            model: spec.name.clone(),
            family: spec.family.clone(),
            outcome,
        });
        entries.push(BenchmarkEntry {
            spec: spec.clone(),
            model,
            report,
        });
    }
    table.sort();
    (table, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{LogRegConfig, MlpConfig};

    fn tiny() -> BenchmarkData {
        let rows: Vec<Vec<f64>> = (0..9)
            .map(|i| {
                let mut r = vec![0.0; 6];
                r[i % 3] = 1.0;
                r
            })
            .collect();
        let x = HybridMatrix::from_dense(&rows).unwrap();
        let y: Vec<SentimentClass> = (0..9).map(|i| SentimentClass::ALL[i % 3]).collect();
        BenchmarkData {
            x_train: x.clone(),
            y_train: y.clone(),
            x_test: x,
            y_test: y,
        }
    }

    #[test]
    fn empty_spec_list() {
        let t = run_benchmark(&tiny(), &[]);
        assert!(t.rows.is_empty());
    }

    #[test]
    fn failing_model_is_isolated() {
        let specs = [
            ModelSpec::new(ModelConfig::Mlp(MlpConfig::default())),
            ModelSpec::new(ModelConfig::LogReg(LogRegConfig::default())),
        ];
        let t = run_benchmark(&tiny(), &specs);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].model, "Logistic Regression");
        assert!(!t.rows[0].failed());
        assert!(t.rows[1].failed(), "nine samples cannot feed a validation split");
        assert_eq!(t.test_size, 9);
    }

    #[test]
    fn single_class_training_fails_row() {
        let mut data = tiny();
        data.y_train = vec![SentimentClass::Positive; 9];
        let t = run_benchmark(&data, &[ModelSpec::new(ModelConfig::LogReg(LogRegConfig::default()))]);
        assert!(t.rows[0].failed());
    }

    #[test]
    fn external_rows_sorted_in() {
        let mut t = run_benchmark(&tiny(), &[ModelSpec::new(ModelConfig::LogReg(LogRegConfig::default()))]);
        t.push_external(BenchmarkRow {
            model: "Random Forest".into(),
            family: "Classical ML".into(),
            outcome: Ok(BenchmarkScores {
                accuracy: 0.7324,
                macro_f1: 0.4821,
                weighted_f1: 0.6749,
            }),
        });
        assert_eq!(t.rows.last().unwrap().model, "Random Forest");
    }
}

//! CSV tables: benchmark, per-class metrics, hyperparameters and the label
//! mapping sample. UTF-8, LF line endings, header row first, metric cells at
//! four decimals.

use std::path::{Path, PathBuf};

use crate::artifacts::atomic_write;
use crate::corpus::{LabelMap, CORE_LABEL_ROWS};
use crate::error::{Error, Result};
use crate::evaluation::{BenchmarkTable, EvalReport};
use crate::featurizer::TfidfConfig;
use crate::learners::{ClassWeighting, LinearSvmConfig, LogRegConfig, MlpConfig};

pub const BENCHMARK_TABLE: &str = "model_benchmark_table";
pub const PER_CLASS_TABLE: &str = "per_class_metrics_table";
pub const HYPERPARAMETER_TABLE: &str = "hyperparameter_table";
pub const LABEL_MAPPING_TABLE: &str = "label_mapping_mini_table";

pub const BENCHMARK_HEADER: [&str; 5] = ["Model", "Family", "Accuracy", "MacroF1", "WeightedF1"];
pub const PER_CLASS_HEADER: [&str; 5] = ["Class", "Precision", "Recall", "F1", "Support"];
pub const HYPERPARAMETER_HEADER: [&str; 3] = ["Component", "Hyperparameter", "Value"];
pub const LABEL_MAPPING_HEADER: [&str; 2] = ["RawLabel", "MappedClass"];

/// Four decimals, ties to even.
pub fn metric_cell(v: f64) -> String {
    format!("{v:.4}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportTable {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl ExportTable {
    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner()
            .map_err(|e| Error::io(self.file_name(), e.into_error()))
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(self.file_name());
        atomic_write(&path, &self.to_csv()?)?;
        Ok(path)
    }
}

/// Failed rows are left out; they have no scores to render.
pub fn benchmark_table(bench: &BenchmarkTable) -> ExportTable {
    let rows = bench
        .rows
        .iter()
        .filter_map(|r| {
            let s = r.outcome.as_ref().ok()?;
            Some(vec![
                r.model.clone(),
                r.family.clone(),
                metric_cell(s.accuracy),
                metric_cell(s.macro_f1),
                metric_cell(s.weighted_f1),
            ])
        })
        .collect();
    ExportTable {
        name: BENCHMARK_TABLE,
        header: BENCHMARK_HEADER.to_vec(),
        rows,
    }
}

pub fn per_class_table(report: &EvalReport) -> ExportTable {
    let rows = report
        .per_class
        .iter()
        .map(|m| {
            vec![
                m.class.to_string(),
                metric_cell(m.precision),
                metric_cell(m.recall),
                metric_cell(m.f1),
                m.support.to_string(),
            ]
        })
        .collect();
    ExportTable {
        name: PER_CLASS_TABLE,
        header: PER_CLASS_HEADER.to_vec(),
        rows,
    }
}

/// Configurations whose settings go into the hyperparameter table.
#[derive(Debug, Clone, Default)]
pub struct ExperimentConfigs {
    pub logreg: LogRegConfig,
    pub mlp: MlpConfig,
    pub svm: LinearSvmConfig,
    pub tfidf: TfidfConfig,
}

fn py_float(v: f64) -> String {
    format!("{v:?}")
}

fn py_bool(b: bool) -> String {
    if b { "True" } else { "False" }.to_string()
}

fn weighting_cell(w: &ClassWeighting) -> String {
    match w {
        ClassWeighting::Balanced => "balanced".to_string(),
        ClassWeighting::Uniform => "None".to_string(),
        ClassWeighting::Custom(ws) => format!("{:?}", ws.0),
    }
}

pub fn hyperparameter_table(cfg: &ExperimentConfigs) -> ExportTable {
    let mut rows = Vec::new();
    let mut push = |component: &str, name: &str, value: String| {
        rows.push(vec![component.to_string(), name.to_string(), value]);
    };
    let lr = &cfg.logreg;
    push("Logistic Regression", "max_iter", lr.max_iter.to_string());
    push("Logistic Regression", "class_weight", weighting_cell(&lr.class_weight));
    push("Logistic Regression", "solver", "lbfgs".to_string());
    push("Logistic Regression", "C", py_float(lr.c));
    push("Logistic Regression", "random_state", lr.seed.to_string());

    let mlp = &cfg.mlp;
    let hidden = mlp.hidden.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ");
    let trailing = if mlp.hidden.len() == 1 { "," } else { "" };
    push("MLPClassifier", "hidden_layer_sizes", format!("({hidden}{trailing})"));
    push("MLPClassifier", "activation", "relu".to_string());
    push("MLPClassifier", "solver", "adam".to_string());
    push("MLPClassifier", "alpha", py_float(mlp.alpha));
    push("MLPClassifier", "learning_rate_init", py_float(mlp.learning_rate));
    push("MLPClassifier", "max_iter", mlp.max_epochs.to_string());
    push("MLPClassifier", "early_stopping", py_bool(mlp.early_stopping));

    let svm = &cfg.svm;
    push("Linear SVM", "C", py_float(svm.c));
    push("Linear SVM", "class_weight", weighting_cell(&svm.class_weight));
    push("Linear SVM", "epochs", svm.epochs.to_string());

    let t = &cfg.tfidf;
    push(
        "TF-IDF",
        "max_features",
        t.max_features.map_or("None".to_string(), |m| m.to_string()),
    );
    push("TF-IDF", "min_df", t.min_df.to_string());
    push("TF-IDF", "max_df", py_float(t.max_df));
    push("TF-IDF", "ngram_range", format!("({}, {})", t.ngram_range.0, t.ngram_range.1));
    push("TF-IDF", "sublinear_tf", py_bool(t.sublinear_tf));
    ExportTable {
        name: HYPERPARAMETER_TABLE,
        header: HYPERPARAMETER_HEADER.to_vec(),
        rows,
    }
}

/// The nine core remapping rows as resolved by `map`; rows the map does not
/// cover are skipped.
pub fn label_mapping_table(map: &LabelMap) -> ExportTable {
    let rows = CORE_LABEL_ROWS
        .iter()
        .filter_map(|(label, _)| map.lookup(label).map(|c| vec![label.to_string(), c.to_string()]))
        .collect();
    ExportTable {
        name: LABEL_MAPPING_TABLE,
        header: LABEL_MAPPING_HEADER.to_vec(),
        rows,
    }
}

/// Inputs for [`export_tables`]; absent inputs skip their table.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExportInputs<'a> {
    pub report: Option<&'a EvalReport>,
    pub benchmark: Option<&'a BenchmarkTable>,
    pub configs: Option<&'a ExperimentConfigs>,
    pub label_map: Option<&'a LabelMap>,
}

/// Writes the requested tables into `out_dir`, creating it if needed.
pub fn export_tables(inputs: ExportInputs<'_>, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut tables = Vec::new();
    if let Some(b) = inputs.benchmark {
        tables.push(benchmark_table(b));
    }
    if let Some(r) = inputs.report {
        tables.push(per_class_table(r));
    }
    if let Some(c) = inputs.configs {
        tables.push(hyperparameter_table(c));
    }
    if let Some(m) = inputs.label_map {
        tables.push(label_mapping_table(m));
    }
    tables.iter().map(|t| t.write_to(out_dir)).collect()
}

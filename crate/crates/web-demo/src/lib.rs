//! Browser bindings for the sentiment pipeline.
//!
//! The page in `www/` uses three operations: cleaning a post, classifying a
//! post with a logistic-regression model trained at start-up on the bundled
//! synthetic corpus, and scoring a user-entered confusion matrix.

use std::fmt::Write;

use wasm_bindgen::prelude::*;

use senti_core::artifacts::{predict, ModelBundle};
use senti_core::corpus::{prepare, read_raw, SchemaConfig};
use senti_core::evaluation::{report, ConfusionMatrix, EvalReport};
use senti_core::pipeline::{train_pipeline, TrainOptions};
use senti_core::textnorm::Normalizer;
use senti_core::LabelMap;

const CORPUS: &str = include_str!("../../core/fixtures/synthetic_sentiment.csv");

/// Model plus its held-out report, built once per page load.
pub struct DemoModel {
    bundle: ModelBundle,
    report: EvalReport,
    rows: usize,
}

impl DemoModel {
    pub fn train() -> Result<Self, String> {
        let map = LabelMap::bundled();
        let norm = Normalizer::bundled();
        let raw = read_raw(CORPUS.as_bytes(), &SchemaConfig::default()).map_err(|e| e.to_string())?;
        let corpus = prepare(&raw, &map, &norm).map_err(|e| e.to_string())?;
        let out = train_pipeline(&corpus.records, &map, &norm, &TrainOptions::default()).map_err(|e| e.to_string())?;
        Ok(Self {
            bundle: out.bundle,
            report: out.report,
            rows: corpus.records.len(),
        })
    }

    /// `{"clean": ..., "class": ..., "probabilities": [neg, neu, pos]}`
    pub fn classify_json(&self, text: &str, retweets: u64, likes: u64) -> String {
        let p = predict(&self.bundle, text, retweets, likes);
        format!(
            "{{\"clean\":{},\"class\":\"{}\",\"probabilities\":[{:.6},{:.6},{:.6}]}}",
            json_string(&self.bundle.normalizer.clean(text)),
            p.class,
            p.scores[0],
            p.scores[1],
            p.scores[2]
        )
    }

    pub fn summary_json(&self) -> String {
        format!(
            "{{\"rows\":{},\"features\":{},\"report\":{}}}",
            self.rows,
            self.bundle.features.dim(),
            report_json(&self.report)
        )
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn report_json(r: &EvalReport) -> String {
    let classes: Vec<String> = r
        .per_class
        .iter()
        .map(|m| {
            format!(
                "{{\"class\":\"{}\",\"precision\":{:.4},\"recall\":{:.4},\"f1\":{:.4},\"support\":{}}}",
                m.class, m.precision, m.recall, m.f1, m.support
            )
        })
        .collect();
    format!(
        "{{\"accuracy\":{:.4},\"macro_f1\":{:.4},\"weighted_f1\":{:.4},\"per_class\":[{}]}}",
        r.accuracy,
        r.macro_f1,
        r.weighted_f1,
        classes.join(",")
    )
}

/// Metrics for a row-major 3x3 confusion matrix (rows = true class).
pub fn confusion_report_json(cells: &[u32]) -> Result<String, String> {
    if cells.len() != 9 {
        return Err(format!("expected 9 cells, got {}", cells.len()));
    }
    let counts = std::array::from_fn(|i| std::array::from_fn(|j| u64::from(cells[3 * i + j])));
    report(&ConfusionMatrix::new(counts))
        .map(|r| report_json(&r))
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn clean_text(raw: &str) -> String {
    Normalizer::bundled().clean(raw)
}

#[wasm_bindgen]
pub fn score_confusion(cells: Vec<u32>) -> Result<String, JsError> {
    confusion_report_json(&cells).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Demo {
    model: DemoModel,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Result<Demo, JsError> {
        DemoModel::train()
            .map(|model| Demo { model })
            .map_err(|e| JsError::new(&e))
    }

    pub fn classify(&self, text: &str, retweets: u32, likes: u32) -> String {
        self.model.classify_json(text, retweets.into(), likes.into())
    }

    pub fn summary(&self) -> String {
        self.model.summary_json()
    }
}

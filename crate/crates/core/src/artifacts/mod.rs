//! Model bundles, CSV table export and single-text prediction.

mod bundle;
mod export;

pub use bundle::{label_map_digest, sha256_hex, ModelBundle, FORMAT_VERSION};
pub use export::{
    benchmark_table, export_tables, hyperparameter_table, label_mapping_table, metric_cell, per_class_table,
    ExperimentConfigs, ExportInputs, ExportTable, BENCHMARK_HEADER, BENCHMARK_TABLE, HYPERPARAMETER_HEADER,
    HYPERPARAMETER_TABLE, LABEL_MAPPING_HEADER, LABEL_MAPPING_TABLE, PER_CLASS_HEADER, PER_CLASS_TABLE,
};

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::learners::Prediction;

/// Writes through a sibling temporary file and renames it into place.
pub(crate) fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("path has no file name")))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Runs one raw post through cleaning, features and the classifier.
///
/// A text that cleans to nothing still gets a prediction from its numeric
/// features alone.
pub fn predict(bundle: &ModelBundle, raw_text: &str, retweets: u64, likes: u64) -> Prediction {
    let clean = bundle.normalizer.clean(raw_text);
    let x = bundle.features.transform_one(&clean, raw_text, retweets, likes);
    bundle
        .model
        .predict_rows(&x)
        .expect("bundle components share one feature dimension")
        .pop()
        .expect("one row in, one prediction out")
}

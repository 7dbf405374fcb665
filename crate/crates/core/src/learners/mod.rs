//! Classifiers over the hybrid feature space.
//!
//! All three learners share the class ordinal convention of
//! [`SentimentClass`] and break argmax ties toward the lowest ordinal.

mod lbfgs;
mod logreg;
mod mlp;
mod svm;
mod weights;

pub use lbfgs::{minimize, LbfgsOptions, LbfgsOutcome};
pub use logreg::{logreg_objective, predict_proba_logreg, train_logreg, train_logreg_traced, LogRegConfig, LogRegModel};
pub use mlp::{train_mlp, train_mlp_traced, Layer, MlpConfig, MlpModel, MlpTrace};
pub use svm::{svm_objective, train_linear_svm, LinearSvmConfig, LinearSvmModel};
pub use weights::{balanced_weights, ClassWeighting, ClassWeights};

use crate::corpus::{class_counts, SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::featurizer::HybridMatrix;

/// Index of the largest score; ties resolve to the lowest index.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate().skip(1) {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

/// Numerically stable in-place softmax.
pub fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    z.iter_mut().for_each(|v| *v /= sum);
}

/// Checks the shared training preconditions and returns per-class counts.
pub(crate) fn check_training_set(x: &HybridMatrix, y: &[SentimentClass]) -> Result<[usize; NUM_CLASSES]> {
    if x.n_rows() != y.len() {
        return Err(Error::Shape(format!("{} feature rows vs {} labels", x.n_rows(), y.len())));
    }
    if let Some(row) = (0..x.n_rows()).find(|&i| !x.row(i).is_finite()) {
        return Err(Error::NonFinite { row });
    }
    let counts = class_counts(y);
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::SingleClass);
    }
    if let Some(missing) = SentimentClass::ALL.iter().find(|c| counts[c.index()] == 0) {
        return Err(Error::DegenerateClass(missing.as_str()));
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    LogReg,
    Mlp,
    LinearSvm,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::LogReg => "logreg",
            ModelKind::Mlp => "mlp",
            ModelKind::LinearSvm => "svm",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::LogReg => "Logistic Regression",
            ModelKind::Mlp => "MLPClassifier",
            ModelKind::LinearSvm => "Linear SVM",
        }
    }

    pub fn family(self) -> &'static str {
        match self {
            ModelKind::Mlp => "Neural baseline",
            _ => "Classical ML",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "logreg" => Ok(ModelKind::LogReg),
            "mlp" => Ok(ModelKind::Mlp),
            "svm" => Ok(ModelKind::LinearSvm),
            other => Err(format!("unknown model {other:?} (expected logreg, mlp or svm)")),
        }
    }
}

/// Training configuration for any of the three learners.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelConfig {
    LogReg(LogRegConfig),
    Mlp(MlpConfig),
    LinearSvm(LinearSvmConfig),
}

impl ModelConfig {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::LogReg => ModelConfig::LogReg(LogRegConfig::default()),
            ModelKind::Mlp => ModelConfig::Mlp(MlpConfig::default()),
            ModelKind::LinearSvm => ModelConfig::LinearSvm(LinearSvmConfig::default()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelConfig::LogReg(_) => ModelKind::LogReg,
            ModelConfig::Mlp(_) => ModelKind::Mlp,
            ModelConfig::LinearSvm(_) => ModelKind::LinearSvm,
        }
    }

    pub fn train(&self, x: &HybridMatrix, y: &[SentimentClass]) -> Result<Model> {
        Ok(match self {
            ModelConfig::LogReg(c) => Model::LogReg(train_logreg(x, y, c)?),
            ModelConfig::Mlp(c) => Model::Mlp(train_mlp(x, y, c)?),
            ModelConfig::LinearSvm(c) => Model::LinearSvm(train_linear_svm(x, y, c)?),
        })
    }
}

/// A trained classifier.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    LogReg(LogRegModel),
    Mlp(MlpModel),
    LinearSvm(LinearSvmModel),
}

/// Class decision plus the per-class outputs it was taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub class: SentimentClass,
    /// Probabilities when `probabilistic`, raw one-vs-rest decision scores otherwise.
    pub scores: [f64; NUM_CLASSES],
    pub probabilistic: bool,
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::LogReg(_) => ModelKind::LogReg,
            Model::Mlp(_) => ModelKind::Mlp,
            Model::LinearSvm(_) => ModelKind::LinearSvm,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Model::LogReg(m) => m.dim(),
            Model::Mlp(m) => m.dim(),
            Model::LinearSvm(m) => m.dim(),
        }
    }

    pub fn is_probabilistic(&self) -> bool {
        !matches!(self, Model::LinearSvm(_))
    }

    pub fn predict_rows(&self, x: &HybridMatrix) -> Result<Vec<Prediction>> {
        if x.dim() != self.dim() {
            return Err(Error::Shape(format!("model expects {} features, got {}", self.dim(), x.dim())));
        }
        let probabilistic = self.is_probabilistic();
        Ok(x.rows()
            .map(|row| {
                let scores = match self {
                    Model::LogReg(m) => m.proba_row(row),
                    Model::Mlp(m) => m.proba_row(row),
                    Model::LinearSvm(m) => m.decision_row(row),
                };
                Prediction {
                    class: SentimentClass::from_index(argmax(&scores)).expect("three scores"),
                    scores,
                    probabilistic,
                }
            })
            .collect())
    }

    pub fn predict(&self, x: &HybridMatrix) -> Result<Vec<SentimentClass>> {
        Ok(self.predict_rows(x)?.into_iter().map(|p| p.class).collect())
    }
}

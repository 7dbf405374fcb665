//! Class-weighted multinomial logistic regression.
//!
//! Minimizes
//!
//! ```text
//! J(W, b) = C * sum_i w[y_i] * CE(softmax(W x_i + b), y_i) + 0.5 * ||W||_F^2
//! ```
//!
//! with biases left out of the penalty, using full-batch L-BFGS from `W = 0, b = 0`.

use crate::corpus::{SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::featurizer::{HybridMatrix, Row};
use crate::learners::lbfgs::{minimize, LbfgsOptions};
use crate::learners::{check_training_set, softmax_in_place, ClassWeighting, ClassWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegConfig {
    pub c: f64,
    pub class_weight: ClassWeighting,
    pub max_iter: usize,
    pub tol: f64,
    /// Recorded for provenance; the solver itself is deterministic.
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            c: 2.0,
            class_weight: ClassWeighting::Balanced,
            max_iter: 2000,
            tol: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    /// Row-major `3 x D`.
    pub weights: Vec<f64>,
    pub bias: [f64; NUM_CLASSES],
    pub config: LogRegConfig,
    /// Optimizer iterations used.
    pub iterations: usize,
    pub converged: bool,
}

impl LogRegModel {
    /// All-zero model over `dim` features.
    pub fn zeros(dim: usize, config: LogRegConfig) -> Self {
        Self {
            weights: vec![0.0; NUM_CLASSES * dim],
            bias: [0.0; NUM_CLASSES],
            config,
            iterations: 0,
            converged: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len() / NUM_CLASSES
    }

    pub fn class_weights(&self, class: SentimentClass) -> &[f64] {
        let d = self.dim();
        &self.weights[class.index() * d..(class.index() + 1) * d]
    }

    pub fn scores_row(&self, row: Row<'_>) -> [f64; NUM_CLASSES] {
        let d = self.dim();
        std::array::from_fn(|k| row.dot(&self.weights[k * d..(k + 1) * d]) + self.bias[k])
    }

    pub fn proba_row(&self, row: Row<'_>) -> [f64; NUM_CLASSES] {
        let mut z = self.scores_row(row);
        softmax_in_place(&mut z);
        z
    }
}

pub fn predict_proba_logreg(m: &LogRegModel, x: &HybridMatrix) -> Result<Vec<[f64; NUM_CLASSES]>> {
    if x.dim() != m.dim() {
        return Err(Error::Shape(format!("model expects {} features, got {}", m.dim(), x.dim())));
    }
    Ok(x.rows().map(|r| m.proba_row(r)).collect())
}

/// Objective value; writes the gradient into `grad`. `params` is `[W (row-major), b]`.
pub fn logreg_objective(
    params: &[f64],
    x: &HybridMatrix,
    y: &[SentimentClass],
    weights: &ClassWeights,
    c: f64,
    grad: &mut [f64],
) -> f64 {
    let d = x.dim();
    let (w, b) = params.split_at(NUM_CLASSES * d);
    let (gw, gb) = grad.split_at_mut(NUM_CLASSES * d);
    gw.copy_from_slice(w);
    gb.iter_mut().for_each(|v| *v = 0.0);
    let mut value = 0.5 * w.iter().map(|v| v * v).sum::<f64>();

    for (row, &label) in x.rows().zip(y) {
        let mut z: [f64; NUM_CLASSES] = std::array::from_fn(|k| row.dot(&w[k * d..(k + 1) * d]) + b[k]);
        let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        let t = label.index();
        let sw = c * weights.0[t];
        value += sw * (lse - z[t]);
        softmax_in_place(&mut z);
        for k in 0..NUM_CLASSES {
            let delta = sw * (z[k] - if k == t { 1.0 } else { 0.0 });
            row.axpy(delta, &mut gw[k * d..(k + 1) * d]);
            gb[k] += delta;
        }
    }
    value
}

pub fn train_logreg(x: &HybridMatrix, y: &[SentimentClass], cfg: &LogRegConfig) -> Result<LogRegModel> {
    train_logreg_traced(x, y, cfg).map(|(m, _)| m)
}

/// Trains and also returns the objective value after every optimizer iteration.
pub fn train_logreg_traced(
    x: &HybridMatrix,
    y: &[SentimentClass],
    cfg: &LogRegConfig,
) -> Result<(LogRegModel, Vec<f64>)> {
    let counts = check_training_set(x, y)?;
    if !(cfg.c > 0.0 && cfg.c.is_finite()) {
        return Err(Error::Training(format!("C must be positive, got {}", cfg.c)));
    }
    let weights = cfg.class_weight.resolve(counts)?;
    let d = x.dim();
    let opts = LbfgsOptions {
        history: 10,
        max_iter: cfg.max_iter,
        tol: cfg.tol,
    };
    let out = minimize(
        |p, g| logreg_objective(p, x, y, &weights, cfg.c, g),
        vec![0.0; NUM_CLASSES * (d + 1)],
        &opts,
    );
    if !out.value.is_finite() {
        return Err(Error::Training("objective diverged".to_string()));
    }
    let (w, b) = out.x.split_at(NUM_CLASSES * d);
    let model = LogRegModel {
        weights: w.to_vec(),
        bias: [b[0], b[1], b[2]],
        config: cfg.clone(),
        iterations: out.iterations,
        converged: out.converged,
    };
    Ok((model, out.history))
}

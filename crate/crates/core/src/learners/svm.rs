//! One-vs-rest linear SVM trained with Pegasos-style subgradient steps.
//!
//! Each binary scorer `f_k(x) = w_k . x + b_k` minimizes
//!
//! ```text
//! lambda/2 * (||w_k||^2 + b_k^2) + 1/n * sum_i c[y_i] * max(0, 1 - s_ik f_k(x_i))
//! ```
//!
//! with `s_ik = +1` when `y_i = k` and `-1` otherwise, `lambda = 1 / (C n)`,
//! and step size `1 / (lambda t)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::featurizer::{HybridMatrix, Row};
use crate::learners::{check_training_set, ClassWeighting, ClassWeights};

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmConfig {
    /// Inverse regularization strength, as in the usual `C` of a soft-margin SVM.
    pub c: f64,
    pub epochs: usize,
    pub class_weight: ClassWeighting,
    pub seed: u64,
}

impl Default for LinearSvmConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            epochs: 200,
            class_weight: ClassWeighting::Balanced,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvmModel {
    /// Row-major `3 x D`.
    pub weights: Vec<f64>,
    pub bias: [f64; NUM_CLASSES],
    pub config: LinearSvmConfig,
}

impl LinearSvmModel {
    pub fn zeros(dim: usize, config: LinearSvmConfig) -> Self {
        Self {
            weights: vec![0.0; NUM_CLASSES * dim],
            bias: [0.0; NUM_CLASSES],
            config,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len() / NUM_CLASSES
    }

    pub fn decision_row(&self, row: Row<'_>) -> [f64; NUM_CLASSES] {
        let d = self.dim();
        std::array::from_fn(|k| row.dot(&self.weights[k * d..(k + 1) * d]) + self.bias[k])
    }
}

/// Objective of one binary scorer `k`; writes the subgradient for `[w_k, b_k]`.
pub fn svm_objective(
    params: &[f64],
    x: &HybridMatrix,
    y: &[SentimentClass],
    class: SentimentClass,
    weights: &ClassWeights,
    lambda: f64,
    grad: &mut [f64],
) -> f64 {
    let d = x.dim();
    let (w, b) = (&params[..d], params[d]);
    let n = y.len() as f64;
    grad.iter_mut().zip(params).for_each(|(g, p)| *g = lambda * p);
    let mut value = 0.5 * lambda * params.iter().map(|p| p * p).sum::<f64>();
    for (row, label) in x.rows().zip(y) {
        let s = if *label == class { 1.0 } else { -1.0 };
        let margin = s * (row.dot(w) + b);
        if margin < 1.0 {
            let cw = weights.get(*label) / n;
            value += cw * (1.0 - margin);
            row.axpy(-cw * s, &mut grad[..d]);
            grad[d] -= cw * s;
        }
    }
    value
}

pub fn train_linear_svm(x: &HybridMatrix, y: &[SentimentClass], cfg: &LinearSvmConfig) -> Result<LinearSvmModel> {
    let counts = check_training_set(x, y)?;
    if !(cfg.c > 0.0 && cfg.c.is_finite()) {
        return Err(Error::Training(format!("C must be positive, got {}", cfg.c)));
    }
    let weights = cfg.class_weight.resolve(counts)?;
    let n = y.len();
    let d = x.dim();
    let lambda = 1.0 / (cfg.c * n as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = LinearSvmModel::zeros(d, cfg.clone());
    let mut order: Vec<usize> = (0..n).collect();
    let mut t = 0usize;

    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let shrink = 1.0 - eta * lambda;
            let row = x.row(i);
            let cw = weights.get(y[i]);
            let scores = model.decision_row(row);
            for (k, class) in SentimentClass::ALL.iter().enumerate() {
                let s = if y[i] == *class { 1.0 } else { -1.0 };
                let wk = &mut model.weights[k * d..(k + 1) * d];
                wk.iter_mut().for_each(|w| *w *= shrink);
                model.bias[k] *= shrink;
                if s * scores[k] < 1.0 {
                    row.axpy(eta * cw * s, wk);
                    model.bias[k] += eta * cw * s;
                }
            }
        }
    }
    if model.weights.iter().chain(&model.bias).any(|v| !v.is_finite()) {
        return Err(Error::Training("SVM weights diverged".to_string()));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::Model;
    use SentimentClass::*;

    #[test]
    fn zero_model_scores_and_tie_break() {
        let x = HybridMatrix::from_dense(&[vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let m = LinearSvmModel::zeros(4, LinearSvmConfig::default());
        assert_eq!(m.decision_row(x.row(0)), [0.0; 3]);
        let p = Model::LinearSvm(m).predict_rows(&x).unwrap();
        assert_eq!(p[0].class, Negative);
        assert!(!p[0].probabilistic);
    }

    #[test]
    fn deterministic_given_seed() {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let mut r = vec![0.0; 5];
                r[i % 3] = 1.0;
                r[3] = (i as f64).cos();
                r
            })
            .collect();
        let x = HybridMatrix::from_dense(&rows).unwrap();
        let y: Vec<SentimentClass> = (0..12).map(|i| SentimentClass::ALL[i % 3]).collect();
        let cfg = LinearSvmConfig {
            epochs: 20,
            ..Default::default()
        };
        let a = train_linear_svm(&x, &y, &cfg).unwrap();
        let b = train_linear_svm(&x, &y, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

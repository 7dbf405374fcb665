//! Fully connected ReLU network with a softmax output, trained by minibatch
//! Adam with optional validation-based early stopping.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::evaluation::stratified_split;
use crate::featurizer::{HybridMatrix, Row};
use crate::learners::{argmax, check_training_set, softmax_in_place};

#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden: Vec<usize>,
    /// L2 penalty `alpha/2 * sum ||W_l||^2` on weights (not biases).
    pub alpha: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub early_stopping: bool,
    pub validation_fraction: f64,
    pub patience: usize,
    /// Minimum improvement that resets the patience counter.
    pub tol: f64,
    /// `None` means `min(200, n)`.
    pub batch_size: Option<usize>,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden: vec![256, 64],
            alpha: 1e-4,
            learning_rate: 1e-3,
            max_epochs: 60,
            early_stopping: true,
            validation_fraction: 0.1,
            patience: 10,
            tol: 1e-4,
            batch_size: None,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            seed: 42,
        }
    }
}

/// Dense layer stored input-major: `weights[i * n_out + o]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub n_in: usize,
    pub n_out: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn zeros(n_in: usize, n_out: usize) -> Self {
        Self {
            n_in,
            n_out,
            weights: vec![0.0; n_in * n_out],
            bias: vec![0.0; n_out],
        }
    }

    fn glorot(n_in: usize, n_out: usize, rng: &mut ChaCha8Rng) -> Self {
        let bound = (6.0 / (n_in + n_out) as f64).sqrt();
        let mut l = Self::zeros(n_in, n_out);
        l.weights.iter_mut().for_each(|w| *w = rng.gen_range(-bound..bound));
        l.bias.iter_mut().for_each(|b| *b = rng.gen_range(-bound..bound));
        l
    }

    fn forward_dense(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(&self.bias);
        for (i, &x) in input.iter().enumerate() {
            if x != 0.0 {
                let w = &self.weights[i * self.n_out..(i + 1) * self.n_out];
                out.iter_mut().zip(w).for_each(|(o, wi)| *o += x * wi);
            }
        }
    }

    fn forward_row(&self, row: Row<'_>, out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(&self.bias);
        for (i, x) in row.iter() {
            if x != 0.0 {
                let w = &self.weights[i * self.n_out..(i + 1) * self.n_out];
                out.iter_mut().zip(w).for_each(|(o, wi)| *o += x * wi);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
    pub config: MlpConfig,
    pub epochs_run: usize,
}

/// Per-epoch record of a training run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MlpTrace {
    pub train_loss: Vec<f64>,
    /// Validation accuracy per epoch when early stopping is on.
    pub validation_score: Vec<f64>,
    /// 1-based epoch whose parameters were kept.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl MlpModel {
    /// Network with layer sizes `dim -> hidden... -> 3`, all parameters zero.
    pub fn zeros(dim: usize, config: MlpConfig) -> Self {
        let sizes = layer_sizes(dim, &config.hidden);
        let layers = sizes.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect();
        Self {
            layers,
            config,
            epochs_run: 0,
        }
    }

    pub fn initialized(dim: usize, config: MlpConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let sizes = layer_sizes(dim, &config.hidden);
        let layers = sizes.windows(2).map(|w| Layer::glorot(w[0], w[1], &mut rng)).collect();
        Self {
            layers,
            config,
            epochs_run: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.layers[0].n_in
    }

    /// Activations of every layer; the last entry holds probabilities.
    fn forward(&self, row: Row<'_>) -> Vec<Vec<f64>> {
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        let mut buf = Vec::new();
        self.layers[0].forward_row(row, &mut buf);
        for (li, layer) in self.layers.iter().enumerate() {
            if li > 0 {
                layer.forward_dense(acts.last().expect("previous layer"), &mut buf);
            }
            let mut a = std::mem::take(&mut buf);
            if li + 1 == self.layers.len() {
                softmax_in_place(&mut a);
            } else {
                a.iter_mut().for_each(|v| *v = v.max(0.0));
            }
            acts.push(a);
        }
        acts
    }

    pub fn proba_row(&self, row: Row<'_>) -> [f64; NUM_CLASSES] {
        let out = self.forward(row).pop().expect("output layer");
        [out[0], out[1], out[2]]
    }

    fn accuracy(&self, x: &HybridMatrix, y: &[SentimentClass]) -> f64 {
        let hits = x
            .rows()
            .zip(y)
            .filter(|(r, l)| argmax(&self.proba_row(*r)) == l.index())
            .count();
        hits as f64 / y.len() as f64
    }

    /// Mean cross-entropy over `rows` plus `alpha/2 * sum ||W||^2`, with
    /// gradients shaped like `self.layers`.
    pub fn loss_and_gradient(
        &self,
        x: &HybridMatrix,
        y: &[SentimentClass],
        rows: &[usize],
        alpha: f64,
    ) -> (f64, Vec<Layer>) {
        let mut grads: Vec<Layer> = self.layers.iter().map(|l| Layer::zeros(l.n_in, l.n_out)).collect();
        let m = rows.len() as f64;
        let mut loss = 0.0;
        for &i in rows {
            let row = x.row(i);
            let acts = self.forward(row);
            let t = y[i].index();
            let probs = acts.last().expect("output");
            loss -= probs[t].max(f64::MIN_POSITIVE).ln();
            // delta at the output pre-activation, already scaled by 1/m
            let mut delta: Vec<f64> = probs
                .iter()
                .enumerate()
                .map(|(k, p)| (p - if k == t { 1.0 } else { 0.0 }) / m)
                .collect();
            for li in (0..self.layers.len()).rev() {
                let layer = &self.layers[li];
                let g = &mut grads[li];
                g.bias.iter_mut().zip(&delta).for_each(|(gb, d)| *gb += d);
                if li == 0 {
                    for (j, v) in row.iter() {
                        if v != 0.0 {
                            let gw = &mut g.weights[j * layer.n_out..(j + 1) * layer.n_out];
                            gw.iter_mut().zip(&delta).for_each(|(w, d)| *w += v * d);
                        }
                    }
                    break;
                }
                let input = &acts[li - 1];
                for (j, &a) in input.iter().enumerate() {
                    if a != 0.0 {
                        let gw = &mut g.weights[j * layer.n_out..(j + 1) * layer.n_out];
                        gw.iter_mut().zip(&delta).for_each(|(w, d)| *w += a * d);
                    }
                }
                // back through the ReLU of the previous layer
                delta = input
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| {
                        if a > 0.0 {
                            let w = &layer.weights[j * layer.n_out..(j + 1) * layer.n_out];
                            w.iter().zip(&delta).map(|(wi, d)| wi * d).sum()
                        } else {
                            0.0
                        }
                    })
                    .collect();
            }
        }
        loss /= m;
        let mut penalty = 0.0;
        for (layer, g) in self.layers.iter().zip(grads.iter_mut()) {
            penalty += layer.weights.iter().map(|w| w * w).sum::<f64>();
            g.weights.iter_mut().zip(&layer.weights).for_each(|(gw, w)| *gw += alpha * w);
        }
        (loss + 0.5 * alpha * penalty, grads)
    }

    /// Flattened parameters, layer by layer: weights then biases.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn set_parameters(&mut self, params: &[f64]) {
        let mut it = params.iter().copied();
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|p| *p = it.next().expect("parameter count"));
        }
    }
}

fn layer_sizes(dim: usize, hidden: &[usize]) -> Vec<usize> {
    std::iter::once(dim)
        .chain(hidden.iter().copied())
        .chain(std::iter::once(NUM_CLASSES))
        .collect()
}

struct Adam {
    m: Vec<Layer>,
    v: Vec<Layer>,
    t: i32,
}

impl Adam {
    fn new(layers: &[Layer]) -> Self {
        let zeros = || layers.iter().map(|l| Layer::zeros(l.n_in, l.n_out)).collect();
        Self {
            m: zeros(),
            v: zeros(),
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [Layer], grads: &[Layer], cfg: &MlpConfig) {
        self.t += 1;
        let lr = cfg.learning_rate * (1.0 - cfg.beta2.powi(self.t)).sqrt() / (1.0 - cfg.beta1.powi(self.t));
        let update = |p: &mut [f64], g: &[f64], m: &mut [f64], v: &mut [f64]| {
            for (((p, g), m), v) in p.iter_mut().zip(g).zip(m.iter_mut()).zip(v.iter_mut()) {
                *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
                *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
                *p -= lr * *m / (v.sqrt() + cfg.epsilon);
            }
        };
        for (li, layer) in params.iter_mut().enumerate() {
            let (m, v) = (&mut self.m[li], &mut self.v[li]);
            update(&mut layer.weights, &grads[li].weights, &mut m.weights, &mut v.weights);
            update(&mut layer.bias, &grads[li].bias, &mut m.bias, &mut v.bias);
        }
    }
}

pub fn train_mlp(x: &HybridMatrix, y: &[SentimentClass], cfg: &MlpConfig) -> Result<MlpModel> {
    train_mlp_traced(x, y, cfg).map(|(m, _)| m)
}

fn validation_split(y: &[SentimentClass], cfg: &MlpConfig, rng: &mut ChaCha8Rng) -> Result<(Vec<usize>, Vec<usize>)> {
    match stratified_split(y, cfg.validation_fraction, cfg.seed) {
        Ok(s) => Ok((s.train_indices, s.test_indices)),
        Err(Error::Stratification { .. }) => {
            let n = y.len();
            let n_val = (n as f64 * cfg.validation_fraction).ceil() as usize;
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(rng);
            let val = idx.split_off(n - n_val);
            Ok((idx, val))
        }
        Err(e) => Err(e),
    }
}

/// Trains and also returns per-epoch losses and validation scores.
pub fn train_mlp_traced(x: &HybridMatrix, y: &[SentimentClass], cfg: &MlpConfig) -> Result<(MlpModel, MlpTrace)> {
    check_training_set(x, y)?;
    if cfg.early_stopping && y.len() < 10 {
        return Err(Error::Training(format!(
            "early stopping needs at least 10 samples, got {}",
            y.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut model = MlpModel::initialized(x.dim(), cfg.clone());

    let (mut train_idx, val_idx) = if cfg.early_stopping {
        validation_split(y, cfg, &mut rng)?
    } else {
        ((0..y.len()).collect(), Vec::new())
    };
    let val_x = x.select(&val_idx);
    let val_y: Vec<SentimentClass> = val_idx.iter().map(|&i| y[i]).collect();
    let batch = cfg.batch_size.unwrap_or(200).clamp(1, train_idx.len());

    let mut adam = Adam::new(&model.layers);
    let mut trace = MlpTrace::default();
    let mut best_score = f64::NEG_INFINITY;
    let mut best_loss = f64::INFINITY;
    let mut best_layers = model.layers.clone();
    let mut no_improvement = 0;

    for epoch in 1..=cfg.max_epochs {
        train_idx.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for chunk in train_idx.chunks(batch) {
            let (loss, grads) = model.loss_and_gradient(x, y, chunk, cfg.alpha);
            if !loss.is_finite() {
                return Err(Error::Training(format!("loss diverged in epoch {epoch}")));
            }
            epoch_loss += loss * chunk.len() as f64;
            adam.step(&mut model.layers, &grads, cfg);
        }
        epoch_loss /= train_idx.len() as f64;
        trace.train_loss.push(epoch_loss);
        model.epochs_run = epoch;

        if cfg.early_stopping {
            let score = model.accuracy(&val_x, &val_y);
            trace.validation_score.push(score);
            if score < best_score + cfg.tol {
                no_improvement += 1;
            } else {
                no_improvement = 0;
            }
            if score > best_score {
                best_score = score;
                best_layers = model.layers.clone();
                trace.best_epoch = epoch;
            }
        } else {
            if epoch_loss > best_loss - cfg.tol {
                no_improvement += 1;
            } else {
                no_improvement = 0;
            }
            if epoch_loss < best_loss {
                best_loss = epoch_loss;
                trace.best_epoch = epoch;
            }
        }
        if no_improvement > cfg.patience {
            trace.stopped_early = true;
            break;
        }
    }
    if cfg.early_stopping {
        model.layers = best_layers;
    }
    Ok((model, trace))
}

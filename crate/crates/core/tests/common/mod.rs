#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use senti_core::featurizer::HybridMatrix;
use senti_core::SentimentClass;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense random matrix with every class present at least once.
pub fn random_problem(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (HybridMatrix, Vec<SentimentClass>) {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let y = (0..n)
        .map(|i| {
            let k = if i < 3 { i } else { rng.gen_range(0..3) };
            SentimentClass::from_index(k).unwrap()
        })
        .collect();
    (HybridMatrix::from_dense(&rows).unwrap(), y)
}

/// Central differences of `f` at `x`.
pub fn numeric_gradient(mut f: impl FnMut(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut p = x.to_vec();
    (0..x.len())
        .map(|i| {
            p[i] = x[i] + h;
            let up = f(&p);
            p[i] = x[i] - h;
            let down = f(&p);
            p[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `||a - b|| / max(||a||, ||b||, 1e-12)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(a).max(norm(b)).max(1e-12)
}

/// Three well-separated clusters in 2-D, padded with the three numeric
/// columns set to zero.
pub fn separable_toy(seed: u64, per_class: usize) -> (HybridMatrix, Vec<SentimentClass>) {
    let mut r = rng(seed);
    let centers = [(-4.0, -4.0), (4.0, -4.0), (0.0, 4.0)];
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for (k, (cx, cy)) in centers.iter().enumerate() {
        for _ in 0..per_class {
            rows.push(vec![cx + r.gen_range(-1.0..1.0), cy + r.gen_range(-1.0..1.0), 0.0, 0.0, 0.0]);
            y.push(SentimentClass::from_index(k).unwrap());
        }
    }
    (HybridMatrix::from_dense(&rows).unwrap(), y)
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{class_counts, SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndex {
    /// Ascending.
    pub train_indices: Vec<usize>,
    /// Ascending.
    pub test_indices: Vec<usize>,
    pub seed: u64,
}

/// Per-class test counts.
///
/// The overall test size is `ceil(n * fraction)`. Each class first receives
/// `floor(n_c * fraction)`; the remaining slots go to the largest fractional
/// remainders (ties: larger class, then lower ordinal). No class gives up
/// all of its members to the test side.
pub fn test_counts(counts: [usize; NUM_CLASSES], fraction: f64) -> Result<[usize; NUM_CLASSES]> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Fraction(fraction));
    }
    let n: usize = counts.iter().sum();
    let n_test = ((n as f64 * fraction) - 1e-9).ceil().max(0.0) as usize;
    let mut out = [0usize; NUM_CLASSES];
    let mut remainders = Vec::with_capacity(NUM_CLASSES);
    for (c, &count) in counts.iter().enumerate() {
        let exact = count as f64 * fraction;
        let floor = ((exact + 1e-9).floor() as usize).min(count.saturating_sub(1));
        out[c] = floor;
        remainders.push((exact - floor as f64, count, c));
    }
    remainders.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .expect("finite remainders")
            .then(b.1.cmp(&a.1))
            .then(a.2.cmp(&b.2))
    });
    let mut missing = n_test.saturating_sub(out.iter().sum());
    while missing > 0 {
        let mut placed = false;
        for &(_, count, c) in &remainders {
            if missing == 0 {
                break;
            }
            if out[c] + 1 < count {
                out[c] += 1;
                missing -= 1;
                placed = true;
            }
        }
        if !placed {
            break;
        }
    }
    Ok(out)
}

/// Seeded stratified partition of `0..labels.len()`.
pub fn stratified_split(labels: &[SentimentClass], test_fraction: f64, seed: u64) -> Result<SplitIndex> {
    let counts = class_counts(labels);
    for class in SentimentClass::ALL {
        let c = counts[class.index()];
        if c < 2 {
            return Err(Error::Stratification {
                class: class.as_str(),
                count: c,
            });
        }
    }
    let per_class_test = test_counts(counts, test_fraction)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::with_capacity(labels.len());
    let mut test = Vec::new();
    for class in SentimentClass::ALL {
        let mut members: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == class)
            .map(|(i, _)| i)
            .collect();
        members.shuffle(&mut rng);
        let k = per_class_test[class.index()];
        test.extend_from_slice(&members[..k]);
        train.extend_from_slice(&members[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndex {
        train_indices: train,
        test_indices: test,
        seed,
    })
}

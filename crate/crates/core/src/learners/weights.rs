use crate::corpus::{SentimentClass, NUM_CLASSES};
use crate::error::{Error, Result};

/// Per-class loss multipliers, indexed by class ordinal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassWeights(pub [f64; NUM_CLASSES]);

impl ClassWeights {
    pub fn uniform() -> Self {
        ClassWeights([1.0; NUM_CLASSES])
    }

    pub fn get(&self, class: SentimentClass) -> f64 {
        self.0[class.index()]
    }
}

/// `w_c = n / (K * n_c)`.
pub fn balanced_weights(class_counts: [usize; NUM_CLASSES]) -> Result<ClassWeights> {
    if let Some(c) = SentimentClass::ALL.iter().find(|c| class_counts[c.index()] == 0) {
        return Err(Error::DegenerateClass(c.as_str()));
    }
    let n: usize = class_counts.iter().sum();
    let k = NUM_CLASSES as f64;
    Ok(ClassWeights(class_counts.map(|c| n as f64 / (k * c as f64))))
}

/// How a learner derives its class weights from the training labels.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ClassWeighting {
    #[default]
    Balanced,
    Uniform,
    Custom(ClassWeights),
}

impl ClassWeighting {
    pub fn resolve(&self, class_counts: [usize; NUM_CLASSES]) -> Result<ClassWeights> {
        match self {
            ClassWeighting::Balanced => balanced_weights(class_counts),
            ClassWeighting::Uniform => Ok(ClassWeights::uniform()),
            ClassWeighting::Custom(w) => Ok(*w),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassWeighting::Balanced => "balanced",
            ClassWeighting::Uniform => "none",
            ClassWeighting::Custom(_) => "custom",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // counts are [negative, neutral, positive]
    #[test]
    fn reference_counts() {
        let w = balanced_weights([188, 60, 459]).unwrap();
        assert_abs_diff_eq!(w.get(SentimentClass::Positive), 0.51343, epsilon = 1e-4);
        assert_abs_diff_eq!(w.get(SentimentClass::Negative), 1.25355, epsilon = 1e-4);
        assert_abs_diff_eq!(w.get(SentimentClass::Neutral), 3.92778, epsilon = 1e-4);
    }

    #[test]
    fn equal_counts_give_unit_weights() {
        assert_eq!(balanced_weights([10, 10, 10]).unwrap().0, [1.0; 3]);
    }

    #[test]
    fn small_counts() {
        let w = balanced_weights([2, 1, 1]).unwrap();
        assert_abs_diff_eq!(w.0[0], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.0[1], 4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.0[2], 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn weighted_counts_sum_to_n() {
        let counts = [7, 31, 3];
        let w = balanced_weights(counts).unwrap();
        let total: f64 = counts.iter().zip(w.0).map(|(c, w)| *c as f64 * w).sum();
        assert_abs_diff_eq!(total, 41.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(balanced_weights([3, 0, 2]), Err(Error::DegenerateClass("neutral"))));
    }
}

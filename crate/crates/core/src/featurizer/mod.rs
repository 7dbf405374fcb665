//! Hybrid feature space: TF-IDF columns followed by three standardized
//! numeric columns `[word_count, engagement, hashtag_count]`.

mod scaler;
mod tfidf;

pub use scaler::{fit_scaler, transform_scaler, Scaler};
pub use tfidf::{fit_tfidf, ngrams, transform_tfidf, TfidfConfig, TfidfModel};

use crate::corpus::CleanRecord;
use crate::error::{Error, Result};
use crate::textnorm::count_hashtags;

pub const NUM_NUMERIC: usize = 3;
pub const NUMERIC_NAMES: [&str; NUM_NUMERIC] = ["word_count", "engagement", "hashtag_count"];

/// Sparse vector with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVec {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVec {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn get(&self, col: usize) -> f64 {
        self.indices
            .binary_search(&col)
            .map(|i| self.values[i])
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }
}

pub fn numeric_features(rec: &CleanRecord) -> [f64; NUM_NUMERIC] {
    [
        rec.word_count as f64,
        rec.engagement as f64,
        rec.hashtag_count as f64,
    ]
}

/// Numeric features for a text that has not been through [`crate::corpus::prepare`].
pub fn numeric_features_raw(clean_text: &str, raw_text: &str, retweets: u64, likes: u64) -> [f64; NUM_NUMERIC] {
    let words = if clean_text.is_empty() {
        0
    } else {
        clean_text.split(' ').count()
    };
    [
        words as f64,
        retweets.saturating_add(likes) as f64,
        count_hashtags(raw_text) as f64,
    ]
}

/// Row-major design matrix with a sparse text block and a dense numeric block.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridMatrix {
    vocab_size: usize,
    tfidf: Vec<SparseVec>,
    numeric: Vec<[f64; NUM_NUMERIC]>,
}

pub fn assemble_hybrid(
    vocab_size: usize,
    tfidf: Vec<SparseVec>,
    numeric: Vec<[f64; NUM_NUMERIC]>,
) -> Result<HybridMatrix> {
    if tfidf.len() != numeric.len() {
        return Err(Error::Shape(format!(
            "{} TF-IDF rows vs {} numeric rows",
            tfidf.len(),
            numeric.len()
        )));
    }
    if let Some(bad) = tfidf.iter().flat_map(|r| r.indices.last()).find(|&&i| i >= vocab_size) {
        return Err(Error::Shape(format!("TF-IDF column {bad} outside vocabulary of {vocab_size}")));
    }
    Ok(HybridMatrix {
        vocab_size,
        tfidf,
        numeric,
    })
}

/// One row of a [`HybridMatrix`].
#[derive(Debug, Clone, Copy)]
pub struct Row<'a> {
    vocab_size: usize,
    text: &'a SparseVec,
    numeric: &'a [f64; NUM_NUMERIC],
}

impl<'a> Row<'a> {
    /// Non-zero entries of the text block followed by all numeric entries.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        let offset = self.vocab_size;
        self.text
            .iter()
            .chain(self.numeric.iter().enumerate().map(move |(j, v)| (offset + j, *v)))
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.iter().map(|(j, v)| w[j] * v).sum()
    }

    /// `acc += alpha * row`
    pub fn axpy(&self, alpha: f64, acc: &mut [f64]) {
        for (j, v) in self.iter() {
            acc[j] += alpha * v;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|(_, v)| v.is_finite())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = self.text.to_dense(self.vocab_size);
        out.extend_from_slice(self.numeric);
        out
    }
}

impl HybridMatrix {
    pub fn n_rows(&self) -> usize {
        self.tfidf.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Feature dimension `V + 3`.
    pub fn dim(&self) -> usize {
        self.vocab_size + NUM_NUMERIC
    }

    pub fn row(&self, i: usize) -> Row<'_> {
        Row {
            vocab_size: self.vocab_size,
            text: &self.tfidf[i],
            numeric: &self.numeric[i],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        (0..self.n_rows()).map(|i| self.row(i))
    }

    pub fn tfidf_block(&self) -> &[SparseVec] {
        &self.tfidf
    }

    pub fn numeric_block(&self) -> &[[f64; NUM_NUMERIC]] {
        &self.numeric
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> HybridMatrix {
        HybridMatrix {
            vocab_size: self.vocab_size,
            tfidf: indices.iter().map(|&i| self.tfidf[i].clone()).collect(),
            numeric: indices.iter().map(|&i| self.numeric[i]).collect(),
        }
    }

    /// Builds a matrix from dense rows, splitting off the last three columns
    /// as the numeric block. Intended for small synthetic problems.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<HybridMatrix> {
        let dim = rows.first().map_or(NUM_NUMERIC, Vec::len);
        if dim < NUM_NUMERIC {
            return Err(Error::Shape(format!("dense rows need at least {NUM_NUMERIC} columns")));
        }
        let v = dim - NUM_NUMERIC;
        let mut tfidf = Vec::with_capacity(rows.len());
        let mut numeric = Vec::with_capacity(rows.len());
        for r in rows {
            if r.len() != dim {
                return Err(Error::Shape(format!("ragged dense rows ({} vs {dim})", r.len())));
            }
            let (text, num) = r.split_at(v);
            let mut sv = SparseVec::default();
            for (i, &x) in text.iter().enumerate() {
                if x != 0.0 {
                    sv.indices.push(i);
                    sv.values.push(x);
                }
            }
            tfidf.push(sv);
            numeric.push([num[0], num[1], num[2]]);
        }
        assemble_hybrid(v, tfidf, numeric)
    }
}

/// Fitted TF-IDF model and numeric scaler.
#[derive(Debug, Clone, PartialEq)]
pub struct FeaturePipeline {
    pub tfidf: TfidfModel,
    pub scaler: Scaler,
}

impl FeaturePipeline {
    /// Fits both components on the training records only.
    pub fn fit(records: &[CleanRecord], config: &TfidfConfig) -> Result<Self> {
        let docs: Vec<&str> = records.iter().map(|r| r.clean_text.as_str()).collect();
        let tfidf = fit_tfidf(&docs, config)?;
        let numeric: Vec<[f64; NUM_NUMERIC]> = records.iter().map(numeric_features).collect();
        let scaler = fit_scaler(&numeric)?;
        Ok(Self { tfidf, scaler })
    }

    pub fn dim(&self) -> usize {
        self.tfidf.len() + NUM_NUMERIC
    }

    fn scale(&self, v: [f64; NUM_NUMERIC]) -> [f64; NUM_NUMERIC] {
        let z = self.scaler.transform(&v);
        [z[0], z[1], z[2]]
    }

    pub fn transform(&self, records: &[CleanRecord]) -> HybridMatrix {
        let tfidf = records.iter().map(|r| self.tfidf.transform(&r.clean_text)).collect();
        let numeric = records.iter().map(|r| self.scale(numeric_features(r))).collect();
        assemble_hybrid(self.tfidf.len(), tfidf, numeric).expect("rows are built in lockstep")
    }

    /// Features for a single already-cleaned text plus its raw metadata.
    pub fn transform_one(&self, clean_text: &str, raw_text: &str, retweets: u64, likes: u64) -> HybridMatrix {
        let text = self.tfidf.transform(clean_text);
        let numeric = self.scale(numeric_features_raw(clean_text, raw_text, retweets, likes));
        assemble_hybrid(self.tfidf.len(), vec![text], vec![numeric]).expect("single row")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SentimentClass;

    fn rec(text: &str, engagement: u64, tags: usize) -> CleanRecord {
        CleanRecord {
            clean_text: text.to_string(),
            label: SentimentClass::Positive,
            word_count: text.split(' ').count(),
            engagement,
            hashtag_count: tags,
        }
    }

    #[test]
    fn numeric_feature_rows() {
        assert_eq!(numeric_features(&rec("a b c", 5, 2)), [3.0, 5.0, 2.0]);
        assert_eq!(numeric_features(&rec("halo", 0, 0)), [1.0, 0.0, 0.0]);
        let fourteen = vec!["w"; 14].join(" ");
        assert_eq!(numeric_features(&rec(&fourteen, 350, 3)), [14.0, 350.0, 3.0]);
        assert_eq!(numeric_features_raw("a b c", "A b c #x #y", 2, 3), [3.0, 5.0, 2.0]);
        assert_eq!(numeric_features_raw("", "!!!", 0, 0), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn dimension_is_vocab_plus_three() {
        let m = assemble_hybrid(3000, vec![], vec![]).unwrap();
        assert_eq!(m.dim(), 3003);
        assert_eq!(m.n_rows(), 0);
    }

    #[test]
    fn single_row_concatenation() {
        let sv = SparseVec {
            indices: vec![1],
            values: vec![1.0],
        };
        let m = assemble_hybrid(3, vec![sv], vec![[0.5, -1.0, 2.0]]).unwrap();
        assert_eq!(m.row(0).to_dense(), vec![0.0, 1.0, 0.0, 0.5, -1.0, 2.0]);
    }

    #[test]
    fn row_count_mismatch() {
        let err = assemble_hybrid(3, vec![SparseVec::default()], vec![]).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn row_dot_and_axpy_match_dense() {
        let dense = vec![vec![0.0, 2.0, 0.0, 1.0, -1.0, 0.5], vec![1.0, 0.0, 3.0, 0.0, 0.0, 0.0]];
        let m = HybridMatrix::from_dense(&dense).unwrap();
        let w = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        for (i, d) in dense.iter().enumerate() {
            let expected: f64 = d.iter().zip(&w).map(|(a, b)| a * b).sum();
            assert_eq!(m.row(i).dot(&w), expected);
            let mut acc = vec![0.0; 6];
            m.row(i).axpy(2.0, &mut acc);
            assert_eq!(acc, d.iter().map(|v| 2.0 * v).collect::<Vec<_>>());
        }
    }

    #[test]
    fn pipeline_uses_training_statistics() {
        let train = vec![rec("saya senang", 10, 0), rec("saya sedih", 20, 1), rec("senang sekali", 30, 2)];
        let cfg = TfidfConfig {
            min_df: 1,
            ..Default::default()
        };
        let p = FeaturePipeline::fit(&train, &cfg).unwrap();
        let test = vec![rec("senang", 20, 1)];
        let x = p.transform(&test);
        let num = x.numeric_block()[0];
        // engagement and hashtags hit the training means
        assert!(num[1].abs() < 1e-12 && num[2].abs() < 1e-12);
        assert!((x.tfidf_block()[0].norm() - 1.0).abs() < 1e-12);
    }
}

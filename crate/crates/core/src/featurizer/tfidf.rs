use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::featurizer::SparseVec;

#[derive(Debug, Clone, PartialEq)]
pub struct TfidfConfig {
    /// Keep at most this many terms (by total corpus count). `None` keeps all.
    pub max_features: Option<usize>,
    /// Minimum document count.
    pub min_df: usize,
    /// Maximum document frequency as a fraction of the corpus.
    pub max_df: f64,
    pub ngram_range: (usize, usize),
    pub sublinear_tf: bool,
}

impl Default for TfidfConfig {
    fn default() -> Self {
        Self {
            max_features: Some(3000),
            min_df: 2,
            max_df: 0.9,
            ngram_range: (1, 2),
            sublinear_tf: true,
        }
    }
}

/// Fitted vocabulary and smoothed IDF weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TfidfModel {
    pub config: TfidfConfig,
    /// Terms in column order (lexicographic).
    terms: Vec<String>,
    index: HashMap<String, usize>,
    idf: Vec<f64>,
}

/// Unigrams through `hi`-grams of the whitespace tokens, n-grams joined by a single space.
pub fn ngrams(doc: &str, (lo, hi): (usize, usize)) -> Vec<String> {
    let toks: Vec<&str> = doc.split_whitespace().collect();
    let mut out = Vec::new();
    for n in lo.max(1)..=hi {
        if n > toks.len() {
            break;
        }
        out.extend(toks.windows(n).map(|w| w.join(" ")));
    }
    out
}

pub fn fit_tfidf<S: AsRef<str>>(docs: &[S], config: &TfidfConfig) -> Result<TfidfModel> {
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = docs.len();
    // term -> (document frequency, total count)
    let mut stats: HashMap<String, (usize, usize)> = HashMap::new();
    for doc in docs {
        let grams = ngrams(doc.as_ref(), config.ngram_range);
        let mut seen = HashSet::new();
        for g in grams {
            let first = seen.insert(g.clone());
            let e = stats.entry(g).or_insert((0, 0));
            e.1 += 1;
            if first {
                e.0 += 1;
            }
        }
    }
    let max_count = config.max_df * n as f64;
    let mut kept: Vec<(String, usize, usize)> = stats
        .into_iter()
        .filter(|(_, (df, _))| *df >= config.min_df && (*df as f64) <= max_count)
        .map(|(t, (df, total))| (t, df, total))
        .collect();
    if let Some(limit) = config.max_features {
        if kept.len() > limit {
            kept.sort_by(|a, b| b.2.cmp(&a.2).then_with(|| a.0.cmp(&b.0)));
            kept.truncate(limit);
        }
    }
    if kept.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    kept.sort_by(|a, b| a.0.cmp(&b.0));
    let idf = kept
        .iter()
        .map(|(_, df, _)| ((1.0 + n as f64) / (1.0 + *df as f64)).ln() + 1.0)
        .collect();
    let terms: Vec<String> = kept.into_iter().map(|(t, _, _)| t).collect();
    Ok(TfidfModel::from_parts(config.clone(), terms, idf))
}

impl TfidfModel {
    /// Rebuilds a model from stored columns. `terms` must be sorted and unique.
    pub fn from_parts(config: TfidfConfig, terms: Vec<String>, idf: Vec<f64>) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Self {
            config,
            terms,
            index,
            idf,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn idf_of(&self, term: &str) -> Option<f64> {
        self.column(term).map(|i| self.idf[i])
    }

    /// Vocabulary as an ordered map, for inspection.
    pub fn vocabulary(&self) -> BTreeMap<&str, usize> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), i))
            .collect()
    }

    /// L2-normalized TF-IDF vector of one cleaned document.
    pub fn transform(&self, doc: &str) -> SparseVec {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for g in ngrams(doc, self.config.ngram_range) {
            if let Some(&col) = self.index.get(&g) {
                *counts.entry(col).or_default() += 1;
            }
        }
        let mut indices = Vec::with_capacity(counts.len());
        let mut values = Vec::with_capacity(counts.len());
        for (col, c) in counts {
            let tf = if self.config.sublinear_tf {
                1.0 + (c as f64).ln()
            } else {
                c as f64
            };
            indices.push(col);
            values.push(tf * self.idf[col]);
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        SparseVec { indices, values }
    }
}

pub fn transform_tfidf(model: &TfidfModel, doc: &str) -> SparseVec {
    model.transform(doc)
}

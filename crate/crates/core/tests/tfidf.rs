//! TF-IDF against a brute-force recount and structural properties.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use senti_core::featurizer::{fit_tfidf, TfidfConfig};

const WORDS: &[&str] = &["aku", "suka", "kopi", "tidak", "hujan", "senang", "sedih", "pagi"];

/// Straight-from-the-definition vectorizer: returns (terms, idf, rows).
#[allow(clippy::type_complexity)]
fn oracle(docs: &[String], cfg: &TfidfConfig) -> (Vec<String>, Vec<f64>, Vec<BTreeMap<String, f64>>) {
    let grams = |d: &str| -> Vec<String> {
        let toks: Vec<&str> = d.split_whitespace().collect();
        let mut out = Vec::new();
        for n in cfg.ngram_range.0..=cfg.ngram_range.1 {
            if toks.len() >= n {
                for i in 0..=toks.len() - n {
                    out.push(toks[i..i + n].join(" "));
                }
            }
        }
        out
    };
    let n = docs.len() as f64;
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    let mut total: BTreeMap<String, usize> = BTreeMap::new();
    for d in docs {
        let g = grams(d);
        for t in &g {
            *total.entry(t.clone()).or_default() += 1;
        }
        for t in g.into_iter().collect::<BTreeSet<_>>() {
            *df.entry(t).or_default() += 1;
        }
    }
    let mut kept: Vec<String> = df
        .iter()
        .filter(|(_, &c)| c >= cfg.min_df && c as f64 <= cfg.max_df * n)
        .map(|(t, _)| t.clone())
        .collect();
    if let Some(m) = cfg.max_features {
        kept.sort_by(|a, b| total[b].cmp(&total[a]).then(a.cmp(b)));
        kept.truncate(m);
    }
    kept.sort();
    let idf: Vec<f64> = kept
        .iter()
        .map(|t| ((1.0 + n) / (1.0 + df[t] as f64)).ln() + 1.0)
        .collect();
    let rows = docs
        .iter()
        .map(|d| {
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            for t in grams(d) {
                *counts.entry(t).or_default() += 1;
            }
            let mut row: BTreeMap<String, f64> = BTreeMap::new();
            for (t, w) in kept.iter().zip(&idf) {
                if let Some(&c) = counts.get(t) {
                    let tf = if cfg.sublinear_tf { 1.0 + (c as f64).ln() } else { c as f64 };
                    row.insert(t.clone(), tf * w);
                }
            }
            let norm = row.values().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.values_mut().for_each(|v| *v /= norm);
            }
            row
        })
        .collect();
    (kept, idf, rows)
}

fn doc_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 1..9).prop_map(|w| w.join(" "))
}

fn config_strategy() -> impl Strategy<Value = TfidfConfig> {
    (1usize..=3, 0.3f64..=1.0, prop::option::of(1usize..12), 1usize..=2, any::<bool>()).prop_map(
        |(min_df, max_df, max_features, hi, sublinear_tf)| TfidfConfig {
            max_features,
            min_df,
            max_df,
            ngram_range: (1, hi),
            sublinear_tf,
        },
    )
}

proptest! {
    #[test]
    fn matches_brute_force_recount(docs in prop::collection::vec(doc_strategy(), 1..=20), cfg in config_strategy()) {
        let (terms, idf, rows) = oracle(&docs, &cfg);
        match fit_tfidf(&docs, &cfg) {
            Err(_) => prop_assert!(terms.is_empty()),
            Ok(model) => {
                prop_assert_eq!(model.terms(), terms.as_slice());
                for (a, b) in model.idf().iter().zip(&idf) {
                    prop_assert!((a - b).abs() < 1e-12);
                }
                for (doc, want) in docs.iter().zip(&rows) {
                    let got = model.transform(doc);
                    prop_assert_eq!(got.nnz(), want.len());
                    for (col, v) in got.iter() {
                        let w = want[&model.terms()[col]];
                        prop_assert!((v - w).abs() < 1e-12, "{} vs {}", v, w);
                    }
                }
            }
        }
    }

    #[test]
    fn vocabulary_and_idf_ignore_document_order(docs in prop::collection::vec(doc_strategy(), 2..=20), seed in any::<u64>()) {
        let cfg = TfidfConfig::default();
        let mut shuffled = docs.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        match (fit_tfidf(&docs, &cfg), fit_tfidf(&shuffled, &cfg)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "fit succeeded on one order only"),
        }
    }
}

#[test]
fn random_documents_have_unit_or_zero_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let doc = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(0..12);
        (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
    };
    let train: Vec<String> = (0..50).map(|_| doc(&mut rng)).collect();
    let model = fit_tfidf(&train, &TfidfConfig::default()).unwrap();
    for _ in 0..1000 {
        let d = doc(&mut rng);
        let norm = model.transform(&d).norm();
        assert!(norm == 0.0 || (norm - 1.0).abs() < 1e-9, "{d:?} has norm {norm}");
    }
}

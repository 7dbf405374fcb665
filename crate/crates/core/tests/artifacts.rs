//! Bundles, prediction and table export on the committed fixture.

use std::path::PathBuf;

use senti_core::artifacts::{
    export_tables, predict, ExperimentConfigs, ExportInputs, ModelBundle, BENCHMARK_HEADER, FORMAT_VERSION,
    HYPERPARAMETER_HEADER, LABEL_MAPPING_HEADER, PER_CLASS_HEADER,
};
use senti_core::corpus::{load_raw, prepare, RawRecord, SchemaConfig};
use senti_core::evaluation::{run_benchmark, BenchmarkData, ModelSpec};
use senti_core::featurizer::TfidfConfig;
use senti_core::learners::{LogRegConfig, LogRegModel, Model, ModelConfig, ModelKind};
use senti_core::pipeline::{train_pipeline, TrainOptions, TrainOutcome};
use senti_core::synth::{synthetic_raw, DEFAULT_SEED};
use senti_core::textnorm::Normalizer;
use senti_core::{CleanRecord, Error, LabelMap, SentimentClass};

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/synthetic_sentiment.csv")
}

fn fixture_raw() -> Vec<RawRecord> {
    load_raw(fixture_path(), &SchemaConfig::default()).unwrap()
}

fn fixture_records() -> Vec<CleanRecord> {
    prepare(&fixture_raw(), &LabelMap::bundled(), &Normalizer::bundled())
        .unwrap()
        .records
}

fn train(kind: ModelKind) -> TrainOutcome {
    train_pipeline(
        &fixture_records(),
        &LabelMap::bundled(),
        &Normalizer::bundled(),
        &TrainOptions::new(kind),
    )
    .unwrap()
}

#[test]
fn fixture_file_matches_generator() {
    assert_eq!(fixture_raw(), synthetic_raw(DEFAULT_SEED));
}

#[test]
fn fixture_prepares_to_reference_counts() {
    let out = prepare(&fixture_raw(), &LabelMap::bundled(), &Normalizer::bundled()).unwrap();
    assert_eq!(out.stats.raw_rows, 732);
    assert_eq!(out.records.len(), 707);
    assert_eq!(out.class_counts(), [188, 60, 459]);
}

#[test]
fn round_trip_is_byte_identical_and_predicts_bit_exactly() {
    let raw = fixture_raw();
    for kind in [ModelKind::LogReg, ModelKind::LinearSvm, ModelKind::Mlp] {
        let bundle = train(kind).bundle;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.bundle");
        bundle.save(&path).unwrap();
        let loaded = ModelBundle::load(&path).unwrap();
        assert_eq!(loaded.to_bytes(), bundle.to_bytes(), "{kind:?}");
        assert_eq!(loaded, bundle, "{kind:?}");
        for r in raw.iter().take(10) {
            let a = predict(&bundle, &r.text, r.retweets, r.likes);
            let b = predict(&loaded, &r.text, r.retweets, r.likes);
            assert_eq!(a.class, b.class);
            for (x, y) in a.scores.iter().zip(&b.scores) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(a.probabilistic, kind != ModelKind::LinearSvm);
        }
    }
}

#[test]
fn seeded_training_gives_identical_bundles() {
    assert_eq!(train(ModelKind::LogReg).bundle.to_bytes(), train(ModelKind::LogReg).bundle.to_bytes());
    assert_eq!(train(ModelKind::Mlp).bundle.to_bytes(), train(ModelKind::Mlp).bundle.to_bytes());
}

#[test]
fn newer_format_version_is_rejected() {
    let bytes = String::from_utf8(train(ModelKind::LogReg).bundle.to_bytes()).unwrap();
    let bumped = bytes.replacen(
        &format!("format_version {FORMAT_VERSION}"),
        &format!("format_version {}", FORMAT_VERSION + 1),
        1,
    );
    match ModelBundle::from_bytes(bumped.as_bytes()) {
        Err(Error::UnsupportedVersion { found, supported }) => {
            assert_eq!((found, supported), (FORMAT_VERSION + 1, FORMAT_VERSION));
        }
        other => panic!("expected unsupported version, got {other:?}"),
    }
}

#[test]
fn corrupted_payload_is_rejected() {
    let bytes = train(ModelKind::LogReg).bundle.to_bytes();
    let header_end = bytes.windows(2).position(|w| w == b"\n\n").unwrap() + 2;
    for offset in [0, 17, (bytes.len() - header_end) / 2, bytes.len() - header_end - 2] {
        let mut flipped = bytes.clone();
        let i = header_end + offset;
        // stay inside ASCII so the failure comes from the checksum, not UTF-8 decoding
        flipped[i] = if flipped[i] == b'0' { b'1' } else { b'0' };
        assert!(matches!(ModelBundle::from_bytes(&flipped), Err(Error::Integrity(_))), "offset {offset}");
    }
    assert!(matches!(ModelBundle::from_bytes(&bytes[..bytes.len() - 5]), Err(Error::Integrity(_))));
}

#[test]
fn zero_logreg_predicts_uniform_negative() {
    let mut bundle = train(ModelKind::LogReg).bundle;
    bundle.model = Model::LogReg(LogRegModel::zeros(bundle.features.dim(), LogRegConfig::default()));
    for text in ["Saya senang sekali!!!", "", "@x http://y.z", "sedih banget"] {
        let p = predict(&bundle, text, 3, 9);
        assert_eq!(p.class, SentimentClass::Negative);
        for s in p.scores {
            assert!((s - 1.0 / 3.0).abs() < 1e-15);
        }
    }
}

#[test]
fn training_rows_reproduce_training_predictions() {
    let raw = fixture_raw();
    let norm = Normalizer::bundled();
    let records = fixture_records();
    let outcome = train(ModelKind::LogReg);
    // first raw row for each cleaned text, matching deduplication
    let mut by_clean = std::collections::HashMap::new();
    for r in &raw {
        by_clean.entry(norm.clean(&r.text)).or_insert(r);
    }
    for (&i, &want) in outcome.split.train_indices.iter().zip(&outcome.train_predictions) {
        let r = by_clean[&records[i].clean_text];
        assert_eq!(predict(&outcome.bundle, &r.text, r.retweets, r.likes).class, want);
    }
}

#[test]
fn predict_is_pure() {
    let bundle = train(ModelKind::Mlp).bundle;
    let a = predict(&bundle, "Mantap bgt hari ini #senang", 4, 20);
    let b = predict(&bundle, "Mantap bgt hari ini #senang", 4, 20);
    assert_eq!(a, b);
}

#[test]
fn toy_corpus_positive_word_drives_positive_prediction() {
    let docs = [
        ("saya senang sekali", SentimentClass::Positive),
        ("kami senang hari ini", SentimentClass::Positive),
        ("senang bisa bertemu", SentimentClass::Positive),
        ("mereka senang", SentimentClass::Positive),
        ("hari senang bersama", SentimentClass::Positive),
        ("senang dan bangga", SentimentClass::Positive),
        ("saya sedih sekali", SentimentClass::Negative),
        ("kami sedih hari ini", SentimentClass::Negative),
        ("sedih tidak bertemu", SentimentClass::Negative),
        ("mereka sedih", SentimentClass::Negative),
        ("hari sedih bersama", SentimentClass::Negative),
        ("sedih dan kecewa", SentimentClass::Negative),
        ("saya bingung sekali", SentimentClass::Neutral),
        ("apakah hari ini libur", SentimentClass::Neutral),
        ("bingung mau bertemu", SentimentClass::Neutral),
        ("mereka bingung", SentimentClass::Neutral),
        ("apakah bersama", SentimentClass::Neutral),
        ("bingung dan ragu", SentimentClass::Neutral),
    ];
    let records: Vec<CleanRecord> = docs
        .iter()
        .map(|(t, label)| CleanRecord {
            clean_text: t.to_string(),
            label: *label,
            word_count: t.split(' ').count(),
            engagement: 0,
            hashtag_count: 0,
        })
        .collect();
    let mut opts = TrainOptions::new(ModelKind::LogReg);
    opts.test_fraction = 0.2;
    let outcome = train_pipeline(&records, &LabelMap::bundled(), &Normalizer::bundled(), &opts).unwrap();
    let bundle = &outcome.bundle;
    let Model::LogReg(m) = &bundle.model else { unreachable!() };
    let col = bundle.features.tfidf.column("senang").expect("senang in vocabulary");
    assert!(m.class_weights(SentimentClass::Positive)[col] > 0.0);
    assert_eq!(predict(bundle, "Saya senang sekali!!!", 0, 0).class, SentimentClass::Positive);
}

#[test]
fn exported_tables_reparse_to_in_memory_values() {
    let records = fixture_records();
    let (data, _, _) = BenchmarkData::prepare(&records, &TfidfConfig::default(), 0.2, 42).unwrap();
    let specs = [
        ModelSpec::new(ModelConfig::default_for(ModelKind::LogReg)),
        ModelSpec::new(ModelConfig::default_for(ModelKind::LinearSvm)),
    ];
    let bench = run_benchmark(&data, &specs);
    let report = train(ModelKind::LogReg).report;
    let configs = ExperimentConfigs::default();
    let map = LabelMap::bundled();
    let dir = tempfile::tempdir().unwrap();
    let paths = export_tables(
        ExportInputs {
            report: Some(&report),
            benchmark: Some(&bench),
            configs: Some(&configs),
            label_map: Some(&map),
        },
        dir.path(),
    )
    .unwrap();
    assert_eq!(paths.len(), 4);

    let read = |name: &str| {
        let bytes = std::fs::read(dir.path().join(name)).unwrap();
        assert!(!bytes.contains(&b'\r'), "{name} has CR line endings");
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        let header: Vec<String> = r.headers().unwrap().iter().map(str::to_string).collect();
        let rows: Vec<Vec<String>> = r
            .records()
            .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
            .collect();
        (header, rows)
    };
    let close = |cell: &str, v: f64| (cell.parse::<f64>().unwrap() - v).abs() <= 5e-5;

    let (h, rows) = read("model_benchmark_table.csv");
    assert_eq!(h, BENCHMARK_HEADER);
    assert_eq!(rows.len(), 2);
    for (row, b) in rows.iter().zip(&bench.rows) {
        let s = b.outcome.as_ref().unwrap();
        assert_eq!(row[0], b.model);
        assert!(close(&row[2], s.accuracy) && close(&row[3], s.macro_f1) && close(&row[4], s.weighted_f1));
    }

    let (h, rows) = read("per_class_metrics_table.csv");
    assert_eq!(h, PER_CLASS_HEADER);
    for (row, m) in rows.iter().zip(&report.per_class) {
        assert_eq!(row[0], m.class.as_str());
        assert!(close(&row[1], m.precision) && close(&row[2], m.recall) && close(&row[3], m.f1));
        assert_eq!(row[4].parse::<u64>().unwrap(), m.support);
    }

    let (h, rows) = read("hyperparameter_table.csv");
    assert_eq!(h, HYPERPARAMETER_HEADER);
    assert!(rows.contains(&vec!["Logistic Regression".into(), "C".into(), "2.0".into()]));

    let (h, rows) = read("label_mapping_mini_table.csv");
    assert_eq!(h, LABEL_MAPPING_HEADER);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[0], ["Joy", "positive"]);
}

#[test]
fn unwritable_export_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let map = LabelMap::bundled();
    let err = export_tables(
        ExportInputs {
            label_map: Some(&map),
            ..Default::default()
        },
        &blocker.join("sub"),
    )
    .unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
}

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use senti_core::artifacts::{
    export_tables, label_map_digest, per_class_table, predict, ExperimentConfigs, ExportInputs, ModelBundle,
};
use senti_core::corpus::{load_raw, prepare, write_clean, PreparedCorpus, SchemaConfig, UnmappedPolicy};
use senti_core::evaluation::{run_benchmark, run_benchmark_detailed, stratified_split, BenchmarkData, BenchmarkTable, EvalReport};
use senti_core::learners::ModelKind;
use senti_core::pipeline::{evaluate_bundle, train_pipeline, TrainOptions};
use senti_core::textnorm::{LeetMap, Normalizer, SlangDict};
use senti_core::{Error, LabelMap};

use crate::args::{Command, Global};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_TRAINING: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::MissingColumn(_)
            | Error::Parse { .. }
            | Error::EmptyLabel { .. }
            | Error::UnmappedLabel(_)
            | Error::Asset { .. }
            | Error::EmptyCorpus
            | Error::Stratification { .. } => EXIT_DATA,
            Error::Csv(c) if c.is_io_error() => EXIT_IO,
            Error::Csv(_) => EXIT_DATA,
            Error::Fraction(_) => EXIT_USAGE,
            Error::EmptyVocabulary
            | Error::Shape(_)
            | Error::DegenerateClass(_)
            | Error::SingleClass
            | Error::NonFinite { .. }
            | Error::Training(_)
            | Error::EmptyEvaluation => EXIT_TRAINING,
            Error::UnsupportedVersion { .. } | Error::Integrity(_) | Error::Io { .. } => EXIT_IO,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_asset(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| {
        Error::Io {
            path: path.to_path_buf(),
            source: e,
        }
        .into()
    })
}

fn normalizer(g: &Global) -> CliResult<Normalizer> {
    let slang = match &g.slang {
        Some(p) => SlangDict::parse(&read_asset(p)?)?,
        None => SlangDict::bundled(),
    };
    let leet = match &g.leet {
        Some(p) => LeetMap::parse(&read_asset(p)?)?,
        None => LeetMap::bundled(),
    };
    Ok(Normalizer::new(slang, leet))
}

fn label_map(g: &Global) -> CliResult<LabelMap> {
    let policy = if g.drop_unmapped {
        UnmappedPolicy::Drop
    } else {
        UnmappedPolicy::Error
    };
    Ok(match &g.label_map {
        Some(p) => LabelMap::load(p, policy)?,
        None => LabelMap::bundled().with_policy(policy),
    })
}

fn data_path(g: &Global) -> CliResult<&Path> {
    g.data.as_deref().ok_or_else(|| CliError::usage("--data is required"))
}

fn bundle_path(g: &Global) -> PathBuf {
    g.bundle.clone().unwrap_or_else(|| g.out_dir.join("model.bundle"))
}

fn load_corpus(g: &Global, map: &LabelMap, norm: &Normalizer) -> CliResult<PreparedCorpus> {
    let schema = SchemaConfig {
        lenient: g.lenient,
        ..Default::default()
    };
    let raw = load_raw(data_path(g)?, &schema)?;
    Ok(prepare(&raw, map, norm)?)
}

fn check_fraction(g: &Global) -> CliResult<()> {
    if g.test_fraction > 0.0 && g.test_fraction < 1.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!(
            "--test-fraction must lie strictly between 0 and 1, got {}",
            g.test_fraction
        )))
    }
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| {
        Error::Io {
            path: dir.to_path_buf(),
            source: e,
        }
        .into()
    })
}

fn print_report(report: &EvalReport) -> CliResult<()> {
    println!(
        "accuracy {:.4}  macro_f1 {:.4}  weighted_f1 {:.4}",
        report.accuracy, report.macro_f1, report.weighted_f1
    );
    let csv = per_class_table(report).to_csv()?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

fn print_benchmark(table: &BenchmarkTable) {
    println!("{:<22} {:<16} {:>9} {:>9} {:>11}", "model", "family", "accuracy", "macro_f1", "weighted_f1");
    for row in &table.rows {
        match &row.outcome {
            Ok(s) => println!(
                "{:<22} {:<16} {:>9.4} {:>9.4} {:>11.4}",
                row.model, row.family, s.accuracy, s.macro_f1, s.weighted_f1
            ),
            Err(msg) => println!("{:<22} {:<16} failed: {msg}", row.model, row.family),
        }
    }
}

pub fn run(command: Command, g: &Global) -> CliResult<()> {
    match command {
        Command::Preprocess { out } => preprocess(g, out),
        Command::Train => train(g),
        Command::Evaluate { all } => evaluate(g, all),
        Command::Predict { texts, retweets, likes } => predict_texts(g, &texts, retweets, likes),
        Command::Benchmark { models } => benchmark(g, &models),
        Command::Export => export(g),
    }
}

fn preprocess(g: &Global, out: Option<PathBuf>) -> CliResult<()> {
    let map = label_map(g)?;
    let corpus = load_corpus(g, &map, &normalizer(g)?)?;
    let out = out.unwrap_or_else(|| g.out_dir.join("clean.csv"));
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    let file = File::create(&out).map_err(|e| Error::Io {
        path: out.clone(),
        source: e,
    })?;
    write_clean(BufWriter::new(file), &corpus.records)?;
    let s = corpus.stats;
    let [neg, neu, pos] = corpus.class_counts();
    println!(
        "read {} rows: {} empty, {} unmapped, {} duplicate dropped; kept {} (negative {neg}, neutral {neu}, positive {pos})",
        s.raw_rows,
        s.empty_dropped,
        s.unmapped_dropped,
        s.duplicates_dropped,
        corpus.records.len()
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn train(g: &Global) -> CliResult<()> {
    check_fraction(g)?;
    let map = label_map(g)?;
    let norm = normalizer(g)?;
    let corpus = load_corpus(g, &map, &norm)?;
    let opts = TrainOptions {
        tfidf: g.hyper.tfidf().map_err(CliError::usage)?,
        model: g.hyper.model(g.model, g.seed),
        test_fraction: g.test_fraction,
        seed: g.seed,
    };
    let outcome = train_pipeline(&corpus.records, &map, &norm, &opts)?;
    let path = bundle_path(g);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    outcome.bundle.save(&path)?;
    println!(
        "{} on {} training / {} test rows, {} features",
        g.model.display_name(),
        outcome.split.train_indices.len(),
        outcome.split.test_indices.len(),
        outcome.bundle.features.dim()
    );
    print_report(&outcome.report)?;
    println!("saved {}", path.display());
    Ok(())
}

fn evaluate(g: &Global, all: bool) -> CliResult<()> {
    check_fraction(g)?;
    let bundle = ModelBundle::load(bundle_path(g))?;
    let map = label_map(g)?;
    if label_map_digest(&map) != bundle.label_map_digest {
        eprintln!("warning: label map differs from the one the bundle was trained with");
    }
    let corpus = load_corpus(g, &map, &bundle.normalizer)?;
    let records = if all {
        corpus.records
    } else {
        let split = stratified_split(&corpus.labels(), g.test_fraction, g.seed)?;
        split.test_indices.iter().map(|&i| corpus.records[i].clone()).collect()
    };
    let report = evaluate_bundle(&bundle, &records)?;
    println!("{} on {} rows", bundle.model.kind().display_name(), records.len());
    print_report(&report)
}

fn predict_texts(g: &Global, texts: &[String], retweets: u64, likes: u64) -> CliResult<()> {
    let bundle = ModelBundle::load(bundle_path(g))?;
    for text in texts {
        let p = predict(&bundle, text, retweets, likes);
        let kind = if p.probabilistic { "p" } else { "score" };
        println!(
            "{}\t{kind}(negative)={:.4}\t{kind}(neutral)={:.4}\t{kind}(positive)={:.4}",
            p.class, p.scores[0], p.scores[1], p.scores[2]
        );
    }
    Ok(())
}

fn benchmark_data(g: &Global) -> CliResult<(BenchmarkData, LabelMap)> {
    check_fraction(g)?;
    let map = label_map(g)?;
    let corpus = load_corpus(g, &map, &normalizer(g)?)?;
    let tfidf = g.hyper.tfidf().map_err(CliError::usage)?;
    let (data, _, _) = BenchmarkData::prepare(&corpus.records, &tfidf, g.test_fraction, g.seed)?;
    Ok((data, map))
}

fn benchmark(g: &Global, models: &[ModelKind]) -> CliResult<()> {
    let (data, _) = benchmark_data(g)?;
    let table = run_benchmark(&data, &g.hyper.specs(models, g.seed));
    print_benchmark(&table);
    let paths = export_tables(
        ExportInputs {
            benchmark: Some(&table),
            ..Default::default()
        },
        &g.out_dir,
    )?;
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn export(g: &Global) -> CliResult<()> {
    let (data, map) = benchmark_data(g)?;
    let kinds = [ModelKind::LogReg, ModelKind::Mlp, ModelKind::LinearSvm];
    let (table, entries) = run_benchmark_detailed(&data, &g.hyper.specs(&kinds, g.seed));
    // per-class metrics come from the saved bundle when there is one
    let bundle_report = match &g.bundle {
        Some(p) => ModelBundle::load(p)?.metrics,
        None => None,
    };
    let report = match bundle_report {
        Some(r) => r,
        None => entries
            .iter()
            .find(|e| e.spec.config.kind() == g.model)
            .and_then(|e| e.report.clone())
            .ok_or_else(|| CliError {
                code: EXIT_TRAINING,
                message: format!("{} failed to train; no per-class report", g.model.display_name()),
            })?,
    };
    let configs = ExperimentConfigs {
        logreg: g.hyper.logreg(g.seed),
        mlp: g.hyper.mlp(g.seed),
        svm: g.hyper.svm(g.seed),
        tfidf: g.hyper.tfidf().map_err(CliError::usage)?,
    };
    let paths = export_tables(
        ExportInputs {
            report: Some(&report),
            benchmark: Some(&table),
            configs: Some(&configs),
            label_map: Some(&map),
        },
        &g.out_dir,
    )?;
    print_benchmark(&table);
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

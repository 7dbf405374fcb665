//! Self-contained model bundle.
//!
//! Layout (UTF-8, LF):
//!
//! ```text
//! senti-bundle
//! format_version 1
//! payload_sha256 <64 hex chars>
//! payload_bytes <decimal>
//!
//! <payload>
//! ```
//!
//! The payload is a sequence of `[section]` headers. Scalar entries are
//! `key = value`; table entries (dictionaries, vocabulary, weight rows) are
//! tab-separated. Floats are written as `{:.16e}` (17 significant digits),
//! which reads back to the identical `f64`.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::artifacts::atomic_write;
use crate::corpus::{LabelMap, NUM_CLASSES};
use crate::error::{Error, Result};
use crate::evaluation::{report, ConfusionMatrix, EvalReport};
use crate::featurizer::{FeaturePipeline, Scaler, TfidfConfig, TfidfModel};
use crate::learners::{
    ClassWeighting, ClassWeights, Layer, LinearSvmConfig, LinearSvmModel, LogRegConfig, LogRegModel, MlpConfig,
    MlpModel, Model,
};
use crate::textnorm::{LeetMap, Normalizer, SlangDict};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "senti-bundle";

/// Everything needed to go from raw text to a prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub seed: u64,
    pub label_map_digest: String,
    pub normalizer: Normalizer,
    pub features: FeaturePipeline,
    pub model: Model,
    pub metrics: Option<EvalReport>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn label_map_digest(map: &LabelMap) -> String {
    sha256_hex(map.to_asset().as_bytes())
}

impl ModelBundle {
    pub fn assets_digest(&self) -> String {
        let text = format!(
            "{}--\n{}",
            self.normalizer.slang.to_asset(),
            self.normalizer.leet.to_asset()
        );
        sha256_hex(text.as_bytes())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let payload = self.payload();
        let mut out = format!(
            "{MAGIC}\nformat_version {FORMAT_VERSION}\npayload_sha256 {}\npayload_bytes {}\n\n",
            sha256_hex(payload.as_bytes()),
            payload.len()
        );
        out.push_str(&payload);
        out.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|_| integrity("bundle is not UTF-8"))?;
        let (header, payload) = text
            .split_once("\n\n")
            .ok_or_else(|| integrity("missing header terminator"))?;
        let mut lines = header.lines();
        if lines.next() != Some(MAGIC) {
            return Err(integrity("not a senti bundle"));
        }
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| integrity(format!("missing header field {name}")))?;
            line.strip_prefix(name)
                .and_then(|v| v.strip_prefix(' '))
                .map(str::to_string)
                .ok_or_else(|| integrity(format!("expected header field {name}")))
        };
        let version: u32 = field("format_version")?
            .parse()
            .map_err(|_| integrity("bad format_version"))?;
        if version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion {
                found: version,
                supported: FORMAT_VERSION,
            });
        }
        let checksum = field("payload_sha256")?;
        let length: usize = field("payload_bytes")?
            .parse()
            .map_err(|_| integrity("bad payload_bytes"))?;
        if payload.len() != length {
            return Err(integrity(format!(
                "payload is {} bytes, header says {length}",
                payload.len()
            )));
        }
        if sha256_hex(payload.as_bytes()) != checksum {
            return Err(integrity("payload checksum mismatch"));
        }
        Self::parse_payload(payload)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        atomic_write(path.as_ref(), &self.to_bytes())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }

    fn payload(&self) -> String {
        let mut w = Writer::default();
        w.section("pipeline");
        w.kv("seed", self.seed);
        w.kv("label_map_digest", &self.label_map_digest);
        w.kv("assets_digest", self.assets_digest());

        w.section("slang");
        for (k, v) in self.normalizer.slang.iter() {
            w.row(&[k, v]);
        }
        w.section("leet");
        for (d, l) in self.normalizer.leet.iter() {
            w.row(&[&d.to_string(), &l.to_string()]);
        }

        let tfidf = &self.features.tfidf;
        let cfg = &tfidf.config;
        w.section("tfidf");
        w.kv(
            "max_features",
            cfg.max_features.map_or("none".to_string(), |m| m.to_string()),
        );
        w.kv("min_df", cfg.min_df);
        w.kv("max_df", float(cfg.max_df));
        w.kv("ngram_range", format!("{} {}", cfg.ngram_range.0, cfg.ngram_range.1));
        w.kv("sublinear_tf", cfg.sublinear_tf);
        w.kv("terms", tfidf.len());
        for (term, idf) in tfidf.terms().iter().zip(tfidf.idf()) {
            w.row(&[term, &float(*idf)]);
        }

        w.section("scaler");
        w.kv("means", floats(&self.features.scaler.means));
        w.kv("stds", floats(&self.features.scaler.stds));

        w.section("classifier");
        match &self.model {
            Model::LogReg(m) => {
                w.kv("kind", "logreg");
                w.kv("c", float(m.config.c));
                w.kv("class_weight", weighting(&m.config.class_weight));
                w.kv("max_iter", m.config.max_iter);
                w.kv("tol", float(m.config.tol));
                w.kv("seed", m.config.seed);
                w.kv("iterations", m.iterations);
                w.kv("converged", m.converged);
                write_linear(&mut w, m.dim(), &m.weights, &m.bias);
            }
            Model::LinearSvm(m) => {
                w.kv("kind", "svm");
                w.kv("c", float(m.config.c));
                w.kv("class_weight", weighting(&m.config.class_weight));
                w.kv("epochs", m.config.epochs);
                w.kv("seed", m.config.seed);
                write_linear(&mut w, m.dim(), &m.weights, &m.bias);
            }
            Model::Mlp(m) => {
                let c = &m.config;
                w.kv("kind", "mlp");
                w.kv(
                    "hidden",
                    c.hidden.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(" "),
                );
                w.kv("alpha", float(c.alpha));
                w.kv("learning_rate", float(c.learning_rate));
                w.kv("max_epochs", c.max_epochs);
                w.kv("early_stopping", c.early_stopping);
                w.kv("validation_fraction", float(c.validation_fraction));
                w.kv("patience", c.patience);
                w.kv("tol", float(c.tol));
                w.kv("batch_size", c.batch_size.map_or("auto".to_string(), |b| b.to_string()));
                w.kv("beta1", float(c.beta1));
                w.kv("beta2", float(c.beta2));
                w.kv("epsilon", float(c.epsilon));
                w.kv("seed", c.seed);
                w.kv("epochs_run", m.epochs_run);
                w.kv("layers", m.layers.len());
                for (i, layer) in m.layers.iter().enumerate() {
                    w.section(&format!("layer.{i}"));
                    w.kv("shape", format!("{} {}", layer.n_in, layer.n_out));
                    w.kv("bias", floats(&layer.bias));
                    for chunk in layer.weights.chunks(layer.n_out) {
                        w.row(&[&floats(chunk)]);
                    }
                }
            }
        }

        if let Some(r) = &self.metrics {
            w.section("metrics");
            let cells: Vec<String> = r.confusion.counts.iter().flatten().map(|c| c.to_string()).collect();
            w.kv("confusion", cells.join(" "));
        }
        w.out
    }

    fn parse_payload(payload: &str) -> Result<Self> {
        let sections = Sections::parse(payload)?;

        let pipeline = sections.get("pipeline")?;
        let seed = pipeline.parse("seed")?;
        let label_map_digest = pipeline.str("label_map_digest")?.to_string();

        let slang = SlangDict::new(sections.get("slang")?.pairs()?).map_err(|e| integrity(e.to_string()))?;
        let leet_pairs = sections
            .get("leet")?
            .pairs()?
            .into_iter()
            .map(|(d, l)| match (single_char(&d), single_char(&l)) {
                (Some(d), Some(l)) => Ok((d, l)),
                _ => Err(integrity("leet entries must be single characters")),
            })
            .collect::<Result<Vec<_>>>()?;
        let leet = LeetMap::new(leet_pairs).map_err(|e| integrity(e.to_string()))?;
        let normalizer = Normalizer::new(slang, leet);

        let t = sections.get("tfidf")?;
        let ngram: Vec<usize> = t.list("ngram_range")?;
        if ngram.len() != 2 {
            return Err(integrity("ngram_range needs two values"));
        }
        let config = TfidfConfig {
            max_features: match t.str("max_features")? {
                "none" => None,
                v => Some(v.parse().map_err(|_| integrity("bad max_features"))?),
            },
            min_df: t.parse("min_df")?,
            max_df: t.parse("max_df")?,
            ngram_range: (ngram[0], ngram[1]),
            sublinear_tf: t.parse("sublinear_tf")?,
        };
        let n_terms: usize = t.parse("terms")?;
        let mut terms = Vec::with_capacity(n_terms);
        let mut idf = Vec::with_capacity(n_terms);
        for (term, value) in t.pairs()? {
            terms.push(term);
            idf.push(parse_float(&value)?);
        }
        if terms.len() != n_terms || terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(integrity("vocabulary is inconsistent"));
        }
        let tfidf = TfidfModel::from_parts(config, terms, idf);

        let s = sections.get("scaler")?;
        let scaler = Scaler {
            means: s.list("means")?,
            stds: s.list("stds")?,
        };
        let features = FeaturePipeline { tfidf, scaler };

        let c = sections.get("classifier")?;
        let model = match c.str("kind")? {
            "logreg" => {
                let (weights, bias) = read_linear(c)?;
                Model::LogReg(LogRegModel {
                    weights,
                    bias,
                    config: LogRegConfig {
                        c: c.parse("c")?,
                        class_weight: parse_weighting(c.str("class_weight")?)?,
                        max_iter: c.parse("max_iter")?,
                        tol: c.parse("tol")?,
                        seed: c.parse("seed")?,
                    },
                    iterations: c.parse("iterations")?,
                    converged: c.parse("converged")?,
                })
            }
            "svm" => {
                let (weights, bias) = read_linear(c)?;
                Model::LinearSvm(LinearSvmModel {
                    weights,
                    bias,
                    config: LinearSvmConfig {
                        c: c.parse("c")?,
                        epochs: c.parse("epochs")?,
                        class_weight: parse_weighting(c.str("class_weight")?)?,
                        seed: c.parse("seed")?,
                    },
                })
            }
            "mlp" => {
                let config = MlpConfig {
                    hidden: c.list("hidden")?,
                    alpha: c.parse("alpha")?,
                    learning_rate: c.parse("learning_rate")?,
                    max_epochs: c.parse("max_epochs")?,
                    early_stopping: c.parse("early_stopping")?,
                    validation_fraction: c.parse("validation_fraction")?,
                    patience: c.parse("patience")?,
                    tol: c.parse("tol")?,
                    batch_size: match c.str("batch_size")? {
                        "auto" => None,
                        v => Some(v.parse().map_err(|_| integrity("bad batch_size"))?),
                    },
                    beta1: c.parse("beta1")?,
                    beta2: c.parse("beta2")?,
                    epsilon: c.parse("epsilon")?,
                    seed: c.parse("seed")?,
                };
                let n_layers: usize = c.parse("layers")?;
                let mut layers = Vec::with_capacity(n_layers);
                for i in 0..n_layers {
                    let l = sections.get(&format!("layer.{i}"))?;
                    let shape: Vec<usize> = l.list("shape")?;
                    let (n_in, n_out) = match shape[..] {
                        [a, b] => (a, b),
                        _ => return Err(integrity("layer shape needs two values")),
                    };
                    let bias: Vec<f64> = l.list("bias")?;
                    let mut weights = Vec::with_capacity(n_in * n_out);
                    for row in &l.rows {
                        weights.extend(parse_floats(row)?);
                    }
                    if bias.len() != n_out || weights.len() != n_in * n_out {
                        return Err(integrity(format!("layer {i} has the wrong number of parameters")));
                    }
                    layers.push(Layer {
                        n_in,
                        n_out,
                        weights,
                        bias,
                    });
                }
                let chained = layers.windows(2).all(|w| w[0].n_out == w[1].n_in);
                if layers.is_empty() || !chained || layers.last().map(|l| l.n_out) != Some(NUM_CLASSES) {
                    return Err(integrity("MLP layers do not chain"));
                }
                Model::Mlp(MlpModel {
                    layers,
                    config,
                    epochs_run: c.parse("epochs_run")?,
                })
            }
            other => return Err(integrity(format!("unknown classifier kind {other:?}"))),
        };
        if model.dim() != features.dim() {
            return Err(integrity("classifier dimension does not match features"));
        }

        let metrics = match sections.find("metrics") {
            Some(m) => {
                let cells: Vec<u64> = m.list("confusion")?;
                if cells.len() != NUM_CLASSES * NUM_CLASSES {
                    return Err(integrity("confusion matrix needs nine cells"));
                }
                let counts = std::array::from_fn(|i| std::array::from_fn(|j| cells[i * NUM_CLASSES + j]));
                Some(report(&ConfusionMatrix::new(counts)).map_err(|e| integrity(e.to_string()))?)
            }
            None => None,
        };

        Ok(Self {
            seed,
            label_map_digest,
            normalizer,
            features,
            model,
            metrics,
        })
    }
}

fn integrity(msg: impl Into<String>) -> Error {
    Error::Integrity(msg.into())
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn floats(vs: &[f64]) -> String {
    vs.iter().map(|v| float(*v)).collect::<Vec<_>>().join(" ")
}

fn parse_float(s: &str) -> Result<f64> {
    s.parse().map_err(|_| integrity(format!("bad float {s:?}")))
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(' ').filter(|t| !t.is_empty()).map(parse_float).collect()
}

fn single_char(s: &str) -> Option<char> {
    let mut it = s.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

fn weighting(w: &ClassWeighting) -> String {
    match w {
        ClassWeighting::Custom(ClassWeights(ws)) => format!("custom {}", floats(ws)),
        other => other.as_str().to_string(),
    }
}

fn parse_weighting(s: &str) -> Result<ClassWeighting> {
    match s {
        "balanced" => Ok(ClassWeighting::Balanced),
        "none" => Ok(ClassWeighting::Uniform),
        _ => {
            let rest = s
                .strip_prefix("custom ")
                .ok_or_else(|| integrity(format!("unknown class weighting {s:?}")))?;
            let ws = parse_floats(rest)?;
            if ws.len() != NUM_CLASSES {
                return Err(integrity("custom class weights need three values"));
            }
            Ok(ClassWeighting::Custom(ClassWeights([ws[0], ws[1], ws[2]])))
        }
    }
}

fn write_linear(w: &mut Writer, dim: usize, weights: &[f64], bias: &[f64; NUM_CLASSES]) {
    w.kv("dim", dim);
    w.kv("bias", floats(bias));
    for row in weights.chunks(dim) {
        w.row(&[&floats(row)]);
    }
}

fn read_linear(c: &Section) -> Result<(Vec<f64>, [f64; NUM_CLASSES])> {
    let dim: usize = c.parse("dim")?;
    let bias: Vec<f64> = c.list("bias")?;
    if bias.len() != NUM_CLASSES || c.rows.len() != NUM_CLASSES {
        return Err(integrity("linear classifier needs three weight rows and biases"));
    }
    let mut weights = Vec::with_capacity(NUM_CLASSES * dim);
    for row in &c.rows {
        let r = parse_floats(row)?;
        if r.len() != dim {
            return Err(integrity("weight row length does not match dim"));
        }
        weights.extend(r);
    }
    Ok((weights, [bias[0], bias[1], bias[2]]))
}

#[derive(Default)]
struct Writer {
    out: String,
}

impl Writer {
    fn section(&mut self, name: &str) {
        let _ = writeln!(self.out, "[{name}]");
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key} = {value}");
    }

    fn row(&mut self, cells: &[&str]) {
        let _ = writeln!(self.out, "\t{}", cells.join("\t"));
    }
}

struct Section {
    name: String,
    entries: Vec<(String, String)>,
    /// Tab-prefixed table lines with the leading tab removed.
    rows: Vec<String>,
}

impl Section {
    fn str(&self, key: &str) -> Result<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| integrity(format!("[{}] is missing `{key}`", self.name)))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.str(key)?
            .parse()
            .map_err(|_| integrity(format!("[{}] has a malformed `{key}`", self.name)))
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        self.str(key)?
            .split(' ')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse()
                    .map_err(|_| integrity(format!("[{}] has a malformed `{key}`", self.name)))
            })
            .collect()
    }

    fn pairs(&self) -> Result<Vec<(String, String)>> {
        self.rows
            .iter()
            .map(|r| {
                r.split_once('\t')
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .ok_or_else(|| integrity(format!("[{}] row is not a pair", self.name)))
            })
            .collect()
    }
}

struct Sections(Vec<Section>);

impl Sections {
    fn parse(payload: &str) -> Result<Self> {
        let mut out: Vec<Section> = Vec::new();
        for line in payload.lines() {
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                out.push(Section {
                    name: name.to_string(),
                    entries: Vec::new(),
                    rows: Vec::new(),
                });
                continue;
            }
            let current = out.last_mut().ok_or_else(|| integrity("payload must start with a section"))?;
            if let Some(row) = line.strip_prefix('\t') {
                current.rows.push(row.to_string());
            } else if let Some((k, v)) = line.split_once(" = ") {
                current.entries.push((k.to_string(), v.to_string()));
            } else {
                return Err(integrity(format!("unreadable payload line {line:?}")));
            }
        }
        Ok(Self(out))
    }

    fn find(&self, name: &str) -> Option<&Section> {
        self.0.iter().find(|s| s.name == name)
    }

    fn get(&self, name: &str) -> Result<&Section> {
        self.find(name)
            .ok_or_else(|| integrity(format!("missing section [{name}]")))
    }
}

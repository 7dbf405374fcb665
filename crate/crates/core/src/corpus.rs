//! Raw CSV ingestion, label remapping and deduplication.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::assets::{self, parse_pairs};
use crate::error::{Error, Result};
use crate::textnorm::{count_hashtags, Normalizer};

/// The three operational classes, in ordinal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SentimentClass {
    Negative = 0,
    Neutral = 1,
    Positive = 2,
}

pub const NUM_CLASSES: usize = 3;

impl SentimentClass {
    pub const ALL: [SentimentClass; NUM_CLASSES] = [
        SentimentClass::Negative,
        SentimentClass::Neutral,
        SentimentClass::Positive,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SentimentClass::Negative => "negative",
            SentimentClass::Neutral => "neutral",
            SentimentClass::Positive => "positive",
        }
    }
}

impl fmt::Display for SentimentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "negative" => Ok(SentimentClass::Negative),
            "neutral" => Ok(SentimentClass::Neutral),
            "positive" => Ok(SentimentClass::Positive),
            _ => Err(Error::UnmappedLabel(s.to_string())),
        }
    }
}

/// Per-class counts indexed by class ordinal.
pub fn class_counts(labels: &[SentimentClass]) -> [usize; NUM_CLASSES] {
    let mut counts = [0; NUM_CLASSES];
    for l in labels {
        counts[l.index()] += 1;
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub text: String,
    pub raw_label: String,
    pub retweets: u64,
    pub likes: u64,
    pub hashtags_field: String,
}

/// Column bindings for [`load_raw`]. Each logical column lists the header
/// names it may appear under; matching ignores case and surrounding space.
#[derive(Debug, Clone)]
pub struct SchemaConfig {
    pub text: Vec<String>,
    pub sentiment: Vec<String>,
    pub retweets: Vec<String>,
    pub likes: Vec<String>,
    pub hashtags: Vec<String>,
    /// Map unparseable numeric cells to 0 instead of failing.
    pub lenient: bool,
}

impl Default for SchemaConfig {
    fn default() -> Self {
        fn names(xs: &[&str]) -> Vec<String> {
            xs.iter().map(|s| s.to_string()).collect()
        }
        Self {
            text: names(&["text", "content", "tweet"]),
            sentiment: names(&["sentiment", "label", "emotion"]),
            retweets: names(&["retweets", "retweet_count"]),
            likes: names(&["likes", "like_count", "favorites"]),
            hashtags: names(&["hashtags", "hashtag"]),
            lenient: false,
        }
    }
}

fn resolve(header: &csv::StringRecord, logical: &str, aliases: &[String]) -> Result<usize> {
    let norm: Vec<String> = header.iter().map(|h| h.trim().to_lowercase()).collect();
    aliases
        .iter()
        .find_map(|a| {
            let a = a.trim().to_lowercase();
            norm.iter().position(|h| *h == a)
        })
        .ok_or_else(|| Error::MissingColumn(logical.to_string()))
}

fn parse_count(cell: &str, row: usize, column: &str, lenient: bool) -> Result<u64> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(0);
    }
    if let Ok(v) = cell.parse::<u64>() {
        return Ok(v);
    }
    // exports often write counts as floats ("15.0")
    if let Ok(f) = cell.parse::<f64>() {
        if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f < u64::MAX as f64 {
            return Ok(f as u64);
        }
    }
    if lenient {
        Ok(0)
    } else {
        Err(Error::Parse {
            row,
            column: column.to_string(),
            value: cell.to_string(),
        })
    }
}

pub fn load_raw(path: impl AsRef<Path>, schema: &SchemaConfig) -> Result<Vec<RawRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_raw(file, schema)
}

/// Reads raw records from any CSV source. Data rows are numbered from 1.
pub fn read_raw<R: Read>(reader: R, schema: &SchemaConfig) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = rdr.headers()?.clone();
    let text_col = resolve(&header, "text", &schema.text)?;
    let label_col = resolve(&header, "sentiment", &schema.sentiment)?;
    let rt_col = resolve(&header, "retweets", &schema.retweets)?;
    let likes_col = resolve(&header, "likes", &schema.likes)?;
    let tag_col = resolve(&header, "hashtags", &schema.hashtags)?;

    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let cell = |c: usize| rec.get(c).unwrap_or("");
        let raw_label = cell(label_col).trim();
        if raw_label.is_empty() {
            return Err(Error::EmptyLabel { row });
        }
        out.push(RawRecord {
            text: cell(text_col).to_string(),
            raw_label: raw_label.to_string(),
            retweets: parse_count(cell(rt_col), row, "retweets", schema.lenient)?,
            likes: parse_count(cell(likes_col), row, "likes", schema.lenient)?,
            hashtags_field: cell(tag_col).to_string(),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnmappedPolicy {
    #[default]
    Error,
    Drop,
}

/// The nine normative remapping rows, in display order.
pub const CORE_LABEL_ROWS: [(&str, SentimentClass); 9] = [
    ("Joy", SentimentClass::Positive),
    ("Gratitude", SentimentClass::Positive),
    ("Excitement", SentimentClass::Positive),
    ("Sad", SentimentClass::Negative),
    ("Anger", SentimentClass::Negative),
    ("Frustrated", SentimentClass::Negative),
    ("Neutral", SentimentClass::Neutral),
    ("Confusion", SentimentClass::Neutral),
    ("Curiosity", SentimentClass::Neutral),
];

fn normalize_label(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// Fine-grained label to class lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    entries: BTreeMap<String, SentimentClass>,
    pub unmapped_policy: UnmappedPolicy,
}

impl LabelMap {
    pub fn new<S: AsRef<str>>(
        pairs: impl IntoIterator<Item = (S, SentimentClass)>,
        unmapped_policy: UnmappedPolicy,
    ) -> Self {
        let entries = pairs
            .into_iter()
            .map(|(k, v)| (normalize_label(k.as_ref()), v))
            .collect();
        Self {
            entries,
            unmapped_policy,
        }
    }

    pub fn parse(text: &str, unmapped_policy: UnmappedPolicy) -> Result<Self> {
        let mut pairs = Vec::new();
        for e in parse_pairs("label map", text)? {
            let class = e.value.parse::<SentimentClass>().map_err(|_| Error::Asset {
                name: "label map".to_string(),
                line: e.line,
                message: format!("unknown class {:?}", e.value),
            })?;
            pairs.push((e.key, class));
        }
        Ok(Self::new(pairs, unmapped_policy))
    }

    pub fn load(path: impl AsRef<Path>, unmapped_policy: UnmappedPolicy) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, unmapped_policy)
    }

    pub fn bundled() -> Self {
        Self::parse(assets::DEFAULT_LABEL_MAP, UnmappedPolicy::Error)
            .expect("bundled label map is valid")
    }

    pub fn with_policy(mut self, policy: UnmappedPolicy) -> Self {
        self.unmapped_policy = policy;
        self
    }

    pub fn lookup(&self, raw_label: &str) -> Option<SentimentClass> {
        self.entries.get(&normalize_label(raw_label)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_asset(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k},{v}\n"))
            .collect()
    }
}

/// Maps a fine-grained label, rejecting labels the map does not cover.
pub fn map_label(raw_label: &str, map: &LabelMap) -> Result<SentimentClass> {
    map.lookup(raw_label)
        .ok_or_else(|| Error::UnmappedLabel(raw_label.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanRecord {
    pub clean_text: String,
    pub label: SentimentClass,
    pub word_count: usize,
    pub engagement: u64,
    pub hashtag_count: usize,
}

impl CleanRecord {
    /// Cleans one raw record. Returns `None` when the text cleans to nothing.
    pub fn from_raw(raw: &RawRecord, label: SentimentClass, norm: &Normalizer) -> Option<Self> {
        let clean_text = norm.clean(&raw.text);
        if clean_text.is_empty() {
            return None;
        }
        Some(Self {
            word_count: clean_text.split(' ').count(),
            clean_text,
            label,
            engagement: raw.retweets.saturating_add(raw.likes),
            hashtag_count: count_hashtags(&raw.text),
        })
    }
}

/// Keeps the first record for each distinct `clean_text`.
pub fn deduplicate(records: Vec<CleanRecord>) -> Vec<CleanRecord> {
    let mut seen = HashSet::new();
    records
        .into_iter()
        .filter(|r| seen.insert(r.clean_text.clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PrepareStats {
    pub raw_rows: usize,
    pub empty_dropped: usize,
    pub unmapped_dropped: usize,
    pub duplicates_dropped: usize,
}

#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub records: Vec<CleanRecord>,
    pub stats: PrepareStats,
}

impl PreparedCorpus {
    pub fn labels(&self) -> Vec<SentimentClass> {
        self.records.iter().map(|r| r.label).collect()
    }

    pub fn class_counts(&self) -> [usize; NUM_CLASSES] {
        class_counts(&self.labels())
    }
}

/// Cleaning, empty-text removal, label remapping and deduplication.
pub fn prepare(raw: &[RawRecord], map: &LabelMap, norm: &Normalizer) -> Result<PreparedCorpus> {
    let mut stats = PrepareStats {
        raw_rows: raw.len(),
        ..Default::default()
    };
    let mut cleaned = Vec::with_capacity(raw.len());
    for r in raw {
        let label = match map.lookup(&r.raw_label) {
            Some(l) => l,
            None if map.unmapped_policy == UnmappedPolicy::Drop => {
                stats.unmapped_dropped += 1;
                continue;
            }
            None => {
                // rows that clean to nothing are discarded before the label matters
                if norm.clean(&r.text).is_empty() {
                    stats.empty_dropped += 1;
                    continue;
                }
                return Err(Error::UnmappedLabel(r.raw_label.clone()));
            }
        };
        match CleanRecord::from_raw(r, label, norm) {
            Some(c) => cleaned.push(c),
            None => stats.empty_dropped += 1,
        }
    }
    let before = cleaned.len();
    let records = deduplicate(cleaned);
    stats.duplicates_dropped = before - records.len();
    Ok(PreparedCorpus { records, stats })
}

/// Writes cleaned records as CSV: `clean_text,label,word_count,engagement,hashtag_count`.
pub fn write_clean<W: Write>(writer: W, records: &[CleanRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(["clean_text", "label", "word_count", "engagement", "hashtag_count"])?;
    for r in records {
        w.write_record([
            r.clean_text.as_str(),
            r.label.as_str(),
            &r.word_count.to_string(),
            &r.engagement.to_string(),
            &r.hashtag_count.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<clean csv>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(text: &str) -> CleanRecord {
        CleanRecord {
            clean_text: text.to_string(),
            label: SentimentClass::Positive,
            word_count: text.split(' ').count(),
            engagement: 0,
            hashtag_count: 0,
        }
    }

    #[test]
    fn class_ordinals() {
        assert_eq!(SentimentClass::Negative.index(), 0);
        assert_eq!(SentimentClass::Neutral.index(), 1);
        assert_eq!(SentimentClass::Positive.index(), 2);
        assert_eq!(SentimentClass::from_index(3), None);
    }

    #[test]
    fn table_rows_map() {
        let map = LabelMap::bundled();
        assert_eq!(map_label("Joy", &map).unwrap(), SentimentClass::Positive);
        assert_eq!(map_label("Curiosity", &map).unwrap(), SentimentClass::Neutral);
        assert_eq!(map_label("  ANGER ", &map).unwrap(), SentimentClass::Negative);
        for (label, class) in CORE_LABEL_ROWS {
            assert_eq!(map.lookup(label), Some(class), "{label}");
        }
    }

    #[test]
    fn unknown_label_error_carries_label() {
        let map = LabelMap::bundled();
        match map_label("Quux", &map) {
            Err(Error::UnmappedLabel(l)) => assert_eq!(l, "Quux"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn internal_whitespace_is_insensitive() {
        let map = LabelMap::new([("Mixed Feelings", SentimentClass::Neutral)], UnmappedPolicy::Error);
        assert_eq!(map.lookup("mixed   FEELINGS"), Some(SentimentClass::Neutral));
    }

    #[test]
    fn dedup_keeps_first() {
        let mut a = rec("halo dunia");
        a.engagement = 1;
        let mut b = rec("halo dunia");
        b.engagement = 2;
        let out = deduplicate(vec![a.clone(), rec("x"), b]);
        assert_eq!(out, vec![a, rec("x")]);
    }

    #[test]
    fn dedup_identity_on_unique() {
        let xs = vec![rec("a"), rec("b"), rec("c")];
        assert_eq!(deduplicate(xs.clone()), xs);
    }

    #[test]
    fn read_header_only() {
        let csv = "Text,Sentiment,Retweets,Likes,Hashtags\n";
        assert!(read_raw(csv.as_bytes(), &SchemaConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn read_case_insensitive_headers_and_extra_columns() {
        let csv = " TEXT ,Platform,sentiment , Retweets,LIKES,Hashtags\nhalo,X, Joy ,15.0,30,#a #b\n";
        let rows = read_raw(csv.as_bytes(), &SchemaConfig::default()).unwrap();
        assert_eq!(
            rows,
            vec![RawRecord {
                text: "halo".into(),
                raw_label: "Joy".into(),
                retweets: 15,
                likes: 30,
                hashtags_field: "#a #b".into(),
            }]
        );
    }

    #[test]
    fn missing_column_is_named() {
        let csv = "text,sentiment,likes,hashtags\n";
        match read_raw(csv.as_bytes(), &SchemaConfig::default()) {
            Err(Error::MissingColumn(c)) => assert_eq!(c, "retweets"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn numeric_parsing_modes() {
        let csv = "text,sentiment,retweets,likes,hashtags\na,Joy,,3,\nb,Joy,abc,1,\n";
        let strict = read_raw(csv.as_bytes(), &SchemaConfig::default());
        assert!(matches!(strict, Err(Error::Parse { row: 2, .. })));
        let lenient = SchemaConfig {
            lenient: true,
            ..Default::default()
        };
        let rows = read_raw(csv.as_bytes(), &lenient).unwrap();
        assert_eq!(rows[0].retweets, 0);
        assert_eq!(rows[1].retweets, 0);
        assert_eq!(rows[1].likes, 1);
    }

    #[test]
    fn empty_label_rejected() {
        let csv = "text,sentiment,retweets,likes,hashtags\na,  ,1,1,\n";
        assert!(matches!(
            read_raw(csv.as_bytes(), &SchemaConfig::default()),
            Err(Error::EmptyLabel { row: 1 })
        ));
    }

    #[test]
    fn prepare_drops_empty_and_duplicates() {
        let raw = |t: &str, l: &str| RawRecord {
            text: t.into(),
            raw_label: l.into(),
            retweets: 1,
            likes: 2,
            hashtags_field: String::new(),
        };
        let rows = vec![
            raw("Halo Dunia!", "Joy"),
            raw("http://x.y", "Mystery"),
            raw("halo dunia", "Anger"),
            raw("#Sedih bgt", "Sad"),
        ];
        let map = LabelMap::bundled();
        let out = prepare(&rows, &map, &Normalizer::bundled()).unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[0].label, SentimentClass::Positive);
        assert_eq!(out.records[1].clean_text, "sedih banget");
        assert_eq!(out.records[1].hashtag_count, 1);
        assert_eq!(out.records[1].engagement, 3);
        assert_eq!(out.stats.empty_dropped, 1);
        assert_eq!(out.stats.duplicates_dropped, 1);

        let unmapped = vec![raw("ada isi", "Mystery")];
        assert!(matches!(
            prepare(&unmapped, &map, &Normalizer::bundled()),
            Err(Error::UnmappedLabel(_))
        ));
        let drop = map.with_policy(UnmappedPolicy::Drop);
        let out = prepare(&unmapped, &drop, &Normalizer::bundled()).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.stats.unmapped_dropped, 1);
    }

    proptest! {
        #[test]
        fn dedup_shrinks_and_is_idempotent(texts in proptest::collection::vec("[ab]{1,3}", 0..30)) {
            let xs: Vec<CleanRecord> = texts.iter().map(|t| rec(t)).collect();
            let once = deduplicate(xs.clone());
            prop_assert!(once.len() <= xs.len());
            prop_assert_eq!(deduplicate(once.clone()), once);
        }

        #[test]
        fn lookup_ignores_case_and_padding(idx in 0usize..9, pad_l in " {0,3}", pad_r in " {0,3}", upper in any::<bool>()) {
            let map = LabelMap::bundled();
            let (label, _) = CORE_LABEL_ROWS[idx];
            let s = if upper { label.to_uppercase() } else { label.to_string() };
            let padded = format!("{pad_l}{s}{pad_r}");
            prop_assert_eq!(map.lookup(&padded), map.lookup(&padded.trim().to_lowercase()));
        }
    }
}

//! Deterministic synthetic corpus shaped like a small Indonesian
//! social-media sentiment dump: 732 raw rows that clean and deduplicate to
//! 707 posts with 459 positive, 188 negative and 60 neutral labels.
//!
//! Vocabulary is class-correlated but overlapping, so a linear model beats
//! the majority baseline without reaching perfect accuracy.

use std::collections::HashSet;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawRecord;
use crate::error::{Error, Result};
use crate::textnorm::Normalizer;

pub const DEFAULT_SEED: u64 = 20_240_707;
pub const UNIQUE_POSTS: [usize; 3] = [188, 60, 459];
pub const DUPLICATE_ROWS: usize = 15;
pub const EMPTY_ROWS: usize = 10;

const POSITIVE: &[&str] = &[
    "senang", "bahagia", "keren", "mantap", "suka", "bagus", "hebat", "cinta", "seru", "asik", "sukses",
    "bangga", "syukur", "indah", "lucu", "puas", "semangat", "terbaik", "juara", "ceria",
];
const NEGATIVE: &[&str] = &[
    "sedih", "marah", "kecewa", "benci", "buruk", "kesal", "jelek", "capek", "parah", "menyebalkan", "gagal",
    "rusak", "lelah", "takut", "kacau", "sakit", "muak", "rugi",
];
const NEUTRAL: &[&str] = &[
    "mungkin", "apakah", "bingung", "penasaran", "biasa", "entah", "tanya", "kenapa", "gimana", "kira",
    "sepertinya", "info", "ragu", "cek",
];
const FILLER: &[&str] = &[
    "hari", "ini", "aku", "kita", "dan", "di", "untuk", "lagi", "banget", "teman", "kantor", "rumah", "pagi",
    "malam", "acara", "film", "makan", "kopi", "jalan", "kota", "kerja", "sekolah", "minggu", "tadi", "baru",
    "orang", "semua", "sama", "tidak", "sudah", "mau", "bisa", "yang", "dengan", "ke", "dari", "main",
    "musik", "hujan", "libur",
];
const LABELS: [&[&str]; 3] = [
    &["Sad", "Anger", "Frustrated", "Grief", "Disappointed", "Fear", "Bitterness"],
    &["Neutral", "Confusion", "Curiosity", "Indifference", "Surprise"],
    &["Joy", "Gratitude", "Excitement", "Happy", "Contentment", "Serenity", "Hope"],
];
const TAGS: [&[&str]; 3] = [
    &["#sedih", "#kecewa", "#kesal"],
    &["#tanya", "#info"],
    &["#senang", "#bahagia", "#keren"],
];
const EMPTY_TEXTS: [&str; EMPTY_ROWS] = [
    "!!!",
    "http://t.co/a1b2c3",
    "@budi_99",
    "12345 ???",
    "www.contoh.com/promo",
    "@ani @budi https://x.co/z",
    "...",
    "2024!!! 7",
    "#",
    "😂😂😂",
];

fn class_words(class: usize) -> &'static [&'static str] {
    [NEGATIVE, NEUTRAL, POSITIVE][class]
}

/// Reverse of the leetspeak and slang tables, used to dirty the raw text.
fn roughen(word: &str, rng: &mut ChaCha8Rng) -> String {
    let slang = match word {
        "tidak" => Some(["gak", "ga", "nggak", "tdk"][rng.gen_range(0..4)]),
        "banget" => Some("bgt"),
        "yang" => Some("yg"),
        "sudah" => Some("udah"),
        "untuk" => Some("utk"),
        "dengan" => Some("dgn"),
        "lagi" => Some("lg"),
        _ => None,
    };
    if let Some(s) = slang {
        if rng.gen_bool(0.6) {
            return s.to_string();
        }
    }
    if rng.gen_bool(0.08) {
        return word
            .chars()
            .map(|c| match c {
                'a' => '4',
                'e' => '3',
                'i' => '1',
                'o' => '0',
                other => other,
            })
            .collect();
    }
    if rng.gen_bool(0.1) {
        return word.to_uppercase();
    }
    word.to_string()
}

fn post(class: usize, rng: &mut ChaCha8Rng) -> (String, String) {
    let n_words = rng.gen_range(5..=12);
    let n_signal = rng.gen_range(1..=3);
    let mut words: Vec<String> = Vec::with_capacity(n_words + 2);
    for _ in 0..n_signal {
        // signal words mostly come from the post's own class
        let source = if rng.gen_bool(0.78) {
            class
        } else {
            (class + rng.gen_range(1..3)) % 3
        };
        words.push(class_words(source).choose(rng).expect("non-empty").to_string());
    }
    while words.len() < n_words {
        words.push(FILLER.choose(rng).expect("non-empty").to_string());
    }
    words.shuffle(rng);
    let mut text: Vec<String> = words.iter().map(|w| roughen(w, rng)).collect();
    if rng.gen_bool(0.15) {
        text.insert(0, format!("@{}", ["budi", "ani", "rina_22", "joko"][rng.gen_range(0..4)]));
    }
    if rng.gen_bool(0.12) {
        text.push(format!("https://t.co/{}", rng.gen_range(1000..9999)));
    }
    let mut tags = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let pool = if rng.gen_bool(0.7) { TAGS[class] } else { TAGS[rng.gen_range(0..3)] };
        tags.push(pool.choose(rng).expect("non-empty").to_string());
    }
    let mut raw = text.join(" ");
    match rng.gen_range(0..4) {
        0 => raw.push_str("!!!"),
        1 => raw.push('.'),
        2 => raw.push_str(" 😊"),
        _ => {}
    }
    if !tags.is_empty() {
        raw.push(' ');
        raw.push_str(&tags.join(" "));
    }
    (raw, tags.join(" "))
}

/// Builds the 732-row raw corpus.
pub fn synthetic_raw(seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = Normalizer::bundled();
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    let mut classes: Vec<usize> = UNIQUE_POSTS
        .iter()
        .enumerate()
        .flat_map(|(c, &n)| std::iter::repeat_n(c, n))
        .collect();
    classes.shuffle(&mut rng);
    for class in classes {
        loop {
            let (text, hashtags_field) = post(class, &mut rng);
            if seen.insert(norm.clean(&text)) {
                rows.push(RawRecord {
                    text,
                    raw_label: LABELS[class].choose(&mut rng).expect("non-empty").to_string(),
                    retweets: rng.gen_range(0..40),
                    likes: rng.gen_range(0..90),
                    hashtags_field,
                });
                break;
            }
        }
    }
    // Interleave reposts and empty posts among the originals. A repost only
    // copies an original already emitted, so the first occurrence wins.
    let mut extras: Vec<Option<usize>> = (0..DUPLICATE_ROWS).map(|_| None).collect();
    extras.extend((0..EMPTY_ROWS).map(Some));
    extras.shuffle(&mut rng);
    let stride = rows.len() / extras.len();
    let mut out = Vec::with_capacity(rows.len() + extras.len());
    let mut original_at = Vec::with_capacity(rows.len());
    let mut originals = rows.into_iter();
    for (slot, extra) in extras.into_iter().enumerate() {
        for r in originals.by_ref().take(stride) {
            original_at.push(out.len());
            out.push(r);
        }
        match extra {
            None => {
                let src: RawRecord = out[original_at[rng.gen_range(0..original_at.len())]].clone();
                let text = match slot % 3 {
                    0 => src.text.to_uppercase(),
                    1 => format!("{} https://t.co/rt{slot}", src.text),
                    _ => format!("@repost {}!!", src.text),
                };
                out.push(RawRecord {
                    text,
                    retweets: src.retweets + 1,
                    ..src
                });
            }
            Some(i) => out.push(RawRecord {
                text: EMPTY_TEXTS[i].to_string(),
                raw_label: LABELS[i % 3][0].to_string(),
                retweets: 0,
                likes: i as u64,
                hashtags_field: String::new(),
            }),
        }
    }
    out.extend(originals);
    out
}

/// Writes raw records in the ingestion column layout.
pub fn write_raw_csv<W: Write>(writer: W, rows: &[RawRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(["Text", "Sentiment", "Hashtags", "Retweets", "Likes"])?;
    for r in rows {
        w.write_record([
            r.text.as_str(),
            r.raw_label.as_str(),
            r.hashtags_field.as_str(),
            &r.retweets.to_string(),
            &r.likes.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<raw csv>", e))?;
    Ok(())
}

/// Counts indexed by class ordinal after full preparation.
pub fn expected_counts() -> [usize; 3] {
    UNIQUE_POSTS
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{prepare, LabelMap};

    #[test]
    fn reduces_to_reference_shape() {
        let raw = synthetic_raw(DEFAULT_SEED);
        assert_eq!(raw.len(), 732);
        let out = prepare(&raw, &LabelMap::bundled(), &Normalizer::bundled()).unwrap();
        assert_eq!(out.records.len(), 707);
        assert_eq!(out.stats.empty_dropped, EMPTY_ROWS);
        assert_eq!(out.stats.duplicates_dropped, DUPLICATE_ROWS);
        assert_eq!(out.class_counts(), [188, 60, 459]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(synthetic_raw(1), synthetic_raw(1));
    }
}

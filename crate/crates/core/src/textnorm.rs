//! Social-media text cleaning.
//!
//! [`clean_text`] runs six stages in a fixed order:
//!
//! 1. lowercase
//! 2. drop URL spans (`http://`, `https://`, `www.` up to the next whitespace)
//! 3. drop `@mention` tokens
//! 4. leetspeak digits inside alphanumeric runs that contain a letter
//! 5. slang expansion on maximal `[a-z]+` runs
//! 6. every non-`[a-z]` character becomes a space, whitespace collapses, trim
//!
//! Removed spans and stripped characters are replaced by a space, so two
//! words on either side of a URL, mention or punctuation never fuse.

use std::collections::BTreeMap;

use crate::assets::{self, parse_pairs};
use crate::error::{Error, Result};

/// Slang token to canonical expansion.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlangDict {
    entries: BTreeMap<String, String>,
}

impl SlangDict {
    /// Builds a dictionary, validating that keys are single `[a-z]+` tokens
    /// and that expansions are clean text containing no key.
    pub fn new<I, K, V>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let entries: BTreeMap<String, String> = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .collect();
        for (key, value) in &entries {
            if key.is_empty() || !key.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(slang_error(format!("key {key:?} is not a lowercase alphabetic token")));
            }
            let clean = value.split(' ').all(|t| !t.is_empty() && t.bytes().all(|b| b.is_ascii_lowercase()));
            if !clean {
                return Err(slang_error(format!("expansion {value:?} for {key:?} is not clean text")));
            }
            if let Some(t) = value.split(' ').find(|t| entries.contains_key(*t)) {
                return Err(slang_error(format!("expansion for {key:?} contains slang key {t:?}")));
            }
        }
        Ok(Self { entries })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let pairs = parse_pairs("slang", text)?;
        Self::new(pairs.into_iter().map(|e| (e.key.to_lowercase(), e.value.to_lowercase())))
    }

    pub fn bundled() -> Self {
        Self::parse(assets::DEFAULT_SLANG).expect("bundled slang asset is valid")
    }

    pub fn get(&self, token: &str) -> Option<&str> {
        self.entries.get(token).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Asset-format rendering, sorted by key.
    pub fn to_asset(&self) -> String {
        self.iter().map(|(k, v)| format!("{k},{v}\n")).collect()
    }
}

fn slang_error(message: String) -> Error {
    Error::Asset {
        name: "slang".to_string(),
        line: 0,
        message,
    }
}

/// Digit to letter substitutions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LeetMap {
    entries: BTreeMap<char, char>,
}

impl LeetMap {
    pub fn new(pairs: impl IntoIterator<Item = (char, char)>) -> Result<Self> {
        let entries: BTreeMap<char, char> = pairs.into_iter().collect();
        for (&d, &l) in &entries {
            if !d.is_ascii_digit() || !l.is_ascii_lowercase() {
                return Err(Error::Asset {
                    name: "leet".to_string(),
                    line: 0,
                    message: format!("{d:?} -> {l:?} must map a digit to a lowercase letter"),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for e in parse_pairs("leet", text)? {
            let mut k = e.key.chars();
            let mut v = e.value.chars();
            match (k.next(), k.next(), v.next(), v.next()) {
                (Some(d), None, Some(l), None) => pairs.push((d, l)),
                _ => {
                    return Err(Error::Asset {
                        name: "leet".to_string(),
                        line: e.line,
                        message: "expected single characters".to_string(),
                    })
                }
            }
        }
        Self::new(pairs)
    }

    pub fn bundled() -> Self {
        Self::parse(assets::DEFAULT_LEET).expect("bundled leet asset is valid")
    }

    pub fn get(&self, c: char) -> Option<char> {
        self.entries.get(&c).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, char)> + '_ {
        self.entries.iter().map(|(&d, &l)| (d, l))
    }

    pub fn to_asset(&self) -> String {
        self.iter().map(|(d, l)| format!("{d},{l}\n")).collect()
    }
}

/// Bundled slang + leet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalizer {
    pub slang: SlangDict,
    pub leet: LeetMap,
}

impl Normalizer {
    pub fn new(slang: SlangDict, leet: LeetMap) -> Self {
        Self { slang, leet }
    }

    pub fn bundled() -> Self {
        Self::new(SlangDict::bundled(), LeetMap::bundled())
    }

    pub fn clean(&self, raw: &str) -> String {
        clean_text(raw, &self.slang, &self.leet)
    }
}

impl Default for Normalizer {
    fn default() -> Self {
        Self::bundled()
    }
}

pub fn clean_text(raw: &str, slang: &SlangDict, leet: &LeetMap) -> String {
    let s = raw.to_lowercase();
    let s = strip_urls(&s);
    let s = strip_mentions(&s);
    let s = apply_leet(&s, leet);
    let s = expand_slang(&s, slang);
    collapse_alpha(&s)
}

fn strip_urls(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(start) = find_url_start(rest) {
        out.push_str(&rest[..start]);
        out.push(' ');
        let tail = &rest[start..];
        let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
        rest = &tail[end..];
    }
    out.push_str(rest);
    out
}

fn find_url_start(s: &str) -> Option<usize> {
    ["http://", "https://", "www."]
        .iter()
        .filter_map(|p| s.find(p))
        .min()
}

fn strip_mentions(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '@' {
            while chars.next_if(|n| n.is_alphanumeric() || *n == '_').is_some() {}
            out.push(' ');
        } else {
            out.push(c);
        }
    }
    out
}

fn apply_leet(s: &str, leet: &LeetMap) -> String {
    let mut out = String::with_capacity(s.len());
    let mut run = String::new();
    let flush = |run: &mut String, out: &mut String| {
        if run.bytes().any(|b| b.is_ascii_lowercase()) {
            out.extend(run.chars().map(|c| leet.get(c).unwrap_or(c)));
        } else {
            out.push_str(run);
        }
        run.clear();
    };
    for c in s.chars() {
        if c.is_ascii_lowercase() || c.is_ascii_digit() {
            run.push(c);
        } else {
            flush(&mut run, &mut out);
            out.push(c);
        }
    }
    flush(&mut run, &mut out);
    out
}

fn expand_slang(s: &str, slang: &SlangDict) -> String {
    let mut out = String::with_capacity(s.len());
    let mut run = String::new();
    let flush = |run: &mut String, out: &mut String| {
        match slang.get(run) {
            Some(expansion) => {
                out.push(' ');
                out.push_str(expansion);
                out.push(' ');
            }
            None => out.push_str(run),
        }
        run.clear();
    };
    for c in s.chars() {
        if c.is_ascii_lowercase() {
            run.push(c);
        } else {
            flush(&mut run, &mut out);
            out.push(c);
        }
    }
    flush(&mut run, &mut out);
    out
}

fn collapse_alpha(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_space = false;
    for c in s.chars() {
        if c.is_ascii_lowercase() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

/// Counts whitespace tokens of the raw text that start with `#` and continue,
/// after any further `#`, with an alphanumeric character.
pub fn count_hashtags(raw: &str) -> usize {
    raw.split_whitespace()
        .filter(|tok| {
            tok.starts_with('#')
                && tok
                    .trim_start_matches('#')
                    .chars()
                    .next()
                    .is_some_and(char::is_alphanumeric)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn clean(s: &str) -> String {
        Normalizer::bundled().clean(s)
    }

    #[test]
    fn mixed_post() {
        assert_eq!(
            clean("Cek http://t.co/x @user GAK seru bgt!!!"),
            "cek tidak seru banget"
        );
    }

    #[test]
    fn clean_text_identity() {
        assert_eq!(clean("halo dunia"), "halo dunia");
    }

    #[test]
    fn leet_inside_words() {
        assert_eq!(clean("k3r3n"), "keren");
        assert_eq!(clean("b4ik 2024"), "baik");
    }

    #[test]
    fn leet_runs_before_slang() {
        assert_eq!(clean("g4k"), "tidak");
    }

    #[test]
    fn empty_and_symbol_only() {
        assert_eq!(clean(""), "");
        assert_eq!(clean("!!! 123 ???"), "");
        assert_eq!(clean("https://x.y/z"), "");
    }

    #[test]
    fn url_and_mention_do_not_merge_words() {
        assert_eq!(clean("halo@budi dunia"), "halo dunia");
        assert_eq!(clean("lihat:https://a.b/c ya"), "lihat ya");
        assert_eq!(clean("satuwww.x.com dua"), "satu dua");
    }

    #[test]
    fn hashtag_words_survive() {
        assert_eq!(clean("#Senang hari ini"), "senang hari ini");
    }

    #[test]
    fn multi_token_expansion() {
        assert_eq!(clean("gpp kok"), "tidak apa apa kok");
    }

    #[test]
    fn hashtag_counts() {
        assert_eq!(count_hashtags("#senang #banget hari ini"), 2);
        assert_eq!(count_hashtags("no tags here"), 0);
        assert_eq!(count_hashtags("##x #1 # "), 2);
    }

    #[test]
    fn slang_rejects_key_inside_expansion() {
        assert!(SlangDict::new([("gak", "tidak"), ("tidak", "no")]).is_err());
        assert!(SlangDict::new([("Gak", "tidak")]).is_err());
        assert!(SlangDict::new([("gak", "ti-dak")]).is_err());
    }

    #[test]
    fn leet_rejects_non_digit_key() {
        assert!(LeetMap::parse("a,b\n").is_err());
        assert!(LeetMap::parse("3,ee\n").is_err());
    }

    proptest! {
        #[test]
        fn output_alphabet_and_spacing(s in "\\PC{0,60}") {
            let out = clean(&s);
            prop_assert!(out.bytes().all(|b| b.is_ascii_lowercase() || b == b' '));
            prop_assert!(!out.contains("  "));
            prop_assert!(!out.starts_with(' ') && !out.ends_with(' '));
        }

        #[test]
        fn idempotent(s in "[a-zA-Z0-9@#:/. !_-]{0,60}") {
            let once = clean(&s);
            prop_assert_eq!(clean(&once), once);
        }

        #[test]
        fn idempotent_unicode(s in "\\PC{0,40}") {
            let once = clean(&s);
            prop_assert_eq!(clean(&once), once);
        }

        #[test]
        fn mention_removal_keeps_neighbours(a in "[a-z]{1,8}", b in "[a-z]{1,8}", m in "[a-z0-9_]{1,8}") {
            let out = clean(&format!("{a}@{m} {b}"));
            let toks: Vec<&str> = out.split(' ').collect();
            prop_assert!(toks.len() >= 2);
        }
    }
}

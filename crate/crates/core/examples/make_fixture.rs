//! Regenerates `fixtures/synthetic_sentiment.csv`.
//!
//! Usage: `cargo run -p senti-core --example make_fixture [OUT]`

use std::fs::File;
use std::io::BufWriter;

use senti_core::synth::{synthetic_raw, write_raw_csv, DEFAULT_SEED};

fn main() -> senti_core::Result<()> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/synthetic_sentiment.csv").to_string());
    let file = File::create(&out).map_err(|e| senti_core::Error::Io {
        path: out.clone().into(),
        source: e,
    })?;
    write_raw_csv(BufWriter::new(file), &synthetic_raw(DEFAULT_SEED))?;
    println!("wrote {out}");
    Ok(())
}

//! Three-class (negative / neutral / positive) sentiment toolkit for short
//! social-media posts.
//!
//! The pipeline runs raw CSV rows through [`corpus`] (schema binding, label
//! remapping, deduplication) and [`textnorm`] (cleaning), builds hybrid
//! TF-IDF + metadata features in [`featurizer`], trains one of the
//! [`learners`], scores it with [`evaluation`], and persists or exports the
//! result through [`artifacts`].

pub mod artifacts;
pub mod assets;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod featurizer;
pub mod learners;
pub mod pipeline;
pub mod synth;
pub mod textnorm;

pub use corpus::{CleanRecord, LabelMap, RawRecord, SentimentClass};
pub use error::{Error, Result};

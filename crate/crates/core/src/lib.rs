//! Topic extraction and sentiment classification for annotated tweet corpora.
//!
//! The pipeline runs from CSV ingestion ([`corpus`]) through tokenization
//! ([`textproc`]), LDA topic models ([`topics`]), engineered feature sets
//! ([`features`]), information-gain selection ([`select`]), a random forest
//! ([`forest`]) and stratified cross-validation ([`eval`]). [`pipeline`]
//! wires these into the commands exposed by the CLI.

pub mod corpus;
pub mod error;
pub mod textproc;
pub mod topics;
pub mod features;
pub mod select;
pub mod synth;
pub mod forest;
pub mod eval;
pub mod pipeline;
pub mod wordcloud;

pub use error::{Error, Result};

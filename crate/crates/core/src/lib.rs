//! Extractive summarization toolkit for Sorani Kurdish research text.
//!
//! The crate is organized as a pipeline over a department-labelled
//! corpus of research documents:
//!
//! 1. [`normalizer`] — canonicalize codepoints, digits, and layout.
//! 2. [`segmenter`] — split text into sentences with a trainable,
//!    unsupervised boundary model.
//! 3. [`preprocessor`] — tokenize, light-stem, and remove stopwords.
//! 4. [`scorer`] — weight sentences by term frequency, prune the weak
//!    half, and rank the remainder by TF-IDF.
//! 5. [`summarizer`] — extract a word-limited summary in document
//!    order.
//! 6. [`evaluator`] — score summaries against reference abstracts with
//!    ROUGE-1/2/L.
//! 7. [`corpus`] and [`experiment`] — corpus loading, deterministic
//!    splits, and the end-to-end two-condition experiment harness.
//!
//! Every stage is deterministic: the only randomness is the seeded
//! generator used for corpus splits, and every artifact the harness
//! writes is byte-identical across runs with the same inputs.

pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod experiment;
pub mod normalizer;
pub mod preprocessor;
pub mod rng;
pub mod scorer;
pub mod segmenter;
pub mod summarizer;

pub use error::{AtsError, Result};

//! Core algorithms for concept-generalized frequent feature sets.
//!
//! The pipeline is: a literature [`corpus`] of per-paper feature sets is mined
//! with Apriori ([`miner`]), the length-8 frequent sets are filtered by coverage
//! of the five C's of credit ([`concepts`]), learners from [`models`] are trained
//! on loan data ([`loans`], [`encode`]) with original and generalized features,
//! scored with [`metrics`], and individual predictions are decomposed into
//! per-feature and per-concept contributions by [`explainer`].
//!
//! The crate is `no_std` and only needs `alloc`. File formats, wall-clock timing
//! and the command line live in the `genfeat` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod concepts;
pub mod corpus;
pub mod encode;
pub mod error;
pub mod explainer;
pub mod feature;
pub mod loans;
pub mod metrics;
pub mod miner;
pub mod models;
pub mod ratio;
pub mod rng;

pub use concepts::{Concept, ConceptMap, Coverage, GeneralizedFeatureSet};
pub use corpus::{FeatureCorpus, PaperRecord};
pub use error::{Error, Result};
pub use feature::{AliasTable, FeatureId};
pub use miner::{ItemSet, MiningConfig};
pub use ratio::Ratio;

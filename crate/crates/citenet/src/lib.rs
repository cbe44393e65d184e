//! Bibliometric network and abstract-text analytics with boosted-tree
//! citation-impact prediction.
//!
//! The pipeline: parse a publication corpus, build co-authorship and
//! shared-author publication networks, compute structural metrics (degree,
//! betweenness, closeness, Burt constraint, rotating leadership) and
//! abstract metrics (length, sentiment, complexity, diversity, commonness),
//! assemble a per-publication feature table, label the top citation
//! quantile, and evaluate a gradient-boosted tree classifier with
//! Monte-Carlo cross-validation, SHAP importances, Spearman correlations,
//! and group-comparison t-tests.

pub mod centrality;
pub mod config;
pub mod corpus;
pub mod error;
pub mod features;
pub mod gbt;
pub mod graph;
pub mod pipeline;
pub mod stats;
pub mod stemmer;
pub mod synth;
pub mod text;
pub mod util;

pub use error::{Error, Result};

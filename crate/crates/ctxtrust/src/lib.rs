//! File formats, hit-count providers and the command line around
//! [`ctxtrust_core`].
//!
//! - [`tree_file`]: tab-separated ontology trees.
//! - [`reviews`]: review CSV files, one seller per file.
//! - [`provider`]: static tables, offline corpora and search engines as
//!   sources of hit counts, behind a persistent pair cache.
//! - [`report`]: evaluation report CSV and summary table.
//! - [`cli`]: the `ctxtrust` command.

pub mod cli;
pub mod contexts;
pub mod fsutil;
pub mod pairs;
pub mod provider;
pub mod report;
pub mod reviews;
pub mod tree_file;

pub use ctxtrust_core as core;

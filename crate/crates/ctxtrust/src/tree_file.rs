//! Ontology tree files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ctxtrust_core::ontology::{OntologyTree, TreeError};
use thiserror::Error;

use crate::fsutil;

#[derive(Debug, Error)]
pub enum TreeFileError {
    #[error("cannot read tree file {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("tree file {path}: {source}")]
    Invalid { path: PathBuf, source: TreeError },
    #[error("cannot write tree file {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

pub fn read_tree(path: &Path) -> Result<OntologyTree, TreeFileError> {
    let text = fs::read_to_string(path).map_err(|source| TreeFileError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    OntologyTree::parse(&text).map_err(|source| TreeFileError::Invalid {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `tree` with weights at a fixed number of decimals.
pub fn write_tree(path: &Path, tree: &OntologyTree, decimals: usize) -> Result<(), TreeFileError> {
    fsutil::write_atomic(path, tree.to_tsv_with_precision(decimals).as_bytes()).map_err(|source| {
        TreeFileError::Write {
            path: path.to_path_buf(),
            source,
        }
    })
}

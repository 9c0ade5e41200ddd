//! Context description files for the keyword and task measures.
//!
//! One line per description: `label<TAB>keyword<TAB>k1,k2,...` or
//! `label<TAB>task<TAB>v1,v2,...` with task values in [0, 1].

use ctxtrust_core::similarity::{ContextDescriptors, SimilarityError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContextsError {
    #[error("{origin}, line {line}: {message}")]
    Line {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{origin}, line {line}: {source}")]
    Value {
        origin: String,
        line: usize,
        source: SimilarityError,
    },
}

pub fn parse_descriptors(text: &str, origin: &str) -> Result<ContextDescriptors, ContextsError> {
    let mut out = ContextDescriptors::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let line_err = |message: String| ContextsError::Line {
            origin: origin.to_string(),
            line: i + 1,
            message,
        };
        let value_err = |source| ContextsError::Value {
            origin: origin.to_string(),
            line: i + 1,
            source,
        };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [label, kind, values] = fields.as_slice() else {
            return Err(line_err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        if label.is_empty() {
            return Err(line_err("empty label".into()));
        }
        match kind.to_ascii_lowercase().as_str() {
            "keyword" | "keywords" => {
                out.keywords
                    .insert(label.to_string(), values.parse().map_err(value_err)?);
            }
            "task" => {
                out.tasks
                    .insert(label.to_string(), values.parse().map_err(value_err)?);
            }
            other => return Err(line_err(format!("unknown description kind '{other}'"))),
        }
    }
    Ok(out)
}

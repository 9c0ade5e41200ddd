//! Pair lists: CSV with header `seller,known,unknown`.

use ctxtrust_core::evaluation::PairSpec;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PairsError {
    #[error("{origin}: header must be 'seller,known,unknown'")]
    Header { origin: String },
    #[error("{origin}, line {line}: {message}")]
    Row {
        origin: String,
        line: u64,
        message: String,
    },
    #[error("{origin}: {source}")]
    Csv { origin: String, source: csv::Error },
}

pub fn parse_pairs(source: &str, origin: &str) -> Result<Vec<PairSpec>, PairsError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source.as_bytes());
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|source| PairsError::Csv {
            origin: origin.to_string(),
            source,
        })?;
        if i == 0 {
            let header: Vec<String> = record.iter().map(|h| h.to_ascii_lowercase()).collect();
            if header != ["seller", "known", "unknown"] {
                return Err(PairsError::Header {
                    origin: origin.to_string(),
                });
            }
            continue;
        }
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let row_err = |message: &str| PairsError::Row {
            origin: origin.to_string(),
            line,
            message: message.to_string(),
        };
        if record.len() != 3 {
            return Err(row_err("expected 3 columns"));
        }
        if record.iter().any(str::is_empty) {
            return Err(row_err("empty field"));
        }
        out.push(PairSpec::new(&record[0], &record[1], &record[2]));
    }
    if out.is_empty() && source.trim().is_empty() {
        return Err(PairsError::Header {
            origin: origin.to_string(),
        });
    }
    Ok(out)
}

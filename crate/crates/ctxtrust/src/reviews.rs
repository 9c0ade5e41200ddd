//! Review CSV files.
//!
//! Header is exactly `Context,Rate,Date,Description,Link`. The seller is
//! not a column; it comes from the caller (usually the file name).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ctxtrust_core::dataset::{Rate, Review, ReviewError};
use thiserror::Error;

pub const HEADER: [&str; 5] = ["Context", "Rate", "Date", "Description", "Link"];

#[derive(Debug, Error)]
pub enum ReviewFileError {
    #[error("{origin}: header must be 'Context,Rate,Date,Description,Link', found '{found}'")]
    Header { origin: String, found: String },
    #[error("{origin}, line {line}: expected 5 columns, found {found}")]
    Columns {
        origin: String,
        line: u64,
        found: usize,
    },
    #[error("{origin}, line {line}: {source}")]
    Row {
        origin: String,
        line: u64,
        source: ReviewError,
    },
    #[error("{origin}: {source}")]
    Csv { origin: String, source: csv::Error },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot derive a seller name from {0}")]
    NoSeller(PathBuf),
}

/// Parses review rows in document order. `origin` names the source in
/// error messages.
pub fn parse_reviews(source: &str, origin: &str) -> Result<Vec<Review>, ReviewFileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source.as_bytes());
    let mut records = reader.records();
    let csv_err = |source| ReviewFileError::Csv {
        origin: origin.to_string(),
        source,
    };

    match records.next() {
        None => {
            return Err(ReviewFileError::Header {
                origin: origin.to_string(),
                found: String::new(),
            })
        }
        Some(header) => {
            let header = header.map_err(csv_err)?;
            let found: Vec<&str> = header
                .iter()
                .map(|h| h.trim_start_matches('\u{feff}'))
                .collect();
            if found != HEADER {
                return Err(ReviewFileError::Header {
                    origin: origin.to_string(),
                    found: found.join(","),
                });
            }
        }
    }

    let mut out = Vec::new();
    for record in records {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != HEADER.len() {
            return Err(ReviewFileError::Columns {
                origin: origin.to_string(),
                line,
                found: record.len(),
            });
        }
        let row_err = |source| ReviewFileError::Row {
            origin: origin.to_string(),
            line,
            source,
        };
        let rate = Rate::parse(&record[1]).map_err(row_err)?;
        let review =
            Review::new(&record[0], rate, &record[2], &record[3], &record[4]).map_err(row_err)?;
        out.push(review);
    }
    Ok(out)
}

/// Renders reviews back to CSV with the standard header.
pub fn write_reviews(reviews: &[Review]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(HEADER).expect("in-memory write");
    for r in reviews {
        w.write_record([
            r.context.as_str(),
            &r.rate.to_string(),
            &r.date,
            &r.description,
            &r.link,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Reads one seller's review file. Without an explicit seller the file
/// stem is used.
pub fn load_review_file(
    path: &Path,
    seller: Option<&str>,
) -> Result<(String, Vec<Review>), ReviewFileError> {
    let seller = match seller {
        Some(s) => s.to_string(),
        None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ReviewFileError::NoSeller(path.to_path_buf()))?,
    };
    let text = fs::read_to_string(path).map_err(|source| ReviewFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reviews = parse_reviews(&text, &path.display().to_string())?;
    Ok((seller, reviews))
}

/// Every `*.csv` file of a directory, in file-name order.
pub fn load_review_dir(dir: &Path) -> Result<Vec<(String, Vec<Review>)>, ReviewFileError> {
    let io_err = |source| ReviewFileError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io_err)?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")));
    paths.sort();
    paths.iter().map(|p| load_review_file(p, None)).collect()
}

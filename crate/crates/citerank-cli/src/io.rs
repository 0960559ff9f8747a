//! Corpus ingestion from CSV and JSONL files.
//!
//! CSV columns: paper_id, doc_type, subject_categories (semicolon joined),
//! journal_metric (may be empty), then c1..cT with the per-year citation
//! counts. JSONL carries the same fields per line, with the categories and
//! yearly counts as JSON arrays. The citation window length T comes from
//! the file itself.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use citerank::model::{Corpus, CorpusError, PaperId, PaperRecord};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

/// Guesses the format from the file extension.
pub fn infer_format(path: &Path) -> Option<InputFormat> {
    match path.extension()?.to_str()? {
        "csv" => Some(InputFormat::Csv),
        "jsonl" | "ndjson" | "json" => Some(InputFormat::Jsonl),
        _ => None,
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
}

pub fn load_corpus(path: &Path, format: InputFormat) -> Result<Corpus, LoadError> {
    match format {
        InputFormat::Csv => load_csv(path),
        InputFormat::Jsonl => load_jsonl(path),
    }
}

fn parse_count(raw: &str, column: &str, line: u64) -> Result<u32, LoadError> {
    let value: i64 = raw.trim().parse().map_err(|_| LoadError::Row {
        line,
        message: format!("column {column}: expected an integer citation count, got {raw:?}"),
    })?;
    if value < 0 {
        return Err(LoadError::Row {
            line,
            message: format!("column {column}: negative citation count {value}"),
        });
    }
    u32::try_from(value).map_err(|_| LoadError::Row {
        line,
        message: format!("column {column}: citation count {value} is too large"),
    })
}

fn split_categories(raw: &str) -> Vec<String> {
    raw.split(';')
        .map(str::trim)
        .filter(|part| !part.is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn load_csv(path: &Path) -> Result<Corpus, LoadError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(source) => LoadError::Io {
            path: path.display().to_string(),
            source,
        },
        other => LoadError::Header(format!("{other:?}")),
    })?;
    let headers = reader
        .headers()
        .map_err(|e| LoadError::Header(e.to_string()))?
        .clone();
    let fixed = ["paper_id", "doc_type", "subject_categories", "journal_metric"];
    for (index, name) in fixed.iter().enumerate() {
        if headers.get(index) != Some(name) {
            return Err(LoadError::Header(format!(
                "column {} must be {name}, got {:?}",
                index + 1,
                headers.get(index).unwrap_or("<missing>")
            )));
        }
    }
    let horizon = headers.len() - fixed.len();
    if horizon == 0 {
        return Err(LoadError::Header(
            "no citation columns: expected c1..cT after journal_metric".to_owned(),
        ));
    }
    for year in 1..=horizon {
        let expected = format!("c{year}");
        if headers.get(fixed.len() + year - 1) != Some(expected.as_str()) {
            return Err(LoadError::Header(format!(
                "citation columns must run c1..c{horizon} in order; column {} is {:?}",
                fixed.len() + year,
                headers.get(fixed.len() + year - 1).unwrap_or("<missing>")
            )));
        }
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            LoadError::Row {
                line,
                message: e.to_string(),
            }
        })?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != headers.len() {
            return Err(LoadError::Row {
                line,
                message: format!("expected {} fields, got {}", headers.len(), row.len()),
            });
        }
        let paper_id = row.get(0).unwrap_or_default().trim();
        if paper_id.is_empty() {
            return Err(LoadError::Row {
                line,
                message: "empty paper_id".to_owned(),
            });
        }
        let metric_raw = row.get(3).unwrap_or_default().trim();
        let journal_metric = if metric_raw.is_empty() {
            None
        } else {
            Some(metric_raw.parse::<f64>().map_err(|_| LoadError::Row {
                line,
                message: format!("journal_metric is not a number: {metric_raw:?}"),
            })?)
        };
        let yearly_citations = (0..horizon)
            .map(|offset| {
                parse_count(
                    row.get(fixed.len() + offset).unwrap_or_default(),
                    &format!("c{}", offset + 1),
                    line,
                )
            })
            .collect::<Result<Vec<u32>, _>>()?;
        records.push(PaperRecord {
            paper_id: PaperId::new(paper_id),
            doc_type: row.get(1).unwrap_or_default().trim().to_owned(),
            subject_categories: split_categories(row.get(2).unwrap_or_default()),
            journal_metric,
            yearly_citations,
        });
    }
    Ok(Corpus::validate(records, horizon)?)
}

#[derive(Debug, Deserialize)]
struct JsonRow {
    paper_id: String,
    doc_type: String,
    subject_categories: Vec<String>,
    #[serde(default)]
    journal_metric: Option<f64>,
    yearly_citations: Vec<i64>,
}

pub fn load_jsonl(path: &Path) -> Result<Corpus, LoadError> {
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut records = Vec::new();
    let mut horizon = None;
    for (index, line_result) in BufReader::new(file).lines().enumerate() {
        let line_no = index as u64 + 1;
        let line = line_result.map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonRow = serde_json::from_str(&line).map_err(|e| LoadError::Row {
            line: line_no,
            message: e.to_string(),
        })?;
        let yearly_citations = row
            .yearly_citations
            .iter()
            .enumerate()
            .map(|(offset, &value)| {
                if value < 0 {
                    return Err(LoadError::Row {
                        line: line_no,
                        message: format!("year {}: negative citation count {value}", offset + 1),
                    });
                }
                u32::try_from(value).map_err(|_| LoadError::Row {
                    line: line_no,
                    message: format!("year {}: citation count {value} is too large", offset + 1),
                })
            })
            .collect::<Result<Vec<u32>, _>>()?;
        horizon.get_or_insert(yearly_citations.len());
        records.push(PaperRecord {
            paper_id: PaperId::new(row.paper_id),
            doc_type: row.doc_type,
            subject_categories: row.subject_categories,
            journal_metric: row.journal_metric,
            yearly_citations,
        });
    }
    let horizon = horizon.ok_or(CorpusError::Empty)?;
    Ok(Corpus::validate(records, horizon)?)
}

//! Text formats, reports and the embedded case-study datasets.

pub mod catalogue;
pub mod coupling_file;
pub mod datasets;
pub mod matrix_file;
pub mod model_file;
pub mod report;
pub mod weights_file;

use thiserror::Error;

use crate::analysis::Rational;
use crate::model::ModelError;

pub use catalogue::parse_cycles;
pub use coupling_file::parse_coupling;
pub use matrix_file::parse_matrix;
pub use model_file::{parse_edge_list, parse_model};
pub use weights_file::parse_weights;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("row {row}, column {column}: {message}")]
    Cell {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ParseError {
    pub(crate) fn line(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line {
            line,
            message: message.into(),
        }
    }
}

/// Exact value of a plain decimal such as `13`, `0.71` or `.5`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: i128 = digits.parse().ok()?;
    Some(Rational::new(num, 10i128.pow(frac.len() as u32)))
}

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

/// 1-based line of a csv record, for diagnostics.
pub(crate) fn record_line(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

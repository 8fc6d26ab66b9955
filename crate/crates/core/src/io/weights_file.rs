//! Externally supplied edge weights: `client,server,<column>...`.
//!
//! A blank or `inf` cell makes the edge unbreakable. Edges without a row
//! weigh 0.

use num_traits::Zero;

use crate::analysis::{EdgeWeight, Rational};
use crate::model::Cdg;

use super::{csv_reader, parse_decimal, record_line, ParseError};

/// Reads one weight column. `column = None` takes the first column after
/// `client,server`.
pub fn parse_weights(text: &str, cdg: &Cdg, column: Option<&str>) -> Result<Vec<EdgeWeight>, ParseError> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| ParseError::Format(e.to_string()))?.clone();
    if header.len() < 3 || &header[0] != "client" || &header[1] != "server" {
        return Err(ParseError::Format("weights header must start with client,server".into()));
    }
    let col = match column {
        None => 2,
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .filter(|&i| i >= 2)
            .ok_or_else(|| ParseError::Format(format!("no weight column `{name}`")))?,
    };

    let mut weights = vec![EdgeWeight::Finite(Rational::zero()); cdg.edge_count()];
    let mut seen = vec![false; cdg.edge_count()];
    for rec in reader.records() {
        let rec = rec.map_err(|e| ParseError::Format(e.to_string()))?;
        let line = record_line(&rec);
        let (client, server) = (rec.get(0).unwrap_or(""), rec.get(1).unwrap_or(""));
        let edges: Vec<usize> = match (cdg.node_ix(client), cdg.node_ix(server)) {
            (Some(c), Some(s)) => cdg.edges_between(c, s).collect(),
            _ => Vec::new(),
        };
        if edges.is_empty() {
            return Err(ParseError::line(line, format!("no edge {client}->{server}")));
        }
        let cell = rec.get(col).unwrap_or("");
        let weight = if cell.is_empty() || cell.eq_ignore_ascii_case("inf") {
            EdgeWeight::Unbreakable
        } else {
            EdgeWeight::Finite(
                parse_decimal(cell).ok_or_else(|| ParseError::line(line, format!("bad weight `{cell}`")))?,
            )
        };
        for e in edges {
            if std::mem::replace(&mut seen[e], true) {
                return Err(ParseError::line(line, format!("duplicate row for {client}->{server}")));
            }
            weights[e] = weight;
        }
    }
    Ok(weights)
}

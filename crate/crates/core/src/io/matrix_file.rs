//! Square dependency matrices: row = client, column = server.
//!
//! Codes: `As` association, `Ag` aggregation (optional dependency),
//! `Cp` composition, `Us` use dependency, `I` inheritance.

use crate::model::{Cdg, ClassNode, DepKind, EdgeSpec};

use super::{valid_id, ParseError};

pub fn code_kind(code: &str) -> Option<DepKind> {
    Some(match code {
        "As" => DepKind::Association,
        "Ag" => DepKind::OptionalDependency,
        "Cp" => DepKind::Composition,
        "Us" => DepKind::UseDependency,
        "I" => DepKind::Inheritance,
        _ => return None,
    })
}

/// Builds a CDG directly from the matrix. Matrix input carries no member
/// counts, so every edge has `used_members = 0`.
pub fn parse_matrix(text: &str) -> Result<Cdg, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader
        .records()
        .collect::<Result<_, _>>()
        .map_err(|e| ParseError::Format(e.to_string()))?;
    let Some((header, body)) = rows.split_first() else {
        return Err(ParseError::Format("empty matrix".into()));
    };
    let ids: Vec<&str> = header.iter().skip(1).collect();
    let n = ids.len();
    for (j, id) in ids.iter().enumerate() {
        if !valid_id(id) {
            return Err(ParseError::Cell {
                row: 0,
                column: j + 1,
                message: format!("bad class id `{id}`"),
            });
        }
    }
    if body.len() != n {
        return Err(ParseError::Format(format!("matrix has {n} columns but {} rows", body.len())));
    }

    let mut specs = Vec::new();
    for (i, row) in body.iter().enumerate() {
        let r = i + 1;
        if row.len() != n + 1 {
            return Err(ParseError::Cell {
                row: r,
                column: row.len(),
                message: format!("expected {} cells", n + 1),
            });
        }
        if &row[0] != ids[i] {
            return Err(ParseError::Cell {
                row: r,
                column: 0,
                message: format!("row label `{}` does not match column `{}`", &row[0], ids[i]),
            });
        }
        for (j, cell) in row.iter().skip(1).enumerate() {
            if cell.is_empty() {
                continue;
            }
            let err = |message: String| ParseError::Cell {
                row: r,
                column: j + 1,
                message,
            };
            if i == j {
                return Err(err(format!("diagonal entry `{cell}`")));
            }
            let kind = code_kind(cell).ok_or_else(|| err(format!("unknown code `{cell}`")))?;
            specs.push(EdgeSpec::new(ids[i], ids[j], kind, 0));
        }
    }
    let nodes = ids.iter().map(|id| ClassNode::bare(id)).collect();
    Ok(Cdg::new(nodes, specs)?)
}

//! Line-oriented model files and CDG edge lists.
//!
//! ```text
//! [classes]
//! A,Printer,2,3
//! [relations]
//! composition,A,G,G,1,2
//! ```
//!
//! In place of `[relations]`, an `[edges]` section may hold a mapped edge
//! list with the [`EDGE_LIST_HEADER`] columns.

use crate::model::{Cdg, ClassNode, DepKind, EdgeSpec, RelationKind, UmlRelation};

use super::{csv_reader, record_line, valid_id, ParseError};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Classes,
    Relations,
}

fn count(field: &str, what: &str, line: usize) -> Result<u32, ParseError> {
    let field = field.trim();
    if field.is_empty() {
        return Ok(0);
    }
    if field.starts_with('-') {
        return Err(ParseError::line(line, format!("negative {what} `{field}`")));
    }
    field
        .parse()
        .map_err(|_| ParseError::line(line, format!("bad {what} `{field}`")))
}

fn id(field: &str, line: usize) -> Result<&str, ParseError> {
    let field = field.trim();
    if valid_id(field) {
        Ok(field)
    } else {
        Err(ParseError::line(line, format!("bad class id `{field}`")))
    }
}

/// Parses a model file, keeping declaration order.
pub fn parse_model(text: &str) -> Result<(Vec<ClassNode>, Vec<UmlRelation>), ParseError> {
    let mut section = Section::None;
    let mut classes: Vec<ClassNode> = Vec::new();
    let mut relations = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        match text {
            "[classes]" => {
                section = Section::Classes;
                continue;
            }
            "[relations]" => {
                section = Section::Relations;
                continue;
            }
            _ if text.starts_with('[') => {
                return Err(ParseError::line(line, format!("unknown section `{text}`")));
            }
            _ => {}
        }
        let fields: Vec<&str> = text.split(',').collect();
        match section {
            Section::None => return Err(ParseError::line(line, "content before any section")),
            Section::Classes => {
                if fields.len() != 4 {
                    return Err(ParseError::line(line, "expected id,name,attributes,methods"));
                }
                let cid = id(fields[0], line)?;
                if classes.iter().any(|c| c.id.as_str() == cid) {
                    return Err(ParseError::line(line, format!("class `{cid}` declared twice")));
                }
                classes.push(ClassNode::new(
                    cid,
                    fields[1].trim(),
                    count(fields[2], "attribute count", line)?,
                    count(fields[3], "method count", line)?,
                ));
            }
            Section::Relations => {
                if fields.len() != 6 {
                    return Err(ParseError::line(
                        line,
                        "expected kind,source,target,whole,used_src_tgt,used_tgt_src",
                    ));
                }
                let kind: RelationKind = fields[0].trim().parse().map_err(|e| ParseError::line(line, e))?;
                let source = id(fields[1], line)?;
                let target = id(fields[2], line)?;
                for end in [source, target] {
                    if !classes.iter().any(|c| c.id.as_str() == end) {
                        return Err(ParseError::line(line, format!("undeclared class `{end}`")));
                    }
                }
                let mut rel = UmlRelation::new(kind, source, target).with_usage(
                    count(fields[4], "usage count", line)?,
                    count(fields[5], "usage count", line)?,
                );
                let whole = fields[3].trim();
                match (kind.needs_whole(), whole.is_empty()) {
                    (true, true) => return Err(ParseError::line(line, format!("{kind} needs a whole"))),
                    (false, false) => return Err(ParseError::line(line, format!("{kind} takes no whole"))),
                    (true, false) => {
                        if whole != source && whole != target {
                            return Err(ParseError::line(line, format!("whole `{whole}` is not an endpoint")));
                        }
                        rel = rel.with_whole(whole);
                    }
                    (false, true) => {}
                }
                relations.push(rel);
            }
        }
    }
    Ok((classes, relations))
}

pub const EDGE_LIST_HEADER: [&str; 4] = ["client", "server", "kind", "used_members"];

/// Reads a `client,server,kind,used_members` edge list over known classes.
pub fn parse_edge_list(text: &str, nodes: Vec<ClassNode>) -> Result<Cdg, ParseError> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| ParseError::Format(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != EDGE_LIST_HEADER {
        return Err(ParseError::Format(format!("edge list header must be {}", EDGE_LIST_HEADER.join(","))));
    }
    let mut specs = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| ParseError::Format(e.to_string()))?;
        let line = record_line(&rec);
        let kind: DepKind = rec[2].parse().map_err(|e| ParseError::line(line, e))?;
        specs.push(EdgeSpec::new(
            id(&rec[0], line)?,
            id(&rec[1], line)?,
            kind,
            count(&rec[3], "used_members", line)?,
        ));
    }
    Ok(Cdg::new(nodes, specs)?)
}

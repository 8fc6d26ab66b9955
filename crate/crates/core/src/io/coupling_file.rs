//! Coupling measures per class pair:
//! `client,server,C,Vd,Md,Rd,Pd[,D,attr,meth,am4,am5]`.
//!
//! `inf` and `0` both mean "no usable coupling" for the decimal columns.

use crate::analysis::{Coupling, CouplingRecord, CouplingTable};
use crate::model::Cdg;

use super::{csv_reader, parse_decimal, record_line, ParseError};

const REQUIRED: [&str; 7] = ["client", "server", "C", "Vd", "Md", "Rd", "Pd"];
const OPTIONAL: [&str; 5] = ["D", "attr", "meth", "am4", "am5"];

pub fn parse_coupling(text: &str, cdg: &Cdg) -> Result<CouplingTable, ParseError> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(|e| ParseError::Format(e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let required: Vec<usize> = REQUIRED
        .iter()
        .map(|name| col(name).ok_or_else(|| ParseError::Format(format!("coupling file lacks column `{name}`"))))
        .collect::<Result<_, _>>()?;
    let optional: Vec<Option<usize>> = OPTIONAL.iter().map(|name| col(name)).collect();

    let mut table = CouplingTable::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| ParseError::Format(e.to_string()))?;
        let line = record_line(&rec);
        let field = |i: usize| rec.get(i).unwrap_or("");
        let class = |i: usize| {
            cdg.node_ix(field(i))
                .ok_or_else(|| ParseError::line(line, format!("unknown class `{}`", field(i))))
        };
        let (client, server) = (class(required[0])?, class(required[1])?);
        if cdg.edges_between(client, server).next().is_none() {
            return Err(ParseError::line(
                line,
                format!("no edge {}->{}", field(required[0]), field(required[1])),
            ));
        }
        let int = |k: usize| {
            field(required[k])
                .parse::<u32>()
                .map_err(|_| ParseError::line(line, format!("bad {} `{}`", REQUIRED[k], field(required[k]))))
        };
        let measure = |k: usize| -> Result<Coupling, ParseError> {
            let Some(i) = optional[k] else {
                return Ok(Coupling::NoCoupling);
            };
            let v = field(i);
            if v.eq_ignore_ascii_case("inf") || v.is_empty() {
                return Ok(Coupling::NoCoupling);
            }
            parse_decimal(v)
                .map(Coupling::from_value)
                .ok_or_else(|| ParseError::line(line, format!("bad {} `{v}`", OPTIONAL[k])))
        };
        let record = CouplingRecord {
            c: int(2)?,
            vd: int(3)?,
            md: int(4)?,
            rd: int(5)?,
            pd: int(6)?,
            broken: measure(0)?,
            attribute: measure(1)?,
            method: measure(2)?,
            attr_method_4: measure(3)?,
            attr_method_5: measure(4)?,
        };
        if table.insert(client, server, record).is_some() {
            return Err(ParseError::line(line, "duplicate class pair"));
        }
    }
    Ok(table)
}
